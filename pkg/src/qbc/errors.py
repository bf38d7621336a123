"""Exception types raised by validation and simulation code.

Class names double as machine-readable diagnostics: the CLI reports the
name of the violated invariant by printing ``type(exc).__name__``.
"""


class QbcError(Exception):
    """Base class for all errors raised by this package."""


class DimMismatch(QbcError):
    """Operands live on Hilbert spaces of incompatible dimensions."""


class NotHermitian(QbcError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NotPositiveSemidefinite(QbcError):
    """Matrix has an eigenvalue below the negative tolerance floor."""


class NotNormalized(QbcError):
    """State vector norm or density-operator trace is not 1."""


class NotOrthogonal(QbcError):
    """Commitment states must be orthogonal and are not."""


class NotQubit(QbcError):
    """Operation requires a 2-dimensional state."""


class BadRank(QbcError):
    """Requested rank outside 1..dim."""


class ParamOutOfRange(QbcError):
    """Family parameter outside its admissible interval."""


class NotAMeasurement(QbcError):
    """Projector list is not a complete orthogonal measurement."""


class BothCheat(QbcError):
    """Coin-toss analysis covers one-sided cheating only."""
