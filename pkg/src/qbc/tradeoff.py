"""Concealment/bindingness trade-off curves and the families that trace them.

Three one-parameter protocol families are built here, chosen so their
honest token reductions realize the extreme cases of the distance/fidelity
inequalities:

* ``Commuting3D(lam)`` -- commuting rank-2 mixtures in dimension 3 with
  D = lam, F = 1 - lam; sweeps the line g + c = 1/2 (curve II).
* ``QubitPureMixed(lam)`` -- a pure state against a commuting qubit mixture
  with D = 1 - lam, F = sqrt(lam); sweeps g + 2 c^2 = 1/2 (curve III).
* ``PurePair(phi)`` -- two pure token states at angle phi with D = sin(phi),
  F = cos(phi); sweeps g^2 + c^2 = 1/4 (curve IV).

Curve I, (1 - 2g)^2 / 2, is the universal lower bound no protocol can
drop below; ``check_bounds`` flags points that would.

Each family purifies its target reductions with orthogonal proof-side
supports, which makes <chi0|chi1> = 0 automatic for every parameter value
and uses the smallest proof dimension that allows it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ParamOutOfRange
from .linalg import bipartite
from .protocol import PurificationProtocol, make_protocol, security_report

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class Commuting3D:
    """Commuting 3-dimensional reductions diag(lam, 1-lam, 0) / diag(0, 1-lam, lam)."""

    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ParamOutOfRange(f"lam must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class QubitPureMixed:
    """Pure diag(1, 0) against the qubit mixture diag(lam, 1-lam)."""

    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ParamOutOfRange(f"lam must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class PurePair:
    """Two pure token states |0> and cos(phi)|0> + sin(phi)|1>."""

    phi: float

    def __post_init__(self):
        if not 0.0 <= self.phi <= math.pi / 2.0 + 1e-12:
            raise ParamOutOfRange(f"phi must lie in [0, pi/2], got {self.phi}")


ProtocolFamily = Union[Commuting3D, QubitPureMixed, PurePair]

FAMILY_KINDS: dict[str, Callable[[float], ProtocolFamily]] = {
    "commuting3d": Commuting3D,
    "qubit-pure-mixed": QubitPureMixed,
    "pure-pair": PurePair,
}


def family_protocol(family: ProtocolFamily) -> PurificationProtocol:
    """Build the purification protocol realizing a family member's reductions."""
    if isinstance(family, Commuting3D):
        lam = family.lam
        chi0 = np.zeros(12, dtype=np.complex128)
        chi1 = np.zeros(12, dtype=np.complex128)
        chi0[0 * 3 + 0] = math.sqrt(lam)
        chi0[1 * 3 + 1] = math.sqrt(1.0 - lam)
        chi1[2 * 3 + 2] = math.sqrt(lam)
        chi1[3 * 3 + 1] = math.sqrt(1.0 - lam)
        return make_protocol(bipartite(4, 3, chi0), bipartite(4, 3, chi1))
    if isinstance(family, QubitPureMixed):
        lam = family.lam
        chi0 = np.zeros(6, dtype=np.complex128)
        chi1 = np.zeros(6, dtype=np.complex128)
        chi0[0 * 2 + 0] = 1.0
        chi1[1 * 2 + 0] = math.sqrt(lam)
        chi1[2 * 2 + 1] = math.sqrt(1.0 - lam)
        return make_protocol(bipartite(3, 2, chi0), bipartite(3, 2, chi1))
    if isinstance(family, PurePair):
        phi = family.phi
        chi0 = np.zeros(4, dtype=np.complex128)
        chi1 = np.zeros(4, dtype=np.complex128)
        chi0[0 * 2 + 0] = 1.0
        chi1[1 * 2 + 0] = math.cos(phi)
        chi1[1 * 2 + 1] = math.sin(phi)
        return make_protocol(bipartite(2, 2, chi0), bipartite(2, 2, chi1))
    raise TypeError(f"unknown family {family!r}")


class Curve(Enum):
    """The four reference curves in the (g_max, c_max) plane."""

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class TradeoffPoint:
    g_max: float
    c_max: float
    family_param: float

    def __post_init__(self):
        for label, value in (("g_max", self.g_max), ("c_max", self.c_max)):
            if not -BOUND_TOL <= value <= 0.5 + BOUND_TOL:
                raise ValueError(f"{label} = {value} outside [0, 1/2]")


def sweep(
    family_kind: Callable[[float], ProtocolFamily],
    params: Sequence[float],
    max_workers: int | None = None,
) -> list[TradeoffPoint]:
    """Evaluate (g_max, c_max) for every parameter of one family.

    Points are independent and evaluated on a thread pool capped at
    ``max_workers`` (default: hardware parallelism); the returned list is
    ordered by the input parameters regardless of scheduling.
    """

    def point(param: float) -> TradeoffPoint:
        report = security_report(family_protocol(family_kind(param)))
        return TradeoffPoint(report.g_max, report.c_max, param)

    params = list(params)
    if not params:
        return []
    workers = max_workers if max_workers is not None else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(params)))
    if workers == 1:
        return [point(x) for x in params]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, params))


def uniform_grid(family_kind: Callable[[float], ProtocolFamily], n_points: int) -> list[float]:
    """n_points uniformly spaced parameters spanning the family's full range."""
    if n_points < 2:
        raise ParamOutOfRange("need at least 2 grid points")
    upper = math.pi / 2.0 if family_kind is PurePair else 1.0
    return [upper * i / (n_points - 1) for i in range(n_points)]


def curve_value(curve: Curve, g_max: float) -> float:
    """Height c(g) of a reference curve, clamped to 0 past its intercept."""
    if not -BOUND_TOL <= g_max <= 0.5 + BOUND_TOL:
        raise ParamOutOfRange(f"g_max = {g_max} outside [0, 1/2]")
    g = min(max(g_max, 0.0), 0.5)
    if curve is Curve.I:
        return (1.0 - 2.0 * g) ** 2 / 2.0
    if curve is Curve.II:
        return 0.5 - g
    if curve is Curve.III:
        return math.sqrt((0.5 - g) / 2.0)
    if curve is Curve.IV:
        return math.sqrt(max(0.0, 0.25 - g * g))
    raise TypeError(f"unknown curve {curve!r}")


def fair_point(curve: Curve) -> float:
    """The g = c point of a curve, in closed form.

    Curve I:  g solves 2 g = (1 - 2g)^2, i.e. g = (3 - sqrt(5)) / 4.
    Curve II: g = 1/4.
    Curve III: g solves 2 g^2 + g = 1/2, i.e. g = (sqrt(5) - 1) / 4.
    Curve IV: g = 1 / (2 sqrt(2)).
    """
    if curve is Curve.I:
        return (3.0 - math.sqrt(5.0)) / 4.0
    if curve is Curve.II:
        return 0.25
    if curve is Curve.III:
        return (math.sqrt(5.0) - 1.0) / 4.0
    if curve is Curve.IV:
        return 1.0 / (2.0 * math.sqrt(2.0))
    raise TypeError(f"unknown curve {curve!r}")


def check_bounds(point: TradeoffPoint) -> list[str]:
    """Flag points in the impossible region below curve I.

    Every realizable protocol satisfies 2 g + sqrt(2 c) >= 1; a returned
    entry names the violated bound and its shortfall.
    """
    violations = []
    slack = 2.0 * point.g_max + math.sqrt(max(0.0, 2.0 * point.c_max)) - 1.0
    if slack < -BOUND_TOL:
        violations.append(
            f"below_curve_I: 2*gMax + sqrt(2*cMax) - 1 = {slack:.6g} < 0"
        )
    return violations
