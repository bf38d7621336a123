"""Purification bit-commitment protocols: analysis and simulation.

A protocol instance is a pair of orthogonal bipartite states (chi0, chi1)
on proof ⊗ token.  Honest Alice prepares chi_b, sends the token at
commitment, the proof at unveiling; Bob verifies with the three-outcome
measurement {|chi0><chi0|, |chi1><chi1|, rest}.

Closed-form security: with rho_b the honest token reductions,

    g_max = D(rho0, rho1) / 2   (Bob's maximal information gain;
                                 achieved by a Helstrom measurement
                                 during the holding phase)
    c_max = F(rho0, rho1) / 2   (Alice's maximal control; achieved by
                                 committing an aligned superposition and
                                 steering it with proof-side unitaries)

Both optimal strategies are constructed explicitly and can be run through
a Born-rule Monte Carlo, either one transcript at a time
(:func:`simulate_run`) or in bulk (:func:`estimate_statistics`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence, Union

import numpy as np

from .distinguish import fidelity, helstrom, max_parallel_overlap, trace_distance
from .errors import DimMismatch, NotAMeasurement, NotOrthogonal, QbcError
from .linalg import (
    BipartiteState,
    DensityOperator,
    PureState,
    apply_to_proof,
    bipartite,
    partial_trace,
    projector,
    random_pure_state,
    tensor_product,
)

ORTHOGONALITY_TOL = 1e-9
MEASUREMENT_TOL = 1e-8
REPORT_TOL = 1e-12


@dataclass(frozen=True)
class PurificationProtocol:
    """Validated pair of orthogonal commitment states on proof ⊗ token."""

    dim_proof: int
    dim_token: int
    chi0: BipartiteState
    chi1: BipartiteState

    def __post_init__(self):
        for chi in (self.chi0, self.chi1):
            if (chi.dim_proof, chi.dim_token) != (self.dim_proof, self.dim_token):
                raise DimMismatch(
                    f"commitment state dims {chi.dim_proof}x{chi.dim_token}"
                    f" != protocol dims {self.dim_proof}x{self.dim_token}"
                )
        overlap = abs(np.vdot(self.chi0.amplitudes, self.chi1.amplitudes))
        if overlap > ORTHOGONALITY_TOL:
            raise NotOrthogonal(f"|<chi0|chi1>| = {overlap} exceeds {ORTHOGONALITY_TOL}")

    def chi(self, bit: int) -> BipartiteState:
        return self.chi1 if bit else self.chi0


def make_protocol(chi0: BipartiteState, chi1: BipartiteState) -> PurificationProtocol:
    """Validate and assemble a protocol from its two commitment states."""
    if (chi0.dim_proof, chi0.dim_token) != (chi1.dim_proof, chi1.dim_token):
        raise DimMismatch(
            f"commitment states live on different spaces:"
            f" {chi0.dim_proof}x{chi0.dim_token} vs {chi1.dim_proof}x{chi1.dim_token}"
        )
    return PurificationProtocol(chi0.dim_proof, chi0.dim_token, chi0, chi1)


def random_protocol(dim_proof: int, dim_token: int, seed) -> PurificationProtocol:
    """Random protocol: Haar chi0, chi1 Gram-Schmidt-orthogonalized against it."""
    rng = np.random.default_rng(seed)
    dim = dim_proof * dim_token
    chi0 = random_pure_state(dim, rng)
    raw = random_pure_state(dim, rng).amplitudes
    raw = raw - np.vdot(chi0.amplitudes, raw) * chi0.amplitudes
    norm = np.linalg.norm(raw)
    if norm < 1e-8:
        raise QbcError("degenerate draw while orthogonalizing chi1")
    chi1 = PureState(raw / norm)
    return make_protocol(
        BipartiteState(dim_proof, dim_token, chi0),
        BipartiteState(dim_proof, dim_token, chi1),
    )


# --------------------------------------------------------------------------
# strategies and records


@dataclass(frozen=True)
class HonestAlice:
    """Commit a bit honestly.  bit=None draws the bit uniformly per run."""

    bit: int | None = None

    def __post_init__(self):
        if self.bit not in (None, 0, 1):
            raise ValueError(f"bit must be 0, 1 or None, got {self.bit!r}")


@dataclass(frozen=True)
class CheatingAlice:
    """Commit the aligned superposition and steer it toward the target bit."""


@dataclass(frozen=True)
class HonestBob:
    """Store the token untouched; abstain from estimating."""


@dataclass(frozen=True)
class HelstromBob:
    """Measure the token with the Helstrom measurement during holding."""


AliceStrategy = Union[HonestAlice, CheatingAlice]
BobStrategy = Union[HonestBob, HelstromBob]


class Outcome(IntEnum):
    """Result of Bob's final verification measurement."""

    ZERO = 0
    ONE = 1
    FAIL = 2


@dataclass(frozen=True)
class RunRecord:
    """Transcript of a single protocol run."""

    alice: AliceStrategy
    bob: BobStrategy
    committed_bit: int | None  # None when Alice commits the cheat state
    target_bit: int
    bob_estimate: int | None  # None when Bob abstains
    outcome: Outcome


@dataclass(frozen=True)
class SecurityReport:
    """Exact one-shot security figures of a protocol instance."""

    trace_distance: float
    fidelity: float
    g_max: float
    c_max: float

    def __post_init__(self):
        if abs(self.g_max - self.trace_distance / 2.0) > REPORT_TOL:
            raise ValueError("g_max must equal trace_distance / 2")
        if abs(self.c_max - self.fidelity / 2.0) > REPORT_TOL:
            raise ValueError("c_max must equal fidelity / 2")


@dataclass(frozen=True)
class CheatKit:
    """Everything cheating Alice needs.

    She commits ``psi_max`` and, to unveil bit b, applies ``u0`` or ``u1``
    to the proof factor just before sending it.  Each bit is then accepted
    with probability ``per_bit_success`` = (1 + F(rho0, rho1)) / 2, and
    u0 @ u1 equals the overlap-maximizing unitary for the chi pair.
    """

    psi_max: BipartiteState
    u0: np.ndarray
    u1: np.ndarray
    per_bit_success: float

    def unveil_unitary(self, bit: int) -> np.ndarray:
        return self.u1 if bit else self.u0


# --------------------------------------------------------------------------
# closed-form analysis


def honest_reduced_states(p: PurificationProtocol) -> tuple[DensityOperator, DensityOperator]:
    """Token-side reductions (rho0, rho1) of the honest commitment states."""
    return (
        partial_trace(p.chi0, keep="token"),
        partial_trace(p.chi1, keep="token"),
    )


def security_report(p: PurificationProtocol) -> SecurityReport:
    rho0, rho1 = honest_reduced_states(p)
    d = trace_distance(rho0, rho1)
    f = fidelity(rho0, rho1)
    return SecurityReport(d, f, d / 2.0, f / 2.0)


def optimal_cheat_kit(p: PurificationProtocol) -> CheatKit:
    """Construct Alice's optimal cheating strategy.

    The unitary aligning chi0 with chi1 on the proof factor is obtained
    from the purification-overlap maximizer; with the split u0 = I,
    u1 = that unitary, the committed state is the normalized superposition

        psi_max ∝ (u0^dag ⊗ I)|chi0> + e^{-i arg c} (u1^dag ⊗ I)|chi1>,

    where c is the overlap of the two terms (real and nonnegative here by
    the phase convention of the maximizer; the phase factor degrades
    gracefully to 1 when c vanishes).  Both |<chi_b|(u_b ⊗ I)|psi_max>|^2
    then equal (1 + F)/2.
    """
    aligned = max_parallel_overlap(p.chi1, p.chi0, act_on="proof")
    u0 = np.eye(p.dim_proof, dtype=np.complex128)
    u1 = aligned.maximizing_unitary
    phi0 = p.chi0.amplitudes
    phi1 = apply_to_proof(u1.conj().T, p.chi1).amplitudes
    c = np.vdot(phi0, phi1)
    phase = 1.0 if abs(c) <= 1e-12 else np.exp(-1j * np.angle(c))
    vec = phi0 + phase * phi1
    vec = vec / np.linalg.norm(vec)
    psi_max = bipartite(p.dim_proof, p.dim_token, vec)
    return CheatKit(psi_max, u0, u1, (1.0 + abs(c)) / 2.0)


# --------------------------------------------------------------------------
# Born-rule sampling


def born_sample(state: PureState, projectors: Sequence[np.ndarray], rng) -> int:
    """Sample an outcome index of a projective measurement on a pure state.

    The projectors must sum to the identity and be mutually orthogonal
    (tolerance ``MEASUREMENT_TOL``); exactly one uniform draw is consumed.
    """
    dim = state.dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    for proj in projectors:
        if proj.shape != (dim, dim):
            raise NotAMeasurement(f"projector shape {proj.shape} does not match dim {dim}")
        total = total + proj
    if np.max(np.abs(total - np.eye(dim))) > MEASUREMENT_TOL:
        raise NotAMeasurement("projectors do not sum to the identity")
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            if np.max(np.abs(projectors[i] @ projectors[j])) > MEASUREMENT_TOL:
                raise NotAMeasurement(f"projectors {i} and {j} are not orthogonal")

    vec = state.amplitudes
    probs = np.array([max(0.0, np.vdot(vec, proj @ vec).real) for proj in projectors])
    draw = rng.random()
    cumulative = np.cumsum(probs)
    for index, edge in enumerate(cumulative):
        if draw < edge:
            return index
    return len(projectors) - 1


def _final_projectors(p: PurificationProtocol) -> list[np.ndarray]:
    p0 = projector(p.chi0.state)
    p1 = projector(p.chi1.state)
    fail = np.eye(p.dim_proof * p.dim_token, dtype=np.complex128) - p0 - p1
    return [p0, p1, fail]


def simulate_run(
    p: PurificationProtocol,
    alice: AliceStrategy,
    bob: BobStrategy,
    target_bit: int,
    rng,
) -> RunRecord:
    """Play one full protocol run and return the transcript.

    Draw order: honest Alice with an unspecified bit consumes one uniform
    for her commitment; a cheating Bob consumes one for his holding-phase
    measurement (which collapses the token by normalized projection); the
    final verification measurement always consumes one.  ``target_bit`` is
    the bit a cheating Alice steers toward and is ignored by honest Alice.
    """
    if target_bit not in (0, 1):
        raise ValueError(f"target_bit must be 0 or 1, got {target_bit!r}")

    kit = None
    if isinstance(alice, HonestAlice):
        committed = alice.bit if alice.bit is not None else int(rng.random() >= 0.5)
        vec = p.chi(committed).amplitudes
    else:
        kit = optimal_cheat_kit(p)
        committed = None
        vec = kit.psi_max.amplitudes

    estimate = None
    if isinstance(bob, HelstromBob):
        rho0, rho1 = honest_reduced_states(p)
        measurement = helstrom(rho0, rho1)
        eye_proof = np.eye(p.dim_proof, dtype=np.complex128)
        extended = [
            tensor_product(eye_proof, measurement.projector0),
            tensor_product(eye_proof, measurement.projector1),
        ]
        estimate = born_sample(PureState(vec), extended, rng)
        vec = extended[estimate] @ vec
        vec = vec / np.linalg.norm(vec)

    if kit is not None:
        state = apply_to_proof(
            kit.unveil_unitary(target_bit), bipartite(p.dim_proof, p.dim_token, vec)
        )
        vec = state.amplitudes

    outcome = Outcome(born_sample(PureState(vec), _final_projectors(p), rng))
    return RunRecord(alice, bob, committed, target_bit, estimate, outcome)


# --------------------------------------------------------------------------
# bulk statistics


@dataclass(frozen=True)
class StatisticsReport:
    """Empirical estimate/unveil rates with binomial standard errors.

    ``p_estimate`` is the fraction of runs where Bob's estimate matched the
    bit Alice stood behind (her commitment when honest, her target when
    cheating); an abstaining honest Bob is scored 0.5 by definition with
    zero standard error.  ``p_unveil`` is the fraction of runs whose final
    outcome equalled the drawn target bit.
    """

    p_estimate: float
    p_estimate_stderr: float
    p_unveil: float
    p_unveil_stderr: float
    n_runs: int


def _binomial_stderr(p_hat: float, n: int) -> float:
    return float(np.sqrt(max(0.0, p_hat * (1.0 - p_hat)) / n))


def _outcome_cumulative(p: PurificationProtocol, vec: np.ndarray) -> np.ndarray:
    """(P(outcome=0), P(outcome<=1)) for the final verification measurement."""
    q0 = abs(np.vdot(p.chi0.amplitudes, vec)) ** 2
    q1 = abs(np.vdot(p.chi1.amplitudes, vec)) ** 2
    return np.array([q0, min(1.0, q0 + q1)])


def _collapse(p: PurificationProtocol, vec: np.ndarray, token_proj: np.ndarray) -> np.ndarray:
    extended = tensor_product(np.eye(p.dim_proof, dtype=np.complex128), token_proj)
    collapsed = extended @ vec
    norm = np.linalg.norm(collapsed)
    if norm < 1e-12:  # branch of probability ~0; never sampled
        return np.zeros_like(vec)
    return collapsed / norm


@dataclass(frozen=True)
class _StrategyTables:
    """Exact per-configuration probabilities for one strategy pairing.

    ``commit_weights`` is the distribution of Alice's commitment context
    (two entries for honest Alice, one for the cheat state).
    ``est_prob0[c]`` is the chance a measuring Bob sees estimate 0 given
    context c (absent when he abstains).  ``out_cum[c, e, t]`` holds the
    cumulative final-outcome probabilities (P(0), P(0 or 1)) when Alice
    stands behind bit t.
    """

    alice_honest: bool
    fixed_bit: int | None
    bob_cheats: bool
    commit_weights: np.ndarray
    est_prob0: np.ndarray | None
    out_cum: np.ndarray

    @property
    def n_commit(self) -> int:
        return self.commit_weights.shape[0]


def _strategy_tables(
    p: PurificationProtocol, alice: AliceStrategy, bob: BobStrategy
) -> _StrategyTables:
    alice_honest = isinstance(alice, HonestAlice)
    bob_cheats = isinstance(bob, HelstromBob)

    kit = None
    if alice_honest:
        pre_states = [p.chi0.amplitudes, p.chi1.amplitudes]
        if alice.bit is None:
            commit_weights = np.array([0.5, 0.5])
        else:
            commit_weights = np.array([1.0 - alice.bit, float(alice.bit)])
    else:
        kit = optimal_cheat_kit(p)
        pre_states = [kit.psi_max.amplitudes]
        commit_weights = np.array([1.0])
    n_commit = len(pre_states)

    if bob_cheats:
        measurement = helstrom(*honest_reduced_states(p))
        token_projs = [measurement.projector0, measurement.projector1]
        n_est = 2
        est_prob0 = np.empty(n_commit)
        branches: list[list[np.ndarray]] = []
        for ci, vec in enumerate(pre_states):
            state = vec.reshape(p.dim_proof, p.dim_token)
            prob0 = np.einsum("pt,ts,ps->", state.conj(), token_projs[0], state).real
            est_prob0[ci] = float(np.clip(prob0, 0.0, 1.0))
            branches.append([_collapse(p, vec, proj) for proj in token_projs])
    else:
        n_est = 1
        est_prob0 = None
        branches = [[vec] for vec in pre_states]

    out_cum = np.empty((n_commit, n_est, 2, 2))
    for ci in range(n_commit):
        for ei in range(n_est):
            branch = branches[ci][ei]
            for t in (0, 1):
                if kit is None:
                    final_vec = branch
                else:
                    final_vec = (
                        kit.unveil_unitary(t) @ branch.reshape(p.dim_proof, p.dim_token)
                    ).reshape(-1)
                out_cum[ci, ei, t] = _outcome_cumulative(p, final_vec)

    return _StrategyTables(
        alice_honest=alice_honest,
        fixed_bit=alice.bit if alice_honest else None,
        bob_cheats=bob_cheats,
        commit_weights=commit_weights,
        est_prob0=est_prob0,
        out_cum=out_cum,
    )


def exact_statistics(
    p: PurificationProtocol, alice: AliceStrategy, bob: BobStrategy
) -> tuple[float, float]:
    """Exact (p_estimate, p_unveil) expectations for a strategy pairing.

    These are the numbers the Monte Carlo of :func:`estimate_statistics`
    converges to: the probability Bob's estimate matches the bit Alice
    stands behind, and the probability the final outcome equals her
    uniformly drawn target.  An abstaining Bob scores 0.5 by definition.
    """
    tables = _strategy_tables(p, alice, bob)
    commit_w = tables.commit_weights

    if tables.bob_cheats:
        est_w = np.stack([tables.est_prob0, 1.0 - tables.est_prob0], axis=1)  # (n_c, 2)
        if tables.alice_honest:
            # P(estimate = committed bit), commitment weighted by its prior.
            p_estimate = float(sum(commit_w[c] * est_w[c, c] for c in range(tables.n_commit)))
        else:
            p_estimate = 0.5  # estimate is independent of the later target draw
    else:
        est_w = np.ones((tables.n_commit, 1))
        p_estimate = 0.5

    p_unveil = 0.0
    for c in range(tables.n_commit):
        for e in range(est_w.shape[1]):
            for t in (0, 1):
                cum = tables.out_cum[c, e, t]
                prob_t = cum[0] if t == 0 else cum[1] - cum[0]
                p_unveil += commit_w[c] * est_w[c, e] * 0.5 * prob_t
    return p_estimate, float(p_unveil)


def estimate_statistics(
    p: PurificationProtocol,
    alice: AliceStrategy,
    bob: BobStrategy,
    n_runs: int,
    seed: int,
) -> StatisticsReport:
    """Monte Carlo estimate of Bob's guess rate and Alice's unveil rate.

    Per-run probabilities are computed exactly once per configuration; the
    sampling itself is vectorized.  Run i consumes the fixed-width block of
    four uniforms at offset 4*i of a Philox counter stream keyed by
    ``seed`` (columns: committed bit, target bit, holding-phase estimate,
    final outcome), so results are reproducible and independent of any
    execution order.  Target bits are drawn uniformly; honest Alice with
    ``bit=None`` also draws her committed bit uniformly per run (equal
    priors), which is the setting in which the closed forms
    p_estimate = (1 + D)/2 and p_unveil = (1 + F)/2 apply.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")

    tables = _strategy_tables(p, alice, bob)

    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random((n_runs, 4))

    if tables.alice_honest:
        if tables.fixed_bit is None:
            commit = (u[:, 0] >= 0.5).astype(np.intp)
        else:
            commit = np.full(n_runs, tables.fixed_bit, dtype=np.intp)
        commit_idx = commit
    else:
        commit_idx = np.zeros(n_runs, dtype=np.intp)

    target = (u[:, 1] >= 0.5).astype(np.intp)

    if tables.bob_cheats:
        estimate = (u[:, 2] >= tables.est_prob0[commit_idx]).astype(np.intp)
    else:
        estimate = np.zeros(n_runs, dtype=np.intp)

    cums = tables.out_cum[commit_idx, estimate, target]
    outcome = (u[:, 3] >= cums[:, 0]).astype(np.intp) + (u[:, 3] >= cums[:, 1]).astype(np.intp)

    p_unveil = float(np.mean(outcome == target))
    if tables.bob_cheats:
        reference = commit if tables.alice_honest else target
        p_estimate = float(np.mean(estimate == reference))
        p_estimate_stderr = _binomial_stderr(p_estimate, n_runs)
    else:
        p_estimate, p_estimate_stderr = 0.5, 0.0

    return StatisticsReport(
        p_estimate=p_estimate,
        p_estimate_stderr=p_estimate_stderr,
        p_unveil=p_unveil,
        p_unveil_stderr=_binomial_stderr(p_unveil, n_runs),
        n_runs=n_runs,
    )


# --------------------------------------------------------------------------
# desk-scale optimality search


@dataclass(frozen=True)
class CheatSearchResult:
    best_value: float
    candidates_evaluated: int


def random_cheat_search(
    p: PurificationProtocol,
    n_candidates: int,
    seed: int,
    refine_fraction: float = 0.2,
) -> CheatSearchResult:
    """Search over cheating strategies (state, unitary pair) for Alice.

    Each candidate is a committed state |psi> with proof-side unveiling
    unitaries (v0, v1); its value is the average acceptance probability
    (|<chi0|(v0 ⊗ I)|psi>|^2 + |<chi1|(v1 ⊗ I)|psi>|^2) / 2.  Most of the
    budget goes to independent uniform draws; the remainder is spent on
    alternating best-response ascent from random starts (optimal unitaries
    for the current state via the orthogonal-Procrustes solution, then the
    optimal state for the current unitaries), each iterate counted as one
    candidate.  Independent of the closed-form construction in
    :func:`optimal_cheat_kit`, which it is used to cross-check.
    """
    if n_candidates < 1:
        raise ValueError("n_candidates must be >= 1")
    rng = np.random.default_rng(seed)
    dp, dt = p.dim_proof, p.dim_token
    dim = dp * dt
    a0 = p.chi0.as_matrix()
    a1 = p.chi1.as_matrix()

    refine_budget = int(n_candidates * refine_fraction)
    n_raw = n_candidates - refine_budget

    best = 0.0

    if n_raw > 0:
        psi = rng.standard_normal((n_raw, dim)) + 1j * rng.standard_normal((n_raw, dim))
        psi /= np.linalg.norm(psi, axis=1, keepdims=True)
        a_psi = psi.reshape(n_raw, dp, dt)
        values = np.zeros(n_raw)
        for a_chi in (a0, a1):
            z = rng.standard_normal((n_raw, dp, dp)) + 1j * rng.standard_normal((n_raw, dp, dp))
            q, r = np.linalg.qr(z)
            diag = np.diagonal(r, axis1=1, axis2=2)
            haar = q * (diag / np.abs(diag))[:, None, :]
            amp = np.einsum("pt,npq,nqt->n", a_chi.conj(), haar, a_psi)
            values += 0.5 * np.abs(amp) ** 2
        best = float(values.max())

    iters_per_start = 20
    n_starts = max(1, refine_budget // iters_per_start) if refine_budget > 0 else 0
    for _ in range(n_starts):
        vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        a_psi = (vec / np.linalg.norm(vec)).reshape(dp, dt)
        for _ in range(iters_per_start):
            responses = []
            for a_chi in (a0, a1):
                w, _, vh = np.linalg.svd(a_psi @ a_chi.conj().T)
                responses.append(vh.conj().T @ w.conj().T)  # maximizes |Tr(U N)|
            phi0 = (responses[0].conj().T @ a0).reshape(-1)
            phi1 = (responses[1].conj().T @ a1).reshape(-1)
            c = np.vdot(phi0, phi1)
            phase = 1.0 if abs(c) <= 1e-12 else np.exp(-1j * np.angle(c))
            value = (1.0 + abs(c)) / 2.0
            best = max(best, float(value))
            merged = phi0 + phase * phi1
            a_psi = (merged / np.linalg.norm(merged)).reshape(dp, dt)

    return CheatSearchResult(best, n_raw + n_starts * iters_per_start)
