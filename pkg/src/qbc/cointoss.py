"""Coin tossing built on a purification bit-commitment protocol.

Flow: Alice commits a bit, Bob announces a guess g, Alice unveils, and Bob
wins exactly when his guess matches the unveiled bit.  One-sided cheating
only; the cheats are the optimal commitment cheats:

* Cheating Bob measures the token (Helstrom) and guesses his estimate,
  winning with probability (1 + D)/2, so his bias is beta = g_max.
* Cheating Alice commits the aligned superposition, waits for g, and
  steers toward 1 - g, winning with probability (1 + F)/2, so her bias is
  alpha = c_max.

Scoring convention for a caught cheater: when cheating Alice's unveiling
fails verification, the toss is awarded to Bob.  The protocol itself does
not assign a payoff to that outcome; awarding it to Bob is the
conservative choice and makes Alice's winning probability exactly her
unveiling success probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .distinguish import helstrom
from .errors import BothCheat
from .linalg import PureState, tensor_product
from .protocol import (
    Outcome,
    PurificationProtocol,
    _outcome_cumulative,
    born_sample,
    honest_reduced_states,
    optimal_cheat_kit,
    security_report,
)
from .tradeoff import Commuting3D, family_protocol

BIAS_TOL = 1e-9


@dataclass(frozen=True)
class CoinTossProtocol:
    base: PurificationProtocol


@dataclass(frozen=True)
class BiasReport:
    """Maximal biases: alpha for Alice, beta for Bob.

    Both lie in [0, 1/2] and their sum is at least 1/2; the sum hits 1/2
    exactly on bases whose reductions satisfy D + F = 1.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        for label, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not -BIAS_TOL <= value <= 0.5 + BIAS_TOL:
                raise ValueError(f"{label} = {value} outside [0, 1/2]")
        if self.alpha + self.beta < 0.5 - BIAS_TOL:
            raise ValueError(f"alpha + beta = {self.alpha + self.beta} below 1/2")


@dataclass(frozen=True)
class TossResult:
    winner: Literal["alice", "bob"]
    alice_caught: bool


def biases(ct: CoinTossProtocol) -> BiasReport:
    """Maximal one-sided biases of the derived coin toss."""
    report = security_report(ct.base)
    return BiasReport(alpha=report.c_max, beta=report.g_max)


def fair_toss_protocol() -> CoinTossProtocol:
    """The fair toss with both biases equal to 0.25 (Commuting3D at lam = 1/2)."""
    return CoinTossProtocol(family_protocol(Commuting3D(0.5)))


def simulate_toss(
    ct: CoinTossProtocol, alice_cheats: bool, bob_cheats: bool, rng
) -> TossResult:
    """Play one coin toss; at most one party may cheat.

    Honest Alice's unveiling always verifies, so the winner is settled by
    comparing Bob's guess with her committed bit.  Cheating Alice's
    unveiling is a genuine Born trial on the steered state; a Fail outcome
    marks her caught and hands the toss to Bob.
    """
    if alice_cheats and bob_cheats:
        raise BothCheat("one-sided cheating only")
    p = ct.base

    if not alice_cheats:
        committed = int(rng.random() >= 0.5)
        if bob_cheats:
            measurement = helstrom(*honest_reduced_states(p))
            eye_proof = np.eye(p.dim_proof, dtype=np.complex128)
            extended = [
                tensor_product(eye_proof, measurement.projector0),
                tensor_product(eye_proof, measurement.projector1),
            ]
            guess = born_sample(p.chi(committed).state, extended, rng)
        else:
            guess = int(rng.random() >= 0.5)
        return TossResult("bob" if guess == committed else "alice", alice_caught=False)

    kit = optimal_cheat_kit(p)
    guess = int(rng.random() >= 0.5)
    target = 1 - guess
    steered = (
        kit.unveil_unitary(target) @ kit.psi_max.as_matrix()
    ).reshape(-1)
    final = [
        np.outer(p.chi0.amplitudes, p.chi0.amplitudes.conj()),
        np.outer(p.chi1.amplitudes, p.chi1.amplitudes.conj()),
    ]
    final.append(np.eye(p.dim_proof * p.dim_token, dtype=np.complex128) - final[0] - final[1])
    outcome = Outcome(born_sample(PureState(steered), final, rng))
    if outcome == target:
        return TossResult("alice", alice_caught=False)
    return TossResult("bob", alice_caught=(outcome == Outcome.FAIL))


@dataclass(frozen=True)
class TossStatistics:
    alice_win_rate: float
    bob_win_rate: float
    alice_caught_rate: float
    alice_win_stderr: float
    n_tosses: int


def toss_statistics(
    ct: CoinTossProtocol,
    cheater: Literal["none", "alice", "bob"],
    n_tosses: int,
    seed: int,
) -> TossStatistics:
    """Vectorized Monte Carlo over many tosses.

    Toss i consumes the block of four uniforms at offset 4*i of a Philox
    stream keyed by ``seed`` (columns: commit bit, guess bit, estimate,
    unveiling outcome), so results are seed-reproducible and independent
    of execution order.
    """
    if n_tosses < 1:
        raise ValueError("n_tosses must be >= 1")
    if cheater not in ("none", "alice", "bob"):
        raise ValueError(f"cheater must be 'none', 'alice' or 'bob', got {cheater!r}")
    p = ct.base
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random((n_tosses, 4))

    caught = np.zeros(n_tosses, dtype=bool)
    if cheater == "alice":
        kit = optimal_cheat_kit(p)
        guess = (u[:, 1] >= 0.5).astype(np.intp)
        target = 1 - guess
        cum_by_target = np.stack(
            [
                _outcome_cumulative(
                    p, (kit.unveil_unitary(t) @ kit.psi_max.as_matrix()).reshape(-1)
                )
                for t in (0, 1)
            ]
        )
        cums = cum_by_target[target]
        outcome = (u[:, 3] >= cums[:, 0]).astype(np.intp) + (u[:, 3] >= cums[:, 1]).astype(np.intp)
        alice_wins = outcome == target
        caught = outcome == int(Outcome.FAIL)
    else:
        committed = (u[:, 0] >= 0.5).astype(np.intp)
        if cheater == "bob":
            rho0, rho1 = honest_reduced_states(p)
            measurement = helstrom(rho0, rho1)
            est_prob0 = np.array(
                [
                    float(np.trace(measurement.projector0 @ rho.matrix).real)
                    for rho in (rho0, rho1)
                ]
            )
            guess = (u[:, 2] >= est_prob0[committed]).astype(np.intp)
        else:
            guess = (u[:, 1] >= 0.5).astype(np.intp)
        alice_wins = guess != committed

    rate = float(np.mean(alice_wins))
    stderr = float(np.sqrt(max(0.0, rate * (1.0 - rate)) / n_tosses))
    return TossStatistics(
        alice_win_rate=rate,
        bob_win_rate=1.0 - rate,
        alice_caught_rate=float(np.mean(caught)),
        alice_win_stderr=stderr,
        n_tosses=n_tosses,
    )
