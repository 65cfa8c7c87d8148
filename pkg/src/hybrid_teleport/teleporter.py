"""Teleportation of a single-rail qubit through the hybrid channel.

Mode layout of the three-mode simulation: 0 is Alice's CV mode, 1 is the
input qubit mode and 2 is Bob's mode.  ``BS(B)`` acts on modes (0, 1);
``k1`` is the photon count of output mode 0 and ``k2`` of output mode 1.

Each outcome is computed twice: by brute-force Fock simulation
(:func:`teleport_outcome`) and from the closed forms
(:func:`teleport_outcome_analytic`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import fock
from .analytic import (
    CvStateSpec,
    _is_pole,
    branch_weights,
    cv_coefficients,
    distortion_factor,
)
from .channel import HybridChannel
from .errors import DomainError
from .qubit import SingleRailQubit

__all__ = [
    "SingleRailQubit",
    "TeleportResult",
    "Correction",
    "teleport_outcome",
    "teleport_outcome_analytic",
    "enumerate_outcomes",
    "enumerate_outcomes_analytic",
    "classify_and_correct",
    "distortion_map",
    "fidelity_to_input",
    "PROB_FLOOR",
]

PROB_FLOOR = 1e-15
SUPPORT_TOL = 1e-10

Parity = Literal["odd", "even"]
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)


@dataclass(frozen=True)
class TeleportResult:
    """One photon-counting outcome of the protocol.

    Attributes
    ----------
    outcome : (k1, k2)
    parity : {"odd", "even"}
    probability : float
    bob_state : SingleRailQubit or None
        ``None`` when the outcome probability is below ``PROB_FLOOR``.
    distortion_b : float or None
        Signed distortion factor; ``None`` for ``(0, 0)`` and at a pole.
    normalization_N : float
        ``|a0|^2 + b^2 |a1|^2`` (odd) or ``|a1|^2 + b^2 |a0|^2`` (even).
    failure : bool
        True when Bob's state carries no information about the input:
        outcome ``(0, 0)`` and even outcomes at the pole ``k1 B = k2``.
    """

    outcome: tuple[int, int]
    parity: Parity
    probability: float
    bob_state: SingleRailQubit | None
    distortion_b: float | None
    normalization_N: float
    failure: bool = False

    @property
    def is_defined(self) -> bool:
        return self.bob_state is not None


@dataclass(frozen=True)
class Correction:
    """Bob's corrected qubit and the Pauli gates applied, in order."""

    gates: tuple[str, ...]
    state: SingleRailQubit | None
    failure: bool = False

    @property
    def label(self) -> str:
        """``I``, ``X``, ``Z`` or ``ZX`` (operator product, right acts first)."""
        if not self.gates:
            return "I"
        return "".join(reversed(self.gates))


def _parity(k1: int, k2: int) -> Parity:
    return "odd" if (k1 + k2) % 2 else "even"


def _three_mode(channel: HybridChannel, qubit: SingleRailQubit, B: float) -> fock.FockState:
    if not (B > 0 and math.isfinite(B)):
        raise DomainError(f"B={B} must be finite and > 0")
    c = channel.cutoff
    q = np.zeros(c + 1, dtype=complex)
    q[:2] = qubit.vector
    ch = channel.state.amplitudes
    amps = ch[:, None, :] * q[None, :, None]
    state = fock.FockState(amps, c, channel.state.leaked)
    return fock.apply_beam_splitter(state, fock.BeamSplitterSpec.from_B(B, 0, 1))


def _result_from_bob(k1, k2, amps: np.ndarray, prob: float, channel, qubit, B) -> TeleportResult:
    par = _parity(k1, k2)
    y0, B0 = channel.params.y0, channel.params.B0
    if (k1, k2) == (0, 0):
        b, N, fail = None, abs(qubit.a0) ** 2, True
    elif par == "even" and _is_pole(k1, k2, B):
        b, N, fail = None, abs(qubit.a0) ** 2, True
    else:
        b = distortion_factor(k1, k2, y0, B0, B)
        p0, p1 = abs(qubit.a0) ** 2, abs(qubit.a1) ** 2
        N = p0 + b * b * p1 if par == "odd" else p1 + b * b * p0
        fail = False
    if prob < PROB_FLOOR:
        return TeleportResult((k1, k2), par, prob, None, b, N, fail)
    support = float(np.sum(np.abs(amps[2:]) ** 2))
    if support > SUPPORT_TOL:
        raise DomainError(f"Bob's state leaves the qubit subspace (weight {support:.3g})")
    bob = SingleRailQubit.from_unnormalized(amps[0], amps[1])
    return TeleportResult((k1, k2), par, prob, bob, b, N, fail)


def teleport_outcome(
    channel: HybridChannel, qubit: SingleRailQubit, B: float, k1: int, k2: int
) -> TeleportResult:
    """Fock simulation of one outcome: BS(B) on Alice's CV mode and the
    qubit, then photon counting of both outputs."""
    c = channel.cutoff
    if k1 < 0 or k2 < 0 or k1 + k2 > c:
        raise DomainError(f"outcome {(k1, k2)} needs k1 + k2 <= cutoff {c}")
    state = _three_mode(channel, qubit, B)
    bob = np.asarray(state.amplitudes[k1, k2, :])
    prob = float(np.vdot(bob, bob).real)
    if prob > 0:
        bob = bob / math.sqrt(prob)
    return _result_from_bob(k1, k2, bob, prob, channel, qubit, B)


def enumerate_outcomes(
    channel: HybridChannel, qubit: SingleRailQubit, B: float, max_total: int
) -> tuple[list[TeleportResult], float]:
    """All outcomes with ``k1 + k2 <= max_total`` from one Fock simulation.

    Returns the results ordered by ``(k1 + k2, k1)`` and the tail
    ``1 - sum(probabilities)``.
    """
    if max_total > channel.cutoff:
        raise DomainError("max_total exceeds the channel cutoff")
    state = _three_mode(channel, qubit, B)
    out = []
    for N in range(max_total + 1):
        for k1 in range(N + 1):
            k2 = N - k1
            bob = np.asarray(state.amplitudes[k1, k2, :])
            prob = float(np.vdot(bob, bob).real)
            if prob > 0:
                bob = bob / math.sqrt(prob)
            out.append(_result_from_bob(k1, k2, bob, prob, channel, qubit, B))
    return out, 1.0 - sum(r.probability for r in out)


def teleport_outcome_analytic(
    qubit: SingleRailQubit, y0: float, B0: float, B: float, k1: int, k2: int
) -> TeleportResult:
    """Closed-form counterpart of :func:`teleport_outcome`.

    Odd outcomes leave ``(a0|0> + b a1|1>)/sqrt(N)``; even outcomes leave
    ``(a1|0> + b a0|1>)/sqrt(N)``.  At ``(0, 0)`` and at even poles Bob holds
    the single photon, carrying the phase of ``a0``.
    """
    w_lead, w_other = branch_weights(k1, k2, y0, B0, B)
    par = _parity(k1, k2)
    a0, a1 = qubit.a0, qubit.a1
    p0, p1 = abs(a0) ** 2, abs(a1) ** 2
    if (k1, k2) == (0, 0) or (par == "even" and _is_pole(k1, k2, B)):
        prob = w_other * p0
        state = SingleRailQubit(0, a0 / abs(a0)) if prob >= PROB_FLOOR else None
        return TeleportResult((k1, k2), par, prob, state, None, p0, True)
    b = distortion_factor(k1, k2, y0, B0, B)
    if par == "odd":
        N = p0 + b * b * p1
        vec = (a0, b * a1)
    else:
        N = p1 + b * b * p0
        vec = (a1, b * a0)
    prob = w_lead * N
    state = SingleRailQubit(vec[0] / math.sqrt(N), vec[1] / math.sqrt(N)) if prob >= PROB_FLOOR else None
    return TeleportResult((k1, k2), par, prob, state, b, N, False)


def enumerate_outcomes_analytic(
    qubit: SingleRailQubit, y0: float, B0: float, B: float, max_total: int, tail_cutoff: int = 400
) -> tuple[list[TeleportResult], float]:
    """Closed-form outcomes with ``k1 + k2 <= max_total`` and a rigorous bound
    on the probability of all larger totals.

    The total photon number after the splitter is at most Alice's photon
    number plus one, so the missing mass is bounded by the probability that
    Alice's mode holds ``max_total`` photons or more.
    """
    out = [
        teleport_outcome_analytic(qubit, y0, B0, B, k1, N - k1)
        for N in range(max_total + 1)
        for k1 in range(N + 1)
    ]
    odd = cv_coefficients(CvStateSpec("base_1_odd", 1, y0, B0=B0), tail_cutoff)
    even = cv_coefficients(CvStateSpec("base_1_even", 1, y0, B0=B0), tail_cutoff)
    tail = 0.5 * float(np.sum(odd[max_total:] ** 2) + np.sum(even[max_total:] ** 2))
    return out, tail


def classify_and_correct(result: TeleportResult) -> Correction:
    """Apply Bob's Pauli corrections.

    Even outcomes need a bit flip ``X``; a negative distortion factor needs a
    phase flip ``Z`` afterwards.  With ``|b| = 1`` the output is the input
    qubit; otherwise the amplitude distortion remains.
    """
    if result.failure or result.bob_state is None:
        return Correction((), result.bob_state, failure=True)
    v = result.bob_state.vector
    gates: list[str] = []
    if result.parity == "even":
        v = _X @ v
        gates.append("X")
    if result.distortion_b < 0:
        v = _Z @ v
        gates.append("Z")
    return Correction(tuple(gates), SingleRailQubit.from_unnormalized(v[0], v[1]))


def distortion_map(qubit: SingleRailQubit, b: float, parity: Parity) -> tuple[np.ndarray, SingleRailQubit]:
    """Unitary 2x2 matrix taking ``qubit`` to its distorted image.

    Odd: ``(a0, b a1)/sqrt(N)``, a special-unitary matrix.  Even:
    ``(a1, b a0)/sqrt(N)``, obtained as the odd map (built for ``X qubit``)
    composed with ``X``, so its determinant is -1.

    The matrix is ``|out><in| + |out_perp><in_perp|``.  It depends on the
    input, so it is only meaningful on that qubit.  Raises ``DomainError``
    when ``b = 0`` removes the only nonzero amplitude.
    """
    if not math.isfinite(b):
        raise DomainError("b must be finite")
    if parity == "even":
        flipped = SingleRailQubit(qubit.a1, qubit.a0)
        U_odd, out = distortion_map(flipped, b, "odd")
        return U_odd @ _X, out
    if parity != "odd":
        raise ValueError("parity must be 'odd' or 'even'")
    a0, a1 = qubit.a0, qubit.a1
    N = abs(a0) ** 2 + b * b * abs(a1) ** 2
    if N < PROB_FLOOR:
        raise DomainError("the distortion annihilates this qubit (N = 0)")
    o = np.array([a0, b * a1]) / math.sqrt(N)
    i = qubit.vector
    o_perp = np.array([-np.conj(o[1]), np.conj(o[0])])
    i_perp = np.array([-np.conj(i[1]), np.conj(i[0])])
    U = np.outer(o, i.conj()) + np.outer(o_perp, i_perp.conj())
    return U, SingleRailQubit.from_unnormalized(o[0], o[1])


def fidelity_to_input(candidate: SingleRailQubit, reference: SingleRailQubit) -> float:
    """``|<reference|candidate>|^2``."""
    return float(abs(np.vdot(reference.vector, candidate.vector)) ** 2)
