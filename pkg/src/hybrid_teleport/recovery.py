"""Heralded removal of the amplitude distortion at Bob's side.

Bob first applies his Pauli correction (see
:func:`~hybrid_teleport.teleporter.classify_and_correct`), which leaves

* ``(a0|0> + |b| a1|1>)/sqrt(N)`` after an odd outcome and
* ``(|b| a0|0> + a1|1>)/sqrt(N)`` after an even one.

He then mixes this qubit with the first mode of an auxiliary two-mode
state on a balanced splitter and counts photons in both outputs.  Exactly
one photon heralds success, and the second auxiliary mode then carries
``|b| (a0, +-a1)`` (odd) or ``|b| (a1, +-a0)`` (even).  Bob undoes the swap
with ``X`` in the even case, and a final ``Z`` fixes the sign for the
``(0, 1)`` herald.
The success probability is ``b^2 / (N (1 + b^2))``, so the ``N`` cancels
against the outcome probability of the teleportation step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import minimize_scalar

from . import fock
from .analytic import distortion_factor, solve_unit_distortion_B, stripped_probability
from .channel import ChannelParams, make_params
from .errors import DomainError, InfeasibleError
from .line import solve_b1_point
from .qubit import SingleRailQubit
from .teleporter import TeleportResult, classify_and_correct

__all__ = [
    "AuxiliaryState",
    "RecoveryResult",
    "RECOVERY_OUTCOMES",
    "make_auxiliary",
    "recover",
    "partial_success_probabilities",
    "total_success_probability",
    "optimize_recovery",
    "OptimizeResult",
]

RECOVERY_OUTCOMES = ((2, 0), (0, 2), (0, 3), (1, 2), (2, 1), (3, 0))
LINE_TOL = 1e-9
_HERALDS = ((1, 0), (0, 1))


@dataclass(frozen=True)
class AuxiliaryState:
    """``(|01> + b|10>)/sqrt(1+b^2)`` (odd) or ``(b|00> + |11>)/sqrt(1+b^2)`` (even)."""

    parity: Literal["odd", "even"]
    b: float
    amplitudes: np.ndarray = field(repr=False)

    @property
    def normalization(self) -> float:
        return 1 + self.b * self.b

    def as_fock(self, cutoff: int = 2) -> fock.FockState:
        amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        amps[:2, :2] = self.amplitudes
        return fock.FockState(amps, cutoff)


def make_auxiliary(parity: Literal["odd", "even"], b: float) -> AuxiliaryState:
    if not math.isfinite(b):
        raise DomainError("b must be finite")
    amps = np.zeros((2, 2))
    if parity == "odd":
        amps[0, 1], amps[1, 0] = 1.0, b
    elif parity == "even":
        amps[0, 0], amps[1, 1] = b, 1.0
    else:
        raise ValueError("parity must be 'odd' or 'even'")
    amps /= math.sqrt(1 + b * b)
    amps.setflags(write=False)
    return AuxiliaryState(parity, float(b), amps)


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of the recovery stage.

    Attributes
    ----------
    state : SingleRailQubit or None
        Recovered qubit (identical for both successful heralds).
    success_probability : float
        Total probability of the two single-photon heralds.
    heralds : dict
        ``{(m1, m2): (probability, corrected state or None)}`` for the
        successful heralds.
    """

    state: SingleRailQubit | None
    success_probability: float
    heralds: dict


def recover(distorted: TeleportResult, aux: AuxiliaryState) -> RecoveryResult:
    """Fock simulation of the recovery stage on one teleportation result."""
    if distorted.failure or distorted.bob_state is None:
        raise DomainError("nothing to recover from a failed or undefined outcome")
    if aux.parity != distorted.parity:
        raise DomainError("auxiliary parity does not match the outcome parity")
    if abs(abs(distorted.distortion_b) - aux.b) > 1e-12 * max(1.0, aux.b):
        raise DomainError("auxiliary b must equal |b| of the teleported state")
    corrected = classify_and_correct(distorted).state
    c = 2
    q = np.zeros(c + 1, dtype=complex)
    q[:2] = corrected.vector
    state = fock.tensor(fock.FockState(q, c), aux.as_fock(c))
    state = fock.apply_beam_splitter(state, fock.BeamSplitterSpec.from_B(1.0, 0, 1))
    heralds = {}
    total = 0.0
    out_state = None
    for m1, m2 in _HERALDS:
        vec = np.asarray(state.amplitudes[m1, m2, :])
        p = float(np.vdot(vec, vec).real)
        total += p
        if p < 1e-15:
            heralds[(m1, m2)] = (p, None)
            continue
        v = vec[:2] / math.sqrt(p)
        if aux.parity == "even":
            v = v[::-1]
        if (m1, m2) == (0, 1):
            v = v * np.array([1, -1])
        qb = SingleRailQubit.from_unnormalized(v[0], v[1])
        heralds[(m1, m2)] = (p, qb)
        out_state = out_state or qb
    return RecoveryResult(out_state, total, heralds)


def partial_success_probabilities(y0: float, B0: float, B: float = 1.0) -> dict:
    """``{(k1, k2): b^2/(1+b^2) * P_k1k2 / N_k1k2}`` for the recoverable outcomes."""
    out = {}
    for k1, k2 in RECOVERY_OUTCOMES:
        b = distortion_factor(k1, k2, y0, B0, B)
        out[(k1, k2)] = b * b / (1 + b * b) * stripped_probability(k1, k2, y0, B0, B)
    return out


def total_success_probability(params: ChannelParams) -> float:
    """Teleportation probability with recovery on the perfect-teleportation line.

    ``0.5`` from the undistorted 01/10 events plus the recovered
    contributions of 20, 02, 03, 12, 21 and 30 at ``B = 1``.  Parameters off
    the line are rejected.
    """
    y0, B0 = params.y0, params.B0
    B01 = solve_unit_distortion_B(0, 1, y0, B0)
    if abs(B01 - 1) > LINE_TOL:
        raise DomainError(f"parameters are off the B=1 line (B01 = {B01!r})")
    return 0.5 + sum(partial_success_probabilities(y0, B0).values())


@dataclass(frozen=True)
class OptimizeResult:
    S_dB: float
    B0: float
    P_pt: float
    grid_step: float


def _p_on_line(S_dB: float) -> float:
    p = solve_b1_point(S_dB)
    return total_success_probability(make_params(S_dB, p.B0))


def optimize_recovery(S_min: float = 0.0, S_max: float = 10.0, steps: int = 101) -> OptimizeResult:
    """Maximize the recovered teleportation probability along the B=1 line.

    Scans ``steps`` equally spaced squeezing values in ``[S_min, S_max]``,
    then refines around the best grid point with a bounded scalar search.
    Deterministic for a given box and resolution.
    """
    if not 0 <= S_min < S_max:
        raise DomainError("need 0 <= S_min < S_max")
    if steps < 2:
        raise DomainError("steps must be >= 2")
    grid = np.linspace(S_min, S_max, steps)
    vals = []
    for S in grid:
        try:
            vals.append(_p_on_line(float(S)))
        except (InfeasibleError, DomainError):
            vals.append(-np.inf)
    vals = np.array(vals)
    if not np.isfinite(vals).any():
        raise InfeasibleError("the B=1 line is empty over the search box")
    i = int(np.argmax(vals))
    step = float(grid[1] - grid[0])
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, steps - 1)])
    best_S, best_P = float(grid[i]), float(vals[i])
    res = minimize_scalar(lambda s: -_p_on_line(s), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    if res.success and -res.fun > best_P:
        best_S, best_P = float(res.x), float(-res.fun)
    return OptimizeResult(best_S, solve_b1_point(best_S).B0, best_P, step)
