"""Hybrid CV-DV entangled channel.

The channel is the two-mode state

    (|Psi_odd>_A |0>_B + |Psi_even>_A |1>_B) / sqrt(2)

where ``A`` is Alice's continuous-variable mode and ``B`` is Bob's
single-rail mode.  ``Psi_odd`` is a squeezed vacuum with one photon
subtracted; ``Psi_even`` is a squeezed vacuum with one photon added and one
subtracted on the same splitter.  It is built either directly from the
closed-form amplitudes or by simulating the heralded preparation in Fock
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .analytic import CvStateSpec, ReducedParams, SqueezeParams, cv_coefficients, cv_norm_factor, g11
from .errors import DomainError, TruncationError

__all__ = [
    "ChannelParams",
    "HybridChannel",
    "make_params",
    "build_channel_analytic",
    "prepare_channel_simulated",
    "balanced_ancilla_weight",
    "ALICE",
    "BOB",
]

ALICE, BOB = 0, 1


@dataclass(frozen=True)
class ChannelParams:
    squeeze: SqueezeParams
    B0: float

    def __post_init__(self):
        if not (self.B0 >= 0 and math.isfinite(self.B0)):
            raise DomainError(f"B0={self.B0} must be finite and >= 0")

    @property
    def reduced(self) -> ReducedParams:
        return ReducedParams(self.squeeze.y_smsv, self.B0)

    @property
    def y0(self) -> float:
        return self.squeeze.y_smsv / (1 + self.B0)

    @property
    def S_dB(self) -> float:
        return self.squeeze.S_dB

    @property
    def t0(self) -> float:
        return 1 / math.sqrt(1 + self.B0)

    @property
    def r0(self) -> float:
        return math.sqrt(self.B0 / (1 + self.B0))

    def odd_spec(self) -> CvStateSpec:
        return CvStateSpec("base_1_odd", 1, self.y0, B0=self.B0)

    def even_spec(self) -> CvStateSpec:
        return CvStateSpec("base_1_even", 1, self.y0, B0=self.B0)


def make_params(S_dB: float, B0: float) -> ChannelParams:
    """Channel parameters from the squeezing in decibels and the BS parameter ``B0``."""
    if S_dB < 0 or B0 < 0:
        raise DomainError("S_dB and B0 must be >= 0")
    return ChannelParams(SqueezeParams.from_db(S_dB), float(B0))


@dataclass(frozen=True)
class HybridChannel:
    params: ChannelParams
    state: fock.FockState

    @property
    def cutoff(self) -> int:
        return self.state.cutoff

    def branch(self, bob: int) -> tuple[np.ndarray, float]:
        """Alice's normalized conditional state given Bob holds ``bob`` photons,
        together with the branch weight (squared)."""
        sl = self.state.amplitudes[:, bob]
        w = float(np.vdot(sl, sl).real)
        return (sl / math.sqrt(w) if w > 0 else sl.copy()), w

    def bob_reduced(self) -> np.ndarray:
        """Bob's 2x2 reduced density matrix on ``{|0>, |1>}``."""
        a = self.state.amplitudes[:, :2]
        return a.T @ a.conj()


def build_channel_analytic(params: ChannelParams, cutoff: int, tail_tol: float = 1e-10) -> HybridChannel:
    """Channel from the closed-form odd/even branch amplitudes.

    The amplitudes are truncated at ``cutoff`` without renormalizing, so
    any quantity involving at most ``cutoff`` photons in Alice's mode is
    exact.  ``TruncationError`` is raised when either branch loses more
    than ``tail_tol`` of its norm.
    """
    odd = cv_coefficients(params.odd_spec(), cutoff)
    even = cv_coefficients(params.even_spec(), cutoff)
    tail = max(1 - np.sum(odd**2), 1 - np.sum(even**2))
    if tail > tail_tol:
        raise TruncationError(f"cutoff {cutoff} leaves branch tail {tail:.3g} > {tail_tol:.3g}")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[:, 0] = odd / math.sqrt(2)
    amps[:, 1] = even / math.sqrt(2)
    return HybridChannel(params, fock.FockState(amps, cutoff, leaked=max(0.0, float(tail))))


def balanced_ancilla_weight(params: ChannelParams) -> float:
    """Ancilla weight ``r`` in ``|00> + r|11>`` that makes the two heralded
    branches equally likely.

    Equating the odd and even heralding weights gives
    ``r^2 = y0 B0 (1 + B0) Z'(y0) / G(y0, B0)``; ``r`` vanishes linearly
    with the squeezing.
    """
    y0, B0 = params.y0, params.B0
    z1 = cv_norm_factor(params.odd_spec())
    return math.sqrt(y0 * B0 * z1 * (1 + B0) / g11(y0, B0))


def _fix_branch_phase(amps: np.ndarray) -> np.ndarray:
    # each Bob branch: lowest occupied Alice amplitude made real positive
    out = amps.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-300)
        if nz.size:
            c = col[nz[0]]
            out[:, j] = col * (abs(c) / c)
    return out


def prepare_channel_simulated(
    params: ChannelParams,
    r_ancilla: float,
    cutoff: int,
    ancilla: fock.FockState | None = None,
) -> tuple[HybridChannel, float]:
    """Heralded preparation in Fock space.

    A squeezed vacuum (mode 0) meets ancilla mode 1 on ``BS(B0)``; the
    ancilla is ``(|00> + r|11>)/sqrt(1 + r^2)`` on modes 1, 2 unless a
    custom two-mode ``ancilla`` is given.  Mode 1 is measured and one photon
    heralds the channel on modes (0, 2).  Each Bob branch is rephased so its
    lowest occupied Alice amplitude is real positive, which absorbs the
    relative minus sign produced by the splitter convention.

    Returns
    -------
    channel : HybridChannel
    herald_probability : float
    """
    if ancilla is None:
        if not r_ancilla > 0:
            raise DomainError("r_ancilla must be > 0")
        anc = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        anc[0, 0] = 1.0
        anc[1, 1] = r_ancilla
        ancilla = fock.FockState(anc / math.sqrt(1 + r_ancilla**2), cutoff)
    smsv = fock.smsv_state(params.squeeze.y_smsv, cutoff)
    state = fock.tensor(smsv, ancilla)
    state = fock.apply_beam_splitter(state, fock.BeamSplitterSpec.from_B(params.B0, 0, 1))
    cond, prob = fock.project_pnr(state, 1, 1)
    if prob <= 0.0:
        raise DomainError("channel herald has zero probability for these parameters")
    amps = _fix_branch_phase(np.asarray(cond.amplitudes))
    return HybridChannel(params, fock.FockState(amps, cutoff, cond.leaked)), prob
