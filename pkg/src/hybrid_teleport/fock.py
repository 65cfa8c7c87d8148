"""Dense multimode Fock-space engine.

States are stored as complex tensors of shape ``(cutoff + 1,) * num_modes``
indexed by photon-number tuples.  Everything here is exact up to truncation:
two-mode beam splitters act blockwise on fixed total photon number, and any
amplitude pushed above the cutoff is dropped and booked in ``leaked``.

Beam-splitter convention (creation operators):

    a_a^dag -> t a_a^dag - r a_b^dag
    a_b^dag -> r a_a^dag + t a_b^dag
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

__all__ = [
    "FockState",
    "BeamSplitterSpec",
    "fock_ket",
    "from_vector",
    "tensor",
    "smsv_state",
    "apply_beam_splitter",
    "beam_splitter_block",
    "project_pnr",
    "overlap",
    "photon_distribution",
    "total_photon_distribution",
]


@dataclass(frozen=True, eq=False)
class FockState:
    """Immutable pure state on a truncated multimode Fock basis.

    Attributes
    ----------
    amplitudes : ndarray
        Complex tensor, one axis per mode, each of length ``cutoff + 1``.
    cutoff : int
        Maximum photon number per mode (inclusive).
    leaked : float
        Squared-norm mass dropped by truncation in the operations that
        produced this state.
    """

    amplitudes: np.ndarray
    cutoff: int
    leaked: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        if any(d != self.cutoff + 1 for d in amps.shape):
            raise ValueError(
                f"amplitude shape {amps.shape} inconsistent with cutoff {self.cutoff}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_modes(self) -> int:
        return self.amplitudes.ndim

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def is_empty(self) -> bool:
        """True for the zero vector (e.g. an impossible measurement branch)."""
        return not np.any(self.amplitudes)

    def normalize(self) -> "FockState":
        n = self.norm_sq()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize the zero state")
        return FockState(self.amplitudes / np.sqrt(n), self.cutoff, self.leaked)

    def truncation_tail(self) -> float:
        """Squared amplitude sitting on the boundary ``n_i == cutoff`` of any mode."""
        if self.num_modes == 0:
            return 0.0
        mask = np.zeros(self.amplitudes.shape, dtype=bool)
        for ax in range(self.num_modes):
            idx = [slice(None)] * self.num_modes
            idx[ax] = self.cutoff
            mask[tuple(idx)] = True
        return float(np.sum(np.abs(self.amplitudes[mask]) ** 2))

    def amplitude(self, *occupations: int) -> complex:
        return complex(self.amplitudes[tuple(occupations)])

    def __repr__(self):
        return (
            f"FockState(num_modes={self.num_modes}, cutoff={self.cutoff}, "
            f"norm_sq={self.norm_sq():.6g}, leaked={self.leaked:.3g})"
        )


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Real two-mode beam splitter with transmittance ``t`` and reflectance ``r``.

    ``r`` may be negative; ``BeamSplitterSpec(t, -r)`` is the inverse of
    ``BeamSplitterSpec(t, r)``.
    """

    t: float
    r: float
    mode_a: int = 0
    mode_b: int = 1

    def __post_init__(self):
        if not 0.0 < self.t <= 1.0:
            raise ValueError(f"transmittance t={self.t} must lie in (0, 1]")
        if abs(self.t**2 + self.r**2 - 1.0) > 1e-12:
            raise ValueError("t**2 + r**2 must equal 1")
        if self.mode_a == self.mode_b:
            raise ValueError("beam splitter needs two distinct modes")

    @classmethod
    def from_B(cls, B: float, mode_a: int = 0, mode_b: int = 1) -> "BeamSplitterSpec":
        """Build from the BS parameter ``B = r**2 / t**2`` (``B = 1`` is balanced)."""
        if B < 0 or not np.isfinite(B):
            raise ValueError(f"BS parameter B={B} must be finite and >= 0")
        t = 1.0 / np.sqrt(1.0 + B)
        r = np.sqrt(B / (1.0 + B))
        return cls(float(t), float(r), mode_a, mode_b)

    @property
    def B(self) -> float:
        return self.r**2 / self.t**2

    def inverse(self) -> "BeamSplitterSpec":
        return BeamSplitterSpec(self.t, -self.r, self.mode_a, self.mode_b)


def fock_ket(occupations: Sequence[int], cutoff: int) -> FockState:
    """Number state ``|n_1, ..., n_m>``."""
    occupations = tuple(int(n) for n in occupations)
    if any(n < 0 or n > cutoff for n in occupations):
        raise ValueError(f"occupations {occupations} exceed cutoff {cutoff}")
    amps = np.zeros((cutoff + 1,) * len(occupations), dtype=complex)
    amps[occupations] = 1.0
    return FockState(amps, cutoff)


def from_vector(coeffs, cutoff: int) -> FockState:
    """Single-mode state from a coefficient list, zero-padded to the cutoff."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1:
        raise ValueError("expected a 1-d coefficient vector")
    if len(coeffs) > cutoff + 1:
        if np.any(coeffs[cutoff + 1 :]):
            raise ValueError("coefficients beyond the cutoff are non-zero")
        coeffs = coeffs[: cutoff + 1]
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[: len(coeffs)] = coeffs
    return FockState(amps, cutoff)


def tensor(*states: FockState) -> FockState:
    """Tensor product, modes ordered as given."""
    if not states:
        raise ValueError("need at least one state")
    cutoff = states[0].cutoff
    if any(s.cutoff != cutoff for s in states):
        raise ValueError("all factors must share the same cutoff")
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.multiply.outer(amps, s.amplitudes)
    return FockState(amps, cutoff, sum(s.leaked for s in states))


def smsv_state(y: float, cutoff: int) -> FockState:
    """Single-mode squeezed vacuum with reduced squeezing parameter ``y = tanh(s)/2``.

    Amplitudes are ``(1 - 4 y**2)**(1/4) * y**n * sqrt((2n)!) / n!`` on ``|2n>``.
    """
    if not 0.0 <= y < 0.5:
        raise ValueError(f"y={y} must lie in [0, 0.5)")
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    amps = np.zeros(cutoff + 1, dtype=complex)
    n = np.arange(cutoff // 2 + 1)
    pref = (1.0 - 4.0 * y * y) ** 0.25
    if y == 0.0:
        amps[0] = 1.0
    else:
        log_a = n * np.log(y) + 0.5 * gammaln(2 * n + 1) - gammaln(n + 1)
        amps[2 * n] = pref * np.exp(log_a)
    state = FockState(amps, cutoff)
    return FockState(amps, cutoff, max(0.0, 1.0 - state.norm_sq()))


@lru_cache(maxsize=256)
def _bs_block(theta: float, N: int) -> np.ndarray:
    # <m, N-m| exp(theta G) |n, N-n> with G = a1^dag a2 - a1 a2^dag.  G is
    # antisymmetric tridiagonal on the block; conjugating with diag(i^m) turns
    # i G into a real symmetric tridiagonal matrix, whose eigenvectors give an
    # orthogonal result to machine precision at any N.
    if N == 0:
        out = np.ones((1, 1))
    else:
        m = np.arange(N)
        off = np.sqrt((m + 1.0) * (N - m))
        lam, W = eigh_tridiagonal(np.zeros(N + 1), off)
        V = W * (1j ** np.arange(N + 1))[:, None]
        out = ((V * np.exp(-1j * theta * lam)) @ V.conj().T).real
    out.setflags(write=False)
    return out


def beam_splitter_block(t: float, r: float, total: int) -> np.ndarray:
    """Matrix ``<m, N-m| BS |n, N-n>`` on the ``N = total`` photon block."""
    return _bs_block(float(np.arctan2(r, t)), int(total))


def apply_beam_splitter(state: FockState, bs: BeamSplitterSpec) -> FockState:
    """Apply ``bs`` to modes ``(bs.mode_a, bs.mode_b)``; out-of-cutoff mass goes to ``leaked``."""
    m = state.num_modes
    if m < 2:
        raise ValueError("beam splitter needs a state with at least two modes")
    for mode in (bs.mode_a, bs.mode_b):
        if not 0 <= mode < m:
            raise IndexError(f"mode {mode} out of range for {m}-mode state")
    c = state.cutoff
    arr = np.moveaxis(state.amplitudes, (bs.mode_a, bs.mode_b), (0, 1))
    out = np.zeros_like(arr)
    theta = float(np.arctan2(bs.r, bs.t))
    for N in range(2 * c + 1):
        lo, hi = max(0, N - c), min(N, c)
        idx = np.arange(lo, hi + 1)
        block = _bs_block(theta, N)[lo : hi + 1, lo : hi + 1]
        src = arr[idx, N - idx]
        out[idx, N - idx] = np.tensordot(block, src, axes=(1, 0))
    out = np.moveaxis(out, (0, 1), (bs.mode_a, bs.mode_b))
    lost = max(0.0, state.norm_sq() - float(np.vdot(out, out).real))
    return FockState(out, c, state.leaked + lost)


def project_pnr(state: FockState, mode: int, k: int) -> tuple[FockState, float]:
    """Photon-number-resolving measurement of ``mode`` with outcome ``k``.

    Returns the renormalized conditional state of the remaining modes and the
    outcome probability.  A zero-probability outcome returns an empty
    (all-zero) state, see ``FockState.is_empty``.
    """
    if not 0 <= mode < state.num_modes:
        raise IndexError(f"mode {mode} out of range for {state.num_modes}-mode state")
    if not 0 <= k <= state.cutoff:
        raise ValueError(f"outcome k={k} outside [0, {state.cutoff}]")
    sl = np.take(state.amplitudes, k, axis=mode)
    prob = float(np.vdot(sl, sl).real)
    if prob > 0.0:
        sl = sl / np.sqrt(prob)
    return FockState(sl, state.cutoff, state.leaked), prob


def overlap(a: FockState, b: FockState) -> complex:
    """Inner product ``<a|b>``."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError(
            f"shape mismatch: {a.amplitudes.shape} vs {b.amplitudes.shape}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def photon_distribution(state: FockState, mode: int) -> np.ndarray:
    """Marginal photon-number probabilities of one mode."""
    p = np.abs(state.amplitudes) ** 2
    axes = tuple(ax for ax in range(state.num_modes) if ax != mode)
    return p.sum(axis=axes)


def total_photon_distribution(state: FockState) -> np.ndarray:
    """Probability of each total photon number ``0 .. num_modes * cutoff``."""
    p = np.abs(state.amplitudes) ** 2
    grids = np.indices(p.shape).sum(axis=0)
    return np.bincount(grids.ravel(), weights=p.ravel(), minlength=state.num_modes * state.cutoff + 1)
