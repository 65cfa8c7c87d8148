"""Closed-form amplitudes, normalization factors, distortion factors and
outcome probabilities of the hybrid-channel teleportation protocol.

Everything is expressed through ``Z(y) = 1/sqrt(1 - 4 y**2)`` and its
derivatives ``Z^(k)``.  Conventions used throughout:

* ``y_smsv = tanh(s)/2`` is the squeezing parameter of the source SMSV state;
* ``y0 = y_smsv / (1 + B0)`` after the channel-preparation beam splitter;
* ``y = y0 / (1 + B)`` after the teleportation beam splitter;
* ``k1`` counts photons in the output port that continues the CV mode,
  ``k2`` counts photons in the port that continues the qubit mode.

Distortion factors are returned signed.  Where the plain formula for
``Z^(1)(y0) / y0`` would be ``0/0`` at ``y0 = 0`` the helper ``_g0`` supplies
the limit 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from .errors import DomainError, InfeasibleError, SingularityError
from .qubit import SingleRailQubit

__all__ = [
    "SqueezeParams",
    "ReducedParams",
    "CvStateSpec",
    "z_derivative",
    "z_derivatives",
    "theta_expansion",
    "theta_apply",
    "cv_coefficients",
    "cv_amplitude",
    "cv_norm_factor",
    "herald_amplitude",
    "herald_probability",
    "g11",
    "distortion_factor",
    "branch_weights",
    "stripped_probability",
    "outcome_probability",
    "failure_probability",
    "p11_balanced",
    "solve_unit_distortion_B",
    "perfect_outcome_probability",
    "POLE_TOL",
]

POLE_TOL = 1e-9
K_MAX = 40
_DB_PER_NEPER = 20.0 * math.log10(math.e)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class SqueezeParams:
    """Equivalent descriptions of one SMSV source."""

    s: float
    S_dB: float = field(init=False)
    y_smsv: float = field(init=False)
    mean_photons: float = field(init=False)

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise DomainError(f"squeezing amplitude s={self.s} must be finite and >= 0")
        object.__setattr__(self, "S_dB", _DB_PER_NEPER * self.s)
        object.__setattr__(self, "y_smsv", math.tanh(self.s) / 2)
        object.__setattr__(self, "mean_photons", math.sinh(self.s) ** 2)
        if not self.y_smsv < 0.5:
            raise DomainError("squeezing too large: y_smsv reached 0.5 in floating point")

    @classmethod
    def from_db(cls, S_dB: float) -> "SqueezeParams":
        if S_dB < 0:
            raise DomainError(f"S_dB={S_dB} must be >= 0")
        return cls(S_dB / _DB_PER_NEPER)

    @classmethod
    def from_y(cls, y_smsv: float) -> "SqueezeParams":
        if not 0 <= y_smsv < 0.5:
            raise DomainError(f"y_smsv={y_smsv} must lie in [0, 0.5)")
        return cls(math.atanh(2 * y_smsv))


@dataclass(frozen=True)
class ReducedParams:
    """Squeezing parameter reduced by the preparation (``B0``) and
    teleportation (``B``) beam splitters."""

    y_smsv: float
    B0: float
    B: float = 1.0

    def __post_init__(self):
        if not 0 <= self.y_smsv < 0.5:
            raise DomainError(f"y_smsv={self.y_smsv} must lie in [0, 0.5)")
        if self.B0 < 0 or self.B < 0:
            raise DomainError("BS parameters must be >= 0")

    @property
    def y0(self) -> float:
        return self.y_smsv / (1 + self.B0)

    @property
    def y(self) -> float:
        return self.y0 / (1 + self.B)

    # names used for the one- and two-beam-splitter state families
    y1 = y0
    y2 = y


# ---------------------------------------------------------------------------
# Z(y) and its derivatives


def _check_y(y: float):
    if not 0 <= y < 0.5:
        raise DomainError(f"y={y} outside [0, 0.5) (pole of Z at 0.5)")


def z_derivatives(y: float, kmax: int) -> np.ndarray:
    """``[Z(y), Z'(y), ..., Z^(kmax)(y)]``.

    Uses the recurrence obtained by differentiating ``(1 - 4y^2) Z' = 4 y Z``
    k times::

        (1 - 4y^2) Z^(k+1) = (4 + 8k) y Z^(k) + 4 k^2 Z^(k-1)
    """
    _check_y(y)
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    if kmax > K_MAX + 4:
        raise DomainError(f"derivative order {kmax} too large for double precision")
    q = 1.0 - 4.0 * y * y
    z = np.empty(kmax + 1)
    z[0] = 1.0 / math.sqrt(q)
    for k in range(kmax):
        prev = z[k - 1] if k else 0.0
        z[k + 1] = ((4 + 8 * k) * y * z[k] + 4 * k * k * prev) / q
    return z


def z_derivative(y: float, k: int) -> float:
    """k-th derivative of ``Z(y) = 1/sqrt(1 - 4 y^2)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > K_MAX:
        raise DomainError(f"k={k} exceeds supported order {K_MAX}")
    return float(z_derivatives(y, k)[k])


@lru_cache(maxsize=None)
def theta_expansion(j: int, p: int, m: int) -> tuple:
    """Expand ``(y d/dy)^j [y^p Z^(m)]`` as ``((coef, power, order), ...)``.

    Uses ``(y d/dy)(y^p Z^(m)) = p y^p Z^(m) + y^(p+1) Z^(m+1)``.
    """
    terms = {(p, m): 1}
    for _ in range(j):
        nxt: dict = {}
        for (pp, mm), c in terms.items():
            if pp:
                nxt[(pp, mm)] = nxt.get((pp, mm), 0) + pp * c
            nxt[(pp + 1, mm + 1)] = nxt.get((pp + 1, mm + 1), 0) + c
        terms = nxt
    return tuple((c, pp, mm) for (pp, mm), c in sorted(terms.items()))


def theta_apply(y: float, j: int, p: int, m: int) -> float:
    """Numerical value of ``(y d/dy)^j [y^p Z^(m)]``."""
    terms = theta_expansion(j, p, m)
    z = z_derivatives(y, max(mm for _, _, mm in terms))
    return float(sum(c * y**pp * z[mm] for c, pp, mm in terms))


def _g0(y0: float) -> float:
    # Z^(1)(y0) / y0 = 4 Z(y0)^3, finite at y0 = 0
    _check_y(y0)
    return 4.0 / (1.0 - 4.0 * y0 * y0) ** 1.5


def g11(y0: float, B0: float) -> float:
    """Squared norm of the even channel branch:
    ``Z - 2 B0 y0 Z' + B0^2 (y0 d/dy0)(y0 Z')``."""
    z = z_derivatives(y0, 2)
    return float(z[0] - 2 * B0 * y0 * z[1] + B0**2 * (y0 * z[1] + y0 * y0 * z[2]))


# ---------------------------------------------------------------------------
# measurement-induced CV states of definite parity

Family = Literal[
    "sub_only",
    "add1",
    "base_1_odd",
    "base_1_even",
    "case00",
    "case01",
    "case10",
    "case11",
]
_FAMILIES = ("sub_only", "add1", "base_1_odd", "base_1_even", "case00", "case01", "case10", "case11")


@dataclass(frozen=True)
class CvStateSpec:
    """One member of the CV state catalogue.

    ``k`` is the number of photons subtracted at the last beam splitter.  For
    the two-beam-splitter families (``case00`` .. ``case11``) exactly one photon
    was subtracted at the first splitter; the two digits of the family name
    give the photons fed into the ancilla ports of the first and second
    splitter.  ``y`` is the squeezing parameter after all splitters.
    ``B`` is the last splitter's parameter, ``B0`` the first's (for
    ``base_1_even`` it is the only one).
    """

    family: Family
    k: int
    y: float
    B: float = 0.0
    B0: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.k < 0:
            raise DomainError("subtraction count must be >= 0")
        if self.family.startswith("base_1") and self.k != 1:
            raise DomainError("base_1 families subtract exactly one photon")
        _check_y(self.y)
        if self.B < 0 or self.B0 < 0:
            raise DomainError("BS parameters must be >= 0")

    @property
    def parity(self) -> int:
        """0 for even photon-number support, 1 for odd."""
        added = {"sub_only": 0, "add1": 1, "base_1_odd": 0, "base_1_even": 1,
                 "case00": 0, "case01": 1, "case10": 1, "case11": 2}[self.family]
        removed = self.k + (1 if self.family.startswith("case") else 0)
        return (added - removed) % 2


# stand-in for y = 0: far below double precision relative to O(1) terms,
# while y^3 products still stay clear of underflow
_Y_FLOOR = 1e-100


def _log_base(y: float, n: np.ndarray, par: int, shift: int) -> np.ndarray:
    # log of y^n (2(n+shift))! / ((n+shift)! sqrt((2n+par)!))
    with np.errstate(divide="ignore"):
        ly = np.log(y) if y > 0 else -np.inf
    lp = n * ly if y > 0 else np.where(n == 0, 0.0, -np.inf)
    return lp + gammaln(2 * (n + shift) + 1) - gammaln(n + shift + 1) - 0.5 * gammaln(2 * n + par + 1)


def _series(spec: CvStateSpec, n: np.ndarray) -> np.ndarray:
    """Unnormalized coefficient on ``|2n + parity>`` (squared sum = norm factor)."""
    fam, k, B, B0 = spec.family, spec.k, spec.B, spec.B0
    y = spec.y or _Y_FLOOR
    n = np.asarray(n, dtype=float)
    sy = math.sqrt(y)
    odd_x = 2 * n + 1
    even_x = 2 * n

    if fam == "base_1_odd":
        fam, k = "sub_only", 1
    if fam == "base_1_even":
        fam, k, B = "add1", 1, B0
    if fam == "case00":
        fam, k = "sub_only", k + 1

    if fam == "sub_only":
        if k % 2 == 0:
            return np.exp(_log_base(y, n, 0, k // 2))
        return sy * np.exp(_log_base(y, n, 1, (k + 1) // 2))

    if fam == "add1":
        if k == 0:
            return np.exp(_log_base(y, n, 1, 0)) * odd_x
        if k % 2 == 0:
            return sy * np.exp(_log_base(y, n, 1, k // 2)) * (1 - odd_x * B / k)
        return np.exp(_log_base(y, n, 0, k // 2)) * (1 - even_x * B / k)

    if fam == "case01":
        if k == 0:
            return np.exp(_log_base(y, n, 0, 0)) * even_x
        if k % 2 == 0:
            return np.exp(_log_base(y, n, 0, k // 2)) * (1 - even_x * B / k)
        return sy * np.exp(_log_base(y, n, 1, (k + 1) // 2)) * (1 - odd_x * B / k)

    if fam == "case10":
        if k % 2 == 0:
            return np.exp(_log_base(y, n, 0, k // 2)) * (1 - k * B0 - even_x * B0)
        return sy * np.exp(_log_base(y, n, 1, (k + 1) // 2)) * (1 - k * B0 - odd_x * B0)

    # case11
    if k == 0:
        return sy * np.exp(_log_base(y, n, 1, 0)) * odd_x * (1 + B0 - B0 * odd_x)
    a0 = 1 - (k - 1) * B0
    if k % 2 == 0:
        x = odd_x
        return sy * np.exp(_log_base(y, n, 1, k // 2)) * (a0 - B0 * x) * (1 - B * x / k)
    x = even_x
    return np.exp(_log_base(y, n, 0, k // 2)) * (a0 - B0 * x) * (1 - B * x / k)


def cv_norm_factor(spec: CvStateSpec) -> float:
    """Normalization factor (``Z^(k)`` or ``G``) of a catalogue state, in closed form.

    At ``y = 0`` the factor is evaluated at a tiny positive ``y`` so that the
    odd families, whose coefficients all carry ``sqrt(y)``, keep their limit.
    """
    fam, k, B, B0 = spec.family, spec.k, spec.B, spec.B0
    y = spec.y or _Y_FLOOR

    def Z(m):
        return z_derivative(y, m)

    def th(j, p, m):
        return theta_apply(y, j, p, m)

    if fam == "sub_only":
        val = Z(k)
    elif fam == "base_1_odd":
        val = Z(1)
    elif fam == "case00":
        val = Z(k + 1)
    elif fam in ("add1", "base_1_even"):
        if fam == "base_1_even":
            k, B = 1, B0
        if k == 0:
            val = Z(0) ** 3
        else:
            val = Z(k - 1) - 2 * B / k * y * Z(k) + (B / k) ** 2 * th(1, 1, k)
    elif fam == "case01":
        if k == 0:
            val = th(1, 1, 1)
        else:
            K = 1 + k
            val = Z(K - 1) - 2 * B / k * y * Z(K) + (B / k) ** 2 * th(1, 1, K)
    elif fam == "case10":
        A0 = (1 - k * B0) ** 2
        A1 = -2 * (1 - k * B0) * B0
        A2 = B0**2
        val = A0 * Z(k) + A1 * y * Z(k + 1) + A2 * th(1, 1, k + 1)
    else:  # case11
        if k == 0:
            c = 1 + B0
            val = c**2 * th(1, 1, 0) - 2 * c * B0 * th(2, 1, 0) + B0**2 * th(3, 1, 0)
        else:
            a0 = 1 - (k - 1) * B0
            a1 = -B0 - a0 * B / k
            a2 = B0 * B / k
            A = (a0 * a0, 2 * a0 * a1, a1 * a1 + 2 * a0 * a2, 2 * a1 * a2, a2 * a2)
            val = A[0] * Z(k - 1) + sum(A[l] * th(l - 1, 1, k) for l in range(1, 5))
    if not val > 0:
        raise DomainError(f"non-positive normalization factor {val!r} for {spec}")
    return float(val)


def cv_coefficients(spec: CvStateSpec, cutoff: int) -> np.ndarray:
    """Normalized real amplitudes ``<n|Psi>`` for ``n = 0 .. cutoff``."""
    out = np.zeros(cutoff + 1)
    par = spec.parity
    n = np.arange((cutoff - par) // 2 + 1) if cutoff >= par else np.arange(0)
    out[2 * n + par] = _series(spec, n)
    return out / math.sqrt(cv_norm_factor(spec))


def cv_amplitude(spec: CvStateSpec, n: int) -> float:
    """Single normalized Fock amplitude ``<n|Psi>``; zero off the parity support."""
    if n < 0:
        raise ValueError("photon number must be >= 0")
    if n % 2 != spec.parity:
        return 0.0
    c = _series(spec, np.array([(n - spec.parity) // 2]))[0]
    return float(c / math.sqrt(cv_norm_factor(spec)))


# ---------------------------------------------------------------------------
# heralding


def herald_amplitude(added_photons: int, k: int, y1: float, B: float) -> float:
    """Amplitude ``c_k`` multiplying ``sqrt(norm) |Psi_k> |k>`` after an SMSV
    meets vacuum (``added_photons=0``) or a single photon (``1``) on a
    splitter with parameter ``B``; ``y1`` is the reduced squeezing."""
    _check_y(y1)
    if B < 0:
        raise DomainError("B must be >= 0")
    if k < 0:
        raise ValueError("k must be >= 0")
    lf = 0.5 * math.lgamma(k + 1)
    if added_photons == 0:
        mag = (y1 * B) ** (k / 2) / math.exp(lf)
        return (-1) ** k * mag
    if added_photons == 1:
        if k == 0:
            return math.sqrt(B / (1 + B))
        mag = (y1 * B) ** ((k - 1) / 2) * k / math.exp(lf)
        return (-1) ** (k + 1) * mag / math.sqrt(1 + B)
    raise DomainError("added_photons must be 0 or 1")


def herald_probability(added_photons: int, k: int, y_smsv: float, B: float) -> float:
    """Probability of ``k`` photons in the measured port, SMSV(y_smsv) in."""
    y1 = y_smsv / (1 + B)
    c = herald_amplitude(added_photons, k, y1, B)
    fam = "sub_only" if added_photons == 0 else "add1"
    norm = cv_norm_factor(CvStateSpec(fam, k, y1, B=B))
    return c * c * norm * math.sqrt(1 - 4 * y_smsv * y_smsv)


# ---------------------------------------------------------------------------
# teleportation outcomes


def _check_outcome(k1: int, k2: int):
    if k1 < 0 or k2 < 0:
        raise ValueError("photon counts must be >= 0")


def _check_protocol(y0: float, B0: float, B: float):
    _check_y(y0)
    if B0 < 0:
        raise DomainError("B0 must be >= 0")
    if not (B > 0 and math.isfinite(B)):
        raise DomainError(f"teleportation BS parameter B={B} must be finite and > 0")


def _is_pole(k1: int, k2: int, B: float) -> bool:
    return k2 != 0 and abs(1 - k1 * B / k2) < POLE_TOL


def distortion_factor(k1: int, k2: int, y0: float, B0: float, B: float) -> float:
    """Signed amplitude-distortion factor ``b_{k1 k2}``.

    Odd ``k1 + k2 = N``::

        b = sqrt(Z'(y0)/G) (1 - (N-1) B0) (k1 B - k2) / (2 N sqrt(y0 B))

    Even ``N``::

        b = sqrt(y0 B) sqrt(Z'(y0)/G) (1 - N B0) / (k1 B - k2)

    with ``G`` the even-branch normalization ``g11(y0, B0)``.
    """
    _check_outcome(k1, k2)
    _check_protocol(y0, B0, B)
    N = k1 + k2
    if N == 0:
        raise DomainError("outcome (0, 0) is the failure event; it has no distortion factor")
    ratio = math.sqrt(_g0(y0) / g11(y0, B0))
    if N % 2:
        return ratio * (1 - (N - 1) * B0) * (k1 * B - k2) / (2 * N * math.sqrt(B))
    if _is_pole(k1, k2, B):
        raise SingularityError(f"b_{k1}{k2} is singular at B = k2/k1 = {k2 / k1}")
    return y0 * math.sqrt(B) * ratio * (1 - N * B0) / (k1 * B - k2)


def _log_comb(N: int) -> float:
    # log of (N!/(N/2)!)^2 for even N, ((N+1)!/((N+1)/2)!)^2 for odd N
    M = N if N % 2 == 0 else N + 1
    return 2 * (math.lgamma(M + 1) - math.lgamma(M // 2 + 1))


def branch_weights(k1: int, k2: int, y0: float, B0: float, B: float) -> tuple[float, float]:
    """``(w_lead, w_other)`` with ``P = w_lead |a_lead|^2 + w_other |a_other|^2``.

    The lead amplitude is ``a0`` for odd ``k1 + k2`` and ``a1`` for even; the
    other one carries the distortion factor, so ``w_other = b^2 w_lead`` away
    from the pole.  Both weights stay finite at ``k1 B = k2``.
    """
    _check_outcome(k1, k2)
    _check_protocol(y0, B0, B)
    N = k1 + k2
    g0 = _g0(y0)
    G = g11(y0, B0)
    if N == 0:
        return 0.0, 1.0 / (2 * G)
    y = y0 / (1 + B)
    lf = math.lgamma(k1 + 1) + math.lgamma(k2 + 1)
    if N % 2:
        # y^N B^k2 / Z'(y0) = y^(N-1) B^k2 / ((1+B) g0)
        w = math.exp(_log_comb(N) - lf) * y ** (N - 1) * B**k2 / (2 * (1 + B) * g0)
        b = distortion_factor(k1, k2, y0, B0, B)
        return w, w * b * b
    scale = math.exp(_log_comb(N) - lf) * y ** (N - 2) * B ** (k2 - 1) / (2 * (1 + B) ** 2 * g0)
    w_lead = scale * (k1 * B - k2) ** 2
    w_other = scale * y0 * y0 * B * (1 - N * B0) ** 2 * g0 / G
    return w_lead, w_other


def stripped_probability(k1: int, k2: int, y0: float, B0: float, B: float) -> float:
    """Outcome probability with the qubit-dependent normalization removed
    (the factor multiplying ``N_{k1 k2}``)."""
    if k1 == 0 and k2 == 0:
        raise DomainError("the failure outcome has no qubit-independent part")
    return branch_weights(k1, k2, y0, B0, B)[0]


def outcome_probability(k1: int, k2: int, qubit: SingleRailQubit, y0: float, B0: float, B: float) -> float:
    """Probability of detecting ``(k1, k2)``; ``(0, 0)`` gives the failure probability."""
    w_lead, w_other = branch_weights(k1, k2, y0, B0, B)
    p0, p1 = abs(qubit.a0) ** 2, abs(qubit.a1) ** 2
    if (k1 + k2) % 2:
        return w_lead * p0 + w_other * p1
    return w_lead * p1 + w_other * p0


def failure_probability(qubit: SingleRailQubit, y0: float, B0: float) -> float:
    """Probability of the (0, 0) event, after which Bob holds ``|1>``."""
    return abs(qubit.a0) ** 2 / (2 * g11(y0, B0))


def p11_balanced(qubit: SingleRailQubit, y0: float, B0: float) -> float:
    """Probability of (1, 1) on a balanced splitter, where destructive
    interference leaves Bob with ``|1>``."""
    return abs(qubit.a0) ** 2 * y0**2 * (1 - 2 * B0) ** 2 / (2 * g11(y0, B0))


# ---------------------------------------------------------------------------
# unit-distortion beam splitters

Outcome = tuple[int, int]
_UNIT_OUTCOMES = {(0, 1), (1, 0), (2, 0), (0, 2), (1, 1)}


def solve_unit_distortion_B(
    k1: int,
    k2: int,
    y0: float,
    B0: float,
    branch: Literal["lower", "upper"] = "lower",
    B_max: float = 1e8,
) -> float:
    """BS parameter ``B`` for which ``|b_{k1 k2}| = 1``.

    Closed forms for 01, 10, 20 and 02; bracketed Brent root finding for 11,
    which has one root below and one above the pole at ``B = 1`` (their
    product is 1).  ``branch`` picks which.
    """
    if (k1, k2) not in _UNIT_OUTCOMES:
        raise DomainError(f"no unit-distortion solver for outcome {(k1, k2)}")
    _check_y(y0)
    g = _g0(y0) / g11(y0, B0)
    if (k1, k2) == (0, 1):
        return g / 4
    if (k1, k2) == (1, 0):
        return 4 / g
    c = y0 * y0 * (1 - 2 * B0) ** 2 * g
    if c == 0:
        raise InfeasibleError(f"b_{k1}{k2} vanishes identically at y0={y0}, B0={B0}")
    if (k1, k2) == (2, 0):
        return c / 4
    if (k1, k2) == (0, 2):
        return 4 / c

    def f(logB):
        return abs(distortion_factor(1, 1, y0, B0, math.exp(logB))) - 1.0

    eps = 1e-7
    if branch == "lower":
        lo, hi = -math.log(B_max), math.log1p(-eps)
    elif branch == "upper":
        lo, hi = math.log1p(eps), math.log(B_max)
    else:
        raise ValueError("branch must be 'lower' or 'upper'")
    if f(lo) * f(hi) > 0:
        raise InfeasibleError(f"|b_11| = 1 has no {branch} root in (1/B_max, B_max)")
    return math.exp(brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


def perfect_outcome_probability(k1: int, k2: int, y0: float, B: float) -> float:
    """Outcome probability when ``|b_{k1 k2}| = 1`` at splitter ``B``
    (normalization ``N = 1``, independent of the qubit)."""
    _check_y(y0)
    if B <= 0:
        raise DomainError("B must be > 0")
    q = (1 - 4 * y0 * y0) ** 1.5
    if (k1, k2) == (0, 1):
        return B * q / (2 * (1 + B))
    if (k1, k2) == (1, 0):
        return q / (2 * (1 + B))
    if (k1, k2) in ((2, 0), (0, 2)):
        return B * q / (1 + B) ** 2
    if (k1, k2) == (1, 1):
        return (1 - B) ** 2 * q / (2 * (1 + B) ** 2)
    raise DomainError(f"no closed form for outcome {(k1, k2)}")
