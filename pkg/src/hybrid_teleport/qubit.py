"""Single-rail optical qubit ``a0|0> + a1|1>``."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SingleRailQubit:
    """Superposition of vacuum and one photon in a single optical mode."""

    a0: complex
    a1: complex

    def __post_init__(self):
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "a1", complex(self.a1))
        n = abs(self.a0) ** 2 + abs(self.a1) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"qubit not normalized: |a0|^2 + |a1|^2 = {n!r}")

    @classmethod
    def from_unnormalized(cls, a0, a1) -> "SingleRailQubit":
        n = np.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if n == 0:
            raise ValueError("zero vector is not a qubit")
        return cls(a0 / n, a1 / n)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "SingleRailQubit":
        """``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
        return cls(np.cos(theta / 2), cmath.exp(1j * phi) * np.sin(theta / 2))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SingleRailQubit":
        """Haar-random qubit."""
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return cls.from_unnormalized(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a0, self.a1], dtype=complex)

    @property
    def azimuth(self) -> float:
        """Phase of ``a1`` relative to ``a0`` (0 when either amplitude vanishes)."""
        if self.a0 == 0 or self.a1 == 0:
            return 0.0
        return cmath.phase(self.a1 / self.a0)

    def aligned_to(self, reference: "SingleRailQubit") -> "SingleRailQubit":
        """Copy with the global phase chosen to make ``<reference|self>`` real
        and non-negative (unchanged when the overlap vanishes)."""
        ov = np.vdot(reference.vector, self.vector)
        if ov == 0:
            return self
        ph = abs(ov) / ov
        return SingleRailQubit(self.a0 * ph, self.a1 * ph)
