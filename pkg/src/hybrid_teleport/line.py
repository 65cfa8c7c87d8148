"""The perfect-teleportation line ``B01(S_dB, B0) = 1``.

Along this line a balanced teleportation splitter removes the distortion
of both single-photon outcomes 01 and 10.

``Z'(y0)/y0 - 4 G(y0, B0)`` factors as ``16 y0^2 (1 - 4 y0^2)^(-3/2) f``
with

    f(B0) = 1 + 2 B0 - 2 B0^2 - 12 B0^2 y0^2 / (1 - 4 y0^2),   y0 = y_smsv / (1 + B0)

so ``B01 = 1`` exactly where ``f`` vanishes.  Root-finding on ``f`` stays
well conditioned as the squeezing goes to zero, where ``B01 - 1`` itself
underflows; the root tends to ``(1 + sqrt(3)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .analytic import SqueezeParams, distortion_factor, solve_unit_distortion_B
from .errors import InfeasibleError

__all__ = ["LinePoint", "line_residual", "solve_b1_point", "solve_b1_line", "fig4_curve", "BRACKET"]

BRACKET = (1e-4, 1e4)
_SCAN = 81


@dataclass(frozen=True)
class LinePoint:
    S_dB: float
    B0: float
    y0: float
    B01: float
    B10: float
    b01: float
    b10: float


def line_residual(y_smsv: float, B0: float) -> float:
    """``f(B0)``; same sign as ``B01 - 1``."""
    y0 = y_smsv / (1 + B0)
    return 1 + 2 * B0 - 2 * B0 * B0 - 12 * B0 * B0 * y0 * y0 / (1 - 4 * y0 * y0)


def solve_b1_point(S_dB: float, bracket: tuple[float, float] = BRACKET) -> LinePoint:
    """Solve ``B01(S_dB, B0) = 1`` for ``B0``.

    The bracket is scanned on a logarithmic grid and the first sign change
    is refined with Brent's method.
    """
    ysm = SqueezeParams.from_db(S_dB).y_smsv
    grid = np.geomspace(bracket[0], bracket[1], _SCAN)
    vals = [line_residual(ysm, b) for b in grid]
    for i in range(len(grid) - 1):
        if vals[i] == 0:
            root = float(grid[i])
            break
        if vals[i] * vals[i + 1] < 0:
            root = brentq(
                lambda lb: line_residual(ysm, math.exp(lb)),
                math.log(grid[i]),
                math.log(grid[i + 1]),
                xtol=1e-15,
                rtol=4 * np.finfo(float).eps,
            )
            root = math.exp(root)
            break
    else:
        raise InfeasibleError(f"no B0 in {bracket} gives B01 = 1 at S_dB={S_dB}")
    y0 = ysm / (1 + root)
    B01 = solve_unit_distortion_B(0, 1, y0, root)
    B10 = solve_unit_distortion_B(1, 0, y0, root)
    return LinePoint(
        S_dB=float(S_dB),
        B0=root,
        y0=y0,
        B01=B01,
        B10=B10,
        b01=distortion_factor(0, 1, y0, root, 1.0),
        b10=distortion_factor(1, 0, y0, root, 1.0),
    )


def solve_b1_line(S_values, bracket: tuple[float, float] = BRACKET) -> list[LinePoint | None]:
    """Line points for each ``S_dB``; ``None`` marks a gap with no root."""
    out: list[LinePoint | None] = []
    for S in S_values:
        try:
            out.append(solve_b1_point(float(S), bracket))
        except InfeasibleError:
            out.append(None)
    return out


def fig4_curve(S_values) -> list[tuple[float, float, float]]:
    """``(S_dB, b20(B=1), |b02(B=1)|)`` along the line."""
    rows = []
    for S in S_values:
        p = solve_b1_point(float(S))
        b20 = distortion_factor(2, 0, p.y0, p.B0, 1.0)
        b02 = distortion_factor(0, 2, p.y0, p.B0, 1.0)
        rows.append((p.S_dB, abs(b20), abs(b02)))
    return rows
