"""Parameter-grid sweeps over ``(S_dB, B0)`` and their CSV form.

For every grid cell and requested outcome the sweep solves for the
teleportation splitter that removes the distortion, checks ``|b| = 1`` at
the solution and records the outcome probability there.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analytic import distortion_factor, perfect_outcome_probability, solve_unit_distortion_B
from .channel import make_params
from .errors import DomainError, InfeasibleError, SingularityError
from .line import LinePoint, fig4_curve, solve_b1_line, solve_b1_point

__all__ = [
    "SweepConfig",
    "advisory_figure_checks",
    "parse_outcomes",
    "sweep_rows",
    "sweep_surface",
    "write_sweep",
    "line_csv",
    "fig4_csv",
    "format_float",
    "solve_b1_line",
    "solve_b1_point",
    "fig4_curve",
    "LinePoint",
    "DEFAULT_OUTCOMES",
    "SELF_CHECK_TOL",
    "THREADS_ENV",
]

DEFAULT_OUTCOMES = ((0, 1), (1, 0), (2, 0), (0, 2))
SUPPORTED_OUTCOMES = ((0, 1), (1, 0), (2, 0), (0, 2), (1, 1))
SELF_CHECK_TOL = 1e-9
THREADS_ENV = "HYBRID_TELEPORT_THREADS"


def format_float(x: float) -> str:
    """Round-trip representation with 17 significant digits."""
    return format(float(x), ".17g")


def outcome_tag(o: tuple[int, int]) -> str:
    return f"{o[0]}{o[1]}"


def parse_outcomes(text: str) -> tuple[tuple[int, int], ...]:
    """``"01,10,20"`` -> ``((0, 1), (1, 0), (2, 0))``."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if len(tok) != 2 or not tok.isdigit():
            raise DomainError(f"bad outcome {tok!r}; use two digits such as 01")
        o = (int(tok[0]), int(tok[1]))
        if o not in SUPPORTED_OUTCOMES:
            raise DomainError(f"no unit-distortion solver for outcome {tok}")
        out.append(o)
    if not out:
        raise DomainError("empty outcome list")
    return tuple(out)


@dataclass(frozen=True)
class SweepConfig:
    """Grid and output settings for :func:`sweep_surface`.

    The default box is ``S_dB`` in [0.1, 10] and ``B0`` in [0.1, 10], each
    on 101 points.
    """

    S_min: float = 0.1
    S_max: float = 10.0
    S_steps: int = 101
    B0_min: float = 0.1
    B0_max: float = 10.0
    B0_steps: int = 101
    outcomes: tuple = DEFAULT_OUTCOMES
    cutoff: int = 40
    out: str | None = None
    threads: int | None = None
    b11_branch: str = "lower"
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.S_steps < 2 or self.B0_steps < 2:
            raise DomainError("grid needs at least 2 steps per axis")
        if not (0 <= self.S_min < self.S_max and 0 <= self.B0_min < self.B0_max):
            raise DomainError("ranges must be non-empty and non-negative")
        for o in self.outcomes:
            if tuple(o) not in SUPPORTED_OUTCOMES:
                raise DomainError(f"unsupported outcome {o}")
        need = 2 * max(sum(o) for o in self.outcomes) + 10
        if self.cutoff < need:
            raise DomainError(f"cutoff must be >= {need}")

    @property
    def S_grid(self) -> np.ndarray:
        return np.linspace(self.S_min, self.S_max, self.S_steps)

    @property
    def B0_grid(self) -> np.ndarray:
        return np.linspace(self.B0_min, self.B0_max, self.B0_steps)

    @property
    def self_check_tol(self) -> float:
        return float(self.tolerances.get("self_check", SELF_CHECK_TOL))


def _worker_count(requested: int | None) -> int:
    n = requested or os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError as exc:
            raise DomainError(f"{THREADS_ENV} must be an integer") from exc
    return max(1, n)


def _cell(args) -> list:
    S, B0, outcomes, branch, tol = args
    p = make_params(S, B0)
    y0 = p.y0
    row: list = [S, B0]
    for k1, k2 in outcomes:
        try:
            if (k1, k2) == (1, 1):
                B = solve_unit_distortion_B(1, 1, y0, B0, branch=branch)
            else:
                B = solve_unit_distortion_B(k1, k2, y0, B0)
            b = abs(distortion_factor(k1, k2, y0, B0, B))
            if not abs(b - 1) < tol:
                row += ["check_failed", "", "", ""]
                continue
            P = perfect_outcome_probability(k1, k2, y0, B)
            row += ["ok", B, b, P]
        except SingularityError:
            row += ["pole", "", "", ""]
        except InfeasibleError:
            row += ["infeasible", "", "", ""]
        except DomainError:
            row += ["domain", "", "", ""]
    return row


def header(outcomes) -> list[str]:
    cols = ["s_db", "b0"]
    for o in outcomes:
        t = outcome_tag(o)
        cols += [f"status_{t}", f"b_param_{t}", f"abs_b_{t}", f"prob_{t}"]
    return cols


def sweep_rows(config: SweepConfig, parallel: bool = True) -> list[list]:
    """Rows in row-major order (``S_dB`` outer, ``B0`` inner)."""
    tasks = [
        (float(S), float(B0), tuple(tuple(o) for o in config.outcomes), config.b11_branch, config.self_check_tol)
        for S in config.S_grid
        for B0 in config.B0_grid
    ]
    workers = _worker_count(config.threads) if parallel else 1
    if workers == 1:
        return [_cell(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_cell, tasks, chunksize=64))


def _to_csv(cols: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([format_float(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def sweep_surface(config: SweepConfig, parallel: bool = True) -> str:
    """Combined CSV text for all requested outcomes."""
    return _to_csv(header(config.outcomes), sweep_rows(config, parallel))


def write_sweep(config: SweepConfig, parallel: bool = True) -> dict[str, str]:
    """Write the combined CSV to ``config.out`` and one file per outcome next
    to it (``<stem>_<k1k2>.csv``).  Returns ``{name: csv text}``."""
    rows = sweep_rows(config, parallel)
    texts = {"combined": _to_csv(header(config.outcomes), rows)}
    for i, o in enumerate(config.outcomes):
        sub = [r[:2] + r[2 + 4 * i : 6 + 4 * i] for r in rows]
        texts[outcome_tag(o)] = _to_csv(header([o]), sub)
    if config.out:
        path = Path(config.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        for name, text in texts.items():
            target = path if name == "combined" else path.with_name(f"{path.stem}_{name}{path.suffix or '.csv'}")
            with open(target, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
    return texts


def line_csv(S_values) -> str:
    """CSV of the B=1 line; rows without a root carry status ``gap``."""
    cols = ["s_db", "status", "b0", "y0", "b01_param", "b10_param", "b01", "b10"]
    rows = []
    for S, p in zip(S_values, solve_b1_line(S_values)):
        if p is None:
            rows.append([float(S), "gap", "", "", "", "", "", ""])
        else:
            rows.append([p.S_dB, "ok", p.B0, p.y0, p.B01, p.B10, p.b01, p.b10])
    return _to_csv(cols, rows)


def fig4_csv(S_values) -> str:
    cols = ["s_db", "b20", "abs_b02"]
    return _to_csv(cols, [list(r) for r in fig4_curve(S_values)])


def advisory_figure_checks(config: SweepConfig | None = None) -> dict:
    """Summary numbers of the probability and splitter surfaces.

    Returns the maximum of ``P01`` at its unit-distortion splitter over the
    box, the range of ``B01`` over the box and the region where ``P20``
    exceeds 0.24.
    """
    config = config or SweepConfig(outcomes=((0, 1), (2, 0)))
    P01_max, B01_lo, B01_hi = 0.0, math.inf, -math.inf
    P20_max, P20_hot = 0.0, []
    for S in config.S_grid:
        for B0 in config.B0_grid:
            y0 = make_params(S, B0).y0
            B01 = solve_unit_distortion_B(0, 1, y0, B0)
            B01_lo, B01_hi = min(B01_lo, B01), max(B01_hi, B01)
            P01_max = max(P01_max, perfect_outcome_probability(0, 1, y0, B01))
            B20 = solve_unit_distortion_B(2, 0, y0, B0) if abs(1 - 2 * B0) > 0 else None
            if B20:
                P20 = perfect_outcome_probability(2, 0, y0, B20)
                P20_max = max(P20_max, P20)
                if P20 > 0.24:
                    P20_hot.append((float(S), float(B0)))
    return {
        "P01_max": float(P01_max),
        "B01_range": (float(B01_lo), float(B01_hi)),
        "P20_max": float(P20_max),
        "P20_above_0.24_min_S": min((s for s, _ in P20_hot), default=None),
        "P20_above_0.24_min_B0": min((b for _, b in P20_hot), default=None),
    }
