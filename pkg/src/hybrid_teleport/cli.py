"""Command-line front end: ``hybrid-teleport <subcommand> [options]``.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines whose
keys are the long option names (``S-db``, ``b0``, ...; dashes or
underscores).  Values given on the command line take precedence.

Exit status: 0 on success, 1 on a usage or parameter error, 2 when the
requested quantity does not exist numerically (no root, a pole, failed
verification).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analytic
from .channel import balanced_ancilla_weight, build_channel_analytic, make_params, prepare_channel_simulated
from .errors import DomainError, InfeasibleError, SingularityError, TruncationError
from .qubit import SingleRailQubit
from .recovery import optimize_recovery
from .sweep import SweepConfig, fig4_csv, format_float, line_csv, parse_outcomes, write_sweep
from .teleporter import (
    classify_and_correct,
    enumerate_outcomes_analytic,
    fidelity_to_input,
    teleport_outcome,
    teleport_outcome_analytic,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected k1,k2 but got {text!r}") from exc
    return a, b


def _b_param(text: str) -> float | str:
    if text.strip().lower() == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto' but got {text!r}") from exc


def _qubit(text: str) -> SingleRailQubit:
    try:
        a0, a1 = (complex(v.strip()) for v in text.split(","))
        return SingleRailQubit.from_unnormalized(a0, a1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a0,a1 but got {text!r}") from exc


def _out(text: str | None, payload: str):
    if text:
        Path(text).parent.mkdir(parents=True, exist_ok=True)
        with open(text, "w", newline="", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _kv(pairs: dict) -> str:
    return "".join(f"{k}: {format_float(v) if isinstance(v, float) else v}\n" for k, v in pairs.items())


# ---------------------------------------------------------------------------
# subcommands


def cmd_channel_info(a) -> int:
    p = make_params(a.S_db, a.b0)
    y0, B0 = p.y0, p.B0
    info = {
        "s": p.squeeze.s,
        "S_dB": p.S_dB,
        "y_smsv": p.squeeze.y_smsv,
        "mean_photons": p.squeeze.mean_photons,
        "y0": y0,
        "norm_odd": analytic.cv_norm_factor(p.odd_spec()),
        "norm_even": analytic.g11(y0, B0),
        "ancilla_r": balanced_ancilla_weight(p) if y0 > 0 and B0 > 0 else 0.0,
    }
    for o in ((0, 1), (1, 0), (2, 0), (0, 2)):
        try:
            info[f"B{o[0]}{o[1]}"] = analytic.solve_unit_distortion_B(*o, y0, B0)
        except InfeasibleError:
            info[f"B{o[0]}{o[1]}"] = "none"
    for br in ("lower", "upper"):
        try:
            info[f"B11_{br}"] = analytic.solve_unit_distortion_B(1, 1, y0, B0, branch=br)
        except InfeasibleError:
            info[f"B11_{br}"] = "none"
    if a.simulate:
        r = info["ancilla_r"]
        if not r > 0:
            raise DomainError("simulation needs S_dB > 0 and B0 > 0")
        sim, prob = prepare_channel_simulated(p, r, a.cutoff)
        ana = build_channel_analytic(p, a.cutoff, tail_tol=1.0)
        info["herald_probability"] = prob
        info["overlap_with_analytic"] = abs(np.vdot(ana.state.amplitudes, sim.state.amplitudes))
    sys.stdout.write(_kv(info))
    return EXIT_OK


def cmd_teleport(a) -> int:
    p = make_params(a.S_db, a.b0)
    k1, k2 = a.outcome
    q = a.qubit
    B = a.b
    if B == "auto":
        B = analytic.solve_unit_distortion_B(k1, k2, p.y0, p.B0)
    ana = teleport_outcome_analytic(q, p.y0, p.B0, B, k1, k2)
    info = {"outcome": f"{k1}{k2}", "B": B, "parity": ana.parity, "probability_analytic": ana.probability}
    if not a.analytic_only:
        ch = build_channel_analytic(p, a.cutoff, tail_tol=1.0)
        sim = teleport_outcome(ch, q, B, k1, k2)
        info["probability_fock"] = sim.probability
        res = sim
    else:
        res = ana
    info["distortion_b"] = "none" if res.distortion_b is None else res.distortion_b
    info["normalization_N"] = res.normalization_N
    corr = classify_and_correct(res)
    if corr.failure:
        info["status"] = "failure"
    elif corr.state is None:
        info["status"] = "undefined"
    else:
        info["status"] = "ok"
        info["correction"] = corr.label
        info["fidelity"] = fidelity_to_input(corr.state, q)
    sys.stdout.write(_kv(info))
    return EXIT_OK


def cmd_sweep(a) -> int:
    cfg = SweepConfig(
        S_min=a.s_min,
        S_max=a.s_max,
        S_steps=a.s_steps,
        B0_min=a.b0_min,
        B0_max=a.b0_max,
        B0_steps=a.b0_steps,
        outcomes=parse_outcomes(a.outcomes),
        cutoff=a.cutoff,
        out=a.out,
        threads=a.threads,
        b11_branch=a.b11_branch,
        tolerances={"self_check": a.self_check_tol},
    )
    texts = write_sweep(cfg)
    if not a.out:
        sys.stdout.write(texts["combined"])
    return EXIT_OK


def _s_values(a):
    if a.steps < 2:
        raise DomainError("steps must be >= 2")
    return np.linspace(a.s_min, a.s_max, a.steps)


def cmd_line(a) -> int:
    _out(a.out, line_csv(_s_values(a)))
    return EXIT_OK


def cmd_fig4(a) -> int:
    _out(a.out, fig4_csv(_s_values(a)))
    return EXIT_OK


def cmd_recover_opt(a) -> int:
    r = optimize_recovery(a.s_min, a.s_max, a.steps)
    sys.stdout.write(_kv({"S_dB": r.S_dB, "B0": r.B0, "P_pt": r.P_pt, "grid_step": r.grid_step}))
    return EXIT_OK


def cmd_verify(a) -> int:
    """Dual-path checks: closed forms against Fock simulation."""
    rng = np.random.default_rng(a.seed)
    worst_p = worst_s = 0.0
    norm_err = 0.0
    for _ in range(a.samples):
        S, B0, B = rng.uniform(0.1, 8), rng.uniform(0.05, 5), rng.uniform(0.25, 4)
        q = SingleRailQubit.random(rng)
        p = make_params(S, B0)
        ch = build_channel_analytic(p, a.cutoff, tail_tol=1.0)
        for N in range(5):
            for k1 in range(N + 1):
                sim = teleport_outcome(ch, q, B, k1, N - k1)
                ana = teleport_outcome_analytic(q, p.y0, B0, B, k1, N - k1)
                if sim.probability > 1e-300:
                    worst_p = max(worst_p, abs(sim.probability - ana.probability) / sim.probability)
                if sim.bob_state is not None and ana.bob_state is not None:
                    d = np.max(np.abs(sim.bob_state.aligned_to(ana.bob_state).vector - ana.bob_state.vector))
                    worst_s = max(worst_s, float(d))
        res, tail = enumerate_outcomes_analytic(q, p.y0, B0, B, 60)
        norm_err = max(norm_err, abs(sum(r.probability for r in res) - 1) - tail)
    checks = {
        "probability_rel_err": (worst_p, 1e-8),
        "state_abs_err": (worst_s, 1e-10),
        "normalization_err": (norm_err, 1e-6),
    }
    ok = True
    for name, (val, tol) in checks.items():
        passed = val <= tol
        ok &= passed
        sys.stdout.write(f"{'PASS' if passed else 'FAIL'} {name} = {val:.3e} (tol {tol:g})\n")
    return EXIT_OK if ok else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# parser


def _range_opts(sp, s_min=0.1, s_max=10.0, steps=100):
    sp.add_argument("--s-min", type=float, default=s_min)
    sp.add_argument("--s-max", type=float, default=s_max)
    sp.add_argument("--steps", type=int, default=steps)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybrid-teleport", description="Hybrid-channel teleportation of single-rail qubits.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--config", help="key = value file; command-line flags win")
        sp.set_defaults(func=func)
        return sp

    sp = add("channel-info", cmd_channel_info, "Channel parameters and unit-distortion splitters.")
    sp.add_argument("--S-db", dest="S_db", type=float, required=True)
    sp.add_argument("--b0", type=float, required=True)
    sp.add_argument("--simulate", action="store_true", help="also run the heralded Fock preparation")
    sp.add_argument("--cutoff", type=int, default=60)

    sp = add("teleport", cmd_teleport, "One teleportation outcome, analytic and Fock.")
    sp.add_argument("--S-db", dest="S_db", type=float, required=True)
    sp.add_argument("--b0", type=float, required=True)
    sp.add_argument(
        "--b", type=_b_param, required=True,
        help="teleportation BS parameter B, or 'auto' for the unit-distortion value of the outcome",
    )
    sp.add_argument("--qubit", type=_qubit, required=True, help="a0,a1 (complex allowed, renormalized)")
    sp.add_argument("--outcome", type=_pair, required=True, help="k1,k2")
    sp.add_argument("--cutoff", type=int, default=40)
    sp.add_argument("--analytic-only", action="store_true")

    sp = add("sweep", cmd_sweep, "CSV surfaces over (S_dB, B0).")
    sp.add_argument("--s-min", type=float, default=0.1)
    sp.add_argument("--s-max", type=float, default=10.0)
    sp.add_argument("--s-steps", type=int, default=101)
    sp.add_argument("--b0-min", type=float, default=0.1)
    sp.add_argument("--b0-max", type=float, default=10.0)
    sp.add_argument("--b0-steps", type=int, default=101)
    sp.add_argument("--outcomes", default="01,10,20,02")
    sp.add_argument("--cutoff", type=int, default=40)
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int)
    sp.add_argument("--b11-branch", choices=("lower", "upper"), default="lower")
    sp.add_argument("--self-check-tol", type=float, default=1e-9)

    sp = add("line", cmd_line, "The B=1 perfect-teleportation line B0(S_dB).")
    _range_opts(sp)
    sp.add_argument("--out")

    sp = add("fig4", cmd_fig4, "Even distortion factors along the B=1 line.")
    _range_opts(sp)
    sp.add_argument("--out")

    sp = add("recover-opt", cmd_recover_opt, "Maximize the recovered success probability on the B=1 line.")
    _range_opts(sp, s_min=0.0, s_max=10.0, steps=101)

    sp = add("verify", cmd_verify, "Cross-check closed forms against Fock simulation.")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, default=2024)
    sp.add_argument("--cutoff", type=int, default=40)
    return parser


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            cfg[k.replace("-", "_").lower()] = v
    return cfg


def _config_path(argv: list[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a file name")
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    path = _config_path(argv)
    command = next((t for t in argv if not t.startswith("-")), None)
    subparsers = parser._subparsers._group_actions[0].choices
    if path is None or command not in subparsers:
        return parser.parse_args(argv)
    try:
        cfg = _read_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    sub = subparsers[command]
    known = {act.dest.lower(): act for act in sub._actions}
    defaults = {}
    for key, raw in cfg.items():
        act = known.get(key)
        if act is None or key in ("help", "config", "func"):
            raise UsageError(f"unknown config key {key!r}")
        if act.nargs == 0:
            defaults[act.dest] = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                defaults[act.dest] = act.type(raw) if act.type else raw
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
        act.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = _apply_config(parser, argv)
        if ns.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return ns.func(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleError, SingularityError, TruncationError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, ValueError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:  # console-script entry point
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
