"""Acceptance criteria, one test each.

Every test records a line ``criterion N: PASS|FAIL|ADVISORY <details>`` that
is printed in the terminal summary, then asserts.  Thresholds are the
stated ones; a criterion that the physics does not support is left failing.
"""

import math
import time

import numpy as np

from hybrid_teleport import analytic as an
from hybrid_teleport.analytic import CvStateSpec
from hybrid_teleport.channel import build_channel_analytic, make_params
from hybrid_teleport.line import fig4_curve, solve_b1_point
from hybrid_teleport.recovery import (
    RECOVERY_OUTCOMES,
    make_auxiliary,
    optimize_recovery,
    partial_success_probabilities,
    recover,
)
from hybrid_teleport.sweep import advisory_figure_checks
from hybrid_teleport.teleporter import (
    SingleRailQubit,
    classify_and_correct,
    enumerate_outcomes,
    enumerate_outcomes_analytic,
    fidelity_to_input,
    teleport_outcome,
    teleport_outcome_analytic,
)

import oracles
from acceptance_log import LINES

SEED = 20240611


def record(n: int, passed: bool, detail: str) -> None:
    LINES.append(f"criterion {n}: {'PASS' if passed else 'FAIL'} {detail}")
    print(LINES[-1])
    assert passed, LINES[-1]


def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.perf_counter()
    worst_p = worst_s = 0.0
    count = 0
    for _ in range(200):
        S = rng.uniform(0, 8) or 8.0
        B0 = rng.uniform(0, 5) or 5.0
        B = rng.uniform(0.25, 4)
        q = SingleRailQubit.random(rng)
        p = make_params(S, B0)
        # the truncated channel is exact for every outcome with k1 + k2 <= cutoff
        ch = build_channel_analytic(p, 40, tail_tol=1.0)
        sims, _ = enumerate_outcomes(ch, q, B, 4)
        for sim in sims:
            ana = teleport_outcome_analytic(q, p.y0, p.B0, B, *sim.outcome)
            count += 1
            if ana.probability > 0:
                worst_p = max(worst_p, abs(sim.probability - ana.probability) / ana.probability)
            if ana.bob_state is not None:
                got = sim.bob_state.aligned_to(ana.bob_state)
                worst_s = max(worst_s, float(np.max(np.abs(got.vector - ana.bob_state.vector))))
    dt = time.perf_counter() - t0
    record(
        1,
        worst_p <= 1e-8 and worst_s <= 1e-10,
        f"{count} outcomes, max rel prob err {worst_p:.2e} (tol 1e-8), "
        f"max state err {worst_s:.2e} (tol 1e-10), {dt:.1f} s",
    )


def test_criterion_2_normalization():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(50):
        S, B0, B = rng.uniform(0, 8), rng.uniform(0, 5), rng.uniform(0.25, 4)
        q = SingleRailQubit.random(rng)
        p = make_params(S, B0)
        res, tail = enumerate_outcomes_analytic(q, p.y0, p.B0, B, 60)
        total = sum(r.probability for r in res)
        # the missing mass must lie in [0, tail] and the tail itself be small
        err = max(total - 1, 1 - total - tail, 0.0) + tail
        worst = max(worst, err)
    record(2, worst <= 1e-6, f"50 configurations, max |sum - 1| incl. tail bound {worst:.2e} (tol 1e-6)")


def test_criterion_3_perfect_half():
    rng = np.random.default_rng(SEED + 3)
    worst_sum = worst_fid = 0.0
    sums = []
    for S in np.linspace(0.5, 10, 20):
        lp = solve_b1_point(float(S))
        p = make_params(float(S), lp.B0)
        q = SingleRailQubit.random(rng)
        total = 0.0
        for o in ((0, 1), (1, 0)):
            r = teleport_outcome_analytic(q, p.y0, p.B0, 1.0, *o)
            total += r.probability
            worst_fid = max(worst_fid, 1 - fidelity_to_input(classify_and_correct(r).state, q))
        sums.append(total)
        worst_sum = max(worst_sum, abs(total - 0.5))
    record(
        3,
        worst_sum <= 1e-8 and worst_fid <= 1e-10,
        f"20 line points, P01+P10 in [{min(sums):.4f}, {max(sums):.4f}], max |sum - 0.5| "
        f"{worst_sum:.2e} (tol 1e-8); max 1 - fidelity {worst_fid:.1e} (tol 1e-10)",
    )


def test_criterion_4_degenerate_limit():
    rng = np.random.default_rng(SEED + 4)
    p = make_params(1e-6, 1.0)
    ch = build_channel_analytic(p, 20)
    nonlocal_photon = np.zeros_like(ch.state.amplitudes)
    nonlocal_photon[1, 0] = nonlocal_photon[0, 1] = 1 / math.sqrt(2)
    overlap = abs(np.vdot(nonlocal_photon, ch.state.amplitudes)) ** 2
    worst_vac = 1.0
    for _ in range(20):
        q = SingleRailQubit.random(rng)
        for o in ((2, 0), (0, 2)):
            r = teleport_outcome(ch, q, 1.0, *o)
            worst_vac = min(worst_vac, abs(r.bob_state.a0) ** 2)
    record(
        4,
        overlap >= 1 - 1e-6 and worst_vac >= 1 - 1e-6,
        f"S_dB=1e-6: overlap with nonlocal photon 1 - {1 - overlap:.1e}; "
        f"min vacuum weight of Bob after 20/02 = 1 - {1 - worst_vac:.1e}",
    )


def test_criterion_5_identities():
    errs = {"B10*B01": 0.0, "B20*B02": 0.0, "b10=B*b01": 0.0, "b20=B*b02": 0.0, "b02=-B*b20": 0.0}
    for S in (0.5, 2.0, 5.0, 8.0, 10.0):
        for B0 in (0.1, 0.3, 0.9, 1.7, 4.0):
            y0 = make_params(S, B0).y0
            errs["B10*B01"] = max(errs["B10*B01"], abs(
                an.solve_unit_distortion_B(1, 0, y0, B0) * an.solve_unit_distortion_B(0, 1, y0, B0) - 1))
            errs["B20*B02"] = max(errs["B20*B02"], abs(
                an.solve_unit_distortion_B(2, 0, y0, B0) * an.solve_unit_distortion_B(0, 2, y0, B0) - 1))
            for B in (0.4, 1.0, 2.5):
                b01, b10 = an.distortion_factor(0, 1, y0, B0, B), an.distortion_factor(1, 0, y0, B0, B)
                b20, b02 = an.distortion_factor(2, 0, y0, B0, B), an.distortion_factor(0, 2, y0, B0, B)
                # the relations are stated with the minus signs removed
                errs["b10=B*b01"] = max(errs["b10=B*b01"], abs(abs(b10) - B * abs(b01)) / abs(b10))
                errs["b20=B*b02"] = max(errs["b20=B*b02"], abs(abs(b20) - B * abs(b02)) / abs(b20))
                errs["b02=-B*b20"] = max(errs["b02=-B*b20"], abs(b02 + B * b20) / abs(b02))
    stated = ("B10*B01", "B20*B02", "b10=B*b01", "b20=B*b02")
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    record(5, all(errs[k] <= 1e-12 for k in stated), f"max rel deviations over 75 points: {detail} (tol 1e-12)")


def test_criterion_6_recovery_optimum():
    t0 = time.perf_counter()
    best = optimize_recovery(0.0, 20.0, 201)
    p = make_params(best.S_dB, best.B0)
    ch = build_channel_analytic(p, 40, tail_tol=1e-6)
    analytic = partial_success_probabilities(p.y0, p.B0)
    rng = np.random.default_rng(SEED + 6)
    q = SingleRailQubit.random(rng)
    worst = 0.0
    for o in RECOVERY_OUTCOMES:
        r = teleport_outcome(ch, q, 1.0, *o)
        res = recover(r, make_auxiliary(r.parity, abs(r.distortion_b)))
        worst = max(worst, abs(r.probability * res.success_probability - analytic[o]) / analytic[o])
    dt = time.perf_counter() - t0
    record(
        6,
        abs(best.P_pt - 0.56) <= 0.01 and worst <= 1e-8,
        f"optimum over S_dB in [0, 20]: P_pt = {best.P_pt:.4f} at S_dB = {best.S_dB:.2f}, B0 = {best.B0:.4f} "
        f"(target 0.56 +- 0.01); partial terms vs Fock max rel err {worst:.1e} (tol 1e-8), {dt:.1f} s",
    )


def test_criterion_7_figure_4():
    S = np.linspace(0.1, 10, 100)
    curve = fig4_curve(S)
    b20 = np.array([c[1] for c in curve])
    b02 = np.array([c[2] for c in curve])
    eq = float(np.max(np.abs(b20 - b02) / b02))
    below = bool(np.all(b20 < 1))
    increasing = bool(np.all(np.diff(b20) > 0))
    record(
        7,
        below and increasing and eq <= 1e-12,
        f"100 points: max b20 {b20.max():.4f} < 1 {below}, increasing {increasing}, "
        f"max rel |b20 - |b02|| {eq:.1e} (tol 1e-12)",
    )


FAMILIES = ("sub_only", "add1", "case00", "case01", "case10", "case11")


def test_criterion_8_normalization_factors():
    rng = np.random.default_rng(SEED + 8)
    worst = {}
    for fam in FAMILIES:
        w = 0.0
        for _ in range(25):
            k = int(rng.integers(0, 6))
            y = rng.uniform(0.001, 0.45)
            B, B0 = rng.uniform(0.05, 5), rng.uniform(0.05, 5)
            ref = oracles.brute_force_norm(fam, k, y, B, B0, nmax=3000)
            w = max(w, abs(an.cv_norm_factor(CvStateSpec(fam, k, y, B, B0)) - ref) / ref)
        worst[fam] = w
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(8, max(worst.values()) <= 1e-10, f"25 points per family, max rel err: {detail} (tol 1e-10)")


def test_criterion_9_advisory_figure_checks():
    res = advisory_figure_checks()
    lo, hi = res["B01_range"]
    notes = [
        f"P01 max {res['P01_max']:.5f} (~0.25 {'yes' if abs(res['P01_max'] - 0.25) < 0.01 else 'no'})",
        f"B01 range [{lo:.3f}, {hi:.3f}] (~[0.52, 3.2] "
        f"{'yes' if abs(lo - 0.52) < 0.05 and abs(hi - 3.2) < 0.2 else 'no'})",
        f"P20 max {res['P20_max']:.4f}, cells above 0.24: "
        f"{'none' if res['P20_above_0.24_min_S'] is None else res['P20_above_0.24_min_S']}",
    ]
    LINES.append("criterion 9: ADVISORY default box S_dB, B0 in [0.1, 10]: " + "; ".join(notes))
    print(LINES[-1])

