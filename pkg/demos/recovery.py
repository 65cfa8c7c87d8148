"""Undo the leftover distortion of multi-photon events with an auxiliary state.

Run with ``python demos/recovery.py``.
"""

from hybrid_teleport.channel import build_channel_analytic, make_params
from hybrid_teleport.line import solve_b1_point
from hybrid_teleport.recovery import (
    RECOVERY_OUTCOMES,
    make_auxiliary,
    optimize_recovery,
    recover,
    total_success_probability,
)
from hybrid_teleport.teleporter import SingleRailQubit, classify_and_correct, fidelity_to_input, teleport_outcome

S_DB = 10.0
point = solve_b1_point(S_DB)
params = make_params(S_DB, point.B0)
channel = build_channel_analytic(params, 40, tail_tol=1e-6)
qubit = SingleRailQubit(0.6, 0.8j)

print(f"on the B=1 line at {S_DB} dB (B0 = {point.B0:.4f}):")
for outcome in RECOVERY_OUTCOMES:
    res = teleport_outcome(channel, qubit, 1.0, *outcome)
    # fidelity after the Pauli correction alone
    before = fidelity_to_input(classify_and_correct(res).state, qubit)
    rec = recover(res, make_auxiliary(res.parity, abs(res.distortion_b)))
    print(
        f"  {outcome}: |b| = {abs(res.distortion_b):.4f}  fidelity before {before:.4f}, "
        f"after {fidelity_to_input(rec.state, qubit):.12f}  (herald probability {rec.success_probability:.4f})"
    )

print(f"\nsuccess probability with recovery: {total_success_probability(params):.4f}")
best = optimize_recovery(0.0, 20.0, 201)
print(f"best along the line for S_dB in [0, 20]: {best.P_pt:.4f} at {best.S_dB:.2f} dB (B0 = {best.B0:.4f})")
