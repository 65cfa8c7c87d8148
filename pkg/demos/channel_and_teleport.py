"""Walk through one teleportation run, closed form next to Fock simulation.

Run with ``python demos/channel_and_teleport.py``.
"""

import numpy as np

from hybrid_teleport import analytic as an
from hybrid_teleport.channel import balanced_ancilla_weight, build_channel_analytic, make_params, prepare_channel_simulated
from hybrid_teleport.teleporter import (
    SingleRailQubit,
    classify_and_correct,
    enumerate_outcomes,
    fidelity_to_input,
)

S_DB, B0 = 6.0, 0.9
params = make_params(S_DB, B0)
print(f"squeezing {S_DB} dB -> y = {params.squeeze.y_smsv:.4f}, after BS(B0={B0}) y0 = {params.y0:.4f}")

# The channel can be prepared by heralding; with the balanced ancilla it
# coincides with the closed-form state.
r = balanced_ancilla_weight(params)
sim, p_herald = prepare_channel_simulated(params, r, 60)
ana = build_channel_analytic(params, 60, tail_tol=1e-6)
print(f"ancilla weight r = {r:.4f}, herald probability {p_herald:.4e}")
print(f"overlap of simulated and closed-form channel: {abs(np.vdot(ana.state.amplitudes, sim.state.amplitudes)):.15f}")

# Pick the splitter that removes the distortion of the (1, 0) outcome.
B = an.solve_unit_distortion_B(1, 0, params.y0, B0)
qubit = SingleRailQubit.from_angles(1.2, 0.4)
results, tail = enumerate_outcomes(ana, qubit, B, 4)
print(f"\nteleportation splitter B10 = {B:.4f}; outcomes with k1 + k2 <= 4 (tail {tail:.2e}):")
for res in results:
    if res.failure:
        print(f"  {res.outcome}: P = {res.probability:.4f}  failure, Bob holds one photon")
        continue
    corr = classify_and_correct(res)
    print(
        f"  {res.outcome}: P = {res.probability:.4f}  b = {res.distortion_b:+.4f}  "
        f"correction {corr.label:2s}  fidelity {fidelity_to_input(corr.state, qubit):.6f}"
    )
