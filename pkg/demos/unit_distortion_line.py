"""The balanced-splitter line and the distortion left on two-photon events.

Run with ``python demos/unit_distortion_line.py``.
"""

import numpy as np

from hybrid_teleport.analytic import perfect_outcome_probability
from hybrid_teleport.line import fig4_curve, solve_b1_line
from hybrid_teleport.sweep import advisory_figure_checks

S_values = np.linspace(0.5, 10, 8)
print(" S_dB    B0 on line   P01+P10 at B=1   b20 = |b02|")
for p, (_, b20, _) in zip(solve_b1_line(S_values), fig4_curve(S_values)):
    P = perfect_outcome_probability(0, 1, p.y0, 1.0) + perfect_outcome_probability(1, 0, p.y0, 1.0)
    print(f"{p.S_dB:5.2f}   {p.B0:10.6f}   {P:14.6f}   {b20:10.6f}")

print("\nsummary over the default sweep box:")
for key, value in advisory_figure_checks().items():
    print(f"  {key}: {value}")
