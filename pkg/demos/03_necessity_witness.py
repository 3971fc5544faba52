"""Why convergence needs the Muntz condition.

Over [0.2, 1] with r_i = i**2, the sum of 1/r_i is finite.  A bounded
Chebyshev-type inequality then ties the derivative of an element near the
left end to its size near the right end, and the first leg of the
elevated polygon cannot shrink to zero: the polygon keeps a straight
segment of positive length, while the curve has a non-zero tangent there.
"""
import numpy as np

from muntz_elevation import first_leg_series, materialize, named_sequence, preset_config, run_experiment
from muntz_elevation.diagnostics import first_basis_ratio

config = preset_config("witness")
trace, report, curve = run_experiment(config)
legs = first_leg_series(trace)
print("tangent of the curve at a = 0.2:", curve.derivative([0.2])[0])
print("first leg |b_1 - b_0| at iterations 0, 20, 40, ..., 100:")
print("  ", np.round(legs[::20], 4))
print(f"smallest leg after iteration 20 relative to iteration 20: {legs[20:].min() / legs[20]:.3f}")

# The inequality constant for the first Gelfond-Bernstein function grows
# only slowly with the dimension when sum 1/r_i is finite.
print("\n||H_0'|| on [0, 1/2] / ||H_0|| on [1/2, 1] for r_i = i**2:")
for m in (4, 6, 8, 10, 12):
    print(f"  m = {m:2d}: {first_basis_ratio(materialize(named_sequence('fig2'), m)):8.2f}")
