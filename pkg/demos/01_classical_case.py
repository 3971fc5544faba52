"""Integer exponents: everything collapses to ordinary Bezier machinery.

With r_i = i the Muntz space is the polynomial space of degree n, the
Gelfond-Bernstein basis is the Bernstein basis, and one elevation step is
the familiar degree elevation with weights i / (n + 1).  Running the
general code on this case is the quickest sanity check of the whole stack.
"""
import numpy as np

from muntz_elevation import (BasisKind, ControlPolygon, Interval, basis_matrix, interval_weights,
                             named_sequence, run_elevation)
from muntz_elevation.elevation import gelfond_weights

n = 4
rs = tuple(range(n + 1))
ts = np.linspace(0, 1, 5)

print("Gelfond-Bernstein basis for r_i = i at t = 0, 1/4, ..., 1:")
print(np.round(basis_matrix(rs, ts, BasisKind.gelfond()), 6))
print("row sums:", basis_matrix(rs, ts, BasisKind.gelfond()).sum(axis=1))

# Left weights of one step.  Over [0, 1] they come from a closed formula,
# over [a, 1] from Hermite determinant tables; both give i / (n + 1).
print("\nleft weights 4 -> 5 over [0, 1]:  ", 1 - gelfond_weights(rs, 5))
print("left weights 4 -> 5 over [0.5, 1]:", 1 - interval_weights(rs + (5,), 0.5)[n])

# Repeated elevation drives the polygon onto the curve at rate 1/m.
poly = ControlPolygon([[0.0, 0.0], [1.0, 2.0], [3.0, 2.0], [4.0, 0.0]], (0, 1, 2, 3))
trace = run_elevation(poly, named_sequence("classical"), Interval(0, 1), 64)
print("\nfirst control point after j steps (it creeps towards the start point):")
for j in (0, 1, 4, 16, 64):
    print(f"  j = {j:2d}: b_1 = {trace.polygon(j).points[1]}")
