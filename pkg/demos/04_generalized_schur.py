"""Generalized Schur functions with real parts.

A real partition (lambda_1, ..., lambda_n) indexes the quotient
det(u_i**(lambda_j + n - j)) / Vandermonde(u).  Repeated arguments are
handled by confluent rows, so the value at (1, ..., 1) is finite and
matches a product formula.  Integer parts recover ordinary Schur
polynomials, which count semistandard tableaux.
"""
from muntz_elevation import RealPartition, schur_eval
from muntz_elevation.exponents import partition_from_exponents
from muntz_elevation.numerics import PrecisionContext
from muntz_elevation.schur import ArgumentMultiset, schur_all_ones, splitting_residual

ext = PrecisionContext().extended()

lam = RealPartition((2, 1, 0))
print("s_(2,1,0)(1, 1, 1) =", schur_eval(lam, ArgumentMultiset.of({1: 3})), "(8 tableaux)")
print("product formula      ", schur_all_ones(lam))

# The exponents of a Muntz space define a real partition.
eta = partition_from_exponents((0, 1.3, 2.9, 4.0, 6.5), ext.mp)
print("\npartition of (0, 1.3, 2.9, 4.0, 6.5):", [round(float(x), 3) for x in eta.parts])

# Splitting: S_eta(z, eps*y) / eps**|mu| -> S_lambda(z) S_mu(y) as eps -> 0.
# The error shrinks like eps**min(1, lambda_s - mu_1 + 1), here eps**1.1
# against a first-order term, so a tenfold smaller eps gains about ten.
z = ArgumentMultiset.of({0.7: 2, 1.1: 1})
y = ArgumentMultiset.of({0.6: 1, 0.8: 1})
for eps in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
    print(f"  eps = {eps:.0e}: residual {float(splitting_residual(eta, 3, z, y, eps, ext)):.3e}")
