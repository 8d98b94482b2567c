"""
The Deligne-Mostow condition
============================

A cone sphere with orders beta_i in (-1, 0) summing to -2 satisfies the
integrality condition when 1 / (1 + beta_i + beta_j) is a positive integer
for every pair with beta_i + beta_j > -1.  Doubled polygons give a supply of
such order vectors: doubling a convex polygon turns each interior angle
alpha into a cone angle 2 alpha.
"""

from fractions import Fraction

from conesurf import build_model, dm_condition
from conesurf.builders import ModelSpec

for k in range(3, 9):
    m = build_model(ModelSpec("double_polygon", {"k": k}))
    beta = m.beta.values
    print(f"doubled regular {k}-gon: beta = {Fraction(beta[0]).limit_denominator(100)}"
          f" x {k}   DM = {dm_condition(beta)}")

cases = [(-0.5,) * 4, (-0.25, -0.25, -0.75, -0.75), (-1 / 3, -1 / 3, -2 / 3, -2 / 3),
         (-0.1, -0.1, -0.9, -0.9)]
for beta in cases:
    print(beta, "->", dm_condition(beta))
