"""
Scalar group cohomology
=======================

For a character rho of a finitely presented group, the 1-cocycles with
values in C_rho form the kernel of one linear form per relator.  The
coboundaries are the multiples of (rho - 1).  On a free group of rank s this
gives H^1 of dimension s for trivial rho and s - 1 otherwise.
"""

import numpy as np

from conesurf import Presentation, free_group, h1_dimension, z1_dimension
from conesurf.cohomology import coboundary_vector, h1_representative, lambda_form

rng = np.random.default_rng(0)
for s in range(2, 6):
    rho = np.exp(1j * rng.uniform(-np.pi, np.pi, s))
    print(f"free rank {s}:  h1(trivial) = {h1_dimension(free_group(s), np.ones(s))}"
          f"   h1(random) = {h1_dimension(free_group(s), rho)}")

# one relator: the commutator of a torus group
p = Presentation.parse(["a", "b"], "a b a^-1 b^-1")
rho = np.exp(1j * np.array([0.7, -1.9]))
print("commutator form:", lambda_form(rho, p.relators[0]))
print("z1 =", z1_dimension(p, rho), " h1 =", h1_dimension(p, rho))

# the canonical representative is orthogonal to the coboundary line
tau = np.array([1.0, 2.0j])
w = h1_representative(rho, tau)
print("<delta, w> =", abs(np.vdot(coboundary_vector(rho), w)))
