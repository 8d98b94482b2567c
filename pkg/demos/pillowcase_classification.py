"""
Classifying a cone sphere
=========================

The pillowcase is a unit square doubled along its boundary: a flat sphere
with four cone points of angle pi.  Its holonomy sends every puncture loop to
a half turn about a developed corner.  The point of C P^1 recorded by
``classify_xi`` only depends on the similarity class of the flat metric, so
rescaling, moving the base placement or subdividing leaves it fixed, while
stretching the square into a rectangle moves it.
"""

import cmath

from conesurf import (SE2Element, build_model, classify_xi, double_polygon, extract_representation,
                      hinge_subdivide, remap_marking, sphere_marking, xi_distance)
from conesurf.builders import ModelSpec, measured_beta

m = build_model(ModelSpec("pillowcase"))
s, mk, beta = m.surface, m.marking, m.beta
r = extract_representation(s, mk)
print("rho(c_j):", [complex(round(z.real, 12), round(z.imag, 12)) for z in r.rho])
print("tau(c_j):", [complex(round(z.real, 12), round(z.imag, 12)) for z in r.tau])

x = classify_xi(s, mk, beta)
print("proj part:", x.proj)

print("rescaled by 5     :", xi_distance(classify_xi(s.scaled(5.0), mk, beta), x))
g = SE2Element(cmath.exp(0.4j), 3 - 2j)
print("moved base        :", xi_distance(classify_xi(s, mk, beta, base_iso=g), x))
s2, rec = hinge_subdivide(s, ("t0", 0), 0.3)
print("subdivided        :", xi_distance(classify_xi(s2, remap_marking(rec, mk), beta), x))

# a 2 x 1 rectangle has the same cone angles but a different shape
rect = double_polygon([0, 2, 2 + 1j, 1j])
rm = sphere_marking(rect)
y = classify_xi(rect, rm, measured_beta(rect, rm.punctures))
print("2x1 rectangle     :", xi_distance(y, x))
