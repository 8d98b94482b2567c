"""
Cone points of the cube
=======================

Three squares meet at each corner of a cube, so the cone angle there is
3*pi/2.  Walking once around a vertex develops the star of triangles into
the plane; the holonomy is a rotation by the cone angle about the developed
vertex itself.
"""

import cmath
import math

import numpy as np

from conesurf import cube, holonomy_of_loop, se2_fixed_point, vertex_star_loop
from conesurf.surface import cone_angle, gauss_bonnet_residual, singularity_order

s = cube(edge=1.0)
print(len(s.charts), "triangles,", len(s.vertex_classes), "vertices")

rows = []
for v in s.vertex_classes:
    t, c = v.members[0]
    h = holonomy_of_loop(s, vertex_star_loop(s, v.id, t, c))
    centre = se2_fixed_point(h)
    rows.append((cone_angle(s, v.id), singularity_order(s, v.id),
                 abs(h.u - cmath.exp(1.5j * math.pi)), abs(centre - s.charts[t].corners[c])))

rows = np.array(rows)
print("cone angles / pi:", np.round(rows[:, 0] / math.pi, 12))
print("orders beta     :", np.round(rows[:, 1], 12))
print("max |u - e^{3 pi i/2}|       :", rows[:, 2].max())
print("max |centre - placed vertex| :", rows[:, 3].max())

# eight corners of order -1/4 balance the Euler characteristic 2
print("Gauss-Bonnet residual:", gauss_bonnet_residual(s))
