"""
Holonomy of a flat torus
========================

A parallelogram with opposite sides glued is a flat torus.  Developing the
two triangles along a closed dual path returns the base triangle displaced
by a translation, and the translations of the two basic loops are exactly
the periods of the lattice.
"""

from conesurf import flat_torus, holonomy_of_loop, loop_concat
from conesurf.builders import torus_loops
from conesurf.surface import cone_angle, euler_characteristic

omega1, omega2 = 2 + 0.3j, 0.5 + 1.5j
s = flat_torus(omega1, omega2)
print("charts:", sorted(s.charts), " chi =", euler_characteristic(s))

# the single vertex is a regular point: its cone angle is a full turn
v = s.vertex_classes[0]
print("cone angle / 2pi =", cone_angle(s, v.id) / (2 * 3.141592653589793))

loops = torus_loops()
a = holonomy_of_loop(s, loops["a"])
b = holonomy_of_loop(s, loops["b"])
print("phi(a) =", a)
print("phi(b) =", b)
print("periods:", omega1, -omega2)

# translations commute, so the holonomy group is abelian
ab = holonomy_of_loop(s, loop_concat(loops["a"], loops["b"]))
ba = holonomy_of_loop(s, loop_concat(loops["b"], loops["a"]))
print("phi(ab) - phi(ba) =", abs(ab.v - ba.v))
