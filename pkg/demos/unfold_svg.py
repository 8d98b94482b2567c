"""
Unfolding around a corner of the tetrahedron
============================================

Crossing edges one after another places each new triangle next to the
previous one in the plane.  Leaving every triangle through the edge after
the one we came in by keeps turning around the same vertex.  Its cone angle
is pi, so one turn covers only half the plane; after two turns the chain
closes up on the starting placement.  The chain is written to an SVG file
(the output directory is the first argument, default: current directory).
"""

import sys
from pathlib import Path

from conesurf import IDENTITY, develop_path, tetrahedron
from conesurf.loops import DualStep

s = tetrahedron()

# leave each triangle through the edge after the one we entered by
steps, cur, edge = [], "t0", 0
for _ in range(6):
    steps.append(DualStep(cur, edge))
    cur, entered = s.partner((cur, edge))
    edge = (entered + 1) % 3
chain = develop_path(s, IDENTITY, steps)
for p in chain.placements:
    print(p.triangle, [complex(round(z.real, 3), round(z.imag, 3)) for z in p.points(s)])

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".") / "tetra_strip.svg"
out.write_text(chain.to_svg(s, scale=80), encoding="utf-8")
print("wrote", out)
