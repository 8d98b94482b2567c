"""Reference flat surfaces with ready-made markings.

Genus-0 markings are built from a breadth-first spanning tree of the dual
graph rooted at the base triangle.  The primal edges the tree never crosses
form a spanning tree of the 1-skeleton; cutting along it leaves a disk whose
boundary meets every vertex.  Each puncture gets the loop
``tree path . counterclockwise star . tree path^-1`` entered through its
first corner on that boundary, and punctures are numbered in boundary order,
which makes ``c_1 c_2 ... c_n`` null-homotopic.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

from .development import attach_basepath, vertex_star_loop
from .errors import DegenerateSpec
from .loops import DualLoop, DualStep
from .repvariety import BetaVector, Marking
from .surface import (Corner, EdgeRef, SurfaceComplex, TriangleChart, genus,
                      singularity_order)


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BuiltModel:
    surface: SurfaceComplex
    marking: Marking | None = None
    beta: BetaVector | None = None
    loops: dict = field(default_factory=dict)


def _assemble(triangles, tol=None, edge_key=None) -> SurfaceComplex:
    """Glue labelled triangles along matching opposite directed edges.

    ``triangles`` holds ``(labels, corners)`` pairs; an edge ``a -> b`` is
    glued to the unique edge ``b -> a``.  ``edge_key(a, b, i)`` may refine
    the key when two distinct edges of triangle ``i`` share end labels.
    """
    edge_key = edge_key or (lambda a, b, i: (a, b))
    directed = {}
    charts = []
    width = len(str(len(triangles) - 1))
    for i, (labels, corners) in enumerate(triangles):
        tid = f"t{i:0{width}d}"
        charts.append(TriangleChart(tid, tuple(corners)))
        for k in range(3):
            key = edge_key(labels[k], labels[(k + 1) % 3], i)
            if key in directed:
                raise DegenerateSpec(f"directed edge {key} used twice")
            directed[key] = EdgeRef(tid, k)
    gluings = []
    for key, ref in directed.items():
        rev = (key[1], key[0]) + tuple(key[2:])
        if rev not in directed:
            raise DegenerateSpec(f"edge {key} has no partner")
        if key < rev:
            gluings.append((ref, directed[rev]))
    return SurfaceComplex(charts, gluings, tol)


def tetrahedron(edge: float = 1.0, tol=None) -> SurfaceComplex:
    if not edge > 0:
        raise DegenerateSpec("edge length must be positive")
    w = cmath.exp(1j * math.pi / 3)
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return _assemble([(f, (0j, complex(edge), edge * w)) for f in faces], tol)


def cube(edge: float = 1.0, tol=None) -> SurfaceComplex:
    if not edge > 0:
        raise DegenerateSpec("edge length must be positive")
    # vertex index bits: x = bit 0, y = bit 1, z = bit 2; faces listed
    # counterclockwise seen from outside
    quads = [(0, 2, 3, 1), (4, 5, 7, 6), (0, 1, 5, 4), (2, 6, 7, 3), (0, 4, 6, 2), (1, 3, 7, 5)]
    square = (0j, complex(edge), complex(edge, edge), complex(0, edge))
    tris = []
    for q in quads:
        # split along the diagonal from corner 0 to corner 2
        tris.append(((q[0], q[1], q[2]), (square[0], square[1], square[2])))
        tris.append(((q[0], q[2], q[3]), (square[0], square[2], square[3])))
    return _assemble(tris, tol)


def flat_torus(omega1: complex = 1, omega2: complex = 1j, tol=None) -> SurfaceComplex:
    """Parallelogram torus with periods ``omega1``, ``omega2`` (``Im(omega2/omega1) > 0``)."""
    omega1, omega2 = complex(omega1), complex(omega2)
    if omega1 == 0 or not (omega2 / omega1).imag > 0:
        raise DegenerateSpec("torus periods need Im(omega2/omega1) > 0")
    t0 = TriangleChart("t0", (0j, omega1, omega1 + omega2))
    t1 = TriangleChart("t1", (0j, omega1 + omega2, omega2))
    gluings = [(("t0", 0), ("t1", 1)), (("t0", 1), ("t1", 2)), (("t0", 2), ("t1", 0))]
    return SurfaceComplex([t0, t1], gluings, tol)


def torus_loops() -> dict:
    """``a`` develops to translation by omega1, ``b`` to translation by -omega2."""
    return {"a": DualLoop("t0", (("t0", 1), ("t1", 0))),
            "b": DualLoop("t0", (("t0", 0), ("t1", 0)))}


def regular_polygon(k: int, radius: float = 1.0) -> list[complex]:
    return [radius * cmath.exp(2j * math.pi * j / k) for j in range(k)]


def _check_convex(poly) -> None:
    k = len(poly)
    if k < 3:
        raise DegenerateSpec("a polygon needs at least 3 vertices")
    turning = 0.0
    for j in range(k):
        a, b, c = poly[j], poly[(j + 1) % k], poly[(j + 2) % k]
        w = (b - a).conjugate() * (c - b)
        if not w.imag > 0:
            raise DegenerateSpec("polygon must be strictly convex and counterclockwise")
        turning += cmath.phase(w)
    if abs(turning - 2 * math.pi) > 1e-6:
        raise DegenerateSpec("polygon winds more than once")


def double_polygon(vertices, tol=None) -> SurfaceComplex:
    """Two copies of a convex polygon glued along the boundary (a cone sphere).

    The front is fanned from vertex 0; the back copy is mirrored (complex
    conjugate coordinates, reversed corner order) so it stays positively
    oriented.
    """
    poly = [complex(*z) if isinstance(z, (tuple, list)) else complex(z) for z in vertices]
    _check_convex(poly)
    k = len(poly)
    tris = []
    for i in range(1, k - 1):
        tris.append(((0, i, i + 1), (poly[0], poly[i], poly[i + 1])))
    for i in range(1, k - 1):
        tris.append(((0, i + 1, i), (poly[0].conjugate(), poly[i + 1].conjugate(), poly[i].conjugate())))
    front = k - 2

    def key(a, b, i):
        if (a - b) % k in (1, k - 1):
            return (a, b)  # polygon side: seam between the two sheets
        return (a, b, i < front)

    return _assemble(tris, tol, key)


def pillowcase(tol=None) -> SurfaceComplex:
    return double_polygon([0, 1, 1 + 1j, 1j], tol)


# -- markings --------------------------------------------------------------

def dual_spanning_tree(s: SurfaceComplex, base: str):
    """Breadth-first dual tree: tree paths from ``base`` and the set of crossed gluings."""
    paths = {base: ()}
    crossed = set()
    queue = deque([base])
    while queue:
        t = queue.popleft()
        for k in range(3):
            ref = EdgeRef(t, k)
            other = s.partner(ref)
            if other.triangle not in paths:
                paths[other.triangle] = paths[t] + (DualStep(t, k),)
                crossed.add(frozenset((ref, other)))
                queue.append(other.triangle)
    return paths, crossed


def cut_disk_sectors(s: SurfaceComplex, crossed) -> list[list[Corner]]:
    """Corners of the disk left by cutting along the uncrossed edges, in boundary order.

    Each entry is the run of chart corners forming one corner of the disk,
    listed clockwise around the vertex; the disk boundary is walked with the
    disk on its left.
    """
    def cut(ref: EdgeRef) -> bool:
        return frozenset((ref, s.partner(ref))) not in crossed

    boundary = sorted(EdgeRef(t, k) for t in s.charts for k in range(3) if cut(EdgeRef(t, k)))
    if not boundary:
        return []
    start = boundary[0]
    sectors = []
    h = start
    while True:
        cur = Corner(h.triangle, (h.edge + 1) % 3)
        run = [cur]
        while not cut(EdgeRef(cur.triangle, cur.corner)):
            t2, e2 = s.partner((cur.triangle, cur.corner))
            cur = Corner(t2, (e2 + 1) % 3)
            run.append(cur)
        sectors.append(run)
        h = EdgeRef(cur.triangle, cur.corner)
        if h == start:
            break
        if len(sectors) > 3 * len(s.charts):
            raise RuntimeError("cut boundary walk did not close")
    return sectors


def sphere_marking(s: SurfaceComplex, base: str | None = None, punctures=None) -> Marking:
    """Marking of a genus-0 surface with every vertex (or ``punctures``) as a puncture."""
    if genus(s) != 0:
        raise DegenerateSpec("sphere markings need a genus-0 surface")
    base = next(iter(s.charts)) if base is None else base
    paths, crossed = dual_spanning_tree(s, base)
    wanted = None if punctures is None else set(punctures)
    first = {}
    for run in cut_disk_sectors(s, crossed):
        vid = s.vertex_of(*run[0])
        if vid not in first and (wanted is None or vid in wanted):
            first[vid] = run[0]
    order = list(first)
    c_loops = []
    for vid in order:
        t, c = first[vid]
        star = vertex_star_loop(s, vid, t, c)
        c_loops.append(attach_basepath(s, paths[t], star, base_triangle=base)
                       if paths[t] else star)
    return Marking(base, (), (), tuple(c_loops), tuple(order))


def measured_beta(s: SurfaceComplex, punctures) -> BetaVector:
    return BetaVector(tuple(singularity_order(s, v) for v in punctures))


def _with_marking(s: SurfaceComplex) -> BuiltModel:
    beta = measured_beta(s, [v.id for v in s.vertex_classes])
    if beta.integer_indices(s.tol):
        return BuiltModel(s)
    m = sphere_marking(s)
    return BuiltModel(s, m, measured_beta(s, m.punctures))


def build_model(spec: ModelSpec) -> BuiltModel:
    p = dict(spec.params)
    tol = p.pop("tol", None)
    if spec.kind == "tetrahedron":
        return _with_marking(tetrahedron(p.get("edge", 1.0), tol))
    if spec.kind == "cube":
        return _with_marking(cube(p.get("edge", 1.0), tol))
    if spec.kind == "double_polygon":
        verts = p.get("polygon")
        if verts is None:
            verts = regular_polygon(int(p.get("k", 4)))
        return _with_marking(double_polygon(verts, tol))
    if spec.kind == "pillowcase":
        return _with_marking(pillowcase(tol))
    if spec.kind == "flat_torus":
        s = flat_torus(p.get("omega1", 1), p.get("omega2", 1j), tol)
        return BuiltModel(s, loops=torus_loops())
    raise DegenerateSpec(f"unknown model kind {spec.kind!r}")


def reference_models() -> dict[str, BuiltModel]:
    """Every builder model used by the test and acceptance suites."""
    models = {
        "tetrahedron": build_model(ModelSpec("tetrahedron")),
        "cube": build_model(ModelSpec("cube")),
        "flat_torus": build_model(ModelSpec("flat_torus")),
        "pillowcase": build_model(ModelSpec("pillowcase")),
    }
    for k in range(3, 9):
        models[f"double_{k}gon"] = build_model(ModelSpec("double_polygon", {"k": k}))
    return models
