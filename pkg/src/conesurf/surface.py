"""Euclidean triangulations of closed oriented surfaces.

A surface is a set of planar triangle charts (each positively oriented) plus
a perfect matching of their edges.  Edge ``k`` of a chart runs from corner
``k`` to corner ``(k+1) % 3``; glued edges are always identified with
opposite traversal, so corner ``e`` of one side meets corner ``e'+1`` of the
other and corner ``e+1`` meets corner ``e'``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from . import geom
from .errors import (InvalidEdge, NonOrientableOrInvalid, ParseError,
                     UnmappedStep, ValidationError)
from .loops import DualLoop, DualStep


class EdgeRef(NamedTuple):
    triangle: str
    edge: int


class Gluing(NamedTuple):
    left: EdgeRef
    right: EdgeRef


class Corner(NamedTuple):
    triangle: str
    corner: int


@dataclass(frozen=True)
class TriangleChart:
    id: str
    corners: tuple[complex, complex, complex]

    def __post_init__(self):
        pts = tuple(complex(z) for z in self.corners)
        if len(pts) != 3:
            raise ValueError("a chart has exactly three corners")
        object.__setattr__(self, "corners", pts)

    @property
    def signed_area(self) -> float:
        a, b, c = self.corners
        return ((b - a).conjugate() * (c - a)).imag / 2

    def edge_vector(self, k: int) -> complex:
        return self.corners[(k + 1) % 3] - self.corners[k]

    def edge_length(self, k: int) -> float:
        return abs(self.edge_vector(k))

    def angle(self, k: int) -> float:
        """Interior angle at corner ``k``."""
        p = self.corners[k]
        w = (self.corners[(k + 1) % 3] - p).conjugate() * (self.corners[(k + 2) % 3] - p)
        return abs(math.atan2(w.imag, w.real))


@dataclass(frozen=True)
class VertexClass:
    id: str
    members: tuple[Corner, ...]

    @property
    def representative(self) -> Corner:
        return self.members[0]


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins, keeps representatives deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _canonical_gluing(a: EdgeRef, b: EdgeRef) -> Gluing:
    return Gluing(a, b) if a <= b else Gluing(b, a)


class SurfaceComplex:
    """A validated closed euclidean triangulation.

    Instances are treated as immutable; operations that change the
    triangulation return a new complex.
    """

    def __init__(self, charts: Iterable[TriangleChart], gluings: Iterable, tol: float | None = None):
        self.tol = geom.get_tol() if tol is None else float(tol)
        if not self.tol > 0:
            raise ValidationError("BadTolerance", f"tol must be positive, got {self.tol}")
        charts = list(charts)
        by_id: dict[str, TriangleChart] = {}
        for ch in charts:
            if ch.id in by_id:
                raise ValidationError("DuplicateId", f"triangle id {ch.id!r} repeated")
            by_id[ch.id] = ch
        if not by_id:
            raise ValidationError("Empty", "surface has no triangles")
        self.charts = {k: by_id[k] for k in sorted(by_id)}
        self._check_charts()

        self._partner: dict[EdgeRef, EdgeRef] = {}
        glued = []
        for pair in gluings:
            left, right = (EdgeRef(str(t), int(k)) for t, k in pair)
            for ref in (left, right):
                if ref.triangle not in self.charts:
                    raise ValidationError("UnknownTriangle", f"gluing {pair} names unknown triangle {ref.triangle!r}")
                if ref.edge not in (0, 1, 2):
                    raise ValidationError("BadEdgeIndex", f"gluing {pair} uses edge index {ref.edge}")
            if left == right:
                raise ValidationError("SelfGluing", f"edge {left} glued to itself")
            for ref in (left, right):
                if ref in self._partner:
                    raise ValidationError("DuplicateGluing", f"edge {ref} appears in more than one gluing")
            l1 = self.charts[left.triangle].edge_length(left.edge)
            l2 = self.charts[right.triangle].edge_length(right.edge)
            if abs(l1 - l2) > self.tol * max(l1, l2):
                raise ValidationError("LengthMismatch",
                                      f"edges {left} and {right} have lengths {l1!r} and {l2!r}")
            self._partner[left] = right
            self._partner[right] = left
            glued.append(_canonical_gluing(left, right))
        self.gluings = tuple(sorted(glued))

        open_edges = [EdgeRef(t, k) for t in self.charts for k in range(3)
                      if EdgeRef(t, k) not in self._partner]
        if open_edges:
            raise ValidationError("OpenSurface", f"unglued edges: {open_edges}")
        self._check_connected()
        self._build_vertex_classes()

    def _check_charts(self):
        for ch in self.charts.values():
            if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in ch.corners):
                raise ValidationError("NonFinite", f"triangle {ch.id!r} has non-finite coordinates")
            scale = max(ch.edge_length(k) for k in range(3)) ** 2
            area = ch.signed_area
            if area <= 0 and abs(area) > self.tol * scale:
                raise ValidationError("NegativeOrientation", f"triangle {ch.id!r} is clockwise")
            if area <= self.tol * scale:
                raise ValidationError("Degenerate", f"triangle {ch.id!r} is degenerate")

    def _check_connected(self):
        start = next(iter(self.charts))
        seen = {start}
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for k in range(3):
                n = self._partner[EdgeRef(t, k)].triangle
                if n not in seen:
                    seen.add(n)
                    queue.append(n)
        if len(seen) != len(self.charts):
            missing = sorted(set(self.charts) - seen)
            raise ValidationError("Disconnected", f"triangles not reachable from {start!r}: {missing}")

    def _build_vertex_classes(self):
        corners = [Corner(t, c) for t in self.charts for c in range(3)]
        uf = _UnionFind(corners)
        for left, right in self.gluings:
            t1, e1 = left
            t2, e2 = right
            uf.union(Corner(t1, e1), Corner(t2, (e2 + 1) % 3))
            uf.union(Corner(t1, (e1 + 1) % 3), Corner(t2, e2))
        groups: dict[Corner, list[Corner]] = {}
        for c in corners:
            groups.setdefault(uf.find(c), []).append(c)
        ordered = sorted((sorted(m) for m in groups.values()), key=lambda m: m[0])
        self.vertex_classes = tuple(VertexClass(f"v{i}", tuple(m)) for i, m in enumerate(ordered))
        self._vertex_by_id = {v.id: v for v in self.vertex_classes}
        self._corner_vertex = {c: v.id for v in self.vertex_classes for c in v.members}

    # -- queries ---------------------------------------------------------

    def partner(self, ref) -> EdgeRef:
        return self._partner[EdgeRef(*ref)]

    def vertex(self, vid) -> VertexClass:
        if isinstance(vid, VertexClass):
            return vid
        try:
            return self._vertex_by_id[vid]
        except KeyError:
            raise KeyError(f"no vertex class {vid!r}") from None

    def vertex_of(self, triangle: str, corner: int) -> str:
        return self._corner_vertex[Corner(triangle, corner)]

    def edge_length(self, ref) -> float:
        t, k = ref
        return self.charts[t].edge_length(k)

    def max_edge_length(self) -> float:
        return max(ch.edge_length(k) for ch in self.charts.values() for k in range(3))

    def incident_edge_lengths(self, vid) -> list[float]:
        """Lengths of chart edges leaving the corners of a vertex class."""
        out = []
        for t, c in self.vertex(vid).members:
            ch = self.charts[t]
            out.append(ch.edge_length(c))
            out.append(ch.edge_length((c + 2) % 3))
        return out

    def scaled(self, factor: float) -> SurfaceComplex:
        """Homothetic copy with every chart coordinate multiplied by ``factor``."""
        if not factor > 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        charts = [TriangleChart(ch.id, tuple(factor * z for z in ch.corners))
                  for ch in self.charts.values()]
        return SurfaceComplex(charts, self.gluings, self.tol)

    def __eq__(self, other):
        if not isinstance(other, SurfaceComplex):
            return NotImplemented
        return (self.charts == other.charts and self.gluings == other.gluings
                and self.tol == other.tol)

    def __repr__(self):
        return (f"SurfaceComplex({len(self.charts)} charts, {len(self.gluings)} gluings, "
                f"{len(self.vertex_classes)} vertices)")

    # -- (de)serialization -----------------------------------------------

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "triangles": [{"id": ch.id,
                           "corners": [[z.real, z.imag] for z in ch.corners]}
                          for ch in self.charts.values()],
            "gluings": [[[l.triangle, l.edge], [r.triangle, r.edge]] for l, r in self.gluings],
        }


def serialize(s: SurfaceComplex) -> str:
    """Surface file text; floats are written in shortest round-trip form."""
    d = s.to_dict()
    lines = ["{", f'  "tol": {json.dumps(d["tol"])},', '  "triangles": [']
    tris = [f"    {json.dumps(t)}" for t in d["triangles"]]
    lines.append(",\n".join(tris))
    lines.append("  ],")
    lines.append('  "gluings": [')
    lines.append(",\n".join(f"    {json.dumps(g)}" for g in d["gluings"]))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def surface_from_dict(doc) -> SurfaceComplex:
    try:
        tol = doc.get("tol")
        charts = []
        for t in doc["triangles"]:
            pts = t["corners"]
            if len(pts) != 3:
                raise ParseError(f"triangle {t.get('id')!r} must have 3 corners")
            charts.append(TriangleChart(str(t["id"]), tuple(complex(float(x), float(y)) for x, y in pts)))
        gluings = []
        for g in doc["gluings"]:
            (t1, e1), (t2, e2) = g
            if isinstance(e1, bool) or isinstance(e2, bool) or not isinstance(e1, int) or not isinstance(e2, int):
                raise ParseError(f"edge indices must be integers in gluing {g}")
            gluings.append(((str(t1), e1), (str(t2), e2)))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"surface document does not match the schema: {exc}") from exc
    return SurfaceComplex(charts, gluings, tol)


def parse_surface(text) -> SurfaceComplex:
    """Parse and validate a surface file (bytes or str, UTF-8 JSON)."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"surface file is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("surface document must be a JSON object")
    return surface_from_dict(doc)


# -- curvature invariants -------------------------------------------------

def euler_characteristic(s: SurfaceComplex) -> int:
    return len(s.vertex_classes) - len(s.gluings) + len(s.charts)


def cone_angle(s: SurfaceComplex, v) -> float:
    """Total angle of the chart corners in a vertex class (radians)."""
    return math.fsum(s.charts[t].angle(c) for t, c in s.vertex(v).members)


def singularity_order(s: SurfaceComplex, v) -> float:
    return cone_angle(s, v) / (2 * math.pi) - 1


def gauss_bonnet_residual(s: SurfaceComplex) -> float:
    return euler_characteristic(s) + math.fsum(singularity_order(s, v) for v in s.vertex_classes)


def total_area(s: SurfaceComplex) -> float:
    return math.fsum(ch.signed_area for ch in s.charts.values())


def genus(s: SurfaceComplex) -> int:
    chi = euler_characteristic(s)
    if chi % 2 or chi > 2:
        raise NonOrientableOrInvalid(f"Euler characteristic {chi} is not that of a closed oriented surface")
    return (2 - chi) // 2


# -- hinge subdivision ----------------------------------------------------

@dataclass(frozen=True)
class SubdivisionRecord:
    """How a hinge subdivision relabels triangles, edges and vertices.

    ``edge_map`` sends every old edge to the new edges covering it, in
    traversal order (two for the split edge, one otherwise).  ``halves``
    lists, for each split triangle, its two pieces; both pieces keep the old
    chart coordinates and share the cut edge ``(first, 1) ~ (second, 2)``.
    """

    old: SurfaceComplex
    new: SurfaceComplex
    edge_map: dict
    halves: dict
    vertex_map: dict
    new_vertex: str
    point: complex = field(default=0j)

    def triangle_image(self, old_triangle: str) -> str:
        """The new triangle standing in for an old one as a loop base."""
        return self.halves.get(old_triangle, (old_triangle,))[0]


def _fresh_id(base: str, taken: set) -> str:
    cand, i = base, 0
    while cand in taken:
        i += 1
        cand = f"{base}~{i}"
    taken.add(cand)
    return cand


def hinge_subdivide(s: SurfaceComplex, e, t_param: float = 0.5):
    """Split both triangles of the hinge of ``e`` at a common point of ``e``.

    The point sits at ``(1-t)*start + t*end`` of edge ``e`` as drawn in its
    own chart; each triangle of the hinge is cut by the segment joining that
    point to its opposite corner.
    """
    e = EdgeRef(str(e[0]), int(e[1]))
    if e.triangle not in s.charts or e.edge not in (0, 1, 2):
        raise InvalidEdge(f"no edge {e}")
    if not 0 < t_param < 1:
        raise InvalidEdge(f"subdivision parameter must lie in (0, 1), got {t_param}")
    f = s.partner(e)
    if f.triangle == e.triangle:
        raise InvalidEdge(f"edge {e} is glued to another edge of the same triangle")

    taken = set(s.charts) - {e.triangle, f.triangle}
    new_charts = {t: ch for t, ch in s.charts.items() if t not in (e.triangle, f.triangle)}
    edge_map: dict[EdgeRef, tuple[EdgeRef, ...]] = {}
    halves = {}
    corner_map: dict[Corner, Corner] = {}

    def split(ref: EdgeRef, q: complex):
        ch = s.charts[ref.triangle]
        k = ref.edge
        A, B, C = ch.corners[k], ch.corners[(k + 1) % 3], ch.corners[(k + 2) % 3]
        ta = _fresh_id(f"{ch.id}.0", taken)
        tb = _fresh_id(f"{ch.id}.1", taken)
        new_charts[ta] = TriangleChart(ta, (A, q, C))
        new_charts[tb] = TriangleChart(tb, (q, B, C))
        halves[ch.id] = (ta, tb)
        edge_map[EdgeRef(ch.id, k)] = (EdgeRef(ta, 0), EdgeRef(tb, 0))
        edge_map[EdgeRef(ch.id, (k + 1) % 3)] = (EdgeRef(tb, 1),)
        edge_map[EdgeRef(ch.id, (k + 2) % 3)] = (EdgeRef(ta, 2),)
        corner_map[Corner(ch.id, k)] = Corner(ta, 0)
        corner_map[Corner(ch.id, (k + 1) % 3)] = Corner(tb, 1)
        corner_map[Corner(ch.id, (k + 2) % 3)] = Corner(ta, 2)
        return ta, tb

    ce, cf = s.charts[e.triangle], s.charts[f.triangle]
    q_e = (1 - t_param) * ce.corners[e.edge] + t_param * ce.corners[(e.edge + 1) % 3]
    # the same point seen from the other side, where the edge runs backwards
    q_f = (1 - t_param) * cf.corners[(f.edge + 1) % 3] + t_param * cf.corners[f.edge]
    ea, eb = split(e, q_e)
    fa, fb = split(f, q_f)

    def image(ref: EdgeRef) -> EdgeRef:
        mapped = edge_map.get(ref, (ref,))
        assert len(mapped) == 1
        return mapped[0]

    gluings = []
    for left, right in s.gluings:
        if {left, right} == {e, f}:
            continue
        gluings.append((image(left), image(right)))
    gluings += [
        (EdgeRef(ea, 1), EdgeRef(eb, 2)),
        (EdgeRef(fa, 1), EdgeRef(fb, 2)),
        # A->q on one side runs opposite to q->B' on the other
        (EdgeRef(ea, 0), EdgeRef(fb, 0)),
        (EdgeRef(eb, 0), EdgeRef(fa, 0)),
    ]
    new = SurfaceComplex(new_charts.values(), gluings, s.tol)
    vertex_map = {}
    for v in s.vertex_classes:
        rep = v.representative
        c = corner_map.get(rep, rep)
        vertex_map[v.id] = new.vertex_of(*c)
    rec = SubdivisionRecord(old=s, new=new, edge_map=edge_map, halves=halves,
                            vertex_map=vertex_map, new_vertex=new.vertex_of(ea, 1),
                            point=q_e)
    return new, rec


def remap_loop(rec: SubdivisionRecord, loop: DualLoop) -> DualLoop:
    """Carry a dual loop across a hinge subdivision.

    Crossings of unsplit edges are kept; crossings of split edges are
    replaced by the half the path is on, with a hop across the cut inside a
    split triangle whenever the path has to change halves.  The hops stay in
    one chart frame, so holonomy is unchanged.
    """
    old, new = rec.old, rec.new
    if loop.base_triangle not in old.charts:
        raise UnmappedStep(f"base triangle {loop.base_triangle!r} not in the subdivided complex")

    def hop(cur: str) -> DualStep:
        for pair in rec.halves.values():
            if cur == pair[0]:
                return DualStep(cur, 1)
            if cur == pair[1]:
                return DualStep(cur, 2)
        raise UnmappedStep(f"{cur!r} is not a half of a split triangle")

    steps: list[DualStep] = []
    cur_old = loop.base_triangle
    cur = rec.triangle_image(cur_old)
    for step in loop.steps:
        if step.from_triangle != cur_old:
            raise UnmappedStep(f"step {step} does not start at {cur_old!r}")
        ref = EdgeRef(step.from_triangle, step.crossed_edge)
        targets = rec.edge_map.get(ref, (ref,))
        here = [r for r in targets if r.triangle == cur]
        if here:
            target = here[0]
        else:
            target = targets[0]
            h = hop(cur)
            steps.append(h)
            cur = new.partner(h).triangle
            if cur != target.triangle:
                raise UnmappedStep(f"cannot reach edge {target} from {cur!r}")
        steps.append(DualStep(*target))
        cur = new.partner(target).triangle
        cur_old = old.partner(ref).triangle
    if cur_old != loop.base_triangle:
        raise UnmappedStep("loop does not return to its base triangle")
    base_new = rec.triangle_image(loop.base_triangle)
    if cur != base_new:
        h = hop(cur)
        steps.append(h)
        cur = new.partner(h).triangle
    return DualLoop(base_new, tuple(steps))
