"""Developing maps along dual paths and holonomy of dual loops."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BaseMismatch, BrokenChain, NotIncident, UngluedEdge
from .geom import IDENTITY, SE2Element, isometry_from_edge_pair, se2_compose, se2_inverse
from .loops import DualLoop, DualStep
from .surface import EdgeRef, SurfaceComplex


@dataclass(frozen=True)
class Placement:
    """A triangle drawn in the developing plane as ``iso`` applied to its chart."""

    triangle: str
    iso: SE2Element = IDENTITY

    def points(self, s: SurfaceComplex) -> tuple[complex, complex, complex]:
        return tuple(self.iso(z) for z in s.charts[self.triangle].corners)


@dataclass(frozen=True)
class DevelopedChain:
    placements: tuple[Placement, ...]

    @property
    def last(self) -> Placement:
        return self.placements[-1]

    def to_dict(self, s: SurfaceComplex) -> dict:
        return {"placements": [
            {"triangle": p.triangle,
             "points": [[z.real, z.imag] for z in p.points(s)]}
            for p in self.placements]}

    def to_svg(self, s: SurfaceComplex, scale: float = 100.0) -> str:
        polys = [[(scale * z.real, -scale * z.imag) for z in p.points(s)]
                 for p in self.placements]
        xs = [x for poly in polys for x, _ in poly]
        ys = [y for poly in polys for _, y in poly]
        pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        x0, y0 = min(xs) - pad, min(ys) - pad
        w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.2f} {y0:.2f} {w:.2f} {h:.2f}">']
        for p, poly in zip(self.placements, polys):
            pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in poly)
            out.append(f'  <polygon data-triangle="{p.triangle}" points="{pts}" '
                       f'fill="none" stroke="black" stroke-width="{0.01 * scale:.2f}"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def unfold_hinge(s: SurfaceComplex, current: Placement, crossed_edge: int) -> Placement:
    """Place the neighbour across ``crossed_edge`` so the hinge lies flat."""
    ref = EdgeRef(current.triangle, int(crossed_edge))
    try:
        t2, e2 = s.partner(ref)
    except KeyError:
        raise UngluedEdge(f"edge {ref} is not glued") from None
    ch1, ch2 = s.charts[current.triangle], s.charts[t2]
    k = ref.edge
    p = current.iso(ch1.corners[k])
    q = current.iso(ch1.corners[(k + 1) % 3])
    iso = isometry_from_edge_pair(ch2.corners[e2], ch2.corners[(e2 + 1) % 3], q, p, tol=s.tol)
    return Placement(t2, iso)


def develop_path(s: SurfaceComplex, base_iso: SE2Element, steps: Sequence[DualStep],
                 base_triangle: str | None = None) -> DevelopedChain:
    steps = [DualStep(*st) for st in steps]
    if base_triangle is None:
        if not steps:
            raise BrokenChain("an empty path needs an explicit base triangle")
        base_triangle = steps[0].from_triangle
    if base_triangle not in s.charts:
        raise BrokenChain(f"unknown base triangle {base_triangle!r}")
    cur = Placement(base_triangle, base_iso)
    out = [cur]
    for i, st in enumerate(steps):
        if st.from_triangle != cur.triangle:
            raise BrokenChain(f"step {i} starts at {st.from_triangle!r} but the path is at {cur.triangle!r}")
        if st.crossed_edge not in (0, 1, 2):
            raise UngluedEdge(f"step {i} crosses nonexistent edge {st.crossed_edge}")
        cur = unfold_hinge(s, cur, st.crossed_edge)
        out.append(cur)
    return DevelopedChain(tuple(out))


def path_end(s: SurfaceComplex, start: str, steps: Sequence[DualStep]) -> str:
    """Triangle reached by walking ``steps`` from ``start`` (chaining checked)."""
    cur = start
    for i, (t, k) in enumerate(steps):
        if t != cur:
            raise BrokenChain(f"step {i} starts at {t!r} but the path is at {cur!r}")
        cur = s.partner((t, k)).triangle
    return cur


def holonomy_of_loop(s: SurfaceComplex, loop: DualLoop, base_iso: SE2Element = IDENTITY) -> SE2Element:
    """Plane isometry acquired by developing once around ``loop``.

    With a non-identity ``base_iso`` the result is measured relative to that
    placement, i.e. it is ``base_iso o hol o base_iso^-1``.
    """
    chain = develop_path(s, base_iso, loop.steps, loop.base_triangle)
    if chain.last.triangle != loop.base_triangle:
        raise BrokenChain(f"loop ends at {chain.last.triangle!r}, not at base {loop.base_triangle!r}")
    return se2_compose(chain.last.iso, se2_inverse(base_iso))


def path_isometry(s: SurfaceComplex, base_triangle: str, steps: Sequence[DualStep]) -> SE2Element:
    """Placement of the last triangle of an open path developed from the identity."""
    return develop_path(s, IDENTITY, steps, base_triangle).last.iso


def loop_concat(l1: DualLoop, l2: DualLoop) -> DualLoop:
    """First ``l1``, then ``l2``; holonomy is ``hol(l1) o hol(l2)``."""
    if l1.base_triangle != l2.base_triangle:
        raise BaseMismatch(f"loops based at {l1.base_triangle!r} and {l2.base_triangle!r}")
    return DualLoop(l1.base_triangle, l1.steps + l2.steps)


def reverse_steps(s: SurfaceComplex, steps: Sequence[DualStep]) -> tuple[DualStep, ...]:
    return tuple(DualStep(*s.partner(st)) for st in reversed(steps))


def loop_inverse(s: SurfaceComplex, loop: DualLoop) -> DualLoop:
    return DualLoop(loop.base_triangle, reverse_steps(s, loop.steps))


def vertex_star_loop(s: SurfaceComplex, v, start_triangle: str, corner: int | None = None) -> DualLoop:
    """Loop once counterclockwise around vertex ``v`` starting in ``start_triangle``.

    Around corner ``c`` of a chart, counterclockwise means leaving through
    the edge that ends at that corner, edge ``(c + 2) % 3``.  When the start
    triangle touches ``v`` at several corners, ``corner`` picks one (default:
    the lowest).
    """
    vc = s.vertex(v)
    mine = sorted(c for t, c in vc.members if t == start_triangle)
    if not mine or (corner is not None and corner not in mine):
        raise NotIncident(f"triangle {start_triangle!r} does not touch {vc.id} at the requested corner")
    c0 = mine[0] if corner is None else corner
    steps = []
    t, c = start_triangle, c0
    while True:
        e = (c + 2) % 3
        steps.append(DualStep(t, e))
        t, e2 = s.partner((t, e))
        # corner c = e+1 of the old triangle is corner e2 of the new one
        c = e2
        if (t, c) == (start_triangle, c0):
            break
        if len(steps) > 3 * len(s.charts):
            raise RuntimeError("star traversal did not close")
    return DualLoop(start_triangle, tuple(steps))


def attach_basepath(s: SurfaceComplex, path: Sequence[DualStep], loop: DualLoop,
                    base_triangle: str | None = None) -> DualLoop:
    """Conjugate ``loop`` by a path from the global base: ``path . loop . path^-1``."""
    path = tuple(DualStep(*st) for st in path)
    if not path:
        return loop
    start = path[0].from_triangle if base_triangle is None else base_triangle
    end = path_end(s, start, path)
    if end != loop.base_triangle:
        raise BrokenChain(f"path ends at {end!r}, loop is based at {loop.base_triangle!r}")
    return DualLoop(start, path + loop.steps + reverse_steps(s, path))


def mean_edge_length(s: SurfaceComplex, v) -> float:
    lengths = s.incident_edge_lengths(v)
    return math.fsum(lengths) / len(lengths)
