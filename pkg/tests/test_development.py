import cmath
import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conesurf.builders import cube, flat_torus, tetrahedron, torus_loops
from conesurf.development import (Placement, attach_basepath, develop_path, holonomy_of_loop,
                                  loop_concat, loop_inverse, mean_edge_length, path_isometry,
                                  unfold_hinge, vertex_star_loop)
from conesurf.errors import BaseMismatch, BrokenChain, NotIncident
from conesurf.geom import IDENTITY, SE2Element, se2_fixed_point
from conesurf.loops import DualLoop, DualStep, parse_path
from conesurf.surface import cone_angle, singularity_order

from conftest import random_loop, random_walk

NAMES = ["tetrahedron", "cube", "flat_torus", "pillowcase", "double_3gon", "double_7gon"]


def close(g, h, tol=1e-9):
    return abs(g.u - h.u) <= tol and abs(g.v - h.v) <= tol


def test_unfold_torus():
    s = flat_torus()
    p = unfold_hinge(s, Placement("t0", IDENTITY), 1)
    assert p.triangle == "t1" and close(p.iso, SE2Element(1, 1), 1e-12)


def test_unfold_back_and_forth(models):
    for name in NAMES:
        s = models[name].surface
        for t in s.charts:
            for k in range(3):
                p0 = Placement(t, SE2Element(cmath.exp(0.3j), 2 - 1j))
                p1 = unfold_hinge(s, p0, k)
                back = s.partner((t, k)).edge
                p2 = unfold_hinge(s, p1, back)
                assert p2.triangle == t and close(p2.iso, p0.iso, 1e-12)


def _side(a, b, z):
    return ((b - a).conjugate() * (z - a)).imag


def test_hinge_coherence(models, pyrandom):
    for name in NAMES:
        s = models[name].surface
        steps, _ = random_walk(s, "t0" if "t0" in s.charts else sorted(s.charts)[0], 30, pyrandom)
        chain = develop_path(s, IDENTITY, steps)
        for prev, cur, step in zip(chain.placements, chain.placements[1:], steps):
            k = step.crossed_edge
            e2 = s.partner((step.from_triangle, k)).edge
            pp, cp = prev.points(s), cur.points(s)
            scale = s.charts[prev.triangle].edge_length(k)
            assert abs(pp[k] - cp[(e2 + 1) % 3]) < 1e-9 * scale
            assert abs(pp[(k + 1) % 3] - cp[e2]) < 1e-9 * scale
            a, b = pp[k], pp[(k + 1) % 3]
            assert _side(a, b, pp[(k + 2) % 3]) > 0 > _side(a, b, cp[(e2 + 2) % 3])


def test_develop_examples():
    s = flat_torus()
    chain = develop_path(s, IDENTITY, (), "t0")
    assert len(chain.placements) == 1 and chain.placements[0].iso == IDENTITY
    a = torus_loops()["a"]
    chain = develop_path(s, IDENTITY, a.steps)
    assert len(chain.placements) == 3
    assert close(chain.last.iso, SE2Element(1, 1), 1e-12)
    g = SE2Element(cmath.exp(1j), 3 + 2j)
    moved = develop_path(s, g, a.steps)
    for p, q in zip(chain.placements, moved.placements):
        assert close(q.iso, g @ p.iso, 1e-12)


def test_broken_chain():
    s = flat_torus()
    with pytest.raises(BrokenChain):
        develop_path(s, IDENTITY, [DualStep("t0", 1), DualStep("t0", 0)])


def test_torus_holonomy():
    s = flat_torus()
    loops = torus_loops()
    a = holonomy_of_loop(s, loops["a"])
    b = holonomy_of_loop(s, loops["b"])
    assert close(a, SE2Element(1, 1), 1e-12)
    assert close(b, SE2Element(1, -1j), 1e-12)
    ab = holonomy_of_loop(s, loop_concat(loops["a"], loops["b"]))
    ba = holonomy_of_loop(s, loop_concat(loops["b"], loops["a"]))
    assert close(ab, SE2Element(1, 1 - 1j), 1e-12) and close(ba, ab, 1e-12)
    assert holonomy_of_loop(s, DualLoop("t0", ())) == IDENTITY


def test_concat_and_inverse_laws(models, pyrandom):
    for name in NAMES:
        s = models[name].surface
        base = sorted(s.charts)[0]
        for _ in range(10):
            l1, l2 = random_loop(s, base, pyrandom), random_loop(s, base, pyrandom)
            h1, h2 = holonomy_of_loop(s, l1), holonomy_of_loop(s, l2)
            assert close(holonomy_of_loop(s, loop_concat(l1, l2)), h1 @ h2)
            assert close(holonomy_of_loop(s, loop_inverse(s, l1)), h1.inverse())
            assert close(holonomy_of_loop(s, loop_concat(l1, loop_inverse(s, l1))), IDENTITY)
            assert loop_concat(l1, DualLoop(base, ())) == l1


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        loop_concat(DualLoop("t00", ()), DualLoop("t01", ()))


@pytest.mark.parametrize("name", NAMES)
def test_star_loops(models, name):
    s = models[name].surface
    for v in s.vertex_classes:
        theta = cone_angle(s, v.id)
        for t, c in v.members:
            star = vertex_star_loop(s, v.id, t, c)
            h = holonomy_of_loop(s, star)
            assert abs(h.u - cmath.exp(1j * theta)) < 1e-9
            beta = singularity_order(s, v.id)
            if abs(beta - round(beta)) > 1e-6:
                placed = s.charts[t].corners[c]
                assert abs(se2_fixed_point(h) - placed) < 1e-9 * mean_edge_length(s, v.id)
            else:
                assert close(h, IDENTITY)


def test_star_examples():
    s = cube()
    v = s.vertex_classes[0]
    h = holonomy_of_loop(s, vertex_star_loop(s, v.id, v.members[0].triangle))
    assert abs(h.u - cmath.exp(1.5j * math.pi)) < 1e-9
    t = flat_torus()
    assert close(holonomy_of_loop(t, vertex_star_loop(t, "v0", "t0")), IDENTITY)


def test_star_not_incident():
    s = tetrahedron()
    v = s.vertex_classes[0]
    outside = next(t for t in sorted(s.charts) if all(m.triangle != t for m in v.members))
    with pytest.raises(NotIncident):
        vertex_star_loop(s, v.id, outside)


def test_attach_basepath(models, pyrandom):
    s = models["cube"].surface
    v = s.vertex_classes[3]
    t, c = v.members[0]
    star = vertex_star_loop(s, v.id, t, c)
    assert attach_basepath(s, (), star) == star
    for _ in range(5):
        path, end = random_walk(s, "t05", 6, pyrandom)
        star = vertex_star_loop(s, v.id, end) if any(m.triangle == end for m in v.members) else None
        if star is None:
            continue
        loop = attach_basepath(s, path, star, base_triangle="t05")
        h = path_isometry(s, "t05", path)
        expect = h @ holonomy_of_loop(s, star) @ h.inverse()
        got = holonomy_of_loop(s, loop)
        assert close(got, expect) and abs(got.angle - holonomy_of_loop(s, star).angle) < 1e-9
    with pytest.raises(BrokenChain):
        attach_basepath(s, (DualStep("t05", 0),), DualLoop("t05", ()), base_triangle="t05")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(NAMES), st.integers(0, 10**6),
       st.floats(-math.pi, math.pi), st.complex_numbers(max_magnitude=10))
def test_base_conjugacy(models, name, seed, angle, shift):
    s = models[name].surface
    rnd = random.Random(seed)
    base = rnd.choice(sorted(s.charts))
    g = SE2Element(cmath.exp(1j * angle), shift)
    loop = random_loop(s, base, rnd)
    h = holonomy_of_loop(s, loop)
    assert close(holonomy_of_loop(s, loop, g), g @ h @ g.inverse())


def test_chain_export():
    s = flat_torus()
    chain = develop_path(s, IDENTITY, torus_loops()["a"].steps)
    doc = chain.to_dict(s)
    assert [p["triangle"] for p in doc["placements"]] == ["t0", "t1", "t0"]
    assert doc["placements"][2]["points"][0] == [1.0, 0.0]
    json.dumps(doc)
    svg = chain.to_svg(s, scale=10)
    assert svg.count("<polygon") == 3 and "10.00" in svg


def test_loop_json_and_paths():
    loop = DualLoop("t0", parse_path("t0:1,t1:0"))
    assert loop == torus_loops()["a"]
    assert DualLoop.from_json(loop.base_triangle, loop.to_json()) == loop
