"""Holonomy representations of marked flat surfaces and their classification.

A marking fixes loops ``a_1..a_g, b_1..b_g, c_1..c_n`` at a base triangle
satisfying ``prod [a_i, b_i] = prod c_j``, with ``c_j`` circling puncture
``j``.  The holonomy splits into a character ``rho`` and a translation
cocycle ``tau``; up to similarity it is recorded as a point of
``T^{2g} x CP^{2g+n-3}``: the character on the ``a_i, b_i`` plus the
projective class of ``tau`` in H^1 of the free group on
``a_1..b_g, c_1..c_{n-1}``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import geom
from .cohomology import coboundary_vector, eval_word, h1_representative, is_trivial
from .development import develop_path, holonomy_of_loop
from .errors import (ConesurfError, HypothesisViolated, IntegerOrder, MarkingInvalid,
                     NonpositiveScale, NullCohomologyClass, ParseError, ShapeMismatch,
                     TrivialCharacter)
from .geom import IDENTITY, SE2Element, Sim2Element, sim2_conjugate_se2
from .loops import DualLoop
from .surface import SubdivisionRecord, SurfaceComplex, remap_loop

DM_WINDOW = 1e-9


@dataclass(frozen=True)
class Marking:
    base_triangle: str
    a_loops: tuple[DualLoop, ...]
    b_loops: tuple[DualLoop, ...]
    c_loops: tuple[DualLoop, ...]
    punctures: tuple[str, ...]

    def __post_init__(self):
        for name in ("a_loops", "b_loops", "c_loops", "punctures"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.a_loops) != len(self.b_loops):
            raise MarkingInvalid("a and b loops must come in pairs")
        if len(self.c_loops) != len(self.punctures):
            raise MarkingInvalid("one c loop per puncture")
        if self.n < 1:
            raise MarkingInvalid("a marking needs at least one puncture")
        if 2 * self.g + self.n - 2 <= 0:
            raise MarkingInvalid(f"(g, n) = ({self.g}, {self.n}) has 2g + n - 2 <= 0")
        for loop in self.loops:
            if loop.base_triangle != self.base_triangle:
                raise MarkingInvalid(f"loop based at {loop.base_triangle!r}, marking base is {self.base_triangle!r}")

    @property
    def g(self) -> int:
        return len(self.a_loops)

    @property
    def n(self) -> int:
        return len(self.c_loops)

    @property
    def loops(self) -> tuple[DualLoop, ...]:
        return self.a_loops + self.b_loops + self.c_loops

    @property
    def names(self) -> tuple[str, ...]:
        return generator_names(self.g, self.n)

    def to_dict(self) -> dict:
        return {"base": self.base_triangle,
                "a": [l.to_json() for l in self.a_loops],
                "b": [l.to_json() for l in self.b_loops],
                "c": [l.to_json() for l in self.c_loops],
                "punctures": list(self.punctures)}


def generator_names(g: int, n: int) -> tuple[str, ...]:
    return (tuple(f"a{i + 1}" for i in range(g)) + tuple(f"b{i + 1}" for i in range(g))
            + tuple(f"c{j + 1}" for j in range(n)))


def marking_from_dict(doc) -> Marking:
    try:
        base = str(doc["base"])
        loops = {k: tuple(DualLoop.from_json(base, l) for l in doc.get(k, [])) for k in "abc"}
        punctures = tuple(str(p) for p in doc["punctures"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"marking document does not match the schema: {exc}") from exc
    return Marking(base, loops["a"], loops["b"], loops["c"], punctures)


def parse_marking(text) -> Marking:
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("marking document must be a JSON object")
    return marking_from_dict(doc)


def serialize_marking(m: Marking) -> str:
    d = m.to_dict()
    parts = [f'  "base": {json.dumps(d["base"])}']
    for k in "abc":
        loops = ",\n".join(f"    {json.dumps(l)}" for l in d[k])
        parts.append(f'  "{k}": [\n{loops}\n  ]' if loops else f'  "{k}": []')
    parts.append(f'  "punctures": {json.dumps(d["punctures"])}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def remap_marking(rec: SubdivisionRecord, m: Marking) -> Marking:
    """Carry a marking across a hinge subdivision."""
    remap = lambda loops: tuple(remap_loop(rec, l) for l in loops)
    return Marking(rec.triangle_image(m.base_triangle), remap(m.a_loops), remap(m.b_loops),
                   remap(m.c_loops), tuple(rec.vertex_map[p] for p in m.punctures))


@dataclass(frozen=True)
class BetaVector:
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(b) for b in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def violations(self, g: int, tol: float = 1e-9) -> list[str]:
        out = [f"beta_{j + 1} = {b} <= -1" for j, b in enumerate(self.values) if not b > -1]
        total = math.fsum(self.values)
        if abs(total - (2 * g - 2)) > tol:
            out.append(f"sum of orders {total} != 2g - 2 = {2 * g - 2}")
        return out

    def integer_indices(self, tol: float = 1e-9) -> list[int]:
        return [j for j, b in enumerate(self.values) if abs(b - round(b)) <= tol]


@dataclass(frozen=True)
class Representation:
    """Generator values of a homomorphism into SE(2): ``g -> (rho, tau)``."""

    g: int
    n: int
    rho: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex).copy()
        tau = np.asarray(self.tau, dtype=complex).copy()
        if rho.shape != (2 * self.g + self.n,) or tau.shape != rho.shape:
            raise ShapeMismatch(f"expected {2 * self.g + self.n} generator values")
        rho /= np.abs(rho)
        rho.flags.writeable = False
        tau.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "tau", tau)

    @property
    def names(self) -> tuple[str, ...]:
        return generator_names(self.g, self.n)

    def element(self, k: int) -> SE2Element:
        return SE2Element(self.rho[k], self.tau[k])

    def elements(self) -> list[SE2Element]:
        return [self.element(k) for k in range(len(self.rho))]

    @classmethod
    def from_elements(cls, g: int, n: int, elems: Sequence[SE2Element]) -> Representation:
        return cls(g, n, [e.u for e in elems], [e.v for e in elems])


def relator_word(g: int, n: int):
    """``prod [a_i, b_i] * (c_1 ... c_n)^-1`` as a word in generator indices."""
    w = []
    for i in range(g):
        a, b = i, g + i
        w += [(a, 1), (b, 1), (a, -1), (b, -1)]
    w += [(2 * g + j, -1) for j in reversed(range(n))]
    return tuple(w)


def extract_representation(s: SurfaceComplex, m: Marking, base_iso: SE2Element = IDENTITY) -> Representation:
    return Representation.from_elements(m.g, m.n, [holonomy_of_loop(s, l, base_iso) for l in m.loops])


def rescale_representation(r: Representation, lam: float) -> Representation:
    if not lam > 0:
        raise NonpositiveScale(f"scale must be positive, got {lam}")
    return Representation(r.g, r.n, r.rho, lam * r.tau)


def conjugate_representation(r: Representation, sim: Sim2Element) -> Representation:
    return Representation.from_elements(r.g, r.n, [sim2_conjugate_se2(sim, e) for e in r.elements()])


class CommonFixedPoint(NamedTuple):
    point: complex
    degenerate: bool = False


def common_fixed_point(r: Representation, tol: float | None = None) -> CommonFixedPoint | None:
    """A point fixed by every generator, if there is one."""
    tol = geom.get_tol() if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(r.tau)))) if len(r.tau) else 1.0
    candidates = []
    for u, v in zip(r.rho, r.tau):
        if abs(u - 1) <= tol:
            if abs(v) > tol * scale:
                return None  # a genuine translation fixes nothing
            continue
        candidates.append(v / (1 - u))
    if not candidates:
        return CommonFixedPoint(0j, True)
    z = candidates[0]
    zscale = max(1.0, abs(z))
    for u, v in zip(r.rho, r.tau):
        if abs(u * z + v - z) > tol * scale * zscale:
            return None
    return CommonFixedPoint(complex(z))


@dataclass
class MarkingReport:
    relator_ok: bool = False
    relator_rotation_error: float = math.nan
    relator_translation_error: float = math.nan
    angle_ok: list = field(default_factory=list)
    fixed_point_ok: list = field(default_factory=list)
    beta_ok: bool = False
    beta_problems: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (not self.errors and self.relator_ok and all(self.angle_ok)
                and all(ok is not False for ok in self.fixed_point_ok) and self.beta_ok)

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "relator": {"ok": self.relator_ok,
                            "rotation_error": self.relator_rotation_error,
                            "translation_error": self.relator_translation_error},
                "angles": self.angle_ok,
                "fixed_points": self.fixed_point_ok,
                "beta": {"ok": self.beta_ok, "problems": self.beta_problems},
                "errors": self.errors,
                "warnings": self.warnings}


def _puncture_lifts(s: SurfaceComplex, loop: DualLoop, vid: str) -> list[complex]:
    chain = develop_path(s, IDENTITY, loop.steps, loop.base_triangle)
    out = []
    for p in chain.placements:
        ch = s.charts[p.triangle]
        for c in range(3):
            if s.vertex_of(p.triangle, c) == vid:
                out.append(p.iso(ch.corners[c]))
    return out


def validate_marking(s: SurfaceComplex, m: Marking, beta, tol: float | None = None) -> MarkingReport:
    """Numerical consistency checks of a marking against the surface and orders.

    Checks the surface-group relator, the rotation angle of each ``c_j``
    against ``2 pi (beta_j + 1)``, the position of each ``c_j``'s centre at a
    developed copy of its puncture, and the order-vector constraints.
    """
    tol = s.tol if tol is None else tol
    beta = beta if isinstance(beta, BetaVector) else BetaVector(tuple(beta))
    rep = MarkingReport()
    rep.beta_problems = beta.violations(m.g, tol)
    if len(beta) != m.n:
        rep.beta_problems.append(f"{len(beta)} orders for {m.n} punctures")
    rep.beta_ok = not rep.beta_problems
    for p in m.punctures:
        try:
            s.vertex(p)
        except KeyError:
            rep.errors.append(f"unknown puncture vertex {p!r}")
    if m.base_triangle not in s.charts:
        rep.errors.append(f"unknown base triangle {m.base_triangle!r}")
    if rep.errors:
        return rep
    try:
        r = extract_representation(s, m)
    except ConesurfError as exc:
        rep.errors.append(f"cannot develop marking loops: {exc}")
        return rep

    ru, rv = eval_word(r.rho, r.tau, relator_word(m.g, m.n))
    rep.relator_rotation_error = abs(ru - 1)
    rep.relator_translation_error = abs(rv)
    rep.relator_ok = (rep.relator_rotation_error <= tol
                      and rep.relator_translation_error <= tol * s.max_edge_length())

    for j, vid in enumerate(m.punctures):
        u = r.rho[2 * m.g + j]
        if j >= len(beta):
            rep.angle_ok.append(False)
            rep.fixed_point_ok.append(None)
            continue
        b = beta.values[j]
        expected = cmath.exp(2j * math.pi * (b + 1))
        rep.angle_ok.append(bool(abs(u - expected) <= tol))
        if abs(b - round(b)) <= tol:
            rep.fixed_point_ok.append(None)
            continue
        if abs(1 - u) < 1e-3:
            rep.warnings.append(f"c{j + 1}: order {b} is close to an integer; fixed point is ill-conditioned")
        if abs(1 - u) <= tol:
            rep.fixed_point_ok.append(False)
            continue
        centre = r.tau[2 * m.g + j] / (1 - u)
        scale = sum(s.incident_edge_lengths(vid)) / len(s.incident_edge_lengths(vid))
        lifts = _puncture_lifts(s, m.c_loops[j], vid)
        rep.fixed_point_ok.append(bool(lifts) and bool(min(abs(z - centre) for z in lifts) <= tol * scale))
    return rep


@dataclass(frozen=True)
class XiPoint:
    """``torus``: the character on ``a_1..b_g``.  ``proj``: homogeneous
    coordinates (length ``2g+n-2``) of the H^1 class in an orthonormal basis
    of the complement of the coboundary line.  ``cocycle`` is the same class
    as a unit vector of ``C^{2g+n-1}`` orthogonal to the coboundary vector.
    """

    g: int
    n: int
    torus: np.ndarray
    proj: np.ndarray
    cocycle: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"g": self.g, "n": self.n,
                "torus": [[z.real, z.imag] for z in self.torus],
                "proj": [[z.real, z.imag] for z in self.proj]}


def reduced_generators(g: int, n: int) -> slice:
    """Free generating set ``a_1..b_g, c_1..c_{n-1}`` (``c_n`` is dropped)."""
    return slice(0, 2 * g + n - 1)


def projected_class(r: Representation) -> tuple[np.ndarray, np.ndarray]:
    """``(rho, tau_perp)`` on the reduced generators, ``tau_perp`` orthogonal to coboundaries."""
    sl = reduced_generators(r.g, r.n)
    rho, tau = np.asarray(r.rho[sl]), np.asarray(r.tau[sl])
    return rho, h1_representative(rho, tau)


def normalize_projective(w: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Unit vector with its largest entry (lowest index on ties) real positive."""
    w = np.asarray(w, dtype=complex) / np.linalg.norm(w)
    mags = np.abs(w)
    k = int(np.flatnonzero(mags >= mags.max() - tol)[0])
    w = w * (w[k].conjugate() / mags[k])
    w[k] = abs(w[k])
    return w


def complement_basis(rho) -> np.ndarray:
    """Unitary ``H`` whose columns ``1..s-1`` span the complement of the coboundary line.

    ``H`` is the Householder reflector sending the unit coboundary direction
    to a multiple of the first basis vector; it depends on ``rho`` only.
    """
    delta = coboundary_vector(rho)
    s = len(delta)
    nd = np.linalg.norm(delta)
    if nd == 0:
        return np.eye(s, dtype=complex)
    e = delta / nd
    beta = -e[0] / abs(e[0]) if e[0] != 0 else -1 + 0j
    v = e - beta * np.eye(s, dtype=complex)[0]
    nv = np.vdot(v, v).real
    if nv == 0:
        return np.eye(s, dtype=complex)
    return np.eye(s, dtype=complex) - 2 * np.outer(v, v.conj()) / nv


def xi_from_representation(r: Representation, tol: float | None = None) -> XiPoint:
    tol = geom.get_tol() if tol is None else tol
    rho, w = projected_class(r)
    if is_trivial(rho, tol):
        raise TrivialCharacter("the character is trivial on the reduced generators")
    tau_norm = np.linalg.norm(r.tau[reduced_generators(r.g, r.n)])
    if not np.linalg.norm(w) > tol * tau_norm or tau_norm == 0:
        raise NullCohomologyClass("the translation cocycle is a coboundary")
    h = complement_basis(rho)
    coords = normalize_projective((h.conj().T @ w)[1:], tol)
    return XiPoint(r.g, r.n, np.array(r.rho[:2 * r.g]), coords, h[:, 1:] @ coords)


def classify_xi(s: SurfaceComplex, m: Marking, beta, base_iso: SE2Element = IDENTITY,
                tol: float | None = None) -> XiPoint:
    """Classification point of a marked flat surface with non-integer orders."""
    tol = s.tol if tol is None else tol
    beta = beta if isinstance(beta, BetaVector) else BetaVector(tuple(beta))
    ints = beta.integer_indices(tol)
    if ints:
        raise IntegerOrder(f"orders at punctures {[j + 1 for j in ints]} are integers")
    report = validate_marking(s, m, beta, tol)
    if not report.passed:
        raise MarkingInvalid(json.dumps(report.to_dict(), default=str))
    return xi_from_representation(extract_representation(s, m, base_iso), tol)


def _angle_gap(x: complex, y: complex) -> float:
    return abs(cmath.phase(x * y.conjugate()))


def xi_distance(x: XiPoint, y: XiPoint) -> float:
    """Max of torus angle gaps and the Fubini-Study distance of the projective parts.

    The Fubini-Study angle is evaluated from the chord between phase-aligned
    unit representatives, ``2 asin(|x - e^{i phi} y| / 2)``, rather than
    ``arccos |<x,y>|``, which loses half the digits near 0.
    """
    if (x.g, x.n) != (y.g, y.n) or x.proj.shape != y.proj.shape:
        raise ShapeMismatch(f"(g, n) = ({x.g}, {x.n}) vs ({y.g}, {y.n})")
    gaps = [_angle_gap(a, b) for a, b in zip(x.torus, y.torus)]
    px = x.proj / np.linalg.norm(x.proj)
    py = y.proj / np.linalg.norm(y.proj)
    ip = np.vdot(py, px)
    phase = ip / abs(ip) if ip != 0 else 1
    fs = 2 * math.asin(min(1.0, np.linalg.norm(px - phase * py) / 2))
    return max(gaps + [fs])


def dm_condition(beta, tol: float = 1e-9) -> bool:
    """Integrality condition on pairs of cone-sphere orders."""
    beta = [float(b) for b in beta]
    bad = [b for b in beta if not -1 < b < 0]
    if bad:
        raise HypothesisViolated(f"orders {bad} lie outside (-1, 0)")
    if abs(math.fsum(beta) + 2) > tol:
        raise HypothesisViolated(f"orders sum to {math.fsum(beta)}, not -2")
    for i in range(len(beta)):
        for j in range(i + 1, len(beta)):
            s = 1 + beta[i] + beta[j]
            if s > tol:
                x = 1 / s
                k = round(x)
                if k < 1 or abs(x - k) > DM_WINDOW:
                    return False
    return True


def coboundary_direction(r: Representation) -> np.ndarray:
    return coboundary_vector(r.rho[reduced_generators(r.g, r.n)])
