"""Orientation-preserving plane isometries and similarities.

Points of the plane are complex numbers.  Both groups act by the affine rule
``z -> u*z + v`` (the upper-triangular matrix ``[[u, v], [0, 1]]`` acting on
the column ``(z, 1)``); every other module relies on this single convention.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateSegment, LengthMismatch, NoFixedPoint

_TOL = 1e-9


def get_tol() -> float:
    """Default relative tolerance used when a caller does not pass one."""
    return _TOL


def set_tol(tol: float) -> None:
    global _TOL
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _TOL = float(tol)


def _unit(u: complex) -> complex:
    r = abs(u)
    if r == 0 or not math.isfinite(r):
        raise ValueError(f"rotation part must be a nonzero finite number, got {u!r}")
    return u / r


@dataclass(frozen=True)
class SE2Element:
    """Rotation ``u`` (unit modulus) followed by translation ``v``."""

    u: complex = 1 + 0j
    v: complex = 0j

    def __post_init__(self):
        # renormalize so long loop products stay on U(1)
        object.__setattr__(self, "u", _unit(complex(self.u)))
        object.__setattr__(self, "v", complex(self.v))

    def __matmul__(self, other: SE2Element) -> SE2Element:
        return se2_compose(self, other)

    def __call__(self, z: complex) -> complex:
        return self.u * z + self.v

    def inverse(self) -> SE2Element:
        return se2_inverse(self)

    @property
    def angle(self) -> float:
        """Rotation angle in (-pi, pi]."""
        return cmath.phase(self.u)

    def is_close(self, other: SE2Element, tol: float = 1e-9) -> bool:
        return abs(self.u - other.u) <= tol and abs(self.v - other.v) <= tol


IDENTITY = SE2Element()


@dataclass(frozen=True)
class Sim2Element:
    """Similarity ``z -> a*z + b`` with ``a != 0``."""

    a: complex = 1 + 0j
    b: complex = 0j

    def __post_init__(self):
        a = complex(self.a)
        if a == 0:
            raise ValueError("similarity needs a nonzero linear part")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", complex(self.b))

    def __matmul__(self, other: Sim2Element) -> Sim2Element:
        return Sim2Element(self.a * other.a, self.b + self.a * other.b)

    def __call__(self, z: complex) -> complex:
        return self.a * z + self.b

    def inverse(self) -> Sim2Element:
        return Sim2Element(1 / self.a, -self.b / self.a)


def se2_compose(g1: SE2Element, g2: SE2Element) -> SE2Element:
    """``g1 o g2``: apply ``g2`` first, then ``g1``."""
    return SE2Element(g1.u * g2.u, g1.v + g1.u * g2.v)


def se2_inverse(g: SE2Element) -> SE2Element:
    w = g.u.conjugate()
    return SE2Element(w, -w * g.v)


def se2_fixed_point(g: SE2Element, tol: float | None = None) -> complex:
    """Centre ``v / (1 - u)`` of a nontrivial rotation."""
    tol = _TOL if tol is None else tol
    if abs(g.u - 1) <= tol:
        raise NoFixedPoint(f"{g} is a translation or the identity")
    return g.v / (1 - g.u)


def sim2_conjugate_se2(g: Sim2Element, phi: SE2Element) -> SE2Element:
    """``g o phi o g^-1``, written directly so the rotation part is untouched."""
    return SE2Element(phi.u, g.a * phi.v + g.b * (1 - phi.u))


def isometry_from_edge_pair(src_start: complex, src_end: complex,
                            dst_start: complex, dst_end: complex,
                            tol: float | None = None) -> SE2Element:
    """The orientation-preserving isometry taking one segment onto another."""
    tol = _TOL if tol is None else tol
    ds = complex(src_end) - complex(src_start)
    dd = complex(dst_end) - complex(dst_start)
    ls, ld = abs(ds), abs(dd)
    if ls == 0 or ld == 0:
        raise DegenerateSegment("zero-length segment")
    if abs(ls - ld) > tol * max(ls, ld):
        raise LengthMismatch(f"segment lengths {ls!r} and {ld!r} differ")
    u = _unit(dd / ds)
    # anchor on the midpoint so both endpoints carry half the length mismatch
    mid_s = (complex(src_start) + complex(src_end)) / 2
    mid_d = (complex(dst_start) + complex(dst_end)) / 2
    return SE2Element(u, mid_d - u * mid_s)
