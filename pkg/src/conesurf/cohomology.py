"""First cohomology of finitely presented groups with scalar coefficients.

A character ``rho`` is an array of unit complex numbers, one per generator;
a cocycle vector ``sigma`` holds the values ``sigma(a_k)`` on the
generators.  Words are sequences of ``(generator_index, +1 | -1)`` pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import geom
from .errors import InconsistentCharacter, UnknownGenerator

RANK_RTOL = 1e-9

Word = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if not gens:
            raise ValueError("a presentation needs at least one generator")
        if len(set(gens)) != len(gens):
            raise ValueError("generator names must be distinct")
        object.__setattr__(self, "generators", gens)
        rels = tuple(_check_word(w, len(gens)) for w in self.relators)
        object.__setattr__(self, "relators", rels)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        """Parse ``"a b a^-1 b^-1"`` (spaces or ``*`` between letters)."""
        index = {g: i for i, g in enumerate(self.generators)}
        out = []
        for tok in re.split(r"[\s*]+", text.strip()):
            if not tok:
                continue
            name, _, power = tok.partition("^")
            if name not in index:
                raise UnknownGenerator(f"unknown generator {name!r}")
            exp = int(power) if power else 1
            if exp == 0:
                continue
            out.extend([(index[name], 1 if exp > 0 else -1)] * abs(exp))
        return tuple(out)

    @classmethod
    def parse(cls, generators, relators: str = "") -> Presentation:
        """Relators as text separated by ``;``."""
        p = cls(tuple(generators))
        rels = tuple(p.word(r) for r in relators.split(";") if r.strip())
        return cls(p.generators, rels)


def free_group(s: int) -> Presentation:
    return Presentation(tuple(f"x{i + 1}" for i in range(s)))


def _check_word(w, s: int) -> Word:
    out = []
    for gen, exp in w:
        if not (isinstance(gen, (int, np.integer)) and 0 <= gen < s):
            raise UnknownGenerator(f"letter {gen!r} is not one of {s} generators")
        if exp not in (1, -1):
            raise ValueError(f"letter exponents must be +1 or -1, got {exp}")
        out.append((int(gen), int(exp)))
    return tuple(out)


def _as_character(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex).ravel()
    if np.any(np.abs(np.abs(rho) - 1) > 1e-12):
        raise ValueError("character values must have unit modulus")
    return rho


def eval_word(rho, sigma, w) -> tuple[complex, complex]:
    """``(rho(w), sigma(w))``: the SE(2) product of the letters of ``w``."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    w = _check_word(w, len(rho))
    r, t = 1 + 0j, 0j
    for gen, exp in w:
        if exp == 1:
            lr, lt = rho[gen], sigma[gen]
        else:
            lr = 1 / rho[gen]
            lt = -lr * sigma[gen]
        t = t + r * lt
        r = r * lr
    return complex(r), complex(t)


def lambda_form(rho, r) -> np.ndarray:
    """Coefficients ``c`` with ``sum_k c_k sigma(a_k) = sigma(r)`` for every cocycle."""
    rho = np.asarray(rho, dtype=complex)
    r = _check_word(r, len(rho))
    coeffs = np.zeros(len(rho), dtype=complex)
    prefix = 1 + 0j
    for gen, exp in r:
        if exp == 1:
            coeffs[gen] += prefix
            prefix *= rho[gen]
        else:
            inv = 1 / rho[gen]
            coeffs[gen] -= prefix * inv
            prefix *= inv
    return coeffs


def lambda_matrix(p: Presentation, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if not p.relators:
        return np.zeros((0, p.rank), dtype=complex)
    return np.vstack([lambda_form(rho, r) for r in p.relators])


def _check_consistent(p: Presentation, rho, tol: float) -> np.ndarray:
    rho = _as_character(rho)
    if len(rho) != p.rank:
        raise InconsistentCharacter(f"character has {len(rho)} values for {p.rank} generators")
    for i, r in enumerate(p.relators):
        val, _ = eval_word(rho, np.zeros(p.rank), r)
        if abs(val - 1) > tol:
            raise InconsistentCharacter(f"rho(relator {i}) = {val}, not 1")
    return rho


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def z1_dimension(p: Presentation, rho, tol: float | None = None) -> int:
    tol = geom.get_tol() if tol is None else tol
    rho = _check_consistent(p, rho, tol)
    return p.rank - numerical_rank(lambda_matrix(p, rho))


def is_trivial(rho, tol: float | None = None) -> bool:
    tol = geom.get_tol() if tol is None else tol
    return bool(np.all(np.abs(np.asarray(rho, dtype=complex) - 1) <= tol))


def coboundary_vector(rho) -> np.ndarray:
    """Spanning vector ``rho(a_k) - 1`` of the coboundary line."""
    return np.asarray(rho, dtype=complex) - 1


def b1_dimension(rho, tol: float | None = None) -> int:
    return 0 if is_trivial(rho, tol) else 1


def h1_dimension(p: Presentation, rho, tol: float | None = None) -> int:
    return z1_dimension(p, rho, tol) - b1_dimension(rho, tol)


def h1_representative(rho, tau) -> np.ndarray:
    """``tau`` minus its Hermitian projection onto the coboundary line."""
    tau = np.asarray(tau, dtype=complex)
    delta = coboundary_vector(rho)
    nd = np.vdot(delta, delta).real
    if nd == 0:
        return tau.copy()
    return tau - (np.vdot(delta, tau) / nd) * delta


def is_cocycle(p: Presentation, rho, tau, tol: float | None = None) -> bool:
    tol = geom.get_tol() if tol is None else tol
    rho = _check_consistent(p, rho, tol)
    tau = np.asarray(tau, dtype=complex)
    bound = tol * (1 + np.linalg.norm(tau))
    return all(abs(np.dot(lambda_form(rho, r), tau)) <= bound for r in p.relators)
