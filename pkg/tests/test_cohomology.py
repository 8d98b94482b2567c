import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conesurf.cohomology import (Presentation, coboundary_vector, eval_word, free_group,
                                 h1_dimension, h1_representative, is_cocycle, lambda_form,
                                 lambda_matrix, numerical_rank, z1_dimension)
from conesurf.errors import InconsistentCharacter, UnknownGenerator
from conesurf.geom import SE2Element


def unit(t):
    return cmath.exp(1j * t)


def se2_product(rho, sigma, w):
    # oracle: multiply SE(2) elements letter by letter
    g = SE2Element(1, 0)
    for k, e in w:
        h = SE2Element(rho[k], sigma[k])
        g = g @ (h if e == 1 else h.inverse())
    return g


@st.composite
def char_and_words(draw, max_s=5):
    s = draw(st.integers(1, max_s))
    rho = [unit(draw(st.floats(-math.pi, math.pi))) for _ in range(s)]
    sigma = [complex(draw(st.floats(-5, 5)), draw(st.floats(-5, 5))) for _ in range(s)]
    letter = st.tuples(st.integers(0, s - 1), st.sampled_from([1, -1]))
    w1 = tuple(draw(st.lists(letter, max_size=8)))
    w2 = tuple(draw(st.lists(letter, max_size=8)))
    return np.array(rho), np.array(sigma), w1, w2


def test_eval_word_examples():
    assert eval_word([1j], [3], ()) == (1, 0)
    alpha, beta, x, y = unit(0.7), unit(-2.1), 1.5 - 2j, 0.3 + 1j
    r, t = eval_word([alpha, beta], [x, y], ((0, 1), (1, 1), (0, -1), (1, -1)))
    assert abs(r - 1) < 1e-15
    assert abs(t - ((1 - beta) * x - (1 - alpha) * y)) < 1e-12
    r, t = eval_word([-1], [5], ((0, 1), (0, 1)))
    assert abs(r - 1) < 1e-15 and abs(t) < 1e-15


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        eval_word([1], [0], ((3, 1),))
    with pytest.raises(UnknownGenerator):
        Presentation.parse(["a", "b"], "a c")


@given(char_and_words())
def test_eval_matches_se2_oracle(data):
    rho, sigma, w1, _ = data
    g = se2_product(rho, sigma, w1)
    r, t = eval_word(rho, sigma, w1)
    assert abs(r - g.u) < 1e-12 and abs(t - g.v) < 1e-10


@given(char_and_words())
def test_eval_concatenation(data):
    rho, sigma, w1, w2 = data
    r1, t1 = eval_word(rho, sigma, w1)
    _, t2 = eval_word(rho, sigma, w2)
    _, t12 = eval_word(rho, sigma, w1 + w2)
    assert abs(t12 - (t1 + r1 * t2)) < 1e-12 * (1 + abs(t12))


@given(char_and_words(), st.complex_numbers(max_magnitude=5))
def test_lambda_is_translation_form(data, c):
    rho, sigma, w1, _ = data
    lam = lambda_form(rho, w1)
    assert abs(lam @ sigma - eval_word(rho, sigma, w1)[1]) < 1e-10
    other = np.roll(sigma, 1)
    lhs = lam @ (sigma + c * other)
    assert abs(lhs - (lam @ sigma + c * (lam @ other))) < 1e-12 * (1 + abs(lhs))


@given(char_and_words())
def test_free_reduction_is_invisible(data):
    rho, sigma, w1, w2 = data
    padded = w1 + ((0, 1), (0, -1)) + w2
    assert np.allclose(lambda_form(rho, padded), lambda_form(rho, w1 + w2), atol=1e-12)


def test_lambda_examples():
    rho = [unit(0.4), unit(1.3), unit(2.0)]
    assert np.allclose(lambda_form(rho, ((1, 1),)), [0, 1, 0])
    assert np.allclose(lambda_form([-1], ((0, 1), (0, 1))), [0])
    a, b = rho[:2]
    lam = lambda_form([a, b], ((0, 1), (1, 1), (0, -1), (1, -1)))
    assert np.allclose(lam, [1 - b, -(1 - a)], atol=1e-15)


def test_presentation_parsing():
    p = Presentation.parse(["a", "b"], "a b a^-1 b^-1; a^2")
    assert p.relators[0] == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert p.relators[1] == ((0, 1), (0, 1))
    with pytest.raises(ValueError):
        Presentation(())
    with pytest.raises(ValueError):
        Presentation(("a", "a"))


def test_z1_examples():
    for s in range(1, 6):
        rho = [unit(0.3 * k + 0.1) for k in range(s)]
        assert z1_dimension(free_group(s), rho) == s
    p = Presentation.parse(["a"], "a a")
    assert z1_dimension(p, [-1]) == 1
    assert h1_dimension(p, [-1]) == 0
    comm = Presentation.parse(["a", "b"], "a b a^-1 b^-1")
    # the single commutator form (1-beta, -(1-alpha)) has rank 1
    assert z1_dimension(comm, [unit(1.0), unit(2.5)]) == 1
    assert h1_dimension(comm, [unit(1.0), unit(2.5)]) == 0
    assert z1_dimension(comm, [1, 1]) == 2


def test_inconsistent_character():
    p = Presentation.parse(["a"], "a a")
    with pytest.raises(InconsistentCharacter):
        z1_dimension(p, [1j])
    with pytest.raises(InconsistentCharacter):
        z1_dimension(free_group(2), [1j])
    with pytest.raises(ValueError):
        z1_dimension(free_group(1), [2])


def test_h1_free_examples():
    assert h1_dimension(free_group(3), [1j, 1, 1]) == 2
    assert h1_dimension(free_group(3), [1, 1, 1]) == 3


def test_coboundary_examples():
    assert np.allclose(coboundary_vector([1, 1]), 0)
    assert np.allclose(coboundary_vector([-1, -1]), [-2, -2])
    assert np.allclose(coboundary_vector([1j, 1]), [1j - 1, 0])


def test_h1_representative_examples():
    rho = np.array([-1, -1])
    w = h1_representative(rho, [1, 0])
    assert np.allclose(w, [0.5, -0.5], atol=1e-15)
    assert abs(np.vdot(coboundary_vector(rho), w)) < 1e-12
    assert np.allclose(h1_representative(rho, 3.7j * coboundary_vector(rho)), 0, atol=1e-12)
    assert np.allclose(h1_representative([1, 1], [3, 4]), [3, 4])


@settings(max_examples=200)
@given(st.lists(st.floats(-math.pi, math.pi), min_size=1, max_size=8),
       st.lists(st.complex_numbers(max_magnitude=10), min_size=8, max_size=8))
def test_h1_representative_projection(angles, tau):
    rho = np.exp(1j * np.array(angles))
    tau = np.array(tau[:len(rho)])
    w = h1_representative(rho, tau)
    assert abs(np.vdot(coboundary_vector(rho), w)) < 1e-12 * (1 + np.linalg.norm(tau)) * len(rho)
    assert np.allclose(h1_representative(rho, w), w, atol=1e-12 * (1 + np.linalg.norm(tau)))


def test_is_cocycle_examples():
    assert is_cocycle(free_group(2), [1j, -1], [3, 4])
    comm = Presentation.parse(["a", "b"], "a b a^-1 b^-1")
    alpha, beta = unit(0.9), unit(-0.4)
    assert is_cocycle(comm, [alpha, beta], [1 - alpha, 1 - beta])
    assert not is_cocycle(comm, [1j, 1j], [1, 0])


@settings(max_examples=100)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_coboundaries_are_cocycles(s, seed):
    rng = np.random.default_rng(seed)
    rho = np.exp(1j * rng.uniform(-np.pi, np.pi, s))
    # commutator relators are consistent with any abelian character
    rels = "; ".join(f"x1 x{k} x1^-1 x{k}^-1" for k in range(2, s + 1))
    p = Presentation.parse([f"x{k}" for k in range(1, s + 1)], rels)
    assert is_cocycle(p, rho, coboundary_vector(rho))
    assert is_cocycle(p, rho, (2 - 1j) * coboundary_vector(rho))


@settings(max_examples=100)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_one_relator_dimension(s, seed):
    rng = np.random.default_rng(seed)
    rho = np.exp(1j * rng.uniform(-np.pi, np.pi, s))
    # relator word with zero exponent sum in every letter keeps rho consistent
    letters = [(int(k), 1) for k in rng.integers(0, s, 5)]
    word = tuple(letters) + tuple((k, -1) for k, _ in rng.permutation(letters).tolist())
    p = Presentation(free_group(s).generators, (word,))
    lam = lambda_form(rho, word)
    oracle = np.linalg.matrix_rank(np.vstack([lam, coboundary_vector(rho)]), tol=1e-9)
    if oracle == 2:
        assert h1_dimension(p, rho) == s - 2
    assert h1_dimension(p, rho) == s - numerical_rank(lambda_matrix(p, rho)) - 1


def test_numerical_rank_cutoff():
    assert numerical_rank(np.diag([1.0, 1e-8, 1e-10])) == 2
    assert numerical_rank(np.zeros((2, 2))) == 0
    assert numerical_rank(np.zeros((0, 3))) == 0
