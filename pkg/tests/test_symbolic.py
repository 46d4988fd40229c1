import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toposub.symbolic import (T_SUBST, TRIB_RING, TRIBONACCI, InvalidInput, PisotData, Substitution,
                              Unsupported, abelianize, beta_sign, fixed_point_prefix, incidence_matrix,
                              matrix_inverse, tribonacci_pisot, word_str)

M = np.array([[1, 1, 1], [1, 0, 0], [0, 1, 0]])
mpmath.mp.dps = 60
# the dominant root at 60 digits, computed independently of the interval code
BETA60 = mpmath.findroot(lambda x: x ** 3 - x ** 2 - x - 1, mpmath.mpf("1.8"))

words = st.text(alphabet="123", max_size=40)


def test_tribonacci_images():
    assert TRIBONACCI.images == ((1, 2), (1, 3), (1,))


def test_bad_letter_rejected():
    with pytest.raises(InvalidInput):
        Substitution.from_words(["14", "1", "2"])
    with pytest.raises(InvalidInput):
        abelianize("124")


@pytest.mark.parametrize("word,vec", [("", (0, 0, 0)), ("12", (1, 1, 0)), ("1213121", (4, 2, 1))])
def test_abelianize(word, vec):
    assert abelianize(word) == vec


def test_abelianize_long_word_is_m_cubed_e1():
    m3 = np.linalg.matrix_power(M, 3)
    assert tuple(m3[:, 0]) == abelianize("1213121")


@given(words, words)
def test_abelianize_additive(w, v):
    assert abelianize(w + v) == tuple(a + b for a, b in zip(abelianize(w), abelianize(v)))


@settings(max_examples=300)
@given(words)
def test_abelianize_intertwines_matrix(w):
    assert abelianize(TRIBONACCI.apply(w)) == tuple(M @ np.array(abelianize(w)))


def test_incidence_matrices():
    assert incidence_matrix(TRIBONACCI).tolist() == M.tolist()
    assert incidence_matrix(T_SUBST).tolist() == [[1, 1, 0], [0, 0, 1], [1, 0, 0]]
    ident = Substitution.from_words(["1", "2", "3"])
    assert incidence_matrix(ident).tolist() == np.eye(3, dtype=int).tolist()


def test_matrix_inverse():
    inv = matrix_inverse(M)
    assert inv.tolist() == [[0, 1, 0], [0, 0, 1], [1, -1, -1]]
    assert (M @ inv == np.eye(3)).all()
    assert matrix_inverse(np.eye(3, dtype=int)).tolist() == np.eye(3, dtype=int).tolist()
    m3 = np.linalg.matrix_power(M, 3)
    assert m3.tolist() == [[4, 3, 2], [2, 2, 1], [1, 1, 1]]
    assert (matrix_inverse(m3) @ m3 == np.eye(3)).all()


def test_matrix_inverse_rejects_non_unimodular():
    with pytest.raises(Unsupported):
        matrix_inverse([[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(Unsupported):
        matrix_inverse([[1, 1, 0], [1, 1, 0], [0, 0, 1]])


def test_fixed_point_prefix():
    assert word_str(fixed_point_prefix(TRIBONACCI, 1)) == "1"
    assert word_str(fixed_point_prefix(TRIBONACCI, 2)) == "12"
    assert word_str(fixed_point_prefix(TRIBONACCI, 7)) == "1213121"
    # the third letter is 1, not 3
    assert fixed_point_prefix(TRIBONACCI, 3)[2] == 1


def test_fixed_point_prefix_is_consistent():
    long = fixed_point_prefix(TRIBONACCI, 500)
    for n in (10, 81, 149, 274):
        assert fixed_point_prefix(TRIBONACCI, n) == long[:n]
    image = TRIBONACCI.apply(long[:100])
    assert image == long[:len(image)]


def test_fixed_point_prefix_needs_prolongable():
    with pytest.raises(InvalidInput):
        fixed_point_prefix(Substitution.from_words(["21", "1"]), 4)


def test_beta_sign_examples():
    assert beta_sign((0, 0, 0)) == 0
    assert beta_sign((1, -1, 0)) == -1
    assert beta_sign((-1, -1, 1)) == 1
    # beta^3 = beta^2 + beta + 1 reduces to zero
    b = TRIB_RING.beta
    assert (b ** 3 - b ** 2 - b - 1).coeffs == (0, 0, 0)


def test_beta_sign_matches_high_precision():
    rng = random.Random(2024)
    for _ in range(10_000):
        a, b, c = (rng.randint(-10 ** 6, 10 ** 6) for _ in range(3))
        ref = mpmath.sign(a + b * BETA60 + c * BETA60 ** 2)
        assert beta_sign((a, b, c)) == int(ref)


@settings(max_examples=300, deadline=None)
@given(st.tuples(*[st.integers(-50, 50)] * 3))
def test_beta_sign_nonzero(abc):
    if abc != (0, 0, 0):
        assert beta_sign(abc) != 0


def test_beta_sign_near_zero():
    # beta^-k has huge integer coefficients but a tiny positive value
    for k in range(10, 55):
        x = TRIB_RING.beta.inverse() ** k
        assert x.sign() == 1
        assert (-x).sign() == -1
        assert abs(x.a + x.b * BETA60 + x.c * BETA60 ** 2 - BETA60 ** -k) < mpmath.mpf(10) ** -40


@settings(max_examples=200)
@given(st.tuples(*[st.integers(-100, 100)] * 3), st.tuples(*[st.integers(-100, 100)] * 3))
def test_ring_arithmetic_matches_floats(x, y):
    bx, by = TRIB_RING(*x), TRIB_RING(*y)
    for got, want in ((bx + by, float(bx) + float(by)), (bx * by, float(bx) * float(by))):
        assert abs(float(got) - want) <= 1e-9 * max(1.0, abs(want))


def test_pisot_eigenvectors():
    p = tribonacci_pisot()
    assert p.check_eigen()
    b = TRIB_RING.beta
    assert [v.coeffs for v in p.w] == [b.coeffs, (b * b - b).coeffs, (1, 0, 0)]
    assert [v.coeffs for v in p.u_r] == [(b * b).coeffs, b.coeffs, (1, 0, 0)]
    assert (p.norm - (2 * b ** 3 - b ** 2 + 1)).coeffs == (0, 0, 0)
    assert p.ring.is_pisot()


def test_pisot_plane():
    p = tribonacci_pisot()
    basis = p.plane_basis
    assert np.allclose(basis @ basis.T, np.eye(2), atol=1e-12)
    assert np.abs(basis @ p.w_float).max() < 1e-9
    mods = np.abs(np.linalg.eigvals(p.h))
    assert np.allclose(mods, p.beta ** -0.5, atol=1e-12)


def test_pisot_generic_matrix():
    p = PisotData(incidence_matrix(T_SUBST))
    assert p.check_eigen()
    with pytest.raises(Unsupported):
        PisotData(np.eye(3, dtype=int))
