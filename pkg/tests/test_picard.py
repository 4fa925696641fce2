import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.cubic import CubicHypersurface, build_sigma
from cremona.exact.fields import GF, random_primes
from cremona.exact.matrix import identity, mat_mul, mat_vec
from cremona.exact.unipoly import UniPoly
from cremona.picard import (
    HEF_MATRIX,
    PicBasis,
    PicClass,
    Verdict,
    all_reduced_words,
    alpha_vector,
    classify,
    cyclic_reduce,
    dyndeg,
    dyndeg_data,
    growth_invariants,
    hnu_matrix,
    is_involution_matrix,
    plane_twist_matrices,
    predicted_degree,
    reduced_words,
    sigma_action,
    support_matrix,
    word_matrix,
    word_reduce,
)

words = st.lists(st.integers(1, 4), max_size=12)


def test_hef_matrix():
    assert sigma_action(PicBasis.hef()) == ((3, 2, 4), (-2, -1, -4), (-1, -1, -1))
    assert is_involution_matrix(HEF_MATRIX)


def test_hnu_rules():
    b = PicBasis.hnu(2)
    m = sigma_action(b, 1)
    H, nu1, nu2 = (PicClass(b, v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert H.apply(m).coords == (1, 1, 0)
    assert nu2.apply(m).coords == (0, 2, 1)
    assert nu1.apply(m).coords == (0, -1, 0)


def test_plane_six_point_involution():
    m = sigma_action(PicBasis.plane_six_point())
    assert len(m) == 6 and is_involution_matrix(m)
    # it preserves the intersection form diag(1, -1, ..., -1)
    J = PicBasis.plane_six_point().form
    assert mat_mul(mat_mul(tuple(zip(*m)), J), m) == J


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_all_hnu_involutions(k):
    for i in range(1, k + 1):
        assert is_involution_matrix(hnu_matrix(k, i))


def test_basis_errors():
    with pytest.raises(ValueError):
        sigma_action(PicBasis.hef(), 2)
    with pytest.raises(ValueError):
        sigma_action(PicBasis.hnu(2), 3)
    with pytest.raises(ValueError):
        PicBasis.custom(["a", "a"])


def test_word_reduction():
    assert word_reduce([1, 1]) == ()
    assert word_reduce([2, 1, 1, 2, 3]) == (3,)
    assert cyclic_reduce([1, 2, 1]) == (2,)


def test_alpha_examples():
    assert alpha_vector([1], 3).alpha == (1, 0, 0)
    av = alpha_vector([1, 2])
    assert av.alpha == (3, 1) and predicted_degree([1, 2]) == 9
    assert predicted_degree([]) == 1 and predicted_degree([1]) == 3


@given(words)
@settings(max_examples=80)
def test_alpha_matches_matrix_product(w):
    w = word_reduce(w)
    k = 4
    img = mat_vec(word_matrix(w, k), (1,) + (0,) * k)
    av = alpha_vector(w, k)
    assert img == (1,) + av.alpha


@given(words)
@settings(max_examples=80)
def test_degree_symmetric_under_reversal(w):
    w = word_reduce(w)
    assert predicted_degree(w, 4) == predicted_degree(tuple(reversed(w)), 4)


def test_growth_invariants_exhaustive_small():
    for k in (2, 3):
        for w in all_reduced_words(7, k):
            assert all(growth_invariants(alpha_vector(w, k)).values()), w


def test_reduced_word_counts():
    for k in (2, 3, 4):
        for n in range(1, 6):
            assert sum(1 for _ in reduced_words(n, k)) == k * (k - 1) ** (n - 1)


def test_dyndeg_examples():
    d = dyndeg_data([1, 2])
    assert d.charpoly == UniPoly([-1, 3, -3, 1])
    assert d.dyndeg.is_rational and d.dyndeg.exact == 1
    big = dyndeg([1, 2, 3], Fraction(1, 10**10))
    assert big.width <= Fraction(1, 10**9)
    assert big.is_root_of(UniPoly([1, -18, 1]))
    assert abs(float(big) - (9 + 4 * 5**0.5)) < 1e-9
    assert dyndeg([1]).exact == 1


def test_classification_examples():
    assert classify([1]).verdict == Verdict.FINITE_ORDER
    assert classify([1, 2]).verdict == Verdict.INFINITE_DYNDEG_ONE
    c = classify([1, 2, 3])
    assert c.verdict == Verdict.DYNDEG_GREATER_ONE and c.dyndeg.lo > 1
    assert classify([2, 1, 2, 1, 2, 1]).verdict == Verdict.INFINITE_DYNDEG_ONE
    assert classify([1, 2, 1]).verdict == Verdict.FINITE_ORDER


def sympy_spectral_radius(m):
    ev = sympy.Matrix(m).eigenvals()
    return max(float(abs(sympy.N(e, 30))) for e in ev)


@given(st.lists(st.integers(1, 4), min_size=2, max_size=7))
@settings(max_examples=25)
def test_dyndeg_against_sympy(w):
    c = cyclic_reduce(w)
    if len(c) < 2:
        return
    support, m = support_matrix(c)
    cls = classify(c)
    rho = sympy_spectral_radius(m)
    assert abs(float(cls.dyndeg) - rho) < 1e-6
    if len(set(c)) >= 3:
        assert cls.verdict == Verdict.DYNDEG_GREATER_ONE and cls.dyndeg.lo > 1


@given(st.lists(st.integers(1, 4), min_size=2, max_size=8), st.integers(0, 20))
@settings(max_examples=40)
def test_dyndeg_conjugacy_invariance(w, r):
    c = cyclic_reduce(w)
    if len(c) < 2:
        return
    r %= len(c)
    rot = c[r:] + c[:r]
    a, b, rev = dyndeg_data(c), dyndeg_data(rot), dyndeg_data(tuple(reversed(c)))
    assert a.charpoly == b.charpoly == rev.charpoly


def test_twist_cases():
    one = plane_twist_matrices(1)
    assert one.charpoly == UniPoly([-1, 2, 0, 0, 0, 0, -2, 1])
    assert abs(float(one.dyndeg) - 1.946856) < 1e-5
    assert one.product_matches_table
    two = plane_twist_matrices(2)
    assert two.charpoly == UniPoly([-1, 3, 0, -3, 1])
    assert two.charpoly == UniPoly([-1, 1]) * UniPoly([1, 1]) * UniPoly([1, -3, 1])
    assert two.dyndeg.is_root_of(UniPoly([1, -3, 1]))
    for r in (one, two):
        assert mat_mul(r.sigma, r.sigma) == identity(len(r.sigma))
    with pytest.raises(ValueError):
        plane_twist_matrices(3)


def test_twist_constants_can_be_overridden():
    bad = plane_twist_matrices(2, constants={"twist2_tau": identity(4)})
    assert not bad.product_matches_table


def _evaluate_chain(sigmas, w, q, p):
    for a in reversed(w):
        q = [c(*q) % p for c in sigmas[a - 1].components]
        if not any(q):
            return None
    return q


def test_free_product_faithfulness_mod_p():
    p = random_primes(11, 1)[0]
    F = GF(p)
    Q = CubicHypersurface.parse("x0^3 + x1^3 + x2^3 + x3^3")
    pts = [(3, 4, 5, -6), (1, 6, 8, -9), (9, 10, -1, -12)]
    sigmas = [build_sigma(Q, pt).sigma.reduce(F) for pt in pts]
    rng = random.Random(0)
    for w in all_reduced_words(6, 3):
        if not w:
            continue
        moved = False
        for _ in range(8):
            q = [rng.randrange(p) for _ in range(4)]
            img = _evaluate_chain(sigmas, w, q, p)
            if img is None:
                continue
            # projectively different from q
            if any((img[i] * q[j] - img[j] * q[i]) % p for i in range(4) for j in range(i + 1, 4)):
                moved = True
                break
        assert moved, w
