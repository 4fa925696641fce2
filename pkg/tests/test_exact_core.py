import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.errors import FieldMismatchError, NoRealRootError, ParseError, VariableCountError
from cremona.exact.fields import GF, QQ, FieldSpec, random_primes
from cremona.exact.matrix import char_poly, det_bareiss, identity
from cremona.exact.mpoly import MultiPoly
from cremona.exact.roots import largest_real_root, real_roots
from cremona.exact.unipoly import UniPoly
from cremona.ratmap import content_and_primitive

X = sympy.symbols("x0:4")


def to_sympy(p: MultiPoly):
    out = 0
    for e, c in p.terms().items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(X, e):
            term *= v**k
        out += term
    return sympy.expand(out)


small = st.integers(-6, 6)


@st.composite
def polys(draw, nvars=3, max_deg=3, field=QQ):
    terms = {}
    for _ in range(draw(st.integers(0, 6))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars))
        terms[e] = draw(small)
    return MultiPoly.from_terms(terms, nvars, field)


class TestFields:
    def test_parse_forms(self):
        assert FieldSpec.parse("QQ") == QQ
        assert FieldSpec.parse("GF(101)") == GF(101)
        assert FieldSpec.parse("F7") == GF(7)
        assert FieldSpec.parse(13) == GF(13)

    @pytest.mark.parametrize("bad", [2, 4, 15, 1 << 65])
    def test_rejects_non_odd_primes(self, bad):
        with pytest.raises(ValueError):
            GF(bad)

    def test_no_floats(self):
        with pytest.raises(TypeError):
            QQ(0.5)

    def test_fraction_reduction(self):
        F = GF(7)
        assert F(Fraction(1, 3)) == 5
        with pytest.raises(ZeroDivisionError):
            F(Fraction(1, 7))

    def test_random_primes_deterministic(self):
        a = random_primes(3, 4)
        assert a == random_primes(3, 4)
        assert all((1 << 31) <= p < (1 << 32) for p in a)
        assert all(p % 3 == 1 for p in random_primes(3, 3, one_mod_three=True))


class TestMultiPoly:
    def test_difference_of_squares(self):
        x0, x1 = MultiPoly.gens(2)
        assert (x0 + x1) * (x0 - x1) == x0**2 - x1**2

    def test_fermat_point(self):
        F = MultiPoly.parse("x0^3 + x1^3 + x2^3 + x3^3")
        assert F(1, -1, 0, 0) == 0

    def test_binary_restriction_degree(self):
        x, y, z = MultiPoly.gens(3)
        s, t = MultiPoly.gens(2)
        f = x**4 + 3 * y * z**3 - x * y * z**2
        g = f.compose(s + t, 2 * s - t, s * 3 + t * 5)
        assert g.nvars == 2 and g.is_homogeneous() and g.degree() == 4

    def test_plane_aliases_and_round_trip(self):
        p = MultiPoly.parse("x*z^5 + (y*z^2 + x^3)^2", 3)
        assert MultiPoly.parse(p.to_string(), 3) == p
        assert p.degree() == 6

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            MultiPoly.parse("x0 + * x1")

    def test_mismatches(self):
        a = MultiPoly.gen(0, 2)
        with pytest.raises(VariableCountError):
            a + MultiPoly.gen(0, 3)
        with pytest.raises(FieldMismatchError):
            a + MultiPoly.gen(0, 2, GF(7))

    @given(polys(), polys(), polys())
    @settings(max_examples=40)
    def test_ring_laws(self, a, b, c):
        assert a + b == b + a and a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @given(polys(), polys())
    @settings(max_examples=40)
    def test_matches_sympy(self, a, b):
        assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))
        assert to_sympy(a - b) == sympy.expand(to_sympy(a) - to_sympy(b))

    @given(polys(max_deg=2), polys(max_deg=2))
    @settings(max_examples=25)
    def test_gcd_matches_sympy(self, a, b):
        if a.is_zero() or b.is_zero():
            return
        g = a.gcd(b)
        h = sympy.gcd(to_sympy(a), to_sympy(b))
        assert sympy.simplify(to_sympy(g) / h).is_number

    @given(polys(), st.sampled_from(random_primes(0, 2)))
    @settings(max_examples=25)
    def test_reduction_commutes(self, a, p):
        F = GF(p)
        b = a * a + a
        assert b.reduce(F) == a.reduce(F) * a.reduce(F) + a.reduce(F)

    def test_substitution_preserves_homogeneity(self):
        rng = random.Random(1)
        x = MultiPoly.gens(3)
        f = x[0] ** 3 + x[1] * x[2] ** 2 - 4 * x[0] * x[1] * x[2]
        lin = [MultiPoly.linear_form([rng.randint(-3, 3) for _ in range(3)]) for _ in range(3)]
        g = f.compose(*lin)
        assert g.is_zero() or (g.is_homogeneous() and g.degree() == 3)


class TestContent:
    def test_common_factor_removed(self):
        x0, x1, x2 = MultiPoly.gens(3)
        common, prim = content_and_primitive([x0 * x2, x1 * x2, x2 * x2])
        assert prim == (x0, x1, x2) and common.degree() == 1

    def test_idempotent(self):
        x0, x1, x2 = MultiPoly.gens(3)
        comps = [x1 * x2, x0 * x2, x0 * x1]
        _, prim = content_and_primitive(comps)
        assert list(prim) == comps

    def test_all_zero_rejected(self):
        z = MultiPoly.zero(3)
        with pytest.raises(Exception):
            content_and_primitive([z, z, z])


def sympy_charpoly(m):
    x = sympy.Symbol("x")
    c = sympy.Matrix(m).charpoly(x).all_coeffs()
    return [int(v) for v in reversed(c)]


class TestMatrices:
    def test_case2_charpoly(self):
        m = ((3, 8, 0, 0), (0, 0, 0, 1), (-1, -3, 0, 0), (0, 0, 1, 0))
        assert char_poly(m) == UniPoly([-1, 3, 0, -3, 1])

    def test_identity_charpoly(self):
        assert char_poly(identity(2)) == UniPoly([1, -2, 1])

    @given(st.integers(1, 5).flatmap(lambda d: st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d)))
    @settings(max_examples=40)
    def test_against_sympy_and_det(self, rows):
        m = tuple(tuple(r) for r in rows)
        cp = char_poly(m)
        assert cp.integer_coeffs() == sympy_charpoly(rows)
        d = len(rows)
        assert cp(0) == (-1) ** d * det_bareiss(rows)
        assert det_bareiss(rows) == sympy.Matrix(rows).det()


class TestRoots:
    def test_golden_square(self):
        r = largest_real_root(UniPoly([1, -3, 1]), Fraction(1, 10**6))
        assert r.width <= Fraction(1, 10**6)
        assert abs(float(r) - 2.618034) < 1e-6

    def test_corrected_sextic(self):
        # x^6 - x^5 - x^4 - x^3 - x^2 - x + 1
        r = largest_real_root(UniPoly([1, -1, -1, -1, -1, -1, 1]), Fraction(1, 10**6))
        assert abs(float(r) - 1.946856) < 1e-5
        assert r.is_root_of(UniPoly([-1, 2, 0, 0, 0, 0, -2, 1]))

    def test_misprinted_sextic_has_other_root(self):
        r = largest_real_root(UniPoly([1, 0, -1, -1, -1, -1, 1]), Fraction(1, 10**6))
        assert abs(float(r) - 1.905166) < 1e-5

    def test_linear_exact(self):
        r = largest_real_root(UniPoly([-1, 1]))
        assert r.is_rational and r.exact == 1

    def test_no_real_root(self):
        with pytest.raises(NoRealRootError):
            largest_real_root(UniPoly([1, 0, 1]))

    @given(st.lists(st.integers(-5, 5), min_size=2, max_size=7))
    @settings(max_examples=60)
    def test_against_sympy(self, cs):
        f = UniPoly(cs)
        if f.degree() < 1:
            return
        x = sympy.Symbol("x")
        expr = sum(c * x**i for i, c in enumerate(cs))
        expected = sorted(set(sympy.real_roots(sympy.Poly(expr, x))), key=float)
        got = real_roots(f, Fraction(1, 10**8))
        assert len(got) == len(expected)
        for r, e in zip(got, expected):
            assert r.lo <= sympy.Rational(e) <= r.hi if e.is_rational else r.lo < e < r.hi
        if got:
            top = largest_real_root(f, Fraction(1, 10**8))
            assert top.lo < expected[-1] < top.hi or top.exact == expected[-1]
            # no sign change of f to the right of the interval
            assert not any(f(top.hi + k) * f(top.hi + k + 1) < 0 for k in range(0, 50))
