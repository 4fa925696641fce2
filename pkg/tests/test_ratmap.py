import json
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.cubic import CubicHypersurface, build_sigma, random_cubic_with_point
from cremona.errors import DegenerateCompositionError, WorkBoundExceeded
from cremona.exact.fields import GF, QQ
from cremona.exact.mpoly import MultiPoly
from cremona.picard import predicted_degree
from cremona.plane.maps import chi_model
from cremona.ratmap import (
    RationalMapN,
    compose,
    contracts,
    degree_certificate,
    degree_sequence,
    effective_degree,
    is_identity,
    jacobian_det,
    same_map,
)

STD = ("y*z", "x*z", "x*y")
x, y, z = sympy.symbols("x y z")


def plane(*comps, field=QQ):
    return RationalMapN.from_strings(comps, field, 2)


def sym(m: RationalMapN):
    return [sympy.sympify(s.replace("^", "**")) for s in m.to_strings()]


def random_linear(rng):
    while True:
        m = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(m).det() != 0:
            return RationalMapN.linear(m)


def random_quadratic(rng):
    """A linear conjugate of the standard involution, composed with a linear map."""
    A, B = random_linear(rng), random_linear(rng)
    return compose(A, compose(plane(*STD), B))


def test_chi_round_trip_is_identity():
    m = chi_model()
    assert is_identity(compose(m.chi, m.chi_inv))
    assert is_identity(compose(m.chi_inv, m.chi))


def test_standard_quadratic_is_involution():
    s = plane(*STD)
    assert is_identity(compose(s, s))


def test_sigma_square_matches_cross_multiplication():
    Q = CubicHypersurface.parse("x0^2*x1 + x0*x2^2 + x1^3 - x1*x2^2")
    sd = build_sigma(Q, (0, 0, 1))
    sq = compose(sd.sigma, sd.sigma)
    # oracle: full symbolic composition, then cross-multiplication
    s = sym(sd.sigma)
    full = [sympy.expand(c.subs({x: s[0], y: s[1], z: s[2]}, simultaneous=True)) for c in s]
    coords = (x, y, z)
    assert all(sympy.expand(full[i] * coords[j] - full[j] * coords[i]) == 0 for i in range(3) for j in range(3))
    assert is_identity(sq) and sq.degree == 1


def test_effective_degrees():
    m = chi_model()
    assert effective_degree(m.chi) == 6 == effective_degree(m.chi_inv)
    assert effective_degree(RationalMapN.identity(2)) == 1
    Q = CubicHypersurface.parse("x^3 + y^3 + z^3", 2)
    assert effective_degree(build_sigma(Q, (1, -1, 0)).sigma) == 3


def test_degree_certificate_provenance():
    cert = degree_certificate(plane(*STD), seed=4)
    assert cert.seed == 4 and len(cert.primes) >= 2 and cert.lines >= 3
    assert cert.to_json() == degree_certificate(plane(*STD), seed=4).to_json()


def test_degree_of_a_formal_chain_drops():
    s = plane(*STD)
    cert = degree_certificate([s, s])
    assert cert.formal_degree == 4 and cert.degree == 1


def test_degree_sequences():
    assert degree_sequence(RationalMapN.identity(2), 5).degrees == (1,) * 5
    Q = CubicHypersurface.parse("x^3 + y^3 + z^3", 2)
    sigma = build_sigma(Q, (1, -1, 0)).sigma
    seq = degree_sequence(sigma, 4)
    assert seq.degrees == (3, 1, 3, 1) and seq.is_submultiplicative()


def test_pair_of_sigmas_matches_word_degrees():
    Q = CubicHypersurface.parse("x0^3 + x1^3 + x2^3 + x3^3")
    s1 = build_sigma(Q, (3, 4, 5, -6)).sigma
    s2 = build_sigma(Q, (1, 6, 8, -9)).sigma
    assert degree_sequence(compose(s1, s2), 1).degrees == (9,)
    # higher powers through the formal chain restricted to lines, no expansion
    degs = [degree_certificate([s1, s2] * k).degree for k in (1, 2, 3)]
    assert degs == [predicted_degree([1, 2] * k) for k in (1, 2, 3)] == [9, 33, 73]


def test_jacobians():
    J = jacobian_det(plane(*STD))
    xs = MultiPoly.gens(3)
    assert J == xs[0] * xs[1] * xs[2] * J.coefficient((1, 1, 1))
    Jc = jacobian_det(chi_model().chi)
    assert Jc.terms().keys() == {(0, 0, 15)}
    assert jacobian_det(RationalMapN.identity(3)).is_constant()


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_jacobian_matches_sympy(seed):
    f = random_quadratic(random.Random(seed))
    s = sym(f)
    want = sympy.Matrix([[sympy.diff(c, v) for v in (x, y, z)] for c in s]).det()
    got = sympy.sympify(jacobian_det(f).to_string(["x", "y", "z"]).replace("^", "**"))
    assert sympy.expand(want - got) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=10)
def test_compose_associative_and_submultiplicative(seed):
    rng = random.Random(seed)
    f, g, h = random_quadratic(rng), random_quadratic(rng), random_linear(rng)
    assert same_map(compose(compose(f, g), h), compose(f, compose(g, h)))
    assert effective_degree(compose(f, g)) <= effective_degree(f) * effective_degree(g)


@given(st.integers(0, 10**6))
@settings(max_examples=6)
def test_compose_matches_sympy_cancel(seed):
    rng = random.Random(seed)
    f, g = random_quadratic(rng), random_quadratic(rng)
    fg = compose(f, g)
    sf, sg = sym(f), sym(g)
    full = [sympy.expand(c.subs({x: sg[0], y: sg[1], z: sg[2]}, simultaneous=True)) for c in sf]
    common = sympy.gcd(sympy.gcd(full[0], full[1]), full[2])
    reduced = [sympy.cancel(c / common) for c in full]
    assert max(sympy.Poly(c, x, y, z).total_degree() for c in reduced) == fg.degree


def test_jacobian_of_composite_divisibility():
    rng = random.Random(7)
    f, g = random_quadratic(rng), random_quadratic(rng)
    fg_raw = [c.compose(*g.components) for c in f.components]
    Jraw = jacobian_det(RationalMapN(fg_raw, assume_primitive=True))
    pull = jacobian_det(f).compose(*g.components)
    assert (pull * jacobian_det(g)) == Jraw


def test_contractions():
    m = chi_model()
    zf = MultiPoly.gen(2, 3)
    r = contracts(m.chi, zf)
    assert r.contracted and r.image_span_rank == 1
    ident = contracts(RationalMapN.identity(2), MultiPoly.parse("x + 2*y - z", 3))
    assert not ident.contracted and ident.verdict == "no contraction detected"


def test_sigma_contracts_hyperquadric_onto_p():
    Q = CubicHypersurface.parse("x0^3 + x1^3 + x2^3 + x3^3")
    sd = build_sigma(Q, (1, -1, 0, 0))
    r = contracts(sd.sigma, sd.in_original(sd.contracted_hyperquadric))
    assert r.contracted
    assert r.image_point is not None
    assert r.image_point == tuple(sd.point.reduce(GF(r.prime)).coords)


def test_degenerate_composition():
    # f has the line x2 = x3 = 0 in its base locus and g maps P^3 onto that line
    f = RationalMapN.from_strings(["x0*x2", "x0*x3", "x1*x2", "x1*x3"], QQ, 3)
    g = RationalMapN.from_strings(["x0", "x1", "0", "0"], QQ, 3)
    with pytest.raises(DegenerateCompositionError):
        compose(f, g)


def test_work_bound():
    m = chi_model()
    with pytest.raises(WorkBoundExceeded):
        compose(m.chi, m.chi, work_bound=10)


def test_json_round_trip(tmp_path):
    m = chi_model().chi
    path = tmp_path / "chi.json"
    path.write_text(json.dumps(m.to_json()))
    back = RationalMapN.from_json(json.loads(path.read_text()))
    assert back == m and back.degree == 6


def test_identity_degree_from_random_cubic():
    rng = random.Random(5)
    Q, p = random_cubic_with_point(3, rng, GF(1000003))
    sigma = build_sigma(Q, p).sigma
    assert is_identity(compose(sigma, sigma))
    assert degree_sequence(sigma, 3).degrees == (3, 1, 3)
