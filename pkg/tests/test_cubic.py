import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cremona.cubic import (
    CubicHypersurface,
    PlaneFivePointConfig,
    build_plane_sigma,
    build_sigma,
    check_configuration,
    decompose,
    fibre_graph,
    fibre_involution,
    fixes_cubic_pointwise,
    gamma_membership,
    is_involution,
    plane_sigma_formula,
    plane_tangency_points,
    preserves_lines_through,
    random_cubic_with_point,
    smooth_point_check,
)
from cremona.errors import ConfigurationError, DegenerateSigmaError, NotOnHypersurfaceError
from cremona.exact.fields import GF, QQ, random_primes
from cremona.exact.mpoly import MultiPoly
from cremona.ratmap import ProjectivePoint, RationalMapN, effective_degree, same_map

FERMAT3 = CubicHypersurface.parse("x0^3 + x1^3 + x2^3 + x3^3")
# y^2 x1 + y x2^2 + x3^3 with y = x0 last in the frame ordering below
READOFF = CubicHypersurface.parse("x3^2*x0 + x3*x1^2 + x2^3")


def test_smooth_point_check():
    assert smooth_point_check(FERMAT3, (1, -1, 0, 0))
    nodal = CubicHypersurface.parse("z*y^2 - x^3 - x^2*z", 2)
    assert not smooth_point_check(nodal, (0, 0, 1))
    assert not smooth_point_check(FERMAT3, (1, 0, 0, 0))


def test_decompose_read_off():
    dec = decompose(READOFF, (0, 0, 0, 1))
    x = MultiPoly.gens(4)
    assert dec.P1 == x[0] and dec.P2 == x[1] ** 2 and dec.P3 == x[2] ** 3


def test_decompose_fermat_recombines():
    dec = decompose(FERMAT3, (1, -1, 0, 0))
    assert not dec.P1.is_zero()
    assert dec.frame.from_frame(dec.recombine()) == FERMAT3.equation


def test_decompose_off_surface():
    with pytest.raises(NotOnHypersurfaceError):
        decompose(FERMAT3, (1, 0, 0, 0))


def test_build_sigma_read_off_formula():
    sd = build_sigma(READOFF, (0, 0, 0, 1))
    x1, x2, x3, y = MultiPoly.gens(4)
    h = x2**2 + 2 * y * x1
    expected = RationalMapN([-x1 * h, -x2 * h, -x3 * h, x2**2 * y + 2 * x3**3])
    assert same_map(sd.sigma, expected)
    assert sd.sigma.degree == 3 and not sd.degenerate
    assert is_involution(sd.sigma)


def test_plane_formula_matches_construction():
    sigma, C = build_plane_sigma(PlaneFivePointConfig(2, 3, 5))
    assert is_involution(sigma)
    assert fixes_cubic_pointwise(sigma, C)
    p = ProjectivePoint((1, 0, 0))
    for q in [(0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 3, 5)]:
        assert C(q) == 0
        assert sum(c * g(*q) for c, g in zip(p.coords, C.equation.gradient())) == 0


@pytest.mark.parametrize("abc", [(0, 1, 2), (1, 1, 2), (3, 5, 3)])
def test_plane_config_rejects_degenerate(abc):
    with pytest.raises(ConfigurationError):
        PlaneFivePointConfig(*abc)


def test_gamma_membership():
    sd = build_sigma(FERMAT3, (1, -1, 0, 0))
    assert gamma_membership(sd, (1, -1, 0, 0))
    assert not gamma_membership(sd, (3, 4, 5, -6))


def test_plane_tangency_points_are_on_gamma():
    sigma, C = plane_sigma_formula(2, 3, 5)
    sd = build_sigma(C, (1, 0, 0))
    rep = plane_tangency_points(C, (1, 0, 0))
    got = set(rep.residual_points)
    want = {ProjectivePoint(q) for q in [(0, 1, 0), (0, 0, 1), (1, 1, 1), (2, 3, 5)]}
    assert got == want and not rep.residual
    base = [t for t in rep.points if t.is_base]
    assert len(base) == 1 and base[0].multiplicity == 2
    assert all(gamma_membership(sd, q) for q in want)


def test_tangency_at_an_inflexion_point():
    # (0:1:-1) is an inflexion point of the Fermat cubic
    C = CubicHypersurface.parse("x^3 + y^3 + z^3", 2)
    rep = plane_tangency_points(C, (0, 1, -1))
    (base,) = rep.points
    assert base.is_base and base.multiplicity == 3
    # the three other solutions are irrational and kept as one cubic factor
    assert not rep.residual_points and [r.degree() for r in rep.residual] == [3]
    with pytest.raises(NotOnHypersurfaceError):
        plane_tangency_points(C, (1, 0, 0))


def test_check_configuration():
    pts = [(1, -1, 0, 0), (0, 0, 1, -1), (1, 0, 0, -1)]
    oracle = []
    data = [build_sigma(FERMAT3, p) for p in pts]
    for j, sd in enumerate(data):
        for i, q in enumerate(pts):
            if i != j:
                qf = sd.frame.point_to_frame(ProjectivePoint(q))
                oracle.append(all(g(*qf) == 0 for g in sd.gamma_gens))
    assert check_configuration(FERMAT3, pts) == (not any(oracle))
    assert check_configuration(FERMAT3, [(1, -1, 0, 0)])
    assert check_configuration(FERMAT3, [(3, 4, 5, -6), (1, 6, 8, -9), (9, 10, -1, -12)])


def test_check_configuration_detects_point_on_gamma():
    sigma, C = plane_sigma_formula(2, 3, 5)
    # p1 = (0:1:0) lies on Gamma of p = (1:0:0)
    assert not check_configuration(C, [(1, 0, 0), (0, 1, 0)])


def test_fibre_involution_graph_symmetry():
    t = MultiPoly.gens(2)
    R1, R2, R3 = t[0] + t[1], t[0] * t[1] - 3 * t[1] ** 2, t[0] ** 3 + t[1] ** 3
    W = fibre_graph(R1, R2, R3)
    swapped = W.compose(*(MultiPoly.gens(6)[i] for i in (0, 1, 4, 5, 2, 3)))
    assert swapped == W
    a2, b2 = fibre_involution(R1, R2, R3)
    # applying the fibre map twice gives a scalar multiple of (a, b)
    g = MultiPoly.gens(4)
    twice = [c.compose(g[0], g[1], a2, b2) for c in (a2, b2)]
    assert (twice[0] * g[3] - twice[1] * g[2]).is_zero()


def _sample(n, seed, field=QQ):
    rng = random.Random(seed)
    return random_cubic_with_point(n, rng, field)


@given(st.sampled_from([2, 3]), st.integers(0, 10**6))
@settings(max_examples=12)
def test_sigma_properties(n, seed):
    Q, p = _sample(n, seed)
    sd = build_sigma(Q, p)
    if sd.degenerate:
        return
    sigma = sd.sigma
    assert is_involution(sigma)
    assert fixes_cubic_pointwise(sigma, Q)
    assert effective_degree(sigma) == 3
    rng = random.Random(seed)
    for _ in range(3):
        q = [rng.randint(-9, 9) for _ in range(n + 1)]
        if any(q):
            assert preserves_lines_through(sigma, p, q)


@given(st.integers(0, 10**6))
@settings(max_examples=8)
def test_cone_vanishes_on_gamma(seed):
    Q, p = _sample(2, seed)
    sd = build_sigma(Q, p)
    rep = plane_tangency_points(Q, p)
    for q in rep.residual_points:
        qf = sd.frame.point_to_frame(q)
        assert sd.contracted_cone(*qf) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=8)
def test_reduction_mod_p_commutes(seed):
    Q, p = _sample(3, seed)
    prime = random_primes(seed, 1)[0]
    F = GF(prime)
    a = build_sigma(Q, p).sigma.reduce(F)
    b = build_sigma(Q.reduce(F), p.reduce(F)).sigma
    assert same_map(a, b)


def test_degenerate_flag():
    # a reducible cubic: the conic component through p makes the formula drop degree
    Q = CubicHypersurface.parse("x0*(x1^2 + x2^2 - x0*x2)", 2)
    sd = build_sigma(Q, (0, 1, 1))
    assert sd.degenerate and sd.sigma.degree == 2
    with pytest.raises(DegenerateSigmaError):
        build_sigma(Q, (0, 1, 1), strict=True)
