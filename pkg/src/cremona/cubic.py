"""Cubic involutions attached to a smooth point of a cubic hypersurface.

For a cubic Q in P^n and a smooth point p of Q, a general line through p
meets Q in two further points; exchanging them defines a birational
involution of P^n of degree 3 that fixes Q pointwise.  After a linear
change of coordinates putting p at (0:...:0:1), with y the last
coordinate, write ``Q = y^2 P1 + y P2 + P3`` where ``P1, P2, P3`` only
involve the other coordinates.  The involution then reads

    (-x_1 (P2 + 2 y P1) : ... : -x_n (P2 + 2 y P1) : P2 y + 2 P3).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConfigurationError, DegenerateSigmaError, NotOnHypersurfaceError
from .exact.elim import intersect_curves
from .exact.fields import QQ, FieldSpec
from .exact.mpoly import MultiPoly
from .ratmap import ProjectivePoint, RationalMapN, compose, cross_minors, is_identity


@dataclass(frozen=True)
class CubicHypersurface:
    equation: MultiPoly

    def __post_init__(self):
        e = self.equation
        if e.is_zero() or e.degree() != 3 or not e.is_homogeneous():
            raise ValueError("a cubic hypersurface needs a nonzero homogeneous cubic form")

    @classmethod
    def parse(cls, text: str, n: int | None = None, field: FieldSpec = QQ) -> CubicHypersurface:
        return cls(MultiPoly.parse(text, None if n is None else n + 1, field))

    @property
    def n(self) -> int:
        return self.equation.nvars - 1

    @property
    def field(self) -> FieldSpec:
        return self.equation.field

    def __call__(self, pt):
        return self.equation(*pt)

    def reduce(self, field: FieldSpec) -> CubicHypersurface:
        return CubicHypersurface(self.equation.reduce(field))

    def __str__(self):
        return str(self.equation)


def _as_point(pt, field: FieldSpec) -> ProjectivePoint:
    return pt if isinstance(pt, ProjectivePoint) else ProjectivePoint(pt, field)


def smooth_point_check(Q: CubicHypersurface, p) -> bool:
    p = _as_point(p, Q.field)
    if Q(p.coords) != 0:
        return False
    return any(g(*p.coords) != 0 for g in Q.equation.gradient())


# frames


def _invert(rows, fld: FieldSpec):
    n = len(rows)
    m = [[fld(v) for v in r] + [fld(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = fld.inv(m[c][c])
        m[c] = [fld.mul(v, inv) for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                t = m[i][c]
                m[i] = [fld.sub(v, fld.mul(t, w)) for v, w in zip(m[i], m[c])]
    return [r[n:] for r in m]


@dataclass(frozen=True)
class Frame:
    """Linear change of coordinates ``x = A x'`` with ``A e_last = p``.

    The columns of ``A`` are the standard basis vectors other than the
    pivot coordinate of p, in order, followed by p itself.
    """

    matrix: tuple
    inverse: tuple
    field: FieldSpec

    @classmethod
    def for_point(cls, p: ProjectivePoint) -> Frame:
        fld = p.field
        m = len(p.coords)
        k = p.pivot
        cols = [[fld(int(i == j)) for i in range(m)] for j in range(m) if j != k] + [list(p.coords)]
        A = [[cols[j][i] for j in range(m)] for i in range(m)]
        return cls(tuple(map(tuple, A)), tuple(map(tuple, _invert(A, fld))), fld)

    def _forms(self, rows):
        return [MultiPoly.linear_form(r, self.field) for r in rows]

    def to_frame(self, poly: MultiPoly) -> MultiPoly:
        """Express a form in frame coordinates: ``poly(A x')``."""
        return poly.compose(*self._forms(self.matrix))

    def from_frame(self, poly: MultiPoly) -> MultiPoly:
        """Express a frame-coordinate form in original coordinates: ``poly(A^-1 x)``."""
        return poly.compose(*self._forms(self.inverse))

    def point_to_frame(self, q: ProjectivePoint) -> tuple:
        fld = self.field
        return tuple(
            _dot(row, q.coords, fld) for row in self.inverse
        )

    def to_json(self) -> dict:
        return {"matrix": [[str(v) for v in r] for r in self.matrix]}


def _dot(row, v, fld):
    acc = fld.zero
    for a, b in zip(row, v):
        acc = fld.add(acc, fld.mul(a, b))
    return acc


@dataclass(frozen=True)
class VerticalDecomposition:
    """``Q(A x') = y^2 P1 + y P2 + P3`` with y the last frame coordinate."""

    P1: MultiPoly
    P2: MultiPoly
    P3: MultiPoly
    frame: Frame

    def recombine(self) -> MultiPoly:
        y = MultiPoly.gens(self.P1.nvars, self.P1.field)[-1]
        return y * y * self.P1 + y * self.P2 + self.P3


def decompose(Q: CubicHypersurface, p) -> VerticalDecomposition:
    p = _as_point(p, Q.field)
    if Q(p.coords) != 0:
        raise NotOnHypersurfaceError(f"{p} is not on the cubic")
    frame = Frame.for_point(p)
    Qf = frame.to_frame(Q.equation)
    m = Q.equation.nvars
    parts: dict[int, dict] = {0: {}, 1: {}, 2: {}, 3: {}}
    for e, c in Qf.terms().items():
        k = e[-1]
        parts[k][e[:-1] + (0,)] = c
    if parts[3]:
        raise NotOnHypersurfaceError("the y^3 coefficient does not vanish")
    P = {k: MultiPoly.from_terms(v, m, Q.field) for k, v in parts.items()}
    return VerticalDecomposition(P[2], P[1], P[0], frame)


@dataclass(frozen=True)
class SigmaData:
    sigma: RationalMapN
    gamma_gens: tuple  # (P2 + 2 y P1, y P2 + 2 P3) in frame coordinates
    contracted_cone: MultiPoly  # P2^2 - 4 P1 P3, frame coordinates
    contracted_hyperquadric: MultiPoly  # P2 + 2 y P1, frame coordinates
    frame: Frame
    decomposition: VerticalDecomposition
    cubic: CubicHypersurface
    point: ProjectivePoint
    degenerate: bool = False

    def in_original(self, poly: MultiPoly) -> MultiPoly:
        return self.frame.from_frame(poly)

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma.to_json(),
            "point": self.point.to_json(),
            "cubic": self.cubic.equation.to_string(),
            "frame": self.frame.to_json(),
            "P1": self.decomposition.P1.to_string(),
            "P2": self.decomposition.P2.to_string(),
            "P3": self.decomposition.P3.to_string(),
            "gamma_gens": [g.to_string() for g in self.gamma_gens],
            "contracted_cone": self.contracted_cone.to_string(),
            "contracted_hyperquadric": self.contracted_hyperquadric.to_string(),
            "degenerate": self.degenerate,
        }


def frame_sigma_components(dec: VerticalDecomposition) -> list[MultiPoly]:
    xs = MultiPoly.gens(dec.P1.nvars, dec.P1.field)
    y = xs[-1]
    h = dec.P2 + 2 * y * dec.P1
    return [-x * h for x in xs[:-1]] + [dec.P2 * y + 2 * dec.P3]


def build_sigma(Q: CubicHypersurface, p, *, strict: bool = False) -> SigmaData:
    """The involution attached to the smooth point ``p`` of ``Q``, in original coordinates.

    A degenerate input (P1 = 0, or a common factor that lowers the degree)
    is flagged on the result; with ``strict=True`` it raises instead.
    """
    p = _as_point(p, Q.field)
    if not smooth_point_check(Q, p):
        raise NotOnHypersurfaceError(f"{p} is not a smooth point of the cubic")
    dec = decompose(Q, p)
    fr = dec.frame
    comps_f = frame_sigma_components(dec)
    # sigma = A o sigma' o A^-1
    pulled = [fr.from_frame(c) for c in comps_f]
    comps = []
    for row in fr.matrix:
        acc = MultiPoly.zero(Q.equation.nvars, Q.field)
        for a, c in zip(row, pulled):
            if a != 0:
                acc = acc + c * a
        comps.append(acc)
    sigma = RationalMapN(comps)
    degenerate = dec.P1.is_zero() or sigma.degree != 3
    if degenerate and strict:
        raise DegenerateSigmaError(f"formula degenerates at {p}: degree {sigma.degree}, P1 = {dec.P1}")
    y = MultiPoly.gens(Q.equation.nvars, Q.field)[-1]
    gam = (dec.P2 + 2 * y * dec.P1, y * dec.P2 + 2 * dec.P3)
    return SigmaData(
        sigma=sigma,
        gamma_gens=gam,
        contracted_cone=dec.P2 * dec.P2 - 4 * dec.P1 * dec.P3,
        contracted_hyperquadric=gam[0],
        frame=fr,
        decomposition=dec,
        cubic=Q,
        point=p,
        degenerate=degenerate,
    )


def gamma_membership(sd: SigmaData, q) -> bool:
    q = _as_point(q, sd.cubic.field)
    qf = sd.frame.point_to_frame(q)
    return all(g(*qf) == 0 for g in sd.gamma_gens)


def check_configuration(Q: CubicHypersurface, points: Sequence) -> bool:
    """No point of the list lies on the residual locus attached to another one."""
    pts = [_as_point(p, Q.field) for p in points]
    data = [build_sigma(Q, p) for p in pts]
    return not any(gamma_membership(data[j], pts[i]) for j in range(len(pts)) for i in range(len(pts)) if i != j)


def fixes_cubic_pointwise(sigma: RationalMapN, Q: CubicHypersurface) -> bool:
    """Every minor x_i s_j - x_j s_i is divisible by the equation of Q."""
    return all(Q.equation.divides(m) for m in cross_minors(sigma))


def is_involution(sigma: RationalMapN) -> bool:
    return is_identity(compose(sigma, sigma))


def preserves_lines_through(sigma: RationalMapN, p: ProjectivePoint, q: Sequence) -> bool:
    """sigma(q) lies on the line through p and q (rank of [p; q; sigma(q)] at most 2)."""
    img = sigma(q)
    if all(v == 0 for v in img):
        return True
    return _rank([list(p.coords), list(q), list(img)], sigma.field) <= 2


def _rank(rows, fld: FieldSpec) -> int:
    if fld.is_rational:
        return _rank_rational(rows)
    from .ratmap import _rank_mod_p

    return _rank_mod_p(rows, fld.p)


def _rank_rational(rows) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                t = m[i][c] / m[rank][c]
                m[i] = [v - t * w for v, w in zip(m[i], m[rank])]
        rank += 1
    return rank


def _extend(poly: MultiPoly, extra: int) -> MultiPoly:
    return MultiPoly.from_terms({e + (0,) * extra: c for e, c in poly.terms().items()}, poly.nvars + extra, poly.field)


def fibre_involution(R1: MultiPoly, R2: MultiPoly, R3: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """(a:b) -> (-(a R2 + 2 b R1) : b R2 + 2 a R3) on the fibres of the exceptional divisor.

    The R_i live in m variables; the result lives in m + 2, the last two being a, b.
    """
    m = R1.nvars
    a, b = MultiPoly.gen(m, m + 2, R1.field), MultiPoly.gen(m + 1, m + 2, R1.field)
    r1, r2, r3 = (_extend(r, 2) for r in (R1, R2, R3))
    return -(a * r2 + 2 * b * r1), b * r2 + 2 * a * r3


def fibre_graph(R1: MultiPoly, R2: MultiPoly, R3: MultiPoly) -> MultiPoly:
    """u (R2 b + 2 a R3) + v (a R2 + 2 b R1), in m + 4 variables ordered (t, a, b, u, v).

    Its invariance under (a, b) <-> (u, v) says the fibre map is an involution.
    """
    m = R1.nvars
    g = MultiPoly.gens(m + 4, R1.field)
    a, b, u, v = g[m:]
    r1, r2, r3 = (_extend(r, 4) for r in (R1, R2, R3))
    return u * (r2 * b + 2 * a * r3) + v * (a * r2 + 2 * b * r1)


# the plane


@dataclass(frozen=True)
class TangencyPoint:
    point: ProjectivePoint
    multiplicity: int
    is_base: bool  # True for p itself


@dataclass(frozen=True)
class TangencyReport:
    points: tuple  # TangencyPoint
    residual: tuple  # univariate polynomials carrying points outside the field

    @property
    def residual_points(self) -> list[ProjectivePoint]:
        return [t.point for t in self.points if not t.is_base]

    def to_json(self) -> dict:
        return {
            "points": [
                {"point": t.point.to_json(), "multiplicity": t.multiplicity, "is_p": t.is_base} for t in self.points
            ],
            "residual_factors": [str(r) for r in self.residual],
        }


def plane_tangency_points(C: CubicHypersurface, p, seed: int = 0) -> TangencyReport:
    """Solutions of C = 0 and p . grad C = 0: p itself plus the points whose tangent passes through p."""
    if C.n != 2:
        raise ValueError("plane_tangency_points needs a plane cubic")
    p = _as_point(p, C.field)
    if not smooth_point_check(C, p):
        raise NotOnHypersurfaceError(f"{p} is not a smooth point of the cubic")
    polar = MultiPoly.zero(3, C.field)
    for c, g in zip(p.coords, C.equation.gradient()):
        if c != 0:
            polar = polar + g * c
    sol = intersect_curves(C.equation, polar, seed)
    pts = []
    for coords, m in sol.points:
        q = ProjectivePoint(coords, C.field)
        pts.append(TangencyPoint(q, m, q == p))
    pts.sort(key=lambda t: (not t.is_base, str(t.point.coords)))
    return TangencyReport(tuple(pts), tuple(sol.residual))


@dataclass(frozen=True)
class PlaneFivePointConfig:
    """p = (1:0:0), p1 = (0:1:0), p2 = (0:0:1), p3 = (1:1:1), p4 = (a:b:c)."""

    a: object
    b: object
    c: object
    field: FieldSpec = QQ

    def __post_init__(self):
        f = self.field
        a, b, c = f(self.a), f(self.b), f(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if 0 in (a, b, c) or len({a, b, c}) < 3:
            raise ConfigurationError("a, b, c must be nonzero and pairwise distinct")
        pts = self.points()
        from itertools import combinations

        for trip in combinations(pts, 3):
            if _rank([list(q.coords) for q in trip], f) < 3:
                raise ConfigurationError("three of the five points are collinear")

    def points(self) -> list[ProjectivePoint]:
        f = self.field
        return [ProjectivePoint(c, f) for c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (self.a, self.b, self.c)]]


def plane_sigma_formula(a, b, c, field: FieldSpec = QQ) -> tuple[RationalMapN, CubicHypersurface]:
    x, y, z = MultiPoly.gens(3, field)
    a, b, c = field(a), field(b), field(c)
    L = a * (c - b) * y * z + b * (a - c) * x * z + c * (b - a) * x * y
    s0 = -a * y * z * ((c - b) * x + (a - c) * y + (b - a) * z)
    sigma = RationalMapN([s0, y * L, z * L])
    C = (
        b * (a - c) * x * x * z
        + c * (b - a) * x * x * y
        + a * (a - c) * y * y * z
        + a * (b - a) * y * z * z
        + 2 * a * (c - b) * x * y * z
    )
    return sigma, CubicHypersurface(C)


def build_plane_sigma(cfg: PlaneFivePointConfig) -> tuple[RationalMapN, CubicHypersurface]:
    """The explicit five-point involution and its fixed cubic, cross-checked against build_sigma."""
    sigma, C = plane_sigma_formula(cfg.a, cfg.b, cfg.c, cfg.field)
    sd = build_sigma(C, cfg.points()[0])
    from .ratmap import same_map

    if not same_map(sd.sigma, sigma):
        raise AssertionError("explicit formula disagrees with the general construction")
    return sigma, C


# sampling


def random_cubic_with_point(n: int, rng: random.Random, field: FieldSpec = QQ, height: int = 5, point_height: int = 3):
    """A random cubic through a random point, made smooth there.  Returns (Q, p).

    The cubic is G - (G(p) / p_k^3) x_k^3, which vanishes at p; it is
    resampled until p is smooth and the construction is non-degenerate.
    """
    from itertools import combinations_with_replacement

    m = n + 1
    monos = []
    for combo in combinations_with_replacement(range(m), 3):
        e = [0] * m
        for i in combo:
            e[i] += 1
        monos.append(tuple(e))
    while True:
        coords = [rng.randint(-point_height, point_height) for _ in range(m)]
        if not any(coords):
            continue
        G = MultiPoly.from_terms({e: rng.randint(-height, height) for e in monos}, m, field)
        k = next(i for i, c in enumerate(coords) if c)
        val = G(*coords)
        xk = MultiPoly.gen(k, m, field)
        Qeq = G - xk**3 * field.div(val, field(coords[k]) ** 3 if field.is_rational else pow(coords[k], 3, field.p))
        if Qeq.is_zero() or Qeq.degree() != 3:
            continue
        Q = CubicHypersurface(Qeq)
        p = ProjectivePoint(coords, field)
        if not smooth_point_check(Q, p):
            continue
        if decompose(Q, p).P1.is_zero():
            continue
        return Q, p
