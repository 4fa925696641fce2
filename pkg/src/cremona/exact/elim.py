"""Solving systems of plane curves by resultant elimination.

Coordinates are first moved by a random invertible matrix so that the
point (0:1:0) is off the curves and distinct solutions have distinct
projections from it.  The resultant in the middle variable is then a binary
form whose roots are the projections of the solutions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import SamplingError
from .fields import FieldSpec
from .mpoly import MultiPoly
from .unipoly import UniPoly


@dataclass(frozen=True)
class PlaneSolutions:
    """Solutions over the working field, with multiplicities when meaningful.

    ``residual`` lists the irreducible-over-the-field parts (as univariate
    polynomials in the projection coordinate) that carry solutions outside
    the working field.
    """

    points: tuple  # of (coords tuple, multiplicity)
    residual: tuple = field(default=())
    transform: tuple = ()

    @property
    def complete(self) -> bool:
        return not self.residual


def _random_transform(fld: FieldSpec, rng: random.Random):
    while True:
        g = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        det = (
            g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
        )
        if fld(det) != 0:
            return g


def _apply(g, polys: Sequence[MultiPoly]) -> list[MultiPoly]:
    fld = polys[0].field
    lin = [MultiPoly.linear_form(row, fld) for row in g]
    return [p.compose(*lin) for p in polys]


def _binary_to_uni(R: MultiPoly) -> tuple[UniPoly, int]:
    """R(x0, x2) -> (r(t) = R(t, 1), multiplicity of the root (1:0))."""
    d = R.degree()
    cs = [0] * (d + 1)
    for e, c in R.terms().items():
        cs[e[0]] = c
    r = UniPoly(cs, R.field)
    return r, d - r.degree()


def _root_multiplicity(f: UniPoly, r) -> int:
    lin = UniPoly([-r, 1], f.field)
    k = 0
    while not f.is_zero() and f(r) == 0:
        f = f.exact_div(lin)
        k += 1
    return k


def _lift(polys: Sequence[MultiPoly], x0, x2) -> tuple[list, UniPoly]:
    """Common roots y of polys(x0, y, x2) and the residual cofactor."""
    fld = polys[0].field
    g = None
    for p in polys:
        cs: dict[int, object] = {}
        for e, c in p.terms().items():
            v = fld.mul(c, fld.mul(_pw(fld, x0, e[0]), _pw(fld, x2, e[2])))
            cs[e[1]] = fld.add(cs.get(e[1], fld.zero), v)
        u = UniPoly([cs.get(i, 0) for i in range(max(cs, default=-1) + 1)], fld)
        g = u if g is None else g.gcd(u)
    if g is None or g.is_zero() or g.degree() <= 0:
        return [], UniPoly([1], fld)
    return g.split_rational_part()


def _pw(fld, a, k):
    return fld.one if k == 0 else (a**k if fld.is_rational else pow(a, k, fld.p))


def _solutions_in_chart(polys_t: Sequence[MultiPoly], R: MultiPoly, with_mult: bool):
    fld = R.field
    r, inf_mult = _binary_to_uni(R)
    roots, rest = r.split_rational_part() if r.degree() > 0 else ([], UniPoly([1], fld))
    found = []
    residual = []
    ambiguous = False
    if rest.degree() > 0:
        residual.append(rest)
    cands = [((t, fld.one), _root_multiplicity(r, t) if with_mult else None) for t in roots]
    if inf_mult > 0:
        cands.append(((fld.one, fld.zero), inf_mult))
    for (x0, x2), m in cands:
        ys, yrest = _lift(polys_t, x0, x2)
        if yrest.degree() > 0:
            residual.append(yrest)
        if len(ys) + max(yrest.degree(), 0) > 1:
            ambiguous = True
        for y in ys:
            found.append(((x0, y, x2), m))
    return found, residual, ambiguous


def _back(g, pt, fld):
    return tuple(fld.add(fld.add(fld.mul(row[0], pt[0]), fld.mul(row[1], pt[1])), fld.mul(row[2], pt[2])) for row in g)


def intersect_curves(F: MultiPoly, G: MultiPoly, seed: int = 0, attempts: int = 30) -> PlaneSolutions:
    """Points of F = G = 0 in P^2 with intersection multiplicities.

    Multiplicities are read from the resultant, which is valid once every
    root of it lifts to a single point; otherwise another transform is tried.
    """
    fld = F.field
    rng = random.Random(f"intersect:{seed}")
    for _ in range(attempts):
        g = _random_transform(fld, rng)
        Ft, Gt = _apply(g, [F, G])
        if Ft.coefficient((0, Ft.degree(), 0)) == 0 or Gt.coefficient((0, Gt.degree(), 0)) == 0:
            continue
        R = Ft.resultant(Gt, 1)
        if R.is_zero():
            raise ValueError("curves share a component")
        found, residual, ambiguous = _solutions_in_chart([Ft, Gt], R, True)
        if ambiguous:
            continue
        pts = tuple((_back(g, p, fld), m) for p, m in found)
        return PlaneSolutions(pts, tuple(residual), tuple(map(tuple, g)))
    raise SamplingError("no transform separated the intersection points")


def common_zeros(polys: Sequence[MultiPoly], seed: int = 0, attempts: int = 30) -> PlaneSolutions:
    """Common zeros in P^2 of a family of forms without common factor (no multiplicities)."""
    polys = [p for p in polys if not p.is_zero()]
    fld = polys[0].field
    rng = random.Random(f"common:{seed}")
    for _ in range(attempts):
        g = _random_transform(fld, rng)
        ts = _apply(g, polys)
        combos = []
        for _k in range(3):
            coeffs = [rng.randint(-7, 7) for _ in ts]
            combos.append(sum((c * t for c, t in zip(coeffs, ts[1:])), ts[0] * coeffs[0]))
        A, B, C = combos
        d = A.degree()
        if A.is_zero() or A.coefficient((0, d, 0)) == 0 or B.is_zero() or C.is_zero():
            continue
        R1, R2 = A.resultant(B, 1), A.resultant(C, 1)
        if R1.is_zero() or R2.is_zero():
            continue
        R = R1.gcd(R2)
        if R.is_constant():
            return PlaneSolutions((), (), tuple(map(tuple, g)))
        found, residual, _ = _solutions_in_chart(ts, R, False)
        pts = []
        for p, _m in found:
            if all(t(*p) == 0 for t in ts):
                pts.append((_back(g, p, fld), None))
        return PlaneSolutions(tuple(pts), tuple(residual), tuple(map(tuple, g)))
    raise SamplingError("could not find a transform in general position")
