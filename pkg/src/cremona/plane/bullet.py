"""Transport of (possibly infinitely near) points through a plane birational map.

Outside its base points a birational map ``f`` lifts to a local isomorphism
from a neighbourhood of ``pt`` onto a neighbourhood of some point infinitely
near (or equal to) ``f(pt)``.  Two smooth arcs through ``pt`` with different
tangents are carried to two smooth arcs through that point with different
tangents, so their image towers agree exactly up to it and split right
after.  Arcs are power series in one variable with tracked precision; when
the precision runs out before a step is decided, everything is redone at
double precision, so every reported step is exact.
"""

from __future__ import annotations

import flint

from ..errors import BasePointError
from ..exact.fields import FieldSpec
from ..exact.mpoly import MultiPoly
from ..ratmap import ProjectivePoint, RationalMapN
from .points import InfNearPoint, local_system

MAX_STEPS = 512

# working precision of the arc series, doubled whenever a step is undecided
START_PREC = 32
MAX_PREC = 1 << 16

# fixed tangent slopes of the two probing arcs
ARC_SLOPES = (1, -2)


class _Undetermined(Exception):
    """Working precision too low to decide the next step."""


def _poly_ring(field: FieldSpec):
    if field.is_rational:
        return lambda cs: flint.fmpq_poly([field.to_flint(c) for c in cs])
    return lambda cs: flint.nmod_poly([int(c) for c in cs], field.p)


class _Ser:
    """Power series in tau known modulo tau^prec."""

    __slots__ = ("p", "prec")

    def __init__(self, p, prec: int):
        self.p = p.truncate(prec) if prec > 0 else p * 0
        self.prec = prec

    def order(self) -> int | None:
        """Valuation if some coefficient below the precision is nonzero, else None."""
        if self.p == 0:
            return None
        cs = self.p.coeffs()
        return next(i for i, c in enumerate(cs) if c != 0)

    def shift(self, k: int) -> _Ser:
        return _Ser(self.p.right_shift(k), self.prec - k)

    def __mul__(self, other: _Ser) -> _Ser:
        n = min(self.prec, other.prec)
        return _Ser(self.p.mul_low(other.p, n), n)

    def __sub__(self, other: _Ser) -> _Ser:
        return _Ser(self.p - other.p, min(self.prec, other.prec))

    def scale(self, c) -> _Ser:
        return _Ser(self.p * c, self.prec)

    def inv(self) -> _Ser:
        """Inverse of a unit by Newton iteration."""
        n = self.prec
        g = self.p * 0 + 1 / self.p[0]
        k = 1
        while k < n:
            k = min(2 * k, n)
            e = self.p.mul_low(g, k)
            g = g.mul_low(e * 0 + 2 - e, k)
        return _Ser(g, n)


def _arc_coords(pt: InfNearPoint, slope, prec: int) -> list[_Ser]:
    """Homogeneous coordinates of the arc (tau, slope*tau) at ``pt``, modulo tau^prec."""
    mk = _poly_ring(pt.field)
    u, v = _Ser(mk([0, 1]), prec), _Ser(mk([0, slope]), prec)
    one = _Ser(mk([1]), prec)
    for st in reversed(pt.path):
        if st[0] == "A":
            u, v = u, u * _Ser(v.p + pt.field.to_flint(st[1]), prec)
        else:
            u, v = u * v, v
    loc = iter((u, v))
    k = pt.root.pivot
    out = []
    for i in range(3):
        if i == k:
            out.append(one)
        else:
            w = next(loc)
            out.append(_Ser(w.p + pt.field.to_flint(pt.root.coords[i]), prec))
    return out


def _evaluate(g: MultiPoly, xs: list[_Ser], cache: dict) -> _Ser:
    prec = xs[0].prec
    acc = xs[0].p * 0
    for e, c in g.terms().items():
        term = None
        for j, k in enumerate(e):
            if k == 0:
                continue
            key = (j, k)
            if key not in cache:
                cache[key] = xs[j].p.pow_trunc(k, prec)
            term = cache[key] if term is None else term.mul_low(cache[key], prec)
        cf = g.field.to_flint(c)
        acc += (xs[0].p * 0 + cf) if term is None else term * cf
    return _Ser(acc, prec)


class _Arc:
    """An arc germ (S(tau), T(tau)) in the local coordinates of the current point of the target."""

    __slots__ = ("s", "t")

    def __init__(self, s: _Ser, t: _Ser):
        self.s, self.t = s, t

    def step(self):
        """Blow up the origin and move to the point the arc passes through."""
        s, t = self.s, self.t
        a, b = s.order(), t.order()
        if a is not None and (b is not None and a <= b or b is None and a < t.prec):
            # T / S is regular at 0; the arc leaves in the direction t = c s
            q = t.shift(a) * s.shift(a).inv()
            if q.prec < 1:
                raise _Undetermined
            c = q.p[0]
            return ("A", c), _Arc(s, _Ser(q.p - c, q.prec))
        if b is not None and (a is not None or b < s.prec):
            # S / T is regular and vanishes at 0: the direction s = 0
            q = s.shift(b) * t.shift(b).inv()
            if q.prec < 1:
                raise _Undetermined
            return ("B", None), _Arc(q, t)
        raise _Undetermined


def _image_arc(f: RationalMapN, pt: InfNearPoint, slope, prec: int) -> tuple[ProjectivePoint, _Arc]:
    fld = f.field
    xs = _arc_coords(pt, slope, prec)
    cache: dict = {}
    G = [_evaluate(c, xs, cache) for c in f.components]
    orders = [g.order() for g in G if g.order() is not None]
    if not orders:
        raise _Undetermined
    m = min(orders)
    G = [g.shift(m) for g in G]
    vals = [fld.from_flint(g.p[0]) for g in G]
    Q = ProjectivePoint(vals, fld)
    k = Q.pivot
    others = [i for i in range(3) if i != k]
    r = [fld.to_flint(fld.div(vals[i], vals[k])) for i in others]
    den = G[k].inv()
    s, t = [(G[i] - G[k].scale(ri)) * den for i, ri in zip(others, r)]
    return Q, _Arc(s, t)


def _separate(f: RationalMapN, pt: InfNearPoint, prec: int) -> InfNearPoint:
    Q1, arc1 = _image_arc(f, pt, f.field(ARC_SLOPES[0]), prec)
    Q2, arc2 = _image_arc(f, pt, f.field(ARC_SLOPES[1]), prec)
    if Q1 != Q2:
        raise BasePointError("probing arcs have different images; the point is a base point")
    path = []
    for _ in range(MAX_STEPS):
        s1, n1 = arc1.step()
        s2, n2 = arc2.step()
        if s1 != s2:
            return InfNearPoint(Q1, tuple(path))
        path.append((s1[0], None if s1[1] is None else f.field.from_flint(s1[1])))
        arc1, arc2 = n1, n2
    raise BasePointError("probing arcs did not separate within the step limit")


def bullet(f: RationalMapN, pt: InfNearPoint) -> InfNearPoint:
    """The point ``f•(pt)``."""
    if f.n != 2:
        raise ValueError("plane maps only")
    pt = pt.reduce(f.field)
    _, mults = local_system(f.components, pt)
    if all(m > 0 for m in mults):
        raise BasePointError(f"{pt!r} is a base point of the map")
    prec = START_PREC
    while prec <= MAX_PREC:
        try:
            return _separate(f, pt, prec)
        except _Undetermined:
            prec *= 2
    raise BasePointError("probing arcs did not separate within the precision limit")


def bullet_orbit(f: RationalMapN, pt: InfNearPoint, k: int) -> list[InfNearPoint]:
    """``[pt, f•pt, (f•)^2 pt, ...]`` with ``k`` applications."""
    out = [pt]
    for _ in range(k):
        out.append(bullet(f, out[-1]))
    return out


__all__ = ["ARC_SLOPES", "bullet", "bullet_orbit"]
