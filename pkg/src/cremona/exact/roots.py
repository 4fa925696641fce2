"""Real root isolation by Descartes' rule of signs and bisection.

Polynomials are handled as primitive integer coefficient lists (low to high).
An interval ``(a, b)`` is examined through the Moebius transform
``x = (a + b t) / (1 + t)``, which maps ``(0, inf)`` onto ``(a, b)``; the
number of sign variations of the transformed coefficients bounds the number
of roots in ``(a, b)`` and is exact when it is 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import flint

from ..errors import NoRealRootError
from .fields import QQ
from .unipoly import UniPoly


def _variations(cs) -> int:
    signs = [c > 0 for c in cs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _taylor_shift(cs, a):
    """Coefficients of c(x + a)."""
    cs = list(cs)
    n = len(cs)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            cs[k] += a * cs[k + 1]
    return cs


def _int_poly(f: UniPoly) -> list[int]:
    if not f.field.is_rational:
        raise ValueError("real root isolation needs a polynomial over QQ")
    return f.integer_coeffs()


def _eval(cs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def count_roots_in(cs, a: Fraction, b: Fraction) -> int:
    """Descartes bound for roots of ``cs`` in the open interval ``(a, b)``."""
    n = len(cs) - 1
    # numerator of c((a + b t)/(1 + t)) * (1 + t)^n, assembled with exact arithmetic
    num = [Fraction(0)] * (n + 1)
    lin_a = [a, b]  # a + b t
    one_t = [Fraction(1), Fraction(1)]
    for k, c in enumerate(cs):
        if c == 0:
            continue
        term = [Fraction(c)]
        for _ in range(k):
            term = _mul(term, lin_a)
        for _ in range(n - k):
            term = _mul(term, one_t)
        for i, v in enumerate(term):
            num[i] += v
    return _variations(num)


def _mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _cauchy_bound(cs) -> int:
    lc = abs(cs[-1])
    m = max(abs(c) for c in cs[:-1]) if len(cs) > 1 else 0
    b = 1 + -(-m // lc)
    k = 1
    while k < b:
        k <<= 1
    return k


def _isolate_unit(cs, lo: Fraction, hi: Fraction, out: list):
    """Isolate roots of ``cs`` (as a polynomial in t on (0,1)) mapped affinely onto (lo, hi)."""
    stack = [(cs, lo, hi)]
    while stack:
        c, a, b = stack.pop()
        rev = list(reversed(c))
        v = _variations(_taylor_shift(rev, 1))
        if v == 0:
            continue
        if v == 1:
            out.append((a, b, None))
            continue
        n = len(c) - 1
        mid = (a + b) / 2
        left = [c[i] * (1 << (n - i)) for i in range(n + 1)]  # 2^n c(t/2)
        if sum(left) == 0:
            # t = 1/2 is a root: record it and deflate by synthetic division
            out.append((mid, mid, mid))
            q = [Fraction(0)] * n
            q[n - 1] = Fraction(c[n])
            for k in range(n - 1, 0, -1):
                q[k - 1] = c[k] + q[k] / 2
            c = _scale_to_int(q)
            n -= 1
            if n <= 0:
                continue
            left = [c[i] * (1 << (n - i)) for i in range(n + 1)]
        right = _taylor_shift(left, 1)
        stack.append((left, a, mid))
        stack.append((right, mid, b))


def isolate_real_roots(f: UniPoly) -> list[tuple[Fraction, Fraction, Optional[Fraction]]]:
    """Disjoint isolating intervals ``(a, b, exact)`` of the distinct real roots, sorted.

    ``exact`` is the root itself when bisection happened to land on it.
    """
    sqf = f.squarefree_part()
    cs = _int_poly(sqf)
    if len(cs) <= 1:
        return []
    B = Fraction(_cauchy_bound(cs))
    # t in (0,1) -> x = -B + 2B t
    shifted = _scale_to_int(_compose_affine(cs, -B, 2 * B))
    out: list = []
    _isolate_unit(shifted, -B, B, out)
    out = [r if r[2] is not None else _tighten(cs, r[0], r[1]) for r in out]
    return sorted(out, key=lambda r: (r[0], r[1]))


def _tighten(cs, a: Fraction, b: Fraction):
    """Shrink an isolating interval until neither endpoint is a root.

    Deflation during isolation can leave an exact root as the endpoint of a
    neighbouring interval; sign-based bisection needs nonzero endpoint values.
    """
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        c = count_roots_in(cs, lo, hi)
        if c == 0:
            continue
        if c == 1 and _eval(cs, lo) != 0 and _eval(cs, hi) != 0:
            return (lo, hi, None)
        mid = (lo + hi) / 2
        if _eval(cs, mid) == 0:
            return (mid, mid, mid)
        stack.append((lo, mid))
        stack.append((mid, hi))
    raise AssertionError("isolating interval lost its root")


def _compose_affine(cs, a, b):
    """Coefficients of c(a + b t)."""
    acc = [Fraction(0)]
    for c in reversed(cs):
        acc = _mul(acc, [Fraction(a), Fraction(b)])
        acc[0] += c
    return acc


def _scale_to_int(cs):
    from math import gcd, lcm

    den = lcm(*(Fraction(c).denominator for c in cs))
    ints = [int(Fraction(c) * den) for c in cs]
    g = gcd(*ints) or 1
    return [c // g for c in ints]


@dataclass(frozen=True)
class AlgebraicReal:
    """A real algebraic number: defining polynomial plus isolating interval ``(lo, hi)``.

    ``poly`` is square-free with a unique real root in ``(lo, hi)``.  When the
    number is known to be rational it is stored in ``exact`` as well.
    """

    poly: UniPoly
    lo: Fraction
    hi: Fraction
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("isolating interval must satisfy lo < hi")

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_rational(self) -> bool:
        return self.exact is not None

    def midpoint(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def refine(self, eps: Fraction) -> AlgebraicReal:
        if self.exact is not None or self.width <= eps:
            return self
        cs = _int_poly(self.poly)
        lo, hi = self.lo, self.hi
        slo = _sign(_eval(cs, lo))
        while hi - lo > eps:
            mid = (lo + hi) / 2
            s = _sign(_eval(cs, mid))
            if s == 0:
                return _exact_real(self.poly, mid, eps)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicReal(self.poly, lo, hi)

    def is_root_of(self, g: UniPoly) -> bool:
        """Exact test that this number is a root of ``g``."""
        if g.is_zero():
            return True
        if self.exact is not None:
            return g(self.exact) == 0
        h = self.poly.gcd(g.reduce(QQ))
        if h.degree() <= 0:
            return False
        cs = _int_poly(h)
        return _sign(_eval(cs, self.lo)) * _sign(_eval(cs, self.hi)) < 0

    def compare(self, q: Fraction) -> int:
        """Sign of ``self - q``, exactly."""
        if self.exact is not None:
            return _sign(self.exact - q)
        x = self
        while x.lo < q < x.hi:
            cs = _int_poly(x.poly)
            if _eval(cs, Fraction(q)) == 0:
                return 0
            x = x.refine(x.width / 4)
            if x.exact is not None:
                return _sign(x.exact - q)
        return 1 if q <= x.lo else -1

    def to_json(self) -> dict:
        return {
            "poly": [str(c) for c in _int_poly(self.poly)],
            "lo": str(self.lo),
            "hi": str(self.hi),
            "exact": None if self.exact is None else str(self.exact),
            "approx": f"{float(self):.12f}",
        }


def _exact_real(poly: UniPoly, r: Fraction, eps: Fraction) -> AlgebraicReal:
    cs = _int_poly(poly)
    w = Fraction(eps) if eps > 0 else Fraction(1, 2)
    while count_roots_in(cs, r - w / 2, r + w / 2) != 1:
        w /= 2
    return AlgebraicReal(poly, r - w / 2, r + w / 2, exact=r)


def real_roots(f: UniPoly, eps: Fraction = Fraction(1, 10**12)) -> list[AlgebraicReal]:
    sqf = f.squarefree_part()
    out = []
    for a, b, ex in isolate_real_roots(sqf):
        if ex is not None:
            out.append(_exact_real(sqf, ex, eps))
        else:
            out.append(_detect_rational(AlgebraicReal(sqf, a, b).refine(eps)))
    return out


def _detect_rational(x: AlgebraicReal) -> AlgebraicReal:
    """Promote to an exact value when the root is a small-height rational."""
    if x.exact is not None:
        return x
    cs = _int_poly(x.poly)
    lead = abs(cs[-1])
    if lead > 10**6:
        return x
    cand = x.midpoint().limit_denominator(lead)
    if x.lo < cand < x.hi and _eval(cs, cand) == 0:
        return _exact_real(x.poly, cand, x.width)
    return x


def largest_real_root(f: UniPoly, eps=Fraction(1, 10**12)) -> AlgebraicReal:
    """Isolating interval of width at most ``eps`` around the largest real root of ``f``."""
    eps = Fraction(eps)
    if f.is_zero():
        raise NoRealRootError("zero polynomial")
    sqf = f.reduce(QQ).squarefree_part()
    iso = isolate_real_roots(sqf)
    if not iso:
        raise NoRealRootError(f"{f} has no real root")
    a, b, ex = iso[-1]
    if ex is not None:
        return _exact_real(sqf, ex, eps)
    return _detect_rational(AlgebraicReal(sqf, a, b).refine(eps))


def rational_roots(f: UniPoly) -> list[Fraction]:
    """Distinct rational roots of ``f``, read off the linear factors of its flint factorization."""
    cs = f.integer_coeffs()
    if len(cs) <= 1:
        return []
    _, facs = flint.fmpz_poly(cs).factor()
    out = []
    for g, _mult in facs:
        if g.degree() == 1:
            c0, c1 = int(g[0]), int(g[1])
            out.append(Fraction(-c0, c1))
    return sorted(out)
