"""Dense univariate polynomials over QQ or GF(p)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ..errors import FieldMismatchError
from .fields import QQ, FieldSpec


class UniPoly:
    """Coefficients stored low-to-high; the zero polynomial has no coefficients."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence = (), field: FieldSpec = QQ):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def x(cls, field: FieldSpec = QQ) -> UniPoly:
        return cls([0, 1], field)

    @classmethod
    def from_roots(cls, roots, field: FieldSpec = QQ) -> UniPoly:
        out = cls([1], field)
        for r in roots:
            out = out * cls([-field(r), 1], field)
        return out

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __repr__(self):
        return f"UniPoly({list(map(str, self.coeffs))}, {self.field})"

    def __str__(self):
        return self.to_string()

    def to_string(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree(), -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            neg = self.field.is_rational and c < 0
            mag = -c if neg else c
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly([other], self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _coerce(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other
        return UniPoly([other], self.field)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly([], self.field)
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out, base = UniPoly([1], self.field), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c if f.is_rational else (acc * x + c) % f.p
        return acc

    def divmod(self, other) -> tuple[UniPoly, UniPoly]:
        d = self._coerce(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        r = list(self.coeffs)
        q = [f.zero] * max(len(r) - len(d.coeffs) + 1, 0)
        inv = f.inv(d.lc)
        dd = d.degree()
        for k in range(len(r) - 1, dd - 1, -1):
            c = f.mul(r[k], inv)
            if c == 0:
                continue
            q[k - dd] = c
            for j, b in enumerate(d.coeffs):
                r[k - dd + j] = f.sub(r[k - dd + j], f.mul(c, b))
        return UniPoly(q, f), UniPoly(r[:dd] if dd > 0 else [], f)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other) -> UniPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other) -> bool:
        return (self._coerce(other) % self).is_zero()

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        inv = self.field.inv(self.lc)
        return UniPoly([self.field.mul(c, inv) for c in self.coeffs], self.field)

    def gcd(self, other) -> UniPoly:
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> UniPoly:
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:], self.field)

    def squarefree_part(self) -> UniPoly:
        """Product of the distinct irreducible factors (characteristic 0 or degree < p)."""
        if self.degree() <= 0:
            return self.monic()
        return self.exact_div(self.gcd(self.derivative())).monic()

    def compose(self, other) -> UniPoly:
        acc = UniPoly([], self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def integer_coeffs(self) -> list[int]:
        """Over QQ: the primitive integer multiple with positive leading coefficient."""
        if not self.field.is_rational:
            raise FieldMismatchError("integer coefficients only make sense over QQ")
        if not self.coeffs:
            return []
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = gcd(*ints)
        ints = [c // g for c in ints]
        return ints if ints[-1] > 0 else [-c for c in ints]

    def reduce(self, field: FieldSpec) -> UniPoly:
        if field == self.field:
            return self
        return UniPoly(self.coeffs, field)

    def roots(self, seed: int = 0) -> list:
        """Distinct roots lying in the coefficient field, in increasing order."""
        if self.is_zero():
            raise ValueError("the zero polynomial has every element as a root")
        if self.field.is_rational:
            from .roots import rational_roots

            return rational_roots(self)
        return sorted(_roots_mod_p(self.monic(), random.Random(seed)))

    def split_rational_part(self, seed: int = 0) -> tuple[list, UniPoly]:
        """Distinct roots in the field and the cofactor of the square-free part without them."""
        if self.degree() <= 0:
            return [], UniPoly([1], self.field)
        sqf = self.squarefree_part()
        rts = sqf.roots(seed)
        rest = sqf
        for r in rts:
            rest = rest.exact_div(UniPoly([-r, 1], self.field))
        return rts, rest.monic()


def _powmod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    out = UniPoly([1], base.field)
    base = base % mod
    while e:
        if e & 1:
            out = (out * base) % mod
        base = (base * base) % mod
        e >>= 1
    return out


def _roots_mod_p(f: UniPoly, rng: random.Random) -> list[int]:
    """Cantor-Zassenhaus equal-degree splitting restricted to linear factors."""
    p = f.field.p
    x = UniPoly.x(f.field)
    # gcd with x^p - x keeps exactly the product of distinct linear factors
    g = f.gcd(_powmod(x, p, f) - x)
    out: list[int] = []
    stack = [g]
    while stack:
        h = stack.pop()
        d = h.degree()
        if d <= 0:
            continue
        if d == 1:
            out.append(f.field.neg(h.monic().coeffs[0]))
            continue
        while True:
            a = rng.randrange(p)
            w = _powmod(UniPoly([a, 1], f.field), (p - 1) // 2, h) - 1
            k = h.gcd(w)
            if 0 < k.degree() < d:
                stack.append(k)
                stack.append(h.exact_div(k))
                break
    return out
