"""Sparse multivariate polynomials over QQ or GF(p).

:class:`MultiPoly` is an immutable wrapper around a flint ``fmpq_mpoly`` or
``nmod_mpoly``.  The wrapper pins the coefficient field and the variable
count, so mixing operands from different rings fails loudly instead of
being silently coerced.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

from ..errors import FieldMismatchError, ParseError, VariableCountError
from .fields import QQ, FieldSpec

_PLANE = ("x", "y", "z")


class MultiPoly:
    __slots__ = ("field", "nvars", "_raw")

    def __init__(self, raw, field: FieldSpec, nvars: int):
        self._raw = raw
        self.field = field
        self.nvars = nvars

    # construction

    @classmethod
    def from_terms(cls, terms: Mapping[Sequence[int], object], nvars: int, field: FieldSpec = QQ) -> MultiPoly:
        ctx = field.mpoly_ctx(nvars)
        data = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise VariableCountError(f"exponent vector {exps} has wrong length for {nvars} variables")
            if min(exps, default=0) < 0:
                raise ValueError("negative exponent")
            c = field(c)
            if c != 0:
                data[exps] = field.to_flint(c)
        return cls(ctx.from_dict(data), field, nvars)

    @classmethod
    def zero(cls, nvars: int, field: FieldSpec = QQ) -> MultiPoly:
        return cls(field.mpoly_ctx(nvars).from_dict({}), field, nvars)

    @classmethod
    def constant(cls, c, nvars: int, field: FieldSpec = QQ) -> MultiPoly:
        return cls.from_terms({(0,) * nvars: c}, nvars, field)

    @classmethod
    def gens(cls, nvars: int, field: FieldSpec = QQ) -> tuple[MultiPoly, ...]:
        return tuple(cls(g, field, nvars) for g in field.mpoly_ctx(nvars).gens())

    @classmethod
    def gen(cls, i: int, nvars: int, field: FieldSpec = QQ) -> MultiPoly:
        return cls.gens(nvars, field)[i]

    @classmethod
    def linear_form(cls, coeffs: Sequence, field: FieldSpec = QQ) -> MultiPoly:
        n = len(coeffs)
        return cls.from_terms({tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)}, n, field)

    @classmethod
    def parse(cls, text: str, nvars: int | None = None, field: FieldSpec = QQ) -> MultiPoly:
        return _Parser(text, nvars, field).run()

    # inspection

    @property
    def raw(self):
        return self._raw

    def terms(self) -> dict[tuple[int, ...], object]:
        conv = self.field.from_flint
        return {tuple(int(v) for v in e): conv(c) for e, c in self._raw.to_dict().items()}

    def monomials(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in e) for e in self._raw.monoms()]

    def coefficient(self, exps: Sequence[int]):
        return self.terms().get(tuple(exps), self.field.zero)

    def __len__(self):
        return len(self._raw)

    def is_zero(self) -> bool:
        return len(self._raw) == 0

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._raw.monoms())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return int(self._raw.total_degree())

    def low_degree(self) -> int:
        """Smallest total degree of a monomial, i.e. the order of vanishing at the origin."""
        if self.is_zero():
            return -1
        return int(min(sum(e) for e in self._raw.monoms()))

    def truncate(self, prec: int) -> MultiPoly:
        """Drop every monomial of total degree >= prec."""
        if self.degree() < prec:
            return self
        data = {e: c for e, c in self._raw.to_dict().items() if sum(e) < prec}
        return self._wrap(self.field.mpoly_ctx(self.nvars).from_dict(data))

    def degree_in(self, i: int) -> int:
        if self.is_zero():
            return -1
        return int(self._raw.degrees()[i])

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._raw.monoms()}) <= 1

    def homogeneous_part(self, k: int) -> MultiPoly:
        return MultiPoly.from_terms({e: c for e, c in self.terms().items() if sum(e) == k}, self.nvars, self.field)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def used_variables(self) -> list[int]:
        degs = self._raw.degrees() if not self.is_zero() else [0] * self.nvars
        return [i for i, d in enumerate(degs) if d > 0]

    # arithmetic

    def _wrap(self, raw) -> MultiPoly:
        return MultiPoly(raw, self.field, self.nvars)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            if other.nvars != self.nvars:
                raise VariableCountError(f"{self.nvars} vs {other.nvars} variables")
            return other._raw
        if isinstance(other, (int, Fraction)):
            return self.field.to_flint(self.field(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self._raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self._raw - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self._raw)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self._raw * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self._raw)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative int")
        return self._wrap(self._raw**k)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.field == other.field and self.nvars == other.nvars and self._raw == other._raw
        if isinstance(other, (int, Fraction)):
            return self._raw == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms().items())))

    def divides(self, other: MultiPoly) -> bool:
        """True iff ``self`` divides ``other`` exactly."""
        o = self._coerce(other)
        if self.is_zero():
            return other.is_zero()
        return (o % self._raw) == 0 if len(o) else True

    def exact_div(self, other) -> MultiPoly:
        o = self._coerce(other)
        try:
            return self._wrap(self._raw / o)
        except Exception as exc:  # flint raises DomainError
            raise ArithmeticError(f"division is not exact: {exc}") from None

    def divmod(self, other: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        q, r = divmod(self._raw, self._coerce(other))
        return self._wrap(q), self._wrap(r)

    def gcd(self, other: MultiPoly) -> MultiPoly:
        return self._wrap(self._raw.gcd(self._coerce(other)))

    def derivative(self, i: int) -> MultiPoly:
        return self._wrap(self._raw.derivative(i))

    def gradient(self) -> list[MultiPoly]:
        return [self.derivative(i) for i in range(self.nvars)]

    def resultant(self, other: MultiPoly, i: int) -> MultiPoly:
        return self._wrap(self._raw.resultant(self._coerce(other), i))

    def __call__(self, *values):
        """Evaluate at a point given by field elements."""
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        if len(values) != self.nvars:
            raise VariableCountError(f"expected {self.nvars} values, got {len(values)}")
        if self.is_zero():
            return self.field.zero
        f = self.field
        return f.from_flint(self._raw(*[f.to_flint(f(v)) for v in values])) if f.is_rational else int(
            self._raw(*[f(v) for v in values])
        )

    def compose(self, *polys: MultiPoly) -> MultiPoly:
        """Substitute ``polys[i]`` for ``x_i``; the result lives in the ring of ``polys``."""
        if len(polys) == 1 and isinstance(polys[0], (list, tuple)):
            polys = tuple(polys[0])
        if len(polys) != self.nvars:
            raise VariableCountError(f"expected {self.nvars} substitutions, got {len(polys)}")
        target = polys[0]
        for g in polys:
            if g.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {g.field}")
            if g.nvars != target.nvars:
                raise VariableCountError("substituted polynomials live in different rings")
        ctx = self.field.mpoly_ctx(target.nvars)
        return MultiPoly(self._raw.compose(*[g._raw for g in polys], ctx=ctx), self.field, target.nvars)

    def scale_variables(self, scales: Sequence) -> MultiPoly:
        """Substitute ``scales[i] * x_i`` for ``x_i``."""
        gens = MultiPoly.gens(self.nvars, self.field)
        return self.compose(*[g * s for g, s in zip(gens, scales)])

    def reduce(self, field: FieldSpec) -> MultiPoly:
        """Map coefficients from QQ into ``field`` (identity when fields agree)."""
        if field == self.field:
            return self
        if not self.field.is_rational:
            raise FieldMismatchError(f"cannot reduce from {self.field} to {field}")
        return MultiPoly.from_terms(self.terms(), self.nvars, field)

    def monic(self) -> MultiPoly:
        """Scale so that the leading coefficient (flint's ordering) is 1."""
        if self.is_zero():
            return self
        lc = self.field.from_flint(self._raw.leading_coefficient())
        return self * self.field.inv(lc)

    def content_normalized(self) -> MultiPoly:
        """Over QQ: the primitive integer polynomial with positive leading term; else monic."""
        if self.is_zero() or not self.field.is_rational:
            return self.monic()
        from math import gcd, lcm

        cs = list(self.terms().values())
        den = lcm(*(c.denominator for c in cs))
        num = gcd(*(int(c * den) for c in cs))
        scaled = self * Fraction(den, num)
        if self.field.from_flint(scaled._raw.leading_coefficient()) < 0:
            scaled = -scaled
        return scaled

    # text

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        items = sorted(self.terms().items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))
        if not items:
            return "0"
        out = []
        for idx, (exps, c) in enumerate(items):
            if self.field.is_rational:
                neg = c < 0
                mag = -c if neg else c
            else:
                neg, mag = False, c
            mono = "*".join(names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __str__(self):
        return self.to_string(_PLANE if self.nvars == 3 else None)

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r}, nvars={self.nvars}, field={self.field})"


class _Parser:
    """Recursive descent for ``+ - * / ^`` and parentheses over x0..xN (x,y,z aliases)."""

    _TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|[xyz])|(\*\*|[-+*/^()]))")

    def __init__(self, text: str, nvars: int | None, field: FieldSpec):
        self.text = text
        self.field = field
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character at offset {pos} in {self.text!r}")
            num, var, op = m.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif var is not None:
                self.tokens.append(("var", _PLANE.index(var) if var in _PLANE else int(var[1:])))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        used = [v for kind, v in self.tokens if kind == "var"]
        need = max(used) + 1 if used else 1
        if any(re.fullmatch(r"[xyz]", s) for s in re.findall(r"x\d+|[xyz]", self.text)):
            need = max(need, 3)
        if nvars is None:
            nvars = need
        elif nvars < need:
            raise VariableCountError(f"{self.text!r} needs {need} variables, got {nvars}")
        self.nvars = nvars
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def run(self) -> MultiPoly:
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                if val == "*":
                    acc = acc * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise ParseError("division only by nonzero constants")
                    acc = acc * self.field.inv(rhs.constant_term())
            else:
                return acc

    def factor(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return base**e
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.constant(val, self.nvars, self.field)
        if kind == "var":
            return MultiPoly.gen(val, self.nvars, self.field)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return -self.factor()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def polys_from_strings(strings: Iterable[str], nvars: int | None = None, field: FieldSpec = QQ) -> list[MultiPoly]:
    strings = list(strings)
    if nvars is None:
        nvars = max(_Parser(s, None, field).nvars for s in strings)
    return [MultiPoly.parse(s, nvars, field) for s in strings]
