"""Coefficient fields: the rationals and prime fields GF(p).

Elements of QQ are :class:`fractions.Fraction`; elements of GF(p) are plain
ints in ``range(p)``.  Nothing in this layer touches floating point.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

_GF_RE = re.compile(r"^\s*(?:GF\(\s*(\d+)\s*\)|F_?(\d+)|(\d+))\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """The rationals (``p == 0``) or the prime field with ``p`` elements."""

    p: int = 0

    def __post_init__(self):
        if self.p == 0:
            return
        if self.p < 3 or not flint.fmpz(self.p).is_prime():
            raise ValueError(f"{self.p} is not an odd prime")
        if self.p >= 1 << 64:
            raise ValueError("prime fields are limited to p < 2^64")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __repr__(self):
        return f"FieldSpec({self})"

    @classmethod
    def parse(cls, text) -> FieldSpec:
        """Accept ``QQ``, ``Q``, ``GF(p)``, ``Fp`` or a bare prime."""
        if isinstance(text, FieldSpec):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip()
        if s.upper() in ("QQ", "Q", "RATIONALS", "0"):
            return QQ
        m = _GF_RE.match(s)
        if not m:
            raise ValueError(f"unrecognized field {text!r}")
        return cls(int(next(g for g in m.groups() if g)))

    # elements

    def __call__(self, value):
        """Coerce an int, Fraction, flint scalar or ``"a/b"`` string."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif isinstance(value, flint.fmpq):
            value = Fraction(int(value.p), int(value.q))
        elif isinstance(value, (flint.fmpz, flint.nmod)):
            value = int(value)
        if self.p == 0:
            if isinstance(value, float):
                raise TypeError("floats are not exact field elements")
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {value.denominator} vanishes in {self}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, int):
            return value % self.p
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def neg(self, a):
        return -a if self.p == 0 else -a % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        return str(a)

    def random_element(self, rng: random.Random, height: int = 10):
        if self.p == 0:
            return Fraction(rng.randint(-height, height))
        return rng.randrange(self.p)

    # flint plumbing

    def to_flint(self, a):
        if self.p == 0:
            a = Fraction(a)
            return flint.fmpq(a.numerator, a.denominator)
        return int(a) % self.p

    def from_flint(self, c):
        if self.p == 0:
            return Fraction(int(c.p), int(c.q))
        return int(c)

    def mpoly_ctx(self, nvars: int, names=None):
        names = tuple(names) if names else tuple(f"x{i}" for i in range(nvars))
        return _ctx(self.p, names)


@lru_cache(maxsize=None)
def _ctx(p, names):
    if p == 0:
        return flint.fmpq_mpoly_ctx.get(names, ordering="degrevlex")
    return flint.nmod_mpoly_ctx.get(names, ordering="degrevlex", modulus=p)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def random_primes(seed: int, count: int, bits: int = 31, one_mod_three: bool = False) -> list[int]:
    """Distinct primes in ``[2^bits, 2^(bits+1))`` drawn deterministically from ``seed``."""
    rng = random.Random(f"primes:{seed}:{bits}:{one_mod_three}")
    out: list[int] = []
    while len(out) < count:
        n = rng.randrange(1 << bits, 1 << (bits + 1)) | 1
        if one_mod_three and n % 3 != 1:
            continue
        if flint.fmpz(n).is_prime() and n not in out:
            out.append(n)
    return out


def cube_root_of_unity(p: int) -> int:
    """A primitive cube root of unity in GF(p), for ``p % 3 == 1``."""
    if p % 3 != 1:
        raise ValueError("GF(p) has no primitive cube root of unity unless p = 1 mod 3")
    g = 2
    while True:
        w = pow(g, (p - 1) // 3, p)
        if w != 1:
            return w
        g += 1
