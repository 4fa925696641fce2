"""Infinitely near points of the plane and local linear systems around them.

A point is a proper point of P^2 followed by a path of blow-up steps.  At a
proper point with first nonzero coordinate ``x_k = 1`` the local coordinates
``(s, t)`` are the other two coordinates, in index order, minus their values
at the point.  Blowing up the origin of ``(s, t)`` gives two kinds of points on
the exceptional curve:

* ``("A", c)``: the direction ``t = c s``, reached by ``(s, t) -> (s, s (t + c))``;
* ``("B", None)``: the direction ``s = 0``, reached by ``(s, t) -> (s t, t)``.

Each new point again has local coordinates ``(s, t)`` centred at the origin,
so paths are canonical and two points are equal iff root and path agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import flint

from ..errors import ResidualBaseLocusError
from ..exact.fields import FieldSpec
from ..exact.mpoly import MultiPoly
from ..exact.unipoly import UniPoly
from ..ratmap import ProjectivePoint, RationalMapN

Step = tuple  # ("A", c) or ("B", None)

MAX_HEIGHT = 64


def step_label(step: Step) -> str:
    return "B" if step[0] == "B" else f"A:{step[1]}"


def parse_step(text: str, field: FieldSpec) -> Step:
    text = text.strip()
    if text == "B":
        return ("B", None)
    if text.startswith("A:"):
        return ("A", field(_parse_scalar(text[2:])))
    raise ValueError(f"bad chart step {text!r} (expected 'B' or 'A:<slope>')")


def _parse_scalar(text: str):
    return Fraction(text.strip())


@dataclass(frozen=True)
class InfNearPoint:
    root: ProjectivePoint
    path: tuple = ()

    def __post_init__(self):
        if self.root.n != 2:
            raise ValueError("infinitely near points live over P^2")
        for st in self.path:
            if st[0] not in ("A", "B"):
                raise ValueError(f"bad chart step {st!r}")

    @property
    def field(self) -> FieldSpec:
        return self.root.field

    @property
    def height(self) -> int:
        return len(self.path)

    @property
    def is_proper(self) -> bool:
        return not self.path

    def child(self, step: Step) -> InfNearPoint:
        return InfNearPoint(self.root, self.path + (step,))

    def parent(self) -> Optional[InfNearPoint]:
        return InfNearPoint(self.root, self.path[:-1]) if self.path else None

    def is_infinitely_near(self, other: InfNearPoint) -> bool:
        """True iff ``self`` lies strictly above ``other`` in its tower."""
        return self.root == other.root and len(self.path) > len(other.path) and self.path[: len(other.path)] == other.path

    def reduce(self, field: FieldSpec) -> InfNearPoint:
        if field == self.field:
            return self
        path = tuple((s[0], None if s[1] is None else field(s[1])) for s in self.path)
        return InfNearPoint(self.root.reduce(field), path)

    def chart_path(self) -> list[str]:
        return [step_label(s) for s in self.path]

    def to_json(self) -> dict:
        return {"coords": self.root.to_json(), "chart_path": self.chart_path(), "height": self.height}

    @classmethod
    def from_json(cls, data: dict, field: FieldSpec) -> InfNearPoint:
        root = ProjectivePoint([Fraction(c) for c in data["coords"]], field)
        return cls(root, tuple(parse_step(s, field) for s in data.get("chart_path", [])))

    def __repr__(self):
        tail = "".join(f"/{step_label(s)}" for s in self.path)
        return f"{self.root!r}{tail}"


def proper(*coords, field: FieldSpec) -> InfNearPoint:
    return InfNearPoint(ProjectivePoint(coords, field))


# local systems


def _local_gens(field: FieldSpec):
    return MultiPoly.gens(2, field)


def root_substitution(root: ProjectivePoint) -> list[MultiPoly]:
    """Affine substitution x_i = (root coordinate) + local coordinate around the root."""
    s, t = _local_gens(root.field)
    one = MultiPoly.constant(1, 2, root.field)
    k = root.pivot
    loc = iter((s, t))
    out = []
    for i in range(3):
        out.append(one if i == k else next(loc) + root.coords[i])
    return out


def root_system(components: Sequence[MultiPoly], root: ProjectivePoint) -> list[MultiPoly]:
    sub = root_substitution(root)
    return [c.compose(*sub) for c in components]


class PrecisionExhausted(Exception):
    """A truncated local system vanished below its working precision."""


def root_jet(components: Sequence[MultiPoly], root: ProjectivePoint, prec: int) -> tuple[list[MultiPoly], bool]:
    """``truncate(root_system(components, root), prec)`` without expanding the full translate.

    The members are dehomogenized, shifted in the second local variable by
    Horner's rule while dropping powers ``>= prec``, then each coefficient is
    shifted in the first variable as a univariate polynomial.
    """
    fld = root.field
    k = root.pivot
    i0, i1 = [i for i in range(3) if i != k]
    if max(g.degree() for g in components) < prec or root.coords[i0] == 0 and root.coords[i1] == 0:
        return truncate(root_system(components, root), prec)
    a, b = fld.to_flint(root.coords[i0]), fld.to_flint(root.coords[i1])
    mk = flint.fmpq_poly if fld.is_rational else (lambda cs: flint.nmod_poly(cs, fld.p))
    ctx = fld.mpoly_ctx(2)
    shift_x = mk([a, 1])
    out = []
    for g in components:
        rows: dict[int, list] = {}
        for e, c in g.raw.to_dict().items():
            row = rows.setdefault(int(e[i1]), [])
            xd = int(e[i0])
            row.extend([0] * (xd + 1 - len(row)))
            row[xd] = c
        acc: list = []
        for zd in range(max(rows, default=0), -1, -1):
            # acc <- acc * (b + t) + G_zd(x), dropping t-powers >= prec
            new = [acc[j] * b + (acc[j - 1] if j else 0) for j in range(len(acc))]
            if acc and len(acc) < prec:
                new.append(acc[-1])
            g0 = mk(rows.get(zd, []))
            if new:
                new[0] = new[0] + g0
            else:
                new = [g0]
            acc = new
        data = {}
        for j, h in enumerate(acc):
            if h == 0:
                continue
            for i, c in enumerate(h(shift_x).coeffs()[: prec - j]):
                if c != 0:
                    data[(i, j)] = c
        out.append(MultiPoly(ctx.from_dict(data), fld, 2))
    return out, False


def order(system: Sequence[MultiPoly], exact: bool = True) -> int:
    """Multiplicity of the system at the origin (minimum order of the members)."""
    orders = [g.low_degree() for g in system if not g.is_zero()]
    if not orders:
        if not exact:
            raise PrecisionExhausted
        raise ValueError("all members of the local system vanish identically")
    return min(orders)


def truncate(system: Sequence[MultiPoly], prec: int) -> tuple[list[MultiPoly], bool]:
    """Jets of order ``< prec`` and whether nothing was dropped."""
    out = [g.truncate(prec) for g in system]
    return out, all(len(a) == len(b) for a, b in zip(out, system))


def chart_substitution(step: Step, field: FieldSpec) -> list[MultiPoly]:
    s, t = _local_gens(field)
    if step[0] == "A":
        return [s, s * (t + step[1])]
    return [s * t, t]


def transform(system: Sequence[MultiPoly], step: Step, m: Optional[int] = None) -> list[MultiPoly]:
    """Strict transform of the system at the point reached by ``step``.

    Terms of total degree ``>= D`` only contribute terms of order ``>= D - m``,
    so a system known modulo degree ``D`` is transformed to one known modulo
    degree ``D - m``.
    """
    if m is None:
        m = order(system)
    fld = system[0].field
    sub = chart_substitution(step, fld)
    s, t = _local_gens(fld)
    e = (s if step[0] == "A" else t) ** m
    return [g.compose(*sub).exact_div(e) if m else g.compose(*sub) for g in system]


START_PREC = 32
MAX_PREC = 1 << 14


def with_precision(run, start: int | None = None):
    """Call ``run(prec)`` with doubling precision until it is decided."""
    prec = start or START_PREC
    while prec <= MAX_PREC:
        try:
            return run(prec)
        except PrecisionExhausted:
            prec *= 2
    raise ValueError("local system not decided within the precision limit")


def local_system(components: Sequence[MultiPoly], pt: InfNearPoint, prec: int | None = None) -> tuple[list[MultiPoly], list[int]]:
    """Jet of the system at ``pt`` and the multiplicities met along its tower (root first).

    The returned system is exact modulo terms of total degree at least the
    working precision, which always exceeds the last multiplicity.
    """
    def run(prec):
        sys_, exact = root_jet(components, pt.root, prec)
        mults = []
        for st in pt.path:
            m = order(sys_, exact)
            mults.append(m)
            prec -= m
            sys_, kept = truncate(transform(sys_, st, m), prec)
            exact = exact and kept
        mults.append(order(sys_, exact))
        return sys_, mults

    return with_precision(run, prec)


def multiplicity_at(f: RationalMapN, pt: InfNearPoint) -> int:
    return local_system(f.components, pt.reduce(f.field))[1][-1]


def leading_form(system: Sequence[MultiPoly], m: int) -> MultiPoly:
    g = None
    for p in system:
        h = p.homogeneous_part(m)
        if h.is_zero():
            continue
        g = h if g is None else g.gcd(h)
    if g is None:
        raise ValueError("no member has the expected order")
    return g


@dataclass(frozen=True)
class Directions:
    steps: tuple
    residual: Optional[UniPoly] = None  # directions not defined over the field


def directions(system: Sequence[MultiPoly], m: Optional[int] = None) -> Directions:
    """Points on the exceptional curve where the strict transforms still have a common zero."""
    if m is None:
        m = order(system)
    if m == 0:
        return Directions(())
    h = leading_form(system, m)
    fld = h.field
    k = h.degree()
    if k <= 0:
        return Directions(())
    cs = [fld.zero] * (k + 1)
    for e, c in h.terms().items():
        cs[e[1]] = c
    u = UniPoly(cs, fld)
    steps = []
    residual = None
    if u.degree() > 0:
        roots, rest = u.split_rational_part()
        steps.extend(("A", r) for r in sorted(roots))
        if rest.degree() > 0:
            residual = rest
    if u.degree() < k:
        steps.append(("B", None))
    return Directions(tuple(steps), residual)


def require_complete(d: Directions, where: str):
    if d.residual is not None:
        raise ResidualBaseLocusError(f"directions at {where} not defined over the field: {d.residual}")


__all__ = [
    "Directions", "InfNearPoint", "MAX_HEIGHT", "PrecisionExhausted", "truncate", "with_precision", "Step", "chart_substitution", "directions", "leading_form",
    "local_system", "multiplicity_at", "order", "parse_step", "proper", "root_substitution", "root_system",
    "step_label", "transform",
]
