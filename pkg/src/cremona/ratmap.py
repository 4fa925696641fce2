"""Rational self-maps of projective space.

A map of P^n is stored as ``n + 1`` homogeneous components of one formal
degree with no common factor.  Randomized answers (effective degree,
contraction checks) take an explicit seed and record the primes and lines
they used.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import DegenerateCompositionError, FieldMismatchError, SamplingError, WorkBoundExceeded
from .exact.fields import GF, QQ, FieldSpec, random_primes
from .exact.mpoly import MultiPoly, polys_from_strings
from .exact.unipoly import UniPoly

DEFAULT_WORK_BOUND = 2_000_000


class ProjectivePoint:
    """A point of P^n; equality and hashing are projective."""

    __slots__ = ("coords", "field")

    def __init__(self, coords: Sequence, field: FieldSpec = QQ):
        cs = tuple(field(c) for c in coords)
        if all(c == 0 for c in cs):
            raise ValueError("projective point with all coordinates zero")
        k = next(i for i, c in enumerate(cs) if c != 0)
        inv = field.inv(cs[k])
        self.coords = tuple(field.mul(c, inv) for c in cs)
        self.field = field

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def pivot(self) -> int:
        """Index of the first nonzero coordinate (normalized to 1)."""
        return next(i for i, c in enumerate(self.coords) if c != 0)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords and self.field == other.field

    def __hash__(self):
        return hash((self.coords, self.field))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"

    def reduce(self, field: FieldSpec) -> ProjectivePoint:
        return ProjectivePoint(self.coords, field)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def point(*coords, field: FieldSpec = QQ) -> ProjectivePoint:
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = coords[0]
    return ProjectivePoint(coords, field)


# primitive parts


def content_and_primitive(components: Sequence[MultiPoly]) -> tuple[MultiPoly, tuple[MultiPoly, ...]]:
    """Split off the greatest common divisor of the components.

    Returns ``(g, primitive)`` with ``components[i] == g * primitive[i]``.
    """
    comps = tuple(components)
    nonzero = [c for c in comps if not c.is_zero()]
    if not nonzero:
        raise DegenerateCompositionError("all components are zero")
    g = nonzero[0]
    for c in nonzero[1:]:
        g = g.gcd(c)
        if g.is_constant():
            break
    if g.is_constant():
        return MultiPoly.constant(1, g.nvars, g.field), comps
    return g, tuple(c.exact_div(g) for c in comps)


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]
    seed: int
    primes: tuple[int, ...] = ()

    def is_submultiplicative(self) -> bool:
        d = (1,) + self.degrees
        n = len(self.degrees)
        return all(d[a + b] <= d[a] * d[b] for a in range(1, n + 1) for b in range(1, n + 1 - a))

    def to_json(self) -> dict:
        return {"degrees": list(self.degrees), "seed": self.seed, "primes": list(self.primes)}


@dataclass(frozen=True)
class DegreeCertificate:
    """Outcome of the random-line degree protocol."""

    degree: int
    formal_degree: int
    votes: dict
    primes: tuple[int, ...]
    lines: int
    seed: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "formal_degree": self.formal_degree,
            "votes": {str(k): v for k, v in sorted(self.votes.items())},
            "primes": list(self.primes),
            "lines": self.lines,
            "seed": self.seed,
        }


class RationalMapN:
    """A rational map P^n -> P^n given by primitive homogeneous components."""

    __slots__ = ("components", "field", "n", "degree", "removed_factor")

    def __init__(self, components: Sequence[MultiPoly], *, assume_primitive: bool = False):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map needs components")
        fld, nv = comps[0].field, comps[0].nvars
        for c in comps:
            if c.field != fld:
                raise FieldMismatchError("components over different fields")
            if c.nvars != nv:
                raise ValueError("components in different polynomial rings")
        if len(comps) != nv:
            raise ValueError(f"a self-map of P^{nv - 1} needs {nv} components, got {len(comps)}")
        if all(c.is_zero() for c in comps):
            raise DegenerateCompositionError("all components are zero")
        degs = {c.degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of one degree")
        removed = None
        if not assume_primitive:
            g, comps = content_and_primitive(comps)
            if not g.is_constant():
                removed = g
            degs = {c.degree() for c in comps if not c.is_zero()}
        d = degs.pop()
        if d < 1:
            raise ValueError("a map needs formal degree at least 1")
        self.components = comps
        self.field = fld
        self.n = nv - 1
        self.degree = d
        self.removed_factor = removed

    # constructors

    @classmethod
    def from_strings(cls, strings: Sequence[str], field: FieldSpec = QQ, n: int | None = None) -> RationalMapN:
        nv = None if n is None else n + 1
        comps = polys_from_strings(strings, nv, field)
        if n is None and len(comps) != comps[0].nvars:
            comps = polys_from_strings(strings, len(comps), field)
        return cls(comps)

    @classmethod
    def identity(cls, n: int, field: FieldSpec = QQ) -> RationalMapN:
        return cls(MultiPoly.gens(n + 1, field), assume_primitive=True)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence], field: FieldSpec = QQ) -> RationalMapN:
        """The projective linear map x -> M x."""
        rows = [list(r) for r in matrix]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        if _matrix_rank(rows, field) < len(rows):
            raise ValueError("singular matrix")
        return cls([MultiPoly.linear_form(r, field) for r in rows])

    # evaluation

    def __call__(self, pt) -> tuple:
        coords = pt.coords if isinstance(pt, ProjectivePoint) else tuple(pt)
        return tuple(c(*coords) for c in self.components)

    def image(self, pt) -> ProjectivePoint:
        """Projective image; raises if ``pt`` is in the base locus."""
        vals = self(pt)
        if all(v == 0 for v in vals):
            raise ValueError(f"{pt} lies in the base locus")
        return ProjectivePoint(vals, self.field)

    def reduce(self, field: FieldSpec) -> RationalMapN:
        if field == self.field:
            return self
        return RationalMapN([c.reduce(field) for c in self.components], assume_primitive=True)

    def to_strings(self) -> list[str]:
        names = ("x", "y", "z") if self.n == 2 else None
        return [c.to_string(names) for c in self.components]

    def to_json(self) -> dict:
        return {"n": self.n, "degree": self.degree, "components": self.to_strings(), "field": str(self.field)}

    @classmethod
    def from_json(cls, data: dict) -> RationalMapN:
        fld = FieldSpec.parse(data.get("field", "QQ"))
        m = cls.from_strings(data["components"], fld, int(data["n"]))
        if "degree" in data and int(data["degree"]) != m.degree:
            raise ValueError(f"declared degree {data['degree']} but components have degree {m.degree}")
        return m

    def __repr__(self):
        return f"RationalMapN(({' : '.join(self.to_strings())}), {self.field})"

    def __eq__(self, other):
        return isinstance(other, RationalMapN) and same_map(self, other)

    def __hash__(self):
        return hash((self.n, self.degree, self.field))


def _check_pair(f: RationalMapN, g: RationalMapN):
    if f.n != g.n:
        raise ValueError(f"maps of P^{f.n} and P^{g.n} cannot be composed")
    if f.field != g.field:
        raise FieldMismatchError(f"{f.field} vs {g.field}")


def predicted_monomials(n: int, d: int) -> int:
    return comb(d + n, n)


def compose(f: RationalMapN, g: RationalMapN, work_bound: int | None = DEFAULT_WORK_BOUND) -> RationalMapN:
    """The primitive form of ``f o g`` (substitute g's components into f)."""
    _check_pair(f, g)
    dd = f.degree * g.degree
    if work_bound is not None and predicted_monomials(f.n, dd) > work_bound:
        raise WorkBoundExceeded(
            f"composite of formal degree {dd} may have {predicted_monomials(f.n, dd)} monomials (> {work_bound})"
        )
    comps = [c.compose(*g.components) for c in f.components]
    if all(c.is_zero() for c in comps):
        raise DegenerateCompositionError("g maps P^n into the base locus of f")
    return RationalMapN(comps)


def compose_all(maps: Sequence[RationalMapN], work_bound: int | None = DEFAULT_WORK_BOUND) -> RationalMapN:
    """``maps[0] o maps[1] o ... o maps[-1]``."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out, work_bound)
    return out


def power(f: RationalMapN, k: int, work_bound: int | None = DEFAULT_WORK_BOUND) -> RationalMapN:
    if k < 0:
        raise ValueError("negative powers need the inverse map")
    out = RationalMapN.identity(f.n, f.field)
    for _ in range(k):
        out = compose(f, out, work_bound)
    return out


def cross_minors(f: RationalMapN) -> list[MultiPoly]:
    """The polynomials x_i f_j - x_j f_i for i < j."""
    xs = MultiPoly.gens(f.n + 1, f.field)
    c = f.components
    return [xs[i] * c[j] - xs[j] * c[i] for i in range(f.n + 1) for j in range(i + 1, f.n + 1)]


def is_identity(f: RationalMapN) -> bool:
    """All components are one common scalar times the coordinates."""
    return all(m.is_zero() for m in cross_minors(f))


def same_map(f: RationalMapN, g: RationalMapN) -> bool:
    """Projective equality of primitive maps by cross-multiplication."""
    if f.n != g.n or f.field != g.field:
        return False
    a, b = f.components, g.components
    return all((a[i] * b[j] - a[j] * b[i]).is_zero() for i in range(f.n + 1) for j in range(i + 1, f.n + 1))


def jacobian_det(f: RationalMapN) -> MultiPoly:
    """Determinant of the matrix of partial derivatives, by cofactor expansion with memoization."""
    m = f.n + 1
    J = [[f.components[i].derivative(j) for j in range(m)] for i in range(m)]
    memo: dict = {}

    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == m:
            return MultiPoly.constant(1, m, f.field)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = MultiPoly.zero(m, f.field)
        for pos, c in enumerate(cols):
            entry = J[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            acc = acc + entry * sub if pos % 2 == 0 else acc - entry * sub
        memo[key] = acc
        return acc

    return minor(0, tuple(range(m)))


# random-line protocol


def _restrict_chain(maps: Sequence[RationalMapN], p: int, rng: random.Random):
    """Restrict ``maps[0] o ... o maps[-1]`` to a random affine line over GF(p).

    Returns univariate polynomials (flint, one variable) for each component of
    the formal composite, or None when the line is unusable.
    """
    fld = GF(p)
    ctx = fld.mpoly_ctx(1, ("s",))
    (s,) = ctx.gens()
    n1 = maps[-1].n + 1
    a = [rng.randrange(p) for _ in range(n1)]
    b = [rng.randrange(p) for _ in range(n1)]
    cur = [s * bi + ai for ai, bi in zip(a, b)]
    for m in reversed(maps):
        comps = [c.reduce(fld).raw for c in m.components]
        cur = [c.compose(*cur, ctx=ctx) for c in comps]
        if all(len(c) == 0 for c in cur):
            return None
    return cur


def _flint_uni_to_unipoly(poly, fld: FieldSpec) -> UniPoly:
    if len(poly) == 0:
        return UniPoly([], fld)
    d = poly.degrees()[0]
    cs = [0] * (d + 1)
    for e, c in poly.to_dict().items():
        cs[e[0]] = int(c)
    return UniPoly(cs, fld)


def degree_certificate(
    maps: Sequence[RationalMapN] | RationalMapN, seed: int = 0, lines: int = 3, primes: int = 2, retries: int = 20
) -> DegreeCertificate:
    """Effective degree of a (chain of) map(s) by restriction to random lines.

    The formal composite restricted to a line has components of degree
    ``prod(deg)``; their univariate gcd has the degree of the common factor
    restricted to the line, which a generic line meets transversally.
    """
    if isinstance(maps, RationalMapN):
        maps = [maps]
    maps = list(maps)
    formal = 1
    for m in maps:
        formal *= m.degree
    fields = {m.field for m in maps}
    if len(fields) != 1:
        raise FieldMismatchError("maps of a chain live over different fields")
    (base,) = fields
    if base.is_rational:
        ps = random_primes(seed, primes)
    else:
        # over a prime field all lines are drawn over that field itself
        ps, lines = [base.p], lines * primes
    votes: Counter = Counter()
    for p in ps:
        fld = GF(p)
        rng = random.Random(f"lines:{seed}:{p}")
        got = 0
        attempts = 0
        while got < lines:
            attempts += 1
            if attempts > lines + retries:
                raise SamplingError(f"could not find {lines} usable lines over GF({p})")
            restricted = _restrict_chain(maps, p, rng)
            if restricted is None:
                continue
            polys = [_flint_uni_to_unipoly(r, fld) for r in restricted]
            g = UniPoly([], fld)
            for u in polys:
                g = g.gcd(u) if not g.is_zero() else u.monic()
            top = max(u.degree() for u in polys)
            # a drop of the top degree means the point at infinity of the line is a common zero too
            votes[formal - g.degree() - (formal - top)] += 1
            got += 1
    best = max(votes.items(), key=lambda kv: (kv[1], kv[0]))[0]
    return DegreeCertificate(best, formal, dict(votes), tuple(ps), lines, seed)


def effective_degree(f: RationalMapN | Sequence[RationalMapN], seed: int = 0) -> int:
    return degree_certificate(f, seed).degree


def degree_sequence(
    f: RationalMapN, N: int, seed: int = 0, work_bound: int | None = DEFAULT_WORK_BOUND
) -> DegreeSequence:
    degs = []
    cur = None
    primes: tuple = ()
    for _ in range(N):
        cur = f if cur is None else compose(f, cur, work_bound)
        cert = degree_certificate(cur, seed)
        degs.append(cert.degree)
        primes = cert.primes
    return DegreeSequence(tuple(degs), seed, primes)


# contraction evidence


@dataclass(frozen=True)
class ContractionReport:
    contracted: bool
    tangent_ranks: tuple[int, ...]
    image_span_rank: int
    image_point: tuple | None
    prime: int
    seed: int
    samples: int

    @property
    def verdict(self) -> str:
        return "contraction evidence" if self.contracted else "no contraction detected"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "tangent_ranks": list(self.tangent_ranks),
            "image_span_rank": self.image_span_rank,
            "image_point": None if self.image_point is None else [str(c) for c in self.image_point],
            "prime": self.prime,
            "seed": self.seed,
            "samples": self.samples,
        }


def _matrix_rank(rows, field: FieldSpec) -> int:
    if not field.is_rational:
        return _rank_mod_p([[field(v) for v in r] for r in rows], field.p)
    from .exact.matrix import det_bareiss

    dens = [Fraction(v).denominator for r in rows for v in r]
    from math import lcm

    L = lcm(*dens)
    ints = [[int(Fraction(v) * L) for v in r] for r in rows]
    return len(rows) if det_bareiss(ints) != 0 else len(rows) - 1


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] % p:
                t = m[i][c]
                m[i] = [(v - t * w) % p for v, w in zip(m[i], m[rank])]
        rank += 1
    return rank


def _kernel_mod_p(row: list[int], p: int) -> list[list[int]]:
    """Basis of the vectors v with row . v = 0 (row nonzero)."""
    k = next(i for i, v in enumerate(row) if v % p)
    inv = pow(row[k], -1, p)
    basis = []
    for j in range(len(row)):
        if j == k:
            continue
        v = [0] * len(row)
        v[j] = 1
        v[k] = (-row[j] * inv) % p
        basis.append(v)
    return basis


def sample_points_on(divisor: MultiPoly, count: int, p: int, rng: random.Random, max_tries: int = 4000) -> list[tuple]:
    """Points of ``divisor = 0`` over GF(p), found by solving for one coordinate."""
    fld = GF(p)
    D = divisor.reduce(fld)
    nv = D.nvars
    var = max(range(nv), key=lambda i: D.degree_in(i))
    if D.degree_in(var) <= 0:
        raise SamplingError("divisor is constant")
    ctx1 = fld.mpoly_ctx(1, ("s",))
    (s,) = ctx1.gens()
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise SamplingError(f"found only {len(out)} points on the divisor")
        vals = [rng.randrange(p) for _ in range(nv)]
        subs = [s if i == var else ctx1.from_dict({(0,): vals[i]}) for i in range(nv)]
        uni = _flint_uni_to_unipoly(D.raw.compose(*subs, ctx=ctx1), fld)
        if uni.degree() <= 0:
            continue
        rts = uni.roots(seed=rng.randrange(1 << 30))
        if not rts:
            continue
        vals[var] = rts[0]
        out.append(tuple(vals))
    return out


def contracts(f: RationalMapN, divisor: MultiPoly, seed: int = 0, samples: int = 16) -> ContractionReport:
    """Decide whether ``f`` contracts the hypersurface ``divisor = 0``.

    At sampled points q of the divisor, the differential of f restricted to
    the tangent space T_q D has rank n when f is generically finite on D; a
    smaller rank at every sample is evidence of contraction.
    """
    (p,) = random_primes(seed, 1)
    fld = GF(p)
    rng = random.Random(f"contracts:{seed}")
    F = f.reduce(fld)
    D = divisor.reduce(fld)
    J = [[c.derivative(j) for j in range(f.n + 1)] for c in F.components]
    grad = D.gradient()
    ranks = []
    images = []
    pts = sample_points_on(divisor, 4 * samples, p, rng)
    for q in pts:
        if len(ranks) >= samples:
            break
        val = F(q)
        if all(v == 0 for v in val):
            continue
        g = [gi(*q) for gi in grad]
        if all(v == 0 for v in g):
            continue
        # tangent directions of the affine cone over D at q, taken modulo q itself
        T = _kernel_mod_p(g, p)
        Jq = [[e(*q) for e in row] for row in J]
        cols = [[sum(Jq[i][j] * t[j] for j in range(f.n + 1)) % p for i in range(f.n + 1)] for t in T]
        # the columns include the image of the radial direction; drop it through the span with f(q)
        r = _rank_mod_p([list(val)] + cols, p) - 1
        ranks.append(r)
        images.append(list(val))
    if len(ranks) < samples:
        raise SamplingError("too few usable samples on the divisor")
    span = _rank_mod_p(images, p)
    pt = None
    if span == 1:
        pt = tuple(ProjectivePoint(images[0], fld).coords)
    contracted = all(r < f.n - 1 for r in ranks)
    return ContractionReport(contracted, tuple(ranks), span, pt, p, seed, len(ranks))
