"""Integer lattices of divisor classes and the action of the involutions on them.

Words are sequences of generator indices ``1..k``.  The word ``[a, b, c]``
stands for the composite sigma_a o sigma_b o sigma_c, so the rightmost
letter is applied first.  All matrices act on column vectors: column ``j``
is the image of basis vector ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exact.matrix import IntMatrix, as_matrix, char_poly, identity, mat_mul, mat_product, mat_vec, matrix_to_json
from .exact.roots import AlgebraicReal, largest_real_root
from .exact.unipoly import UniPoly

Word = tuple[int, ...]


class BasisKind(str, Enum):
    HEF = "HEF"
    HNU = "HNu"
    PLANE_SIX_POINT = "PlaneSixPoint"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class PicBasis:
    kind: BasisKind
    labels: tuple[str, ...]
    form: IntMatrix | None = None  # intersection form, when the basis carries one

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")
        if self.form is not None and len(self.form) != len(self.labels):
            raise ValueError("intersection form has the wrong size")

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def hef(cls) -> PicBasis:
        """H, the exceptional divisor E over the point, and F over the residual locus."""
        return cls(BasisKind.HEF, ("H", "E", "F"))

    @classmethod
    def hnu(cls, k: int) -> PicBasis:
        """H and nu_i = sigma_i(H) - H for k generators."""
        if k < 1:
            raise ValueError("need at least one generator")
        return cls(BasisKind.HNU, ("H",) + tuple(f"nu{i}" for i in range(1, k + 1)))

    @classmethod
    def plane_six_point(cls) -> PicBasis:
        """L, E, E1..E4 on the blow-up of the plane at five points, with form diag(1,-1,...,-1)."""
        form = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(6)) for i in range(6))
        return cls(BasisKind.PLANE_SIX_POINT, ("L", "E", "E1", "E2", "E3", "E4"), form)

    @classmethod
    def custom(cls, labels: Sequence[str], form: Sequence[Sequence[int]] | None = None) -> PicBasis:
        return cls(BasisKind.CUSTOM, tuple(labels), None if form is None else as_matrix(form))


@dataclass(frozen=True)
class PicClass:
    basis: PicBasis
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.basis.dim:
            raise ValueError("class has the wrong dimension")

    def apply(self, m: IntMatrix) -> PicClass:
        return PicClass(self.basis, mat_vec(m, self.coords))

    def __str__(self):
        parts = []
        for c, lab in zip(self.coords, self.basis.labels):
            if c:
                parts.append(f"{c}*{lab}" if c != 1 else lab)
        return " + ".join(parts).replace("+ -", "- ") or "0"


# Single involution on H, E, F (columns: images of H, E, F).
HEF_MATRIX: IntMatrix = ((3, 2, 4), (-2, -1, -4), (-1, -1, -1))

# Five-point plane involution on L, E, E1..E4.
PLANE_SIX_POINT_MATRIX: IntMatrix = (
    (3, 2, 1, 1, 1, 1),
    (-2, -1, -1, -1, -1, -1),
    (-1, -1, -1, 0, 0, 0),
    (-1, -1, 0, -1, 0, 0),
    (-1, -1, 0, 0, -1, 0),
    (-1, -1, 0, 0, 0, -1),
)


def hnu_matrix(k: int, i: int) -> IntMatrix:
    """sigma_i(H) = H + nu_i, sigma_i(nu_i) = -nu_i, sigma_i(nu_j) = nu_j + 2 nu_i."""
    if not 1 <= i <= k:
        raise ValueError(f"generator {i} outside 1..{k}")
    d = k + 1
    m = [[0] * d for _ in range(d)]
    m[0][0] = 1
    m[i][0] = 1
    for j in range(1, d):
        if j == i:
            m[i][i] = -1
        else:
            m[j][j] = 1
            m[i][j] = 2
    return as_matrix(m)


def sigma_action(basis: PicBasis, i: int = 1, constants: dict | None = None) -> IntMatrix:
    """Matrix of the i-th involution in the given basis.

    ``constants`` may override the fixed matrices (used for fault injection).
    """
    constants = constants or {}
    if basis.kind == BasisKind.HEF:
        if i != 1:
            raise ValueError("the (H, E, F) basis describes a single involution")
        return as_matrix(constants.get("hef", HEF_MATRIX))
    if basis.kind == BasisKind.PLANE_SIX_POINT:
        if i != 1:
            raise ValueError("the plane six-point basis describes a single involution")
        return as_matrix(constants.get("plane_six_point", PLANE_SIX_POINT_MATRIX))
    if basis.kind == BasisKind.HNU:
        return hnu_matrix(basis.dim - 1, i)
    raise ValueError("no involution is attached to a custom basis")


def is_involution_matrix(m: IntMatrix) -> bool:
    return mat_mul(m, m) == identity(len(m))


# words


def _check_word(w: Iterable[int]) -> Word:
    w = tuple(int(a) for a in w)
    if any(a < 1 for a in w):
        raise ValueError("letters are generator indices starting at 1")
    return w


def word_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for a in _check_word(w):
        if out and out[-1] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    """Reduce, then cancel equal first and last letters (conjugation)."""
    r = list(word_reduce(w))
    while len(r) >= 2 and r[0] == r[-1]:
        r = list(word_reduce(r[1:-1]))
    return tuple(r)


def reduced_words(length: int, k: int) -> Iterable[Word]:
    """All reduced words of exactly the given length over k letters."""
    if length == 0:
        yield ()
        return
    for first in range(1, k + 1):
        stack = [(first,)]
        while stack:
            w = stack.pop()
            if len(w) == length:
                yield w
                continue
            for a in range(k, 0, -1):
                if a != w[-1]:
                    stack.append(w + (a,))


@dataclass(frozen=True)
class AlphaVector:
    """phi(H) = H + sum alpha_i nu_i for the word phi.

    ``order`` documents the composition convention.
    """

    word: Word
    alpha: tuple[int, ...]
    t: int
    order: str = "rightmost letter applied first"

    @property
    def total(self) -> int:
        return sum(self.alpha)

    def to_json(self) -> dict:
        return {"word": list(self.word), "alpha": list(self.alpha), "t": self.t, "order": self.order}


def _num_generators(w: Word, k: int | None) -> int:
    m = max(w, default=0)
    if k is None:
        return max(m, 1)
    if m > k:
        raise ValueError(f"word uses generator {m} but k = {k}")
    return k


def alpha_vector(w: Iterable[int], k: int | None = None) -> AlphaVector:
    w = _check_word(w)
    if word_reduce(w) != w:
        raise ValueError("alpha_vector expects a reduced word")
    k = _num_generators(w, k)
    alpha = [0] * k
    for a in reversed(w):
        s = sum(alpha) - alpha[a - 1]
        alpha[a - 1] = 1 - alpha[a - 1] + 2 * s
    applied = list(reversed(w))  # applied[0] is the first letter applied
    t = sum(1 for i in range(2, len(applied)) if applied[i] != applied[i - 2])
    return AlphaVector(w, tuple(alpha), t)


def predicted_degree(w: Iterable[int], k: int | None = None) -> int:
    return 1 + 2 * alpha_vector(word_reduce(w), k).total


def word_matrix(w: Sequence[int], k: int) -> IntMatrix:
    """Product of the H, nu matrices, leftmost letter leftmost."""
    return mat_product([hnu_matrix(k, a) for a in w], d=k + 1)


def growth_invariants(av: AlphaVector) -> dict[str, bool]:
    """The four inequalities satisfied by the alpha vector of a reduced word."""
    w, alpha = av.word, av.alpha
    out = {"nonnegative": all(a >= 0 for a in alpha)}
    if w:
        last = w[0] - 1  # the last letter applied
        out["last_dominates"] = all(alpha[last] > alpha[i] for i in range(len(alpha)) if i != last)
    else:
        out["last_dominates"] = True
    if len(w) > 1:
        prev = w[1] - 1
        out["second_dominates"] = all(
            alpha[prev] > alpha[i] for i in range(len(alpha)) if i not in (w[0] - 1, prev)
        )
    else:
        out["second_dominates"] = True
    # sum alpha >= (5/3)^t, compared exactly as 3^t * sum >= 5^t; the empty word is exempt
    out["growth"] = not w or 3**av.t * av.total >= 5**av.t
    return out


# dynamical degrees


class Verdict(str, Enum):
    FINITE_ORDER = "FiniteOrder"
    INFINITE_DYNDEG_ONE = "InfiniteDynDegOne"
    DYNDEG_GREATER_ONE = "DynDegGreaterOne"


@dataclass(frozen=True)
class DynDegResult:
    word: Word
    support: tuple[int, ...]
    matrix: IntMatrix
    charpoly: UniPoly
    dyndeg: AlgebraicReal

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "support": list(self.support),
            "matrix": matrix_to_json(self.matrix),
            "charpoly": [str(c) for c in self.charpoly.integer_coeffs()],
            "charpoly_text": str(self.charpoly),
            "dyndeg": self.dyndeg.to_json(),
        }


def support_matrix(w: Sequence[int]) -> tuple[tuple[int, ...], IntMatrix]:
    """Product of the involution matrices on the sublattice spanned by H and nu_i, i in the support."""
    support = tuple(sorted(set(w)))
    relabel = {a: i + 1 for i, a in enumerate(support)}
    k = len(support)
    return support, word_matrix([relabel[a] for a in w], k)


def dyndeg_data(w: Iterable[int], eps=Fraction(1, 10**12)) -> DynDegResult:
    w = cyclic_reduce(w)
    if not w:
        one = largest_real_root(UniPoly([-1, 1]), eps)
        return DynDegResult((), (), identity(1), UniPoly([-1, 1]), one)
    support, m = support_matrix(w)
    cp = char_poly(m)
    return DynDegResult(w, support, m, cp, largest_real_root(cp, eps))


def dyndeg(w: Iterable[int], eps=Fraction(1, 10**12)) -> AlgebraicReal:
    return dyndeg_data(w, eps).dyndeg


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    dyndeg: AlgebraicReal
    cyclic_word: Word

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "cyclic_word": list(self.cyclic_word), "dyndeg": self.dyndeg.to_json()}


def classify(w: Iterable[int], eps=Fraction(1, 10**12)) -> Classification:
    c = cyclic_reduce(w)
    if len(c) <= 1:
        return Classification(Verdict.FINITE_ORDER, dyndeg(c, eps), c)
    d = dyndeg(c, eps)
    if len(set(c)) == 2:
        # a cyclically reduced word in two letters alternates them
        if not d.is_rational or d.exact != 1:
            raise AssertionError("two-letter word with dynamical degree other than 1")
        return Classification(Verdict.INFINITE_DYNDEG_ONE, d, c)
    if d.compare(Fraction(1)) <= 0 or d.lo < 1:
        d = _lift_above_one(d)
    return Classification(Verdict.DYNDEG_GREATER_ONE, d, c)


def _lift_above_one(d: AlgebraicReal) -> AlgebraicReal:
    """Refine until the isolating interval lies strictly above 1."""
    if d.compare(Fraction(1)) <= 0:
        raise AssertionError("expected a dynamical degree above 1")
    while d.lo <= 1:
        d = d.refine(d.width / 2)
    return d


# the plane twists


# Classes on the plane blown up so that the involution and the linear twist
# both lift to automorphisms; rows/columns follow the fixed basis order of
# each case.  Transcribed constants, not re-derived.
TWIST_CASE1_SIGMA: IntMatrix = (
    (3, 2, 1, 0, 3, 0, 0),
    (-2, -1, -1, 0, -3, 0, 0),
    (-1, -1, -1, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (-1, -1, 0, 0, -1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 1),
)
TWIST_CASE1_TAU: IntMatrix = (
    (1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (0, 1, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
)
TWIST_CASE1_PRODUCT: IntMatrix = (
    (3, 2, 1, 0, 3, 0, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (-2, -1, -1, 0, -3, 0, 0),
    (-1, -1, -1, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1),
    (-1, -1, 0, 0, -1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
)
TWIST_CASE2_SIGMA: IntMatrix = ((3, 8, 0, 0), (-1, -3, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
TWIST_CASE2_TAU: IntMatrix = ((1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0))
TWIST_CASE2_PRODUCT: IntMatrix = ((3, 8, 0, 0), (0, 0, 0, 1), (-1, -3, 0, 0), (0, 0, 1, 0))

TWIST_CASES = {
    1: (TWIST_CASE1_SIGMA, TWIST_CASE1_TAU, TWIST_CASE1_PRODUCT),
    2: (TWIST_CASE2_SIGMA, TWIST_CASE2_TAU, TWIST_CASE2_PRODUCT),
}


@dataclass(frozen=True)
class TwistResult:
    case: int
    sigma: IntMatrix
    tau: IntMatrix
    product: IntMatrix
    product_matches_table: bool
    charpoly: UniPoly
    dyndeg: AlgebraicReal

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "sigma": matrix_to_json(self.sigma),
            "tau": matrix_to_json(self.tau),
            "product": matrix_to_json(self.product),
            "product_matches_table": self.product_matches_table,
            "charpoly": [str(c) for c in self.charpoly.integer_coeffs()],
            "charpoly_text": str(self.charpoly),
            "dyndeg": self.dyndeg.to_json(),
        }


def plane_twist_matrices(case: int, eps=Fraction(1, 10**12), constants: dict | None = None) -> TwistResult:
    """tau * sigma for the twist case, its characteristic polynomial and its largest real root."""
    if case not in TWIST_CASES:
        raise ValueError("case must be 1 or 2")
    constants = constants or {}
    s, t, table = TWIST_CASES[case]
    s = as_matrix(constants.get(f"twist{case}_sigma", s))
    t = as_matrix(constants.get(f"twist{case}_tau", t))
    prod = mat_mul(t, s)
    cp = char_poly(prod)
    return TwistResult(case, s, t, prod, prod == table, cp, largest_real_root(cp, eps))


def all_reduced_words(max_length: int, k: int) -> Iterable[Word]:
    for length in range(max_length + 1):
        yield from reduced_words(length, k)


__all__ = [
    "AlphaVector", "BasisKind", "Classification", "DynDegResult", "PicBasis", "PicClass", "TwistResult", "Verdict",
    "Word", "all_reduced_words", "alpha_vector", "classify", "cyclic_reduce", "dyndeg", "dyndeg_data",
    "growth_invariants", "hnu_matrix", "is_involution_matrix", "plane_twist_matrices", "predicted_degree",
    "reduced_words", "sigma_action", "support_matrix", "word_matrix", "word_reduce", "HEF_MATRIX",
    "PLANE_SIX_POINT_MATRIX",
]
