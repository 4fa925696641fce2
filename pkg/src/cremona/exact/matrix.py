"""Small exact integer matrices and their characteristic polynomials.

Matrices are tuples of row tuples.  They act on column vectors, so the
``j``-th column holds the image of the ``j``-th basis vector.
"""

from __future__ import annotations

from typing import Sequence

from .fields import QQ
from .unipoly import UniPoly

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    d = len(m)
    if any(len(row) != d for row in m):
        raise ValueError("matrix must be square")
    for row, src in zip(m, rows):
        for v, s in zip(row, src):
            if v != s:
                raise ValueError("matrix entries must be integers")
    return m


def identity(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_pow(a: IntMatrix, k: int) -> IntMatrix:
    out, base = identity(len(a)), a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def mat_product(mats: Sequence[IntMatrix], d: int | None = None) -> IntMatrix:
    if not mats:
        if d is None:
            raise ValueError("empty product needs a dimension")
        return identity(d)
    out = mats[0]
    for m in mats[1:]:
        out = mat_mul(out, m)
    return out


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a))


def det_bareiss(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination with row swaps."""
    m = [list(map(int, row)) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def char_poly(a: IntMatrix) -> UniPoly:
    """det(x I - A) by Bareiss elimination over Z[x].

    Every leading principal minor of ``xI - A`` is monic in ``x``, hence
    nonzero, so the elimination never needs a pivot swap and each division
    is exact.
    """
    n = len(a)
    x = UniPoly.x(QQ)
    m = [[(x if i == j else UniPoly([], QQ)) - a[i][j] for j in range(n)] for i in range(n)]
    if n == 0:
        return UniPoly([1], QQ)
    prev = UniPoly([1], QQ)
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1]


def matrix_to_json(a: IntMatrix) -> list[list[int]]:
    return [list(row) for row in a]


def preserves_form(a: IntMatrix, form: IntMatrix) -> bool:
    """True iff ``A^T J A = J``."""
    return mat_mul(mat_mul(transpose(a), form), a) == tuple(map(tuple, form))
