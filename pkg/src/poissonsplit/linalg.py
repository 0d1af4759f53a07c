"""Exact dense linear algebra over F_p or Q (small matrices only)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import reduce_raw

Matrix = list[list]


def _coerce(rows: Sequence[Sequence], p: int | None) -> Matrix:
    if p is None:
        return [[Fraction(x) for x in row] for row in rows]
    return [[reduce_raw(x, p) for x in row] for row in rows]


def row_echelon(rows: Sequence[Sequence], p: int | None = None) -> tuple[Matrix, list[int]]:
    """Gaussian elimination; returns (echelon form, pivot columns)."""
    a = _coerce(rows, p)
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p) if p is not None else 1 / a[r][c]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] * inv
                row_r = a[r]
                if p is None:
                    a[i] = [x - f * y for x, y in zip(a[i], row_r)]
                else:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(rows: Sequence[Sequence], p: int | None = None) -> int:
    return len(row_echelon(rows, p)[1])


def hstack(*blocks: Sequence[Sequence]) -> Matrix:
    blocks = [b for b in blocks if b and len(b[0])]
    if not blocks:
        return []
    return [sum((list(b[i]) for b in blocks), []) for i in range(len(blocks[0]))]


def columns_to_matrix(cols: Sequence[Sequence], nrows: int) -> Matrix:
    return [[col[i] for col in cols] for i in range(nrows)]


def inverse(rows: Sequence[Sequence], p: int | None = None) -> Matrix:
    """Gauss-Jordan inverse of a square matrix."""
    n = len(rows)
    a = _coerce(rows, p)
    one = 1 if p is not None else Fraction(1)
    aug = [a[i] + [one if i == j else 0 * one for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, p) if p is not None else 1 / aug[c][c]
        aug[c] = [x * inv % p if p is not None else x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                if p is None:
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
                else:
                    aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def pfaffian(rows: Sequence[Sequence], p: int | None = None):
    """Pfaffian of a skew-symmetric scalar matrix by first-row expansion."""
    a = _coerce(rows, p)
    n = len(a)
    cache: dict[tuple[int, ...], object] = {}

    def pf(idx: tuple[int, ...]):
        if not idx:
            return 1
        if len(idx) % 2:
            return 0
        if idx in cache:
            return cache[idx]
        i0 = idx[0]
        total = 0
        for pos in range(1, len(idx)):
            j = idx[pos]
            if a[i0][j]:
                rest = idx[1:pos] + idx[pos + 1:]
                term = a[i0][j] * pf(rest)
                total = total + term if pos % 2 else total - term
        if p is not None:
            total %= p
        cache[idx] = total
        return total

    return pf(tuple(range(n)))
