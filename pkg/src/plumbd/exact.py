"""Exact integer/rational linear algebra on small dense matrices.

Matrices are lists (or tuples) of rows. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

IntMatrix = List[List[int]]


class SingularMatrix(ValueError):
    """Raised when a matrix that must be invertible has determinant zero."""


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)]


def det_bareiss(a: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def ldl(a: Sequence[Sequence[int]]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Symmetric LDL^T factorisation without pivoting.

    Returns ``(L, pivots)`` with L unit lower triangular. Stops early if a
    zero pivot appears before the last row: the returned pivot list is then
    shorter than the matrix and the trailing rows of L are left unfinished.
    """
    n = len(a)
    work = [[Fraction(x) for x in row] for row in a]
    lower = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots: List[Fraction] = []
    for k in range(n):
        p = work[k][k]
        pivots.append(p)
        if p == 0:
            break
        for i in range(k + 1, n):
            lower[i][k] = work[i][k] / p
        for i in range(k + 1, n):
            li = lower[i][k]
            if li == 0:
                continue
            for j in range(k + 1, n):
                work[i][j] -= li * work[k][j]
    return lower, pivots


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Smith normal form with unimodular transforms.

    Returns ``(D, U, U_inv, V)`` such that ``U @ a @ V == D``, D diagonal with
    nonnegative entries d_1 | d_2 | ... , and ``U_inv`` the integer inverse of
    U (tracked alongside so no inversion is needed afterwards).
    """
    n = len(a)
    m = len(a[0]) if n else 0
    d = [list(map(int, row)) for row in a]
    u = identity(n)
    u_inv = identity(n)
    v = identity(m)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src; inverse transform subtracts column src from dst
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]
        for row in u_inv:
            row[src] -= k * row[dst]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, k):
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(n, m)):
        while True:
            nonzero = [(abs(d[i][j]), i, j) for i in range(t, n) for j in range(t, m) if d[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            done = True
            for i in range(t + 1, n):
                q = d[i][t] // d[t][t]
                if q:
                    add_row(i, t, -q)
                if d[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = d[t][j] // d[t][t]
                if q:
                    add_col(j, t, -q)
                if d[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold any offending entry into row t and retry
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            negate_row(t)
    return d, u, u_inv, v
