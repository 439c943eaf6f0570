"""Dense exact linear algebra over the scalar field.

Small helpers for matrices and vectors of Scalars: products, determinant,
inverse, reduced row echelon form with leftmost pivots, and consistent
solves.  Everything is Gaussian elimination with exact field arithmetic.
"""

from __future__ import annotations

__all__ = [
    "identity",
    "matmul",
    "matvec",
    "det",
    "inv",
    "rref",
    "solve_consistent",
]


def identity(table, n):
    one, zero = table.one, table.zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a, b):
    n = len(b)
    return [
        [sum((x * y for x, y in zip(row, col)), start=row[0].table.zero)
         for col in zip(*b)]
        for row in a
    ] if a and b else []


def matvec(a, v):
    return [
        sum((x * y for x, y in zip(row, v)), start=row[0].table.zero)
        for row in a
    ]


def det(a):
    n = len(a)
    if n == 0:
        raise ValueError("determinant of an empty matrix")
    table = a[0][0].table
    rows = [list(r) for r in a]
    result = table.one
    for col in range(n):
        piv = next((i for i in range(col, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            return table.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            result = -result
        p = rows[col][col]
        result = result * p
        for i in range(col + 1, n):
            f = rows[i][col] / p
            if not f.is_zero():
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return result


def rref(a):
    """Reduced row echelon form over the field; returns (rows, pivot columns)."""
    if not a:
        return [], []
    rows = [list(r) for r in a]
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return rows, pivots


def inv(a):
    n = len(a)
    table = a[0][0].table
    aug = [list(row) + list(idrow) for row, idrow in zip(a, identity(table, n))]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows[:n]]


def solve_consistent(a, b):
    """Any exact solution x of A x = b, or None when inconsistent.

    A is m x k (rows of Scalars), b has length m; free variables are set
    to zero.
    """
    if not a:
        return [] if all(x.is_zero() for x in b) else None
    table = a[0][0].table
    k = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    rows, pivots = rref(aug)
    if k in pivots:
        return None
    x = [table.zero] * k
    for r, col in enumerate(pivots):
        x[col] = rows[r][k]
    return x
