"""Exact linear algebra over Z and Q.

Rank over the rationals (fraction-free Bareiss), row Hermite normal form,
Smith normal form, and linear Diophantine systems; the decision engine for
every lattice and subgroup question in the library.  Matrices are plain
nested sequences of Python ints (arbitrary precision) or Fractions.

Conventions: row-style HNF with H = U*A, positive pivots, and entries above
each pivot reduced into [0, pivot); SNF is S = U*A*V with d1 | d2 | ... and
nonnegative diagonal.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import NamedTuple, Optional

__all__ = [
    "HNFResult",
    "SNFResult",
    "DiophantineResult",
    "rank_rational",
    "hnf",
    "snf",
    "solve_diophantine",
    "identity_matrix",
    "mat_mul",
    "mat_vec",
    "det_int",
]


def _dims(a):
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not rectangular")
    return m, n


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    ma, na = _dims(a)
    mb, nb = _dims(b)
    if na != mb:
        raise ValueError("matrix dimension mismatch")
    return [
        [sum(a[i][k] * b[k][j] for k in range(na)) for j in range(nb)]
        for i in range(ma)
    ]


def mat_vec(a, v):
    m, n = _dims(a)
    if len(v) != n:
        raise ValueError("matrix/vector dimension mismatch")
    return [sum(a[i][k] * v[k] for k in range(n)) for i in range(m)]


def _xgcd(a, b):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def rank_rational(a):
    """Rank over Q via fraction-free (Bareiss) elimination."""
    m, n = _dims(a)
    if m == 0 or n == 0:
        return 0
    rows = []
    for row in a:
        den = 1
        fr = [Fraction(x) for x in row]
        for x in fr:
            den = den * x.denominator // _igcd(den, x.denominator)
        rows.append([int(x * den) for x in fr])
    rank = 0
    prev = 1
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, m):
            for k in range(col + 1, n):
                rows[i][k] = (rows[r][col] * rows[i][k] - rows[i][col] * rows[r][k]) // prev
            rows[i][col] = 0
        prev = rows[r][col]
        r += 1
        rank += 1
        if r == m:
            break
    return rank


def det_int(a):
    """Exact determinant of a square integer matrix (Bareiss)."""
    m, n = _dims(a)
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    rows = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for col in range(n - 1):
        piv = next((i for i in range(col, n) if rows[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        for i in range(col + 1, n):
            for k in range(col + 1, n):
                rows[i][k] = (rows[col][col] * rows[i][k] - rows[i][col] * rows[col][k]) // prev
            rows[i][col] = 0
        prev = rows[col][col]
    return sign * rows[n - 1][n - 1]


class HNFResult(NamedTuple):
    h: tuple            # row Hermite normal form of a
    u: tuple            # unimodular, h = u * a

    def as_lists(self):
        return [list(r) for r in self.h], [list(r) for r in self.u]


class SNFResult(NamedTuple):
    s: tuple            # diagonal, d1 | d2 | ...
    u: tuple
    v: tuple            # s = u * a * v

    def as_lists(self):
        return ([list(r) for r in self.s], [list(r) for r in self.u],
                [list(r) for r in self.v])


class DiophantineResult(NamedTuple):
    solvable: bool
    particular: Optional[tuple]
    kernel_basis: Optional[tuple]
    failure_index: Optional[int]    # SNF row where divisibility fails


def _freeze(rows):
    return tuple(tuple(r) for r in rows)


def hnf(a):
    """Row Hermite normal form with transformation matrix, H = U*A."""
    m, n = _dims(a)
    h = [list(map(int, row)) for row in a]
    u = identity_matrix(m)

    def combine_rows(r, i, col):
        # Unimodular 2x2 update putting gcd at (r, col), zero at (i, col).
        p, q = h[r][col], h[i][col]
        if q == 0:
            return
        if p == 0:
            h[r], h[i] = h[i], h[r]
            u[r], u[i] = u[i], u[r]
            return
        g, x, y = _xgcd(p, q)
        pq, qq = p // g, q // g
        for row in (h, u):
            rr, ri = row[r], row[i]
            for k in range(len(rr)):
                rr[k], ri[k] = x * rr[k] + y * ri[k], -qq * rr[k] + pq * ri[k]

    r = 0
    for col in range(n):
        for i in range(r + 1, m):
            combine_rows(r, i, col)
        if r < m and h[r][col] == 0:
            piv = next((i for i in range(r + 1, m) if h[i][col]), None)
            if piv is not None:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
        if r < m and h[r][col]:
            if h[r][col] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            p = h[r][col]
            for i in range(r):
                q = h[i][col] // p
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
            if r == m:
                break
    return HNFResult(_freeze(h), _freeze(u))


def snf(a):
    """Smith normal form with transformations, S = U*A*V."""
    m, n = _dims(a)
    s = [list(map(int, row)) for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    def row_op(r, i, col):
        p, q = s[r][col], s[i][col]
        if q == 0:
            return
        if p == 0:
            s[r], s[i] = s[i], s[r]
            u[r], u[i] = u[i], u[r]
            return
        g, x, y = _xgcd(p, q)
        pq, qq = p // g, q // g
        for mat in (s, u):
            rr, ri = mat[r], mat[i]
            for k in range(len(rr)):
                rr[k], ri[k] = x * rr[k] + y * ri[k], -qq * rr[k] + pq * ri[k]

    def col_op(c, j, row):
        p, q = s[row][c], s[row][j]
        if q == 0:
            return
        if p == 0:
            for mat in (s, v):
                for rr in mat:
                    rr[c], rr[j] = rr[j], rr[c]
            return
        g, x, y = _xgcd(p, q)
        pq, qq = p // g, q // g
        for mat in (s, v):
            for rr in mat:
                rr[c], rr[j] = x * rr[c] + y * rr[j], -qq * rr[c] + pq * rr[j]

    t = 0
    bound = min(m, n)
    while t < bound:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            s[t], s[i] = s[i], s[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for mat in (s, v):
                for rr in mat:
                    rr[t], rr[j] = rr[j], rr[t]
        while True:
            for i in range(t + 1, m):
                row_op(t, i, t)
            for j in range(t + 1, n):
                col_op(t, j, t)
            if all(s[i][t] == 0 for i in range(t + 1, m)) and all(
                s[t][j] == 0 for j in range(t + 1, n)
            ):
                # Enforce divisibility of the trailing block by s[t][t].
                d = s[t][t]
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if s[i][j] % d:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                s[t] = [x + y for x, y in zip(s[t], s[bad])]
                u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SNFResult(_freeze(s), _freeze(u), _freeze(v))


def solve_diophantine(a, b):
    """Solve A*x = b over the integers.

    Returns a particular solution and a basis of the integer kernel, or a
    certificate index (the SNF row whose divisibility condition fails).
    """
    m, n = _dims(a)
    if len(b) != m:
        raise ValueError("right-hand side has wrong length")
    s, u, v = snf(a)
    c = mat_vec([list(r) for r in u], list(map(int, b)))
    y = [0] * n
    bound = min(m, n)
    for i in range(m):
        d = s[i][i] if i < bound else 0
        if d == 0:
            if c[i] != 0:
                return DiophantineResult(False, None, None, i)
        else:
            if c[i] % d:
                return DiophantineResult(False, None, None, i)
            y[i] = c[i] // d
    x = mat_vec([list(r) for r in v], y)
    kernel = []
    for j in range(n):
        if j >= bound or s[j][j] == 0:
            kernel.append(tuple(v[i][j] for i in range(n)))
    return DiophantineResult(True, tuple(x), tuple(kernel), None)
