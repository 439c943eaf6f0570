"""Floating-point brute-force cross-checker.

Derives values independently of the exact kernel and numerically falsifies
exact results: box-counting estimates of leaf-closure dimension, word
searches by shadow evaluation, and re-verification of integer matrix
factorizations by plain re-multiplication and cofactor determinants.

Oracle findings are advisory except where re-verified exactly; only exact
re-verification can flip a verdict.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import NamedTuple, Optional

import numpy as np

from .scalarfield import shadow_eval

__all__ = [
    "ShadowContext",
    "closure_dim_estimate",
    "orbit_bfs",
    "verify_matrix_identity",
    "brute_force_diophantine",
    "det_cofactor",
    "rank_float",
]


class ShadowContext:
    """Deterministic floating-point context: a fully shadowed symbol table,
    a tolerance, and a seeded RNG."""

    __slots__ = ("table", "tolerance", "seed", "rng", "nprng")

    def __init__(self, table, tolerance=1e-9, seed=0):
        if not table.has_all_shadows():
            raise ValueError("shadow context requires shadows for every symbol")
        self.table = table
        self.tolerance = float(tolerance)
        self.seed = int(seed)
        self.rng = random.Random(self.seed)
        self.nprng = np.random.default_rng(self.seed)


def closure_dim_estimate(spec, ctx: ShadowContext, samples: int = 10000) -> int:
    """Box-counting estimate of the leaf-closure dimension.

    Samples leaf points t . H mod 1 and counts occupied boxes at the
    resolutions 1/8, 1/16, 1/32; the stabilized rounded exponent is the
    estimate, to be compared with the exact rational-hull dimension.
    """
    dirs = np.array(
        [[shadow_eval(x) for x in v] for v in spec.directions], dtype=float
    )
    ts = ctx.nprng.uniform(-500.0, 500.0, size=(samples, len(spec.directions)))
    pts = (ts @ dirs) % 1.0
    estimates = []
    for denom in (8, 16, 32):
        boxes = np.unique(np.floor(pts * denom).astype(np.int64), axis=0)
        estimates.append(math.log(len(boxes)) / math.log(denom))
    rounded = [round(e) for e in estimates]
    if rounded[1] == rounded[2]:
        return rounded[1]
    if rounded[0] == rounded[1]:
        return rounded[0]
    return rounded[2]


class BfsResult(NamedTuple):
    found: bool
    word: Optional[tuple]
    verified: bool      # exact re-verification by the affine kernel


def orbit_bfs(group, x, y, ctx: ShadowContext, bound: int) -> BfsResult:
    """Breadth-first word search with float comparison at the context
    tolerance; any candidate word is re-verified exactly before reporting."""
    tol = ctx.tolerance
    letters = []
    for i, g in enumerate(group.generators):
        letters.append((g, (i, 1)))
        letters.append((g.inverse(), (i, -1)))
    shadow_letters = [
        (
            np.array([[shadow_eval(e) for e in row] for row in m.matrix]),
            np.array([shadow_eval(e) for e in m.offset]),
            m,
            lw,
        )
        for m, lw in letters
    ]
    x0 = np.array([shadow_eval(v) for v in x])
    y0 = np.array([shadow_eval(v) for v in y])
    exact_x, exact_y = tuple(x), tuple(y)

    def exact_check(word):
        p = exact_x
        for idx, sign in reversed(word):
            m = group.generators[idx] if sign > 0 else group.generators[idx].inverse()
            p = m(p)
        return p == exact_y

    if np.max(np.abs(x0 - y0), initial=0.0) <= tol and exact_check(()):
        return BfsResult(True, (), True)
    visited = {tuple(np.round(x0, 6))}
    frontier = [(x0, ())]
    for _ in range(bound):
        new = []
        for p, word in frontier:
            for a, b, m, lw in shadow_letters:
                p2 = a @ p + b
                key = tuple(np.round(p2, 6))
                if key in visited:
                    continue
                visited.add(key)
                w2 = (lw,) + word
                if np.max(np.abs(p2 - y0), initial=0.0) <= tol:
                    if exact_check(w2):
                        return BfsResult(True, w2, True)
                new.append((p2, w2))
        frontier = new
    return BfsResult(False, None, False)


# -- independent exact re-verification ---------------------------------------


def det_cofactor(m) -> int:
    """Determinant by cofactor expansion; independent of any elimination."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det_cofactor(minor)
    return total


def _mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _is_row_hnf(h):
    pivots = []
    seen_zero_row = False
    for row in h:
        cols = [j for j, v in enumerate(row) if v]
        if not cols:
            seen_zero_row = True
            continue
        if seen_zero_row:
            return False
        j = cols[0]
        if pivots and j <= pivots[-1]:
            return False
        if row[j] <= 0:
            return False
        pivots.append(j)
    rows = [r for r in h if any(r)]
    for r, j in enumerate(pivots):
        for i in range(r):
            if not 0 <= rows[i][j] < rows[r][j]:
                return False
    return True


def verify_matrix_identity(kind: str, payload: dict) -> bool:
    """Re-multiply a factorization and re-check its defining predicates,
    independent of the elimination that produced it.

    kind 'hnf': payload a, h, u.  kind 'snf': payload a, s, u, v.
    kind 'solve': payload a, b, particular, kernel_basis.
    """
    if kind == "hnf":
        a = [list(r) for r in payload["a"]]
        h = [list(r) for r in payload["h"]]
        u = [list(r) for r in payload["u"]]
        return _mul(u, a) == h and abs(det_cofactor(u)) == 1 and _is_row_hnf(h)
    if kind == "snf":
        a = [list(r) for r in payload["a"]]
        s = [list(r) for r in payload["s"]]
        u = [list(r) for r in payload["u"]]
        v = [list(r) for r in payload["v"]]
        if _mul(_mul(u, a), v) != s:
            return False
        if abs(det_cofactor(u)) != 1 or abs(det_cofactor(v)) != 1:
            return False
        diag = []
        for i, row in enumerate(s):
            for j, val in enumerate(row):
                if i != j and val:
                    return False
                if i == j:
                    diag.append(val)
        if any(d < 0 for d in diag):
            return False
        nonzero = [d for d in diag if d]
        if diag[: len(nonzero)] != nonzero:
            return False
        return all(
            nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1)
        )
    if kind == "solve":
        a = [list(r) for r in payload["a"]]
        b = list(payload["b"])
        x = list(payload["particular"])
        if [sum(r[k] * x[k] for k in range(len(x))) for r in a] != b:
            return False
        for k in payload["kernel_basis"]:
            if any(sum(r[i] * k[i] for i in range(len(k))) for r in a):
                return False
        return True
    raise ValueError(f"unknown identity kind {kind!r}")


def brute_force_diophantine(a, b, bound: int):
    """Exhaustive search for an integer solution of A x = b with
    coefficients in [-bound, bound]; None if there is none in the box."""
    m = len(a)
    n = len(a[0]) if m else 0
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if all(sum(a[i][j] * x[j] for j in range(n)) == b[i] for i in range(m)):
            return x
    return None


def rank_float(a) -> int:
    """Floating-point rank of a rational matrix (numpy SVD)."""
    arr = np.array([[float(x) for x in row] for row in a], dtype=float)
    if arr.size == 0:
        return 0
    return int(np.linalg.matrix_rank(arr))
