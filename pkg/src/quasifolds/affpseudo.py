"""Finitely generated countable affine groups, domain-restricted affine
transitions, germs, and the germ-groupoid operations on them.

Affine maps carry exact scalar entries, so germ equality is map equality:
an affine transformation is determined by its 1-jet at a point.  Orbit
queries are bounded word searches in general, and exact for translation
groups via lattice membership.
"""

from __future__ import annotations

import enum
from typing import NamedTuple, Optional

from . import fieldmat
from .lattice import ZSpan
from .scalarfield import shadow_eval

__all__ = [
    "AffineMap",
    "OpenCell",
    "Transition",
    "Germ",
    "FGAffineGroup",
    "OrbitVerdict",
    "OrbitDecision",
    "compose_germ",
    "word_ball",
    "orbit_equal",
    "isotropy_ball",
    "is_euclidean_isometry",
    "word_str",
]

DEFAULT_TOLERANCE = 1e-9


class AffineMap:
    """An invertible affine map x -> A x + b with exact scalar entries."""

    __slots__ = ("table", "matrix", "offset", "det", "_key")

    def __init__(self, table, matrix, offset, _det=None):
        self.table = table
        self.matrix = tuple(tuple(row) for row in matrix)
        self.offset = tuple(offset)
        q = len(self.offset)
        if len(self.matrix) != q or any(len(r) != q for r in self.matrix):
            raise ValueError("affine map must have a square matrix matching b")
        self.det = fieldmat.det([list(r) for r in self.matrix]) if _det is None else _det
        if self.det.is_zero():
            raise ValueError("affine map must be invertible (det = 0)")
        self._key = None

    @classmethod
    def identity(cls, table, dim):
        return cls(table, fieldmat.identity(table, dim), [table.zero] * dim,
                   _det=table.one)

    @classmethod
    def translation(cls, table, vector):
        vector = list(vector)
        return cls(table, fieldmat.identity(table, len(vector)), vector,
                   _det=table.one)

    @property
    def dim(self):
        return len(self.offset)

    def __call__(self, point):
        return tuple(
            sum((a * x for a, x in zip(row, point)), start=b)
            for row, b in zip(self.matrix, self.offset)
        )

    def compose(self, other):
        """self after other: x -> self(other(x))."""
        if other.table is not self.table or other.dim != self.dim:
            raise ValueError("maps are not composable")
        a = fieldmat.matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        b = [x + y for x, y in zip(
            fieldmat.matvec([list(r) for r in self.matrix], list(other.offset)),
            self.offset,
        )]
        return AffineMap(self.table, a, b, _det=self.det * other.det)

    def inverse(self):
        ainv = fieldmat.inv([list(r) for r in self.matrix])
        binv = [-x for x in fieldmat.matvec(ainv, list(self.offset))]
        return AffineMap(self.table, ainv, binv, _det=self.table.one / self.det)

    def is_identity(self):
        return all(x.is_zero() for x in self.offset) and all(
            (r[i].is_one() if i == j else r[j].is_zero())
            for i, r in enumerate(self.matrix)
            for j in range(self.dim)
        )

    def is_translation(self):
        return all(
            (r[j].is_one() if i == j else r[j].is_zero())
            for i, r in enumerate(self.matrix)
            for j in range(self.dim)
        )

    def key(self):
        """Canonical printed form; the deduplication key."""
        if self._key is None:
            rows = ";".join(",".join(str(x) for x in r) for r in self.matrix)
            self._key = f"[{rows}]+[{','.join(str(x) for x in self.offset)}]"
        return self._key

    def __eq__(self, other):
        if not isinstance(other, AffineMap):
            return NotImplemented
        return self.matrix == other.matrix and self.offset == other.offset

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AffineMap({self.key()})"

    def serialize(self):
        return {
            "A": [[str(x) for x in row] for row in self.matrix],
            "b": [str(x) for x in self.offset],
        }


class OpenCell:
    """An open convex cell: finitely many strict inequalities <n, x> < c.

    An empty inequality list means all of R^q.  Membership of exact points
    is decided by shadow sign evaluation with the given tolerance.
    """

    __slots__ = ("table", "dim", "inequalities")

    def __init__(self, table, dim, inequalities=()):
        self.table = table
        self.dim = dim
        self.inequalities = tuple(
            (tuple(normal), offset) for normal, offset in inequalities
        )
        for normal, _ in self.inequalities:
            if len(normal) != dim:
                raise ValueError("inequality normal has wrong length")

    @classmethod
    def whole(cls, table, dim):
        return cls(table, dim, ())

    def is_whole_space(self):
        return not self.inequalities

    def contains(self, point, tol=DEFAULT_TOLERANCE):
        for normal, offset in self.inequalities:
            margin = offset - sum(
                (n * x for n, x in zip(normal, point)), start=self.table.zero
            )
            if shadow_eval(margin) <= tol:
                return False
        return True

    def shadow_nonempty(self, tol=DEFAULT_TOLERANCE):
        """Feasibility of the strict system under shadow values (Chebyshev LP)."""
        if not self.inequalities:
            return True
        import numpy as np
        from scipy.optimize import linprog

        rows, rhs = [], []
        for normal, offset in self.inequalities:
            n = [shadow_eval(x) for x in normal]
            norm = float(np.linalg.norm(n))
            if norm == 0.0:
                if shadow_eval(offset) <= 0:
                    return False
                continue
            rows.append(n + [norm])
            rhs.append(shadow_eval(offset))
        if not rows:
            return True
        c = [0.0] * self.dim + [-1.0]
        res = linprog(c, A_ub=rows, b_ub=rhs,
                      bounds=[(-1e6, 1e6)] * self.dim + [(0, None)],
                      method="highs")
        return bool(res.success and -res.fun > tol)

    def pushforward(self, m: AffineMap):
        """Exact image cell under an invertible affine map."""
        inv = m.inverse()
        out = []
        for normal, offset in self.inequalities:
            new_normal = fieldmat.matvec(
                [list(col) for col in zip(*inv.matrix)], list(normal)
            )
            shift = sum(
                (n * b for n, b in zip(new_normal, m.offset)), start=self.table.zero
            )
            out.append((new_normal, offset + shift))
        return OpenCell(self.table, self.dim, out)

    def pullback(self, m: AffineMap):
        """Exact preimage cell under an affine map."""
        out = []
        for normal, offset in self.inequalities:
            new_normal = fieldmat.matvec(
                [list(col) for col in zip(*m.matrix)], list(normal)
            )
            shift = sum(
                (n * b for n, b in zip(normal, m.offset)), start=self.table.zero
            )
            out.append((new_normal, offset - shift))
        return OpenCell(self.table, self.dim, out)

    def intersect(self, other):
        return OpenCell(self.table, self.dim, self.inequalities + other.inequalities)

    def key(self):
        parts = [
            "<" + ",".join(str(x) for x in normal) + f"|{offset}"
            for normal, offset in self.inequalities
        ]
        return "&".join(parts) if parts else "R^%d" % self.dim

    def serialize(self):
        return [
            {"normal": [str(x) for x in normal], "offset": str(offset)}
            for normal, offset in self.inequalities
        ]

    def __eq__(self, other):
        if not isinstance(other, OpenCell):
            return NotImplemented
        return self.dim == other.dim and self.inequalities == other.inequalities

    def __hash__(self):
        return hash((self.dim, self.inequalities))

    def __repr__(self):
        return f"OpenCell({self.key()})"


class Transition:
    """A domain-restricted invertible affine map; the codomain is the exact
    affine image of the domain."""

    __slots__ = ("map", "domain", "_codomain")

    def __init__(self, map, domain, check=False, tol=DEFAULT_TOLERANCE):
        if map.dim != domain.dim:
            raise ValueError("map and domain dimensions differ")
        self.map = map
        self.domain = domain
        self._codomain = None
        if check and not domain.shadow_nonempty(tol):
            raise ValueError("transition domain is empty under shadow evaluation")

    @property
    def codomain(self):
        if self._codomain is None:
            self._codomain = self.domain.pushforward(self.map)
        return self._codomain

    def inverse(self):
        return Transition(self.map.inverse(), self.codomain)

    def compose(self, other):
        """self after other, on other.domain intersected with the pullback of
        self.domain."""
        domain = other.domain.intersect(self.domain.pullback(other.map))
        return Transition(self.map.compose(other.map), domain)

    def key(self):
        return f"{self.map.key()}@{self.domain.key()}"

    def __eq__(self, other):
        if not isinstance(other, Transition):
            return NotImplemented
        return self.map == other.map and self.domain == other.domain

    def __hash__(self):
        return hash((self.map, self.domain))

    def __repr__(self):
        return f"Transition({self.key()})"

    def serialize(self):
        out = self.map.serialize()
        out["domain"] = self.domain.serialize()
        return out


class Germ:
    """The germ of an affine map at a basepoint in its domain.

    Two germs are equal iff their basepoints and maps are equal as
    canonical forms: affine maps are determined by their 1-jet at a point.
    """

    __slots__ = ("map", "basepoint")

    def __init__(self, map, basepoint):
        if map.dim != len(basepoint):
            raise ValueError("basepoint dimension mismatch")
        self.map = map
        self.basepoint = tuple(basepoint)

    @classmethod
    def unit(cls, table, point):
        return cls(AffineMap.identity(table, len(point)), point)

    def target(self):
        return self.map(self.basepoint)

    def __eq__(self, other):
        if not isinstance(other, Germ):
            return NotImplemented
        return self.map == other.map and self.basepoint == other.basepoint

    def __hash__(self):
        return hash((self.map, self.basepoint))

    def __repr__(self):
        pt = ",".join(str(x) for x in self.basepoint)
        return f"Germ({self.map.key()} at ({pt}))"


def compose_germ(g: Germ, h: Germ) -> Germ:
    """Germ-groupoid multiplication: g after h, based at h's basepoint.

    Requires the basepoint of g to equal h(basepoint of h) exactly.
    """
    if g.basepoint != h.target():
        raise ValueError("germ basepoints do not match for composition")
    return Germ(g.map.compose(h.map), h.basepoint)


class FGAffineGroup:
    """A finitely generated countable subgroup of Aff(R^q)."""

    __slots__ = ("table", "dim", "generators", "_balls")

    def __init__(self, table, dim, generators):
        self.table = table
        self.dim = dim
        self.generators = tuple(generators)
        for g in self.generators:
            if g.dim != dim:
                raise ValueError("generator dimension mismatch")
        self._balls = {}

    def is_translation_group(self):
        return all(g.is_translation() for g in self.generators)

    def letters(self):
        """Generators and inverses, deduplicated, with word letters."""
        out = []
        seen = set()
        for i, g in enumerate(self.generators):
            if g.key() not in seen:
                seen.add(g.key())
                out.append((g, (i, 1)))
        for i, g in enumerate(self.generators):
            ginv = g.inverse()
            if ginv.key() not in seen:
                seen.add(ginv.key())
                out.append((ginv, (i, -1)))
        return out

    def ball_with_words(self, radius):
        """All products of at most `radius` generators/inverses, deduplicated
        by canonical form, each with one shortest witnessing word."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        if 0 not in self._balls:
            ident = AffineMap.identity(self.table, self.dim)
            self._balls[0] = [(ident, ())]
        letters = self.letters()
        for r in range(max(self._balls) + 1, radius + 1):
            prev = self._balls[r - 1]
            seen = {m.key() for m, _ in prev}
            layer = list(prev)
            # Only the last BFS frontier can reach new elements.
            frontier = prev[len(self._balls[r - 2]):] if r >= 2 else prev
            for m, word in frontier:
                for letter, lw in letters:
                    candidate = letter.compose(m)
                    k = candidate.key()
                    if k not in seen:
                        seen.add(k)
                        layer.append((candidate, (lw,) + word))
            self._balls[r] = layer
        return list(self._balls[radius])

    def equals_canonically(self, other):
        return self.dim == other.dim and sorted(
            g.key() for g in self.generators
        ) == sorted(g.key() for g in other.generators)

    def serialize(self):
        return {
            "dimension": self.dim,
            "generators": [g.serialize() for g in self.generators],
        }

    def __repr__(self):
        return f"FGAffineGroup(dim={self.dim}, {len(self.generators)} generators)"


def word_ball(group: FGAffineGroup, radius: int):
    """The word ball as a list of distinct affine maps, monotone in radius."""
    return [m for m, _ in group.ball_with_words(radius)]


def word_str(word):
    """Render a word (sequence of (generator index, +-1) letters, applied
    right to left) as t-notation, e.g. 't1^3' or 't2^-1*t1'."""
    if not word:
        return "e"
    runs = []
    for idx, sign in word:
        if runs and runs[-1][0] == idx and (runs[-1][1] > 0) == (sign > 0):
            runs[-1][1] += sign
        else:
            runs.append([idx, sign])
    parts = []
    for idx, exp in runs:
        name = f"t{idx + 1}"
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


class OrbitVerdict(enum.Enum):
    EQUAL = "equal"
    EQUAL_EXACT = "equal_exact"
    UNEQUAL_EXACT = "unequal_exact"
    NOT_WITHIN_BOUND = "not_within_bound"


class OrbitDecision(NamedTuple):
    verdict: OrbitVerdict
    word: Optional[tuple] = None          # witnessing word when found by search
    coefficients: Optional[tuple] = None  # generator coefficients on the exact path

    @property
    def decided_equal(self):
        return self.verdict in (OrbitVerdict.EQUAL, OrbitVerdict.EQUAL_EXACT)


def orbit_equal(group: FGAffineGroup, x, y, radius: int) -> OrbitDecision:
    """Are x and y in the same orbit?

    Bounded word search in general; decisive for translation groups, where
    membership of y - x in the translation lattice is a Diophantine system.
    """
    x, y = tuple(x), tuple(y)
    if x == y:
        return OrbitDecision(OrbitVerdict.EQUAL, word=())
    if group.is_translation_group():
        vectors = [g.offset for g in group.generators]
        span = ZSpan(group.table, group.dim, vectors)
        target = tuple(b - a for a, b in zip(x, y))
        coeffs = span.contains(target)
        if coeffs is None:
            return OrbitDecision(OrbitVerdict.UNEQUAL_EXACT)
        return OrbitDecision(OrbitVerdict.EQUAL_EXACT, coefficients=coeffs)
    for m, word in group.ball_with_words(radius):
        if m(x) == y:
            return OrbitDecision(OrbitVerdict.EQUAL, word=word)
    return OrbitDecision(OrbitVerdict.NOT_WITHIN_BOUND)


def isotropy_ball(group: FGAffineGroup, x, radius: int):
    """All word-ball elements fixing x exactly."""
    x = tuple(x)
    return [m for m in word_ball(group, radius) if m(x) == x]


def is_euclidean_isometry(m: AffineMap) -> bool:
    """True iff the linear part is exactly orthogonal (A^T A = I)."""
    at = [list(col) for col in zip(*m.matrix)]
    prod = fieldmat.matmul(at, [list(r) for r in m.matrix])
    return all(
        (entry.is_one() if i == j else entry.is_zero())
        for i, row in enumerate(prod)
        for j, entry in enumerate(row)
    )
