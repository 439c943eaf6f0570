"""Linear foliations of the torus T^n = R^n/Z^n by translates of a
subspace H, and their transverse data.

For H spanned by vectors with scalar-field entries this computes, exactly:
the smallest rational subspace containing H (whose subtorus is the leaf
closure), the dimension of the structure algebra, the deck group of
translations on a coordinate complement, the quasifold model of the leaf
space, and a decision procedure for "same leaf".
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import NamedTuple

from . import fieldmat, intlinalg
from .affpseudo import AffineMap, FGAffineGroup, OpenCell
from .atlas import QuasifoldChart
from .lattice import ZSpan, coordinates

__all__ = [
    "LinearFoliationSpec",
    "ClosureReport",
    "TranslationGroup",
    "DeckGroup",
    "LeafVerdict",
    "rational_hull",
    "deck_group",
    "leaf_space_model",
    "point_same_leaf",
]


class LinearFoliationSpec:
    """A torus dimension n and p direction vectors spanning the leaf
    subspace H; directions must be linearly independent over the scalar
    field (verified by exact elimination) with 1 <= p < n."""

    __slots__ = ("table", "n", "directions")

    def __init__(self, table, n, directions):
        self.table = table
        self.n = n
        self.directions = tuple(tuple(v) for v in directions)
        p = len(self.directions)
        if not 1 <= p < n:
            raise ValueError("need 1 <= p < n direction vectors")
        for v in self.directions:
            if len(v) != n:
                raise ValueError("direction vector has wrong length")
        _, pivots = fieldmat.rref([list(v) for v in self.directions])
        if len(pivots) != p:
            raise ValueError("direction vectors are linearly dependent")

    @property
    def p(self):
        return len(self.directions)

    @property
    def q(self):
        return self.n - self.p


class ClosureReport(NamedTuple):
    hull_basis: tuple       # integer rows spanning the rational hull
    closure_dim: int
    structure_dim: int      # closure_dim - p
    dense: bool


class TranslationGroup:
    """A finitely generated group of translations of R^q with scalar
    entries; membership is decided via integer monomial coordinates."""

    __slots__ = ("table", "ambient_dim", "generators", "span")

    def __init__(self, table, ambient_dim, generators):
        self.table = table
        self.ambient_dim = ambient_dim
        self.generators = tuple(tuple(v) for v in generators)
        self.span = ZSpan(table, ambient_dim, self.generators)

    def canonical_generators(self):
        return self.span.canonical_generators()

    def canonical_generator_strings(self):
        return sorted(
            tuple(str(x) for x in v) for v in self.canonical_generators()
        )

    def contains(self, vector):
        return self.span.contains(vector)

    def canonical_coords(self):
        return self.span.canonical_coords

    @property
    def monomials(self):
        return self.span.monomials

    @property
    def denominator(self):
        return self.span.denominator

    def affine_group(self):
        maps = [
            AffineMap.translation(self.table, list(v))
            for v in self.canonical_generators()
        ]
        return FGAffineGroup(self.table, self.ambient_dim, maps)

    def same_group(self, other):
        return self.ambient_dim == other.ambient_dim and self.span.same_span(other.span)


class DeckGroup(NamedTuple):
    complement: tuple       # coordinate axes spanning W, 0-based
    group: TranslationGroup


def _direction_rref(spec):
    """RREF of the direction matrix after scaling each vector so its pivot
    entry is 1 (possible because directions are independent)."""
    rows, pivots = fieldmat.rref([list(v) for v in spec.directions])
    return rows, pivots


def rational_hull(spec: LinearFoliationSpec) -> ClosureReport:
    """Smallest rational subspace of R^n whose real span contains H.

    Scale each direction to polynomial entries and expand every coordinate
    in monomials; the hull is the Q-row-space of the monomial coefficient
    vectors.
    """
    rows = []
    for v in spec.directions:
        monomials, _, _, coords = coordinates(spec.table, [v])
        t = len(monomials)
        for j in range(t):
            rows.append([coords[0][c * t + j] for c in range(spec.n)])
    closure_dim = intlinalg.rank_rational(rows)
    h, _ = intlinalg.hnf(rows)
    basis = tuple(r for r in h if any(r))
    # Every direction must lie in the real span of the hull basis.
    basis_cols = [
        [spec.table.rational(basis[i][c]) for i in range(len(basis))]
        for c in range(spec.n)
    ]
    for v in spec.directions:
        if fieldmat.solve_consistent(basis_cols, list(v)) is None:
            raise AssertionError("hull basis does not span a direction vector")
    return ClosureReport(
        hull_basis=basis,
        closure_dim=closure_dim,
        structure_dim=closure_dim - spec.p,
        dense=closure_dim == spec.n,
    )


def deck_group(spec: LinearFoliationSpec) -> DeckGroup:
    """Deck group of the developing fibration, as translations of the
    coordinate complement W.

    Pivot coordinates of H are chosen by leftmost exact elimination; W is
    the span of the remaining q = n - p coordinate axes; the group is the
    Z-span of the projections of e_1, ..., e_n onto W along H.
    """
    rows, pivots = _direction_rref(spec)
    complement = tuple(c for c in range(spec.n) if c not in pivots)
    zero = spec.table.zero
    one = spec.table.one
    projections = []
    for c in range(spec.n):
        if c in pivots:
            r = pivots.index(c)
            vec = tuple(-rows[r][w] for w in complement)
        else:
            vec = tuple(one if w == c else zero for w in complement)
        projections.append(vec)
    return DeckGroup(
        complement=complement,
        group=TranslationGroup(spec.table, spec.q, projections),
    )


def leaf_space_model(spec: LinearFoliationSpec) -> QuasifoldChart:
    """The leaf space as one quasifold chart: R^q modulo the deck group
    acting by translations."""
    deck = deck_group(spec)
    return QuasifoldChart(
        dim=spec.q,
        group=deck.group.affine_group(),
        cell=OpenCell.whole(spec.table, spec.q),
    )


class LeafVerdict(enum.Enum):
    SAME_LEAF = "same_leaf"
    DIFFERENT_LEAF = "different_leaf"


class LeafDecision(NamedTuple):
    verdict: LeafVerdict
    coefficients: tuple | None   # integer coefficients on the e_i projections


def point_same_leaf(spec: LinearFoliationSpec, x, y) -> LeafDecision:
    """Exactly decide whether x and y lie on the same leaf.

    Same leaf means x - y is in H + Z^n, decided by projecting x - y onto
    W along H and testing deck-group membership (a Diophantine system on
    monomial coordinates).
    """
    x, y = tuple(x), tuple(y)
    if len(x) != spec.n or len(y) != spec.n:
        raise ValueError("points must have length n")
    d = [a - b for a, b in zip(x, y)]
    rows, pivots = _direction_rref(spec)
    w = list(d)
    for r, col in enumerate(pivots):
        f = d[col]
        if not f.is_zero():
            w = [a - f * b for a, b in zip(w, rows[r])]
    deck = deck_group(spec)
    projected = tuple(w[c] for c in deck.complement)
    coeffs = deck.group.contains(projected)
    if coeffs is None:
        return LeafDecision(LeafVerdict.DIFFERENT_LEAF, None)
    return LeafDecision(LeafVerdict.SAME_LEAF, coeffs)
