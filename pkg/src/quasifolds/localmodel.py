"""The block-affine local model at a leaf closure: a finitely generated
group acting on H x E0 by tau . (h, v) = (psi(tau) + h, rho(tau) v).

H = (R^r, +) carries the translation part, E0 = R^d the linear part.  The
module builds the action groupoid, computes its effective quotient (kernel
words acting as the exact identity), specializes the dense-leaf case from
torus foliation data, and records the quasifold-chart verdict.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple, Optional

from . import fieldmat
from .affpseudo import (
    AffineMap,
    FGAffineGroup,
    isotropy_ball,
    is_euclidean_isometry,
    word_str,
)
from .lattice import ZSpan
from .torusfol import LinearFoliationSpec, deck_group

__all__ = [
    "LocalModelInput",
    "AffineActionGroupoid",
    "EffectiveQuotientReport",
    "ChartVerdict",
    "build_local_model",
    "effective_quotient",
    "dense_leaf_model",
    "isotropy_and_charts",
    "verify_action_axioms",
    "verify_block_invariance",
    "finite_order_rotation",
]


class LocalModelInput:
    """Free or free-abelian generators tau_1..tau_g with translation vectors
    psi(tau_i) in R^r and invertible linear actions rho(tau_i) on R^d.

    Under the free-abelian flag, pairwise commutativity of the rho matrices
    is verified exactly (translations commute automatically).
    """

    __slots__ = ("table", "r", "d", "relations", "psi", "rho")

    def __init__(self, table, r, d, relations, psi, rho):
        if relations not in ("free", "free_abelian"):
            raise ValueError("relations must be 'free' or 'free_abelian'")
        self.table = table
        self.r = r
        self.d = d
        self.relations = relations
        self.psi = tuple(tuple(v) for v in psi)
        self.rho = tuple(tuple(tuple(row) for row in m) for m in rho)
        if len(self.psi) != len(self.rho):
            raise ValueError("psi and rho must list the same generators")
        for v in self.psi:
            if len(v) != r:
                raise ValueError("psi vector has wrong length")
        for m in self.rho:
            if len(m) != d or any(len(row) != d for row in m):
                raise ValueError("rho matrix has wrong shape")
            if d and fieldmat.det([list(row) for row in m]).is_zero():
                raise ValueError("rho matrix must be invertible")
        if relations == "free_abelian" and d:
            for i in range(len(self.rho)):
                for j in range(i + 1, len(self.rho)):
                    a = [list(row) for row in self.rho[i]]
                    b = [list(row) for row in self.rho[j]]
                    if fieldmat.matmul(a, b) != fieldmat.matmul(b, a):
                        raise ValueError(
                            f"rho matrices {i} and {j} do not commute "
                            "under the free-abelian flag"
                        )

    @property
    def g(self):
        return len(self.psi)


class ChartVerdict(NamedTuple):
    block_affine: bool
    invariant_cell: bool
    countable_group: bool
    dimension: int


class AffineActionGroupoid:
    """Action groupoid of the block-affine action on R^(r+d)."""

    __slots__ = ("table", "r", "d", "relations", "group")

    def __init__(self, table, r, d, relations, group: FGAffineGroup):
        self.table = table
        self.r = r
        self.d = d
        self.relations = relations
        self.group = group

    def psi_vectors(self):
        return [g.offset[: self.r] for g in self.group.generators]

    def is_block_affine(self):
        """Linear part is block diagonal with identity upper-left block, and
        the translation part is supported on the H factor."""
        r, d = self.r, self.d
        for g in self.group.generators:
            for i in range(r):
                for j in range(r + d):
                    entry = g.matrix[i][j]
                    if (i == j and not entry.is_one()) or (i != j and not entry.is_zero()):
                        return False
            for i in range(r, r + d):
                for j in range(r):
                    if not g.matrix[i][j].is_zero():
                        return False
            for i in range(r, r + d):
                if not g.offset[i].is_zero():
                    return False
        return True

    def is_riemannian(self):
        return all(is_euclidean_isometry(g) for g in self.group.generators)

    def equals_canonically(self, other):
        return (
            self.r == other.r
            and self.d == other.d
            and sorted(g.key() for g in self.group.generators)
            == sorted(g.key() for g in other.group.generators)
        )


def build_local_model(input: LocalModelInput) -> AffineActionGroupoid:
    """Generators act by (h, v) -> (psi_i + h, rho_i v), as block-affine
    maps of R^(r+d)."""
    table = input.table
    r, d = input.r, input.d
    zero, one = table.zero, table.one
    maps = []
    for psi_v, rho_m in zip(input.psi, input.rho):
        matrix = []
        for i in range(r + d):
            row = []
            for j in range(r + d):
                if i < r or j < r:
                    row.append(one if i == j else zero)
                else:
                    row.append(rho_m[i - r][j - r])
            matrix.append(row)
        offset = list(psi_v) + [zero] * d
        maps.append(AffineMap(table, matrix, offset))
    group = FGAffineGroup(table, r + d, maps)
    return AffineActionGroupoid(table, r, d, input.relations, group)


class EffectiveQuotientReport(NamedTuple):
    exact: bool
    kernel_words: tuple                  # words acting as the exact identity
    kernel_basis: Optional[tuple]        # exponent vectors, exact path only
    effective_generators: tuple          # deduplicated non-identity generators


def effective_quotient(gpd: AffineActionGroupoid, radius: int) -> EffectiveQuotientReport:
    """Kernel of the action up to word radius `radius`.

    For d = 0 the action is by translations, so the kernel is the integer
    relation lattice of the psi vectors and is computed exactly (for a
    free presentation this describes the kernel modulo commutators, which
    always act trivially here).  Otherwise kernel words are collected from
    the word ball.
    """
    if gpd.d == 0:
        span = ZSpan(gpd.table, gpd.r, gpd.psi_vectors())
        basis = span.kernel()
        words = []
        for rel in basis:
            letters = []
            for i, e in enumerate(rel):
                letters.extend([(i, 1 if e > 0 else -1)] * abs(e))
            words.append(word_str(tuple(letters)))
        effective = _dedup_generators(gpd)
        return EffectiveQuotientReport(True, tuple(words), tuple(basis), effective)
    words = []
    for word, m in _presentation_words(gpd, radius):
        if word and m.is_identity():
            words.append(word_str(word))
    effective = _dedup_generators(gpd)
    return EffectiveQuotientReport(False, tuple(words), None, effective)


def _presentation_words(gpd, radius):
    """Group elements as presentation words of length <= radius: exponent
    vectors for a free-abelian presentation, freely reduced words for a
    free one.  Unlike the word ball, identity-acting words are kept."""
    gens = gpd.group.generators
    g = len(gens)
    if gpd.relations == "free_abelian":
        def vectors(prefix, budget):
            if len(prefix) == g:
                yield prefix
                return
            for e in range(-budget, budget + 1):
                yield from vectors(prefix + (e,), budget - abs(e))

        for vec in sorted(vectors((), radius), key=lambda v: (sum(map(abs, v)), v)):
            m = AffineMap.identity(gpd.table, gpd.r + gpd.d)
            letters = []
            for i, e in enumerate(vec):
                base = gens[i] if e > 0 else gens[i].inverse()
                for _ in range(abs(e)):
                    m = base.compose(m)
                letters.extend([(i, 1 if e > 0 else -1)] * abs(e))
            yield tuple(letters), m
    else:
        frontier = [((), AffineMap.identity(gpd.table, gpd.r + gpd.d))]
        yield frontier[0]
        for _ in range(radius):
            new = []
            for word, m in frontier:
                for i in range(g):
                    for sign in (1, -1):
                        # skip freely reducible words
                        if word and word[0] == (i, -sign):
                            continue
                        letter = gens[i] if sign > 0 else gens[i].inverse()
                        item = (((i, sign),) + word, letter.compose(m))
                        yield item
                        new.append(item)
            frontier = new


def _dedup_generators(gpd):
    out, seen = [], set()
    for g in gpd.group.generators:
        if g.is_identity():
            continue
        if g.key() not in seen:
            seen.add(g.key())
            out.append(g)
    return tuple(out)


def dense_leaf_model(spec: LinearFoliationSpec) -> AffineActionGroupoid:
    """The dense-leaf specialization: the torus deck group, reinterpreted as
    a d = 0 local model with free-abelian presentation."""
    deck = deck_group(spec)
    psi = deck.group.canonical_generators()
    input = LocalModelInput(
        spec.table, spec.q, 0, "free_abelian", psi, [()] * len(psi)
    )
    return build_local_model(input)


def isotropy_and_charts(gpd: AffineActionGroupoid, point, radius: int):
    """Isotropy maps at a point (word-ball search) plus the chart verdict:
    the model is a countable affine group acting on an invariant cell."""
    iso = isotropy_ball(gpd.group, point, radius)
    verdict = ChartVerdict(
        block_affine=gpd.is_block_affine(),
        invariant_cell=True,          # the cell is all of R^(r+d)
        countable_group=True,
        dimension=gpd.r + gpd.d,
    )
    return iso, verdict


def _random_point(table, dim, rng):
    return tuple(
        table.rational(Fraction(rng.randint(-12, 12), rng.randint(1, 6)))
        for _ in range(dim)
    )


class ActionAxiomReport(NamedTuple):
    passed: bool
    pairs_checked: int
    points_checked: int
    failure: Optional[str]


def verify_action_axioms(gpd: AffineActionGroupoid, radius: int = 4,
                         points: int = 5, sampled_pairs: int = 100,
                         exhaustive_radius: int = 2,
                         seed: int = 0) -> ActionAxiomReport:
    """Exact groupoid action axioms on word balls.

    Identity and inverse axioms are checked on the whole radius-`radius`
    ball; compatibility (tau sigma) . p = tau . (sigma . p) exhaustively on
    the radius-`exhaustive_radius` ball and on sampled pairs from the full
    ball.
    """
    rng = random.Random(seed)
    table = gpd.table
    dim = gpd.r + gpd.d
    pts = [_random_point(table, dim, rng) for _ in range(points)]
    ball = [m for m, _ in gpd.group.ball_with_words(radius)]
    ident = AffineMap.identity(table, dim)
    for p in pts:
        if ident(p) != p:
            return ActionAxiomReport(False, 0, len(pts), "identity axiom")
    for m in ball:
        minv = m.inverse()
        for p in pts:
            if minv(m(p)) != p:
                return ActionAxiomReport(False, 0, len(pts), f"inverse axiom at {m.key()}")
    small = [m for m, _ in gpd.group.ball_with_words(exhaustive_radius)]
    pairs = [(a, b) for a in small for b in small]
    for _ in range(sampled_pairs):
        pairs.append((rng.choice(ball), rng.choice(ball)))
    for a, b in pairs:
        ab = a.compose(b)
        for p in pts:
            if ab(p) != a(b(p)):
                return ActionAxiomReport(
                    False, len(pairs), len(pts),
                    f"compatibility at {a.key()} o {b.key()}",
                )
    return ActionAxiomReport(True, len(pairs), len(pts), None)


def verify_block_invariance(gpd: AffineActionGroupoid, radius: int = 4) -> bool:
    """The H-coordinate of any ball word's action advances the input by the
    sum of the word's psi vectors, exactly."""
    psi = gpd.psi_vectors()
    zero = [gpd.table.zero] * gpd.r
    for m, word in gpd.group.ball_with_words(radius):
        expected = list(zero)
        for idx, sign in word:
            vec = psi[idx]
            if sign > 0:
                expected = [a + b for a, b in zip(expected, vec)]
            else:
                expected = [a - b for a, b in zip(expected, vec)]
        if list(m.offset[: gpd.r]) != expected:
            return False
        for i in range(gpd.r):
            for j in range(gpd.r + gpd.d):
                entry = m.matrix[i][j]
                ok = entry.is_one() if i == j else entry.is_zero()
                if not ok:
                    return False
    return True


def finite_order_rotation(table, order):
    """An exact 2x2 integer matrix of the given multiplicative order.

    Rational 2x2 matrices of finite order exist only for orders 1, 2, 3,
    4, 6 (the crystallographic restriction); generic rotation angles have
    no exact representative in the scalar field.
    """
    forms = {
        1: [[1, 0], [0, 1]],
        2: [[-1, 0], [0, -1]],
        3: [[0, -1], [1, -1]],
        4: [[0, -1], [1, 0]],
        6: [[0, -1], [1, 1]],
    }
    if order not in forms:
        raise ValueError("finite-order rational rotations exist only for 1,2,3,4,6")
    return [[table.rational(v) for v in row] for row in forms[order]]
