"""Suspension of a finite list of affine transitions of R^q into a
combinatorial foliated complex.

The complex is the open set

    V = (R^q x R x (0,1))  u  U_i (dom psi_i x (i,i+1) x (0,3))

with the gluing (x,s,t) ~ (psi_i(x), s, t-2) for s in (i,i+1), t in (2,3),
together with the piecewise submersion descriptors sigma_bot, sigma_i_top,
sigma_i_mid, sigma_i_bot over the rational t-intervals

    sigma_i_bot = x on (0,3/2),  psi_i(x) on (2,3)
    sigma_i_mid = x on (1,2)
    sigma_i_top = psi_i^{-1}(x) on (0,1),  x on (3/2,3)
    sigma_bot   = x on (0,1),  psi_i(x) on (2,3) over strip i.

All interval endpoints are rational, so every case split is exact; the
cocycle identity, the closedness case analysis, the holonomy readout, and
the isometry flag are all decidable on this representation.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple, Optional

from .affpseudo import (
    DEFAULT_TOLERANCE,
    AffineMap,
    Transition,
    is_euclidean_isometry,
)

__all__ = [
    "Case",
    "PiecewiseSubmersion",
    "GlueRelation",
    "SuspensionComplex",
    "CocycleCheckReport",
    "GodementReport",
    "build_suspension",
    "verify_cocycle",
    "verify_godement",
    "holonomy_generators",
    "riemannian_flag",
]

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


class Case(NamedTuple):
    t_lo: Fraction
    t_hi: Fraction
    formula: AffineMap
    label: str


class PiecewiseSubmersion(NamedTuple):
    name: str
    strip: Optional[int]    # None for the base descriptor sigma_bot
    cases: tuple

    def case_on(self, t_lo, t_hi):
        for c in self.cases:
            if c.t_lo == t_lo and c.t_hi == t_hi:
                return c
        return None

    def serialize(self):
        return {
            "name": self.name,
            "cases": [
                {
                    "t": f"({c.t_lo},{c.t_hi})",
                    "label": c.label,
                    "map": c.formula.serialize(),
                }
                for c in self.cases
            ],
        }


class GlueRelation(NamedTuple):
    strip: int
    transition: Transition

    def describe(self):
        i = self.strip
        return (
            f"(x,s,t) ~ (psi_{i}(x), s, t-2) for s in ({i},{i + 1}), "
            f"x in dom psi_{i}, t in (2,3)"
        )


class SuspensionComplex:
    """Blocks, gluing relation, and submersion descriptors of a suspension."""

    __slots__ = ("table", "q", "generators", "glue", "submersions")

    def __init__(self, table, q, generators, glue, submersions):
        self.table = table
        self.q = q
        self.generators = tuple(generators)
        self.glue = tuple(glue)
        self.submersions = dict(submersions)

    @property
    def strip_count(self):
        return len(self.generators)

    def strip_of(self, s: Fraction):
        """The strip index whose open s-interval contains s, or None."""
        for i in range(1, self.strip_count + 1):
            if Fraction(i) < s < Fraction(i + 1):
                return i
        return None

    def contains(self, point, tol=DEFAULT_TOLERANCE):
        """Exact membership of (x, s, t) in V (cells tested by shadow)."""
        x, s, t = point
        if Fraction(0) < t < Fraction(1):
            return True
        i = self.strip_of(s)
        if i is None:
            return False
        if not (Fraction(0) < t < Fraction(3)):
            return False
        return self.generators[i - 1].domain.contains(x, tol)

    def glue_partner(self, point, tol=DEFAULT_TOLERANCE):
        """The unique glued partner of a point, or None.

        Downward: t in (2,3) with x in dom psi_i maps to (psi_i(x), s, t-2);
        upward: t in (0,1) with x in im psi_i maps to (psi_i^{-1}(x), s, t+2).
        The two ranges are disjoint, so each point has at most one partner.
        """
        x, s, t = point
        i = self.strip_of(s)
        if i is None:
            return None
        gen = self.generators[i - 1]
        if Fraction(2) < t < Fraction(3) and gen.domain.contains(x, tol):
            return (gen.map(x), s, t - 2)
        if Fraction(0) < t < Fraction(1) and gen.codomain.contains(x, tol):
            return (gen.map.inverse()(x), s, t + 2)
        return None

    def in_relation(self, p, p2, tol=DEFAULT_TOLERANCE):
        """Exact graph membership: equality or a glue match."""
        if p[1] != p2[1]:
            return False
        if p == p2:
            return True
        partner = self.glue_partner(p, tol)
        return partner == p2

    def with_tampered_case(self, strip, name_suffix="bot", case_index=1,
                           formula=None):
        """Copy with one descriptor case's formula replaced (identity by
        default); for mutation testing of the cocycle verifier."""
        name = f"sigma_{strip}_{name_suffix}"
        sub = self.submersions[name]
        cases = list(sub.cases)
        old = cases[case_index]
        new_formula = formula if formula is not None else AffineMap.identity(
            self.table, self.q
        )
        cases[case_index] = Case(old.t_lo, old.t_hi, new_formula,
                                 old.label + " [tampered]")
        subs = dict(self.submersions)
        subs[name] = PiecewiseSubmersion(sub.name, sub.strip, tuple(cases))
        return SuspensionComplex(self.table, self.q, self.generators,
                                 self.glue, subs)

    def blocks(self):
        out = [{"kind": "base", "s": "R", "t": "(0,1)", "cell": f"R^{self.q}"}]
        for i, gen in enumerate(self.generators, start=1):
            cell = gen.domain.serialize() or f"R^{self.q}"
            out.append({
                "kind": "strip", "strip": i, "s": f"({i},{i + 1})",
                "t": "(0,3)", "cell": cell,
            })
        return out

    def serialize(self):
        return {
            "base_dimension": self.q,
            "generators": [g.serialize() for g in self.generators],
            "blocks": self.blocks(),
            "glue": [g.describe() for g in self.glue],
            "cocycle": [
                self.submersions[k].serialize() for k in sorted(self.submersions)
            ],
        }


def build_suspension(generators) -> SuspensionComplex:
    """Construct the suspension complex of psi_1, ..., psi_m (m >= 1, all of
    the same base dimension)."""
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    q = generators[0].map.dim
    table = generators[0].map.table
    for g in generators:
        if g.map.dim != q:
            raise ValueError("generators have mismatched dimensions")
    ident = AffineMap.identity(table, q)
    subs = {}
    base_cases = [Case(Fraction(0), Fraction(1), ident, "x")]
    glue = []
    for i, gen in enumerate(generators, start=1):
        psi = gen.map
        subs[f"sigma_{i}_bot"] = PiecewiseSubmersion(
            f"sigma_{i}_bot", i,
            (Case(Fraction(0), THREE_HALVES, ident, "x"),
             Case(Fraction(2), Fraction(3), psi, f"psi_{i}(x)")),
        )
        subs[f"sigma_{i}_mid"] = PiecewiseSubmersion(
            f"sigma_{i}_mid", i,
            (Case(Fraction(1), Fraction(2), ident, "x"),),
        )
        subs[f"sigma_{i}_top"] = PiecewiseSubmersion(
            f"sigma_{i}_top", i,
            (Case(Fraction(0), Fraction(1), psi.inverse(), f"psi_{i}^-1(x)"),
             Case(THREE_HALVES, Fraction(3), ident, "x")),
        )
        base_cases.append(Case(Fraction(2), Fraction(3), psi,
                               f"psi_{i}(x) on strip {i}"))
        glue.append(GlueRelation(i, gen))
    subs["sigma_bot"] = PiecewiseSubmersion("sigma_bot", None, tuple(base_cases))
    return SuspensionComplex(table, q, generators, glue, subs)


class CocycleCase(NamedTuple):
    region: str
    ok: bool
    witness: Optional[dict]


class CocycleCheckReport(NamedTuple):
    passed: bool
    cases: tuple

    def failures(self):
        return [c for c in self.cases if not c.ok]


def _expected_intervals(sub_name):
    if sub_name.endswith("_bot"):
        return ((Fraction(0), THREE_HALVES), (Fraction(2), Fraction(3)))
    if sub_name.endswith("_mid"):
        return ((Fraction(1), Fraction(2)),)
    return ((Fraction(0), Fraction(1)), (THREE_HALVES, Fraction(3)))


def verify_cocycle(c: SuspensionComplex) -> CocycleCheckReport:
    """Check the cocycle identity sigma_i_bot = psi_i o sigma_i_top on every
    case of the region decomposition of M_i_top n M_i_bot (where t avoids
    [1,2]), plus the agreement of sigma_bot with sigma_i_bot and the
    overlaps with sigma_i_mid.  Exact affine identities throughout."""
    cases = []

    def check(region, strip, lhs, rhs, t_interval):
        ok = lhs is not None and rhs is not None and lhs == rhs
        witness = None
        if not ok:
            witness = {
                "strip": strip,
                "region": region,
                "s": f"({strip},{strip + 1})",
                "t": f"({t_interval[0]},{t_interval[1]})",
            }
        cases.append(CocycleCase(region, ok, witness))

    for i, gen in enumerate(c.generators, start=1):
        psi = gen.map
        bot = c.submersions[f"sigma_{i}_bot"]
        mid = c.submersions[f"sigma_{i}_mid"]
        top = c.submersions[f"sigma_{i}_top"]
        base = c.submersions["sigma_bot"]
        for sub, name in ((bot, f"sigma_{i}_bot"), (mid, f"sigma_{i}_mid"),
                          (top, f"sigma_{i}_top")):
            expected = _expected_intervals(name)
            got = tuple((case.t_lo, case.t_hi) for case in sub.cases)
            cases.append(CocycleCase(
                f"strip {i}: {name} region decomposition",
                got == expected,
                None if got == expected else {"strip": i, "expected": str(expected)},
            ))

        def formula(sub, lo, hi):
            case = sub.case_on(lo, hi)
            return case.formula if case else None

        # upper representatives: t in (2,3)
        upper_top = formula(top, THREE_HALVES, Fraction(3))
        upper_bot = formula(bot, Fraction(2), Fraction(3))
        check(
            f"strip {i}: sigma_bot = psi o sigma_top on t in (2,3)",
            i, upper_bot,
            psi.compose(upper_top) if upper_top is not None else None,
            (Fraction(2), Fraction(3)),
        )
        # lower representatives: t in (0,1)
        lower_top = formula(top, Fraction(0), Fraction(1))
        lower_bot = formula(bot, Fraction(0), THREE_HALVES)
        check(
            f"strip {i}: sigma_bot = psi o sigma_top on t in (0,1)",
            i, lower_bot,
            psi.compose(lower_top) if lower_top is not None else None,
            (Fraction(0), Fraction(1)),
        )
        # cross-strip: sigma_bot agrees with sigma_i_bot on both pieces
        base_upper = next(
            (case.formula for case in base.cases
             if (case.t_lo, case.t_hi) == (Fraction(2), Fraction(3))
             and f"strip {i}" in case.label),
            None,
        )
        check(
            f"strip {i}: base sigma_bot = sigma_{i}_bot on t in (2,3)",
            i, base_upper, upper_bot, (Fraction(2), Fraction(3)),
        )
        base_lower = base.case_on(Fraction(0), Fraction(1))
        check(
            f"strip {i}: base sigma_bot = sigma_{i}_bot on t in (0,1)",
            i,
            base_lower.formula if base_lower else None,
            lower_bot,
            (Fraction(0), Fraction(1)),
        )
        # mid overlaps carry the identity on both sides
        mid_f = formula(mid, Fraction(1), Fraction(2))
        check(
            f"strip {i}: sigma_mid = sigma_{i}_bot on t in (1,3/2)",
            i, mid_f, lower_bot, (Fraction(1), THREE_HALVES),
        )
        check(
            f"strip {i}: sigma_mid = sigma_{i}_top on t in (3/2,2)",
            i, mid_f, upper_top, (THREE_HALVES, Fraction(2)),
        )
    return CocycleCheckReport(all(case.ok for case in cases), tuple(cases))


class GodementCase(NamedTuple):
    name: str
    sequences: int
    limits_in_relation: int
    limits_escape: int
    failures: tuple


class GodementReport(NamedTuple):
    passed: bool
    cases: tuple
    chart_notes: tuple


def _rational_point_in(table, cell, rng, tol):
    for _ in range(64):
        p = tuple(
            table.rational(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
            for _ in range(cell.dim)
        )
        if cell.contains(p, tol):
            return p
    return None


def verify_godement(c: SuspensionComplex, samples: int, seed: int = 0,
                    tol=DEFAULT_TOLERANCE) -> GodementReport:
    """Replay the closedness case analysis for the glue relation on sampled
    convergent sequences.

    Cases: s0 below the first strip; s0 at a strip boundary; s0 interior
    with t0 in the low, middle, and glue ranges.  Every sampled sequence is
    verified to lie in the relation graph exactly; its limit must either
    land in the relation or escape V x V.  Graph charts are affine graphs
    of invertible maps, hence submersion-compatible; this is recorded."""
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    case_names = ("s_below_strips", "s_at_strip_boundary",
                  "interior_t_low", "interior_t_mid", "interior_t_glue")
    stats = {n: [0, 0, 0, []] for n in case_names}

    def record(name, prefix_ok, limit_pair):
        entry = stats[name]
        entry[0] += 1
        if not prefix_ok:
            entry[3].append("sequence prefix left the relation graph")
            return
        p0, p1 = limit_pair
        both_in_v = c.contains(p0, tol) and c.contains(p1, tol)
        if not both_in_v:
            entry[2] += 1
            return
        if c.in_relation(p0, p1, tol):
            entry[1] += 1
        else:
            entry[3].append(f"limit pair in VxV but not in relation: {p0}, {p1}")

    def diag_sequence(name, x0, s0, t0, s_seq, t_seq):
        ok = all(c.in_relation((x0, s, t), (x0, s, t), tol) and c.contains((x0, s, t), tol)
                 for s, t in zip(s_seq, t_seq))
        record(name, ok, ((x0, s0, t0), (x0, s0, t0)))

    def glue_sequence(name, i, x0, s0, t0, s_seq, t_seq):
        gen = c.generators[i - 1]
        ok = True
        for s, t in zip(s_seq, t_seq):
            p = (x0, s, t)
            partner = c.glue_partner(p, tol)
            if partner is None or not c.in_relation(p, partner, tol):
                ok = False
                break
        limit = ((x0, s0, t0), (gen.map(x0), s0, t0 - 2))
        record(name, ok, limit)

    def seq_to(limit, side, count=5):
        return [limit + Fraction(side, j + 4) for j in range(count)]

    n = 0
    while n < samples:
        i = (n % c.strip_count) + 1
        gen = c.generators[i - 1]
        x0 = _rational_point_in(c.table, gen.domain, rng, tol)
        if x0 is None:
            raise ValueError(f"could not sample a point in dom psi_{i}")
        kind = case_names[n % len(case_names)]
        if kind == "s_below_strips":
            s0 = Fraction(rng.randint(-3, 0)) + Fraction(1, rng.randint(2, 5))
            t0 = HALF
            diag_sequence(kind, x0, s0, t0,
                          seq_to(s0, 1), seq_to(t0, -1))
        elif kind == "s_at_strip_boundary":
            if n % 2:
                # glue pairs pushed to s -> i: the limit escapes V x V
                glue_sequence(kind, i, x0, Fraction(i), Fraction(5, 2),
                              seq_to(Fraction(i), 1),
                              [Fraction(5, 2)] * 5)
            else:
                diag_sequence(kind, x0, Fraction(i), HALF,
                              seq_to(Fraction(i), 1), seq_to(HALF, 1))
        elif kind == "interior_t_low":
            s0 = Fraction(i) + HALF
            t0 = Fraction(1) if n % 2 else Fraction(3, 4)
            diag_sequence(kind, x0, s0, t0,
                          [s0] * 5, seq_to(t0, -1))
        elif kind == "interior_t_mid":
            s0 = Fraction(i) + Fraction(1, 3)
            t0 = THREE_HALVES
            diag_sequence(kind, x0, s0, t0, [s0] * 5, seq_to(t0, 1))
        else:
            s0 = Fraction(i) + Fraction(2, 3)
            variant = n % 3
            if variant == 0:
                t0 = Fraction(5, 2)
                glue_sequence(kind, i, x0, s0, t0, [s0] * 5, seq_to(t0, 1))
            elif variant == 1:
                t0 = Fraction(2)          # partner limit leaves V
                glue_sequence(kind, i, x0, s0, t0, [s0] * 5, seq_to(t0, 1))
            else:
                t0 = Fraction(3)          # the point itself leaves V
                glue_sequence(kind, i, x0, s0, t0, [s0] * 5, seq_to(t0, -1))
        n += 1

    notes = []
    for i, gen in enumerate(c.generators, start=1):
        notes.append(
            f"strip {i}: relation chart is the graph of an affine transition "
            f"with det = {gen.map.det}; second projection is affine, hence a "
            "submersion"
        )
    cases = tuple(
        GodementCase(name, *stats[name][:3], tuple(stats[name][3]))
        for name in case_names
    )
    passed = all(not case.failures for case in cases)
    return GodementReport(passed, cases, tuple(notes))


def holonomy_generators(c: SuspensionComplex):
    """Read the generators off the nontrivial cocycle elements.

    The (2,3)-case of each sigma_i_bot is psi_i; paired with the strip
    domain this reproduces the input transitions, order-preserved."""
    out = []
    for i in range(1, c.strip_count + 1):
        sub = c.submersions[f"sigma_{i}_bot"]
        case = sub.case_on(Fraction(2), Fraction(3))
        if case is None:
            raise ValueError(f"strip {i} has no glue case to read")
        out.append(Transition(case.formula, c.generators[i - 1].domain))
    return out


def riemannian_flag(c: SuspensionComplex) -> bool:
    """True iff every generator is a euclidean isometry, making the suspended
    foliation Riemannian."""
    return all(is_euclidean_isometry(g.map) for g in c.generators)
