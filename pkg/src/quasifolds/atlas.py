"""Quasifold charts and atlases, equivariance certification of chart
transitions, and the structural pseudogroup of an atlas.

A chart is R^q (or an invariant open cell) modulo a countable affine
group.  A transition between charts must be supplied with an explicit
affine lift; certification checks, exactly, that conjugation by the lift
carries each source generator into the target group's word ball.  The
structural pseudogroup is generated by the chart groups together with the
lifts composed with target-ball elements, truncated at an explicit word
radius.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .affpseudo import (
    DEFAULT_TOLERANCE,
    AffineMap,
    FGAffineGroup,
    OpenCell,
    OrbitDecision,
    OrbitVerdict,
    Transition,
    orbit_equal,
)

__all__ = [
    "QuasifoldChart",
    "AtlasTransition",
    "AtlasObject",
    "Certification",
    "PseudogroupGenerator",
    "UncertifiedTransitionError",
    "check_equivariance",
    "structural_pseudogroup",
    "quotient_point_equal",
]


class UncertifiedTransitionError(ValueError):
    """A structural-pseudogroup request hit an uncertified transition."""


def _sample_grid(dim, radius=2):
    if dim == 0:
        return [()]
    pts = [()]
    for _ in range(dim):
        pts = [p + (v,) for p in pts for v in range(-radius, radius + 1)]
    return pts


class QuasifoldChart:
    """A model quotient V/Gamma: an open cell with a countable affine group
    acting on it.

    Invariance of the cell is exact when the cell is all of R^q, and is
    otherwise checked on a deterministic sample grid with shadow
    evaluation.
    """

    __slots__ = ("dim", "group", "cell")

    def __init__(self, dim, group: FGAffineGroup, cell: OpenCell = None,
                 tol=DEFAULT_TOLERANCE):
        self.dim = dim
        self.group = group
        self.cell = cell if cell is not None else OpenCell.whole(group.table, dim)
        if group.dim != dim or self.cell.dim != dim:
            raise ValueError("chart dimension mismatch")
        if not self.cell.is_whole_space():
            table = group.table
            for point in _sample_grid(dim):
                p = tuple(table.rational(v) for v in point)
                if not self.cell.contains(p, tol):
                    continue
                for g in group.generators:
                    if not self.cell.contains(g(p), tol):
                        raise ValueError(
                            "group generator does not preserve the chart cell"
                        )

    def generator_strings(self):
        return sorted(g.key() for g in self.group.generators)

    def serialize(self):
        return {
            "dimension": self.dim,
            "group": self.group.serialize(),
            "cell": self.cell.serialize(),
        }


class AtlasTransition(NamedTuple):
    source: int
    target: int
    lift: Transition


class AtlasObject:
    """Charts plus lifted transitions between them."""

    __slots__ = ("charts", "transitions")

    def __init__(self, charts, transitions=()):
        self.charts = tuple(charts)
        self.transitions = tuple(transitions)
        for t in self.transitions:
            if not (0 <= t.source < len(self.charts)) or not (
                0 <= t.target < len(self.charts)
            ):
                raise ValueError("transition chart index out of range")
            if t.lift.map.dim != self.charts[t.source].dim:
                raise ValueError("transition lift dimension mismatch")


class Certification(NamedTuple):
    certified: bool
    certificate: Optional[tuple]      # conjugated generator per source generator
    failed_generator: Optional[int]


def check_equivariance(atlas: AtlasObject, transition: AtlasTransition,
                       radius: int) -> Certification:
    """Certify a lift: for every source generator g there must be g' in the
    target word ball with lift o g = g' o lift, exactly.

    For affine data this is the identity lift o g o lift^{-1} = g'; the
    found g' list is the certificate, and failure reports the offending
    generator index.
    """
    source = atlas.charts[transition.source].group
    target = atlas.charts[transition.target].group
    psi = transition.lift.map
    psi_inv = psi.inverse()
    ball_keys = {m.key(): m for m in
                 (mm for mm, _ in target.ball_with_words(radius))}
    certificate = []
    for i, g in enumerate(source.generators):
        conj = psi.compose(g).compose(psi_inv)
        found = ball_keys.get(conj.key())
        if found is None:
            return Certification(False, None, i)
        certificate.append(found)
    return Certification(True, tuple(certificate), None)


class PseudogroupGenerator(NamedTuple):
    source: int
    target: int
    transition: Transition


def structural_pseudogroup(atlas: AtlasObject, radius: int):
    """Generating set of the structural pseudogroup on the disjoint union
    of the chart cells, truncated at word radius `radius`.

    Generators are the chart groups themselves (as transitions on their
    cells) plus, for every certified atlas transition psi, the maps
    g' o psi with g' in the target group's word ball.  Monotone in the
    radius; deduplicated by canonical form.
    """
    out = []
    seen = set()

    def add(source, target, transition):
        k = (source, target, transition.key())
        if k not in seen:
            seen.add(k)
            out.append(PseudogroupGenerator(source, target, transition))

    for i, chart in enumerate(atlas.charts):
        for g in chart.group.generators:
            add(i, i, Transition(g, chart.cell))
    for t in atlas.transitions:
        cert = check_equivariance(atlas, t, radius)
        if not cert.certified:
            raise UncertifiedTransitionError(
                f"transition {t.source}->{t.target} is not certified "
                f"(generator {cert.failed_generator})"
            )
        target_group = atlas.charts[t.target].group
        for gprime, _ in target_group.ball_with_words(radius):
            add(t.source, t.target,
                Transition(gprime.compose(t.lift.map), t.lift.domain))
    return out


def quotient_point_equal(atlas: AtlasObject, source, x, target, y,
                         radius: int, tol=DEFAULT_TOLERANCE) -> OrbitDecision:
    """Do (chart source, x) and (chart target, y) define the same quotient
    point?

    Single-chart atlases delegate to the group orbit decision (exact for
    translation groups); otherwise a bounded search over words in the
    structural pseudogroup, tracking chart indices and checking domains by
    shadow membership.
    """
    x, y = tuple(x), tuple(y)
    if len(atlas.charts) == 1 and not atlas.transitions:
        return orbit_equal(atlas.charts[0].group, x, y, radius)
    letters = []
    for gen in structural_pseudogroup(atlas, radius):
        letters.append(gen)
        letters.append(PseudogroupGenerator(
            gen.target, gen.source, gen.transition.inverse()
        ))
    if source == target and x == y:
        return OrbitDecision(OrbitVerdict.EQUAL, word=())
    frontier = [(source, x, ())]
    visited = {(source, tuple(str(c) for c in x))}
    for _ in range(radius):
        new_frontier = []
        for chart, point, path in frontier:
            for idx, gen in enumerate(letters):
                if gen.source != chart:
                    continue
                if not gen.transition.domain.contains(point, tol):
                    continue
                image = gen.transition.map(point)
                state = (gen.target, tuple(str(c) for c in image))
                if state in visited:
                    continue
                visited.add(state)
                new_path = path + (idx,)
                if gen.target == target and image == y:
                    return OrbitDecision(OrbitVerdict.EQUAL, word=new_path)
                new_frontier.append((gen.target, image, new_path))
        frontier = new_frontier
        if not frontier:
            break
    return OrbitDecision(OrbitVerdict.NOT_WITHIN_BOUND)
