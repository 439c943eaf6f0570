"""Z-spans of vectors with scalar-field entries.

The coordinatization that makes Z-module questions decidable: entries are
put over one monic common denominator, expanded in monomials, and scaled
to an integer coordinate matrix.  Membership and integer relations then
reduce to linear Diophantine systems, and the HNF of the coordinate matrix
gives a canonical generating set.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd

from . import intlinalg
from .scalarfield import Scalar, _lead, _pdiv_exact, _pgcd, _pmul, _pscale

__all__ = ["ZSpan", "coordinates"]


def _poly_lcm(table, terms_list):
    """Monic lcm of a list of nonzero polynomials (as term dicts)."""
    acc = dict(table._one_terms)
    for t in terms_list:
        g = _pgcd(acc, t)
        acc = _pmul(_pdiv_exact(acc, g), t)
    lc = _lead(acc)[1]
    if lc != 1:
        acc = _pscale(acc, 1 / lc)
    return acc


def coordinates(table, vectors):
    """Integer monomial coordinates of vectors over a common denominator.

    Returns (monomials, denominator terms, scale, rows): each vector maps to
    an integer row, flattened coordinate-major over the sorted monomial
    list, such that vector = row reassembled over scale * denominator.
    """
    dens = [entry.den for vec in vectors for entry in vec]
    den = _poly_lcm(table, dens) if dens else dict(table._one_terms)
    numerators = []
    monomials = set()
    for vec in vectors:
        nums = []
        for entry in vec:
            scaled = _pmul(entry.num, _pdiv_exact(den, entry.den))
            nums.append(scaled)
            monomials.update(scaled)
        numerators.append(nums)
    monomials = sorted(monomials, key=lambda e: (sum(e), e))
    scale = 1
    for nums in numerators:
        for t in nums:
            for c in t.values():
                scale = scale * c.denominator // _igcd(scale, c.denominator)
    rows = []
    for nums in numerators:
        row = []
        for t in nums:
            for mono in monomials:
                row.append(int(t.get(mono, Fraction(0)) * scale))
        rows.append(row)
    return monomials, den, scale, rows


class ZSpan:
    """The Z-span of finitely many vectors in R^q with scalar entries.

    Membership (with integer coefficients on the original generators) and
    the lattice of integer relations are decided exactly; the HNF of the
    coordinate matrix provides canonical generators.
    """

    def __init__(self, table, ambient_dim, generators):
        self.table = table
        self.ambient_dim = ambient_dim
        self.generators = tuple(tuple(v) for v in generators)
        for v in self.generators:
            if len(v) != ambient_dim:
                raise ValueError("generator has wrong length")
        mono, den, scale, rows = coordinates(table, self.generators)
        self.monomials = tuple(mono)
        self.denominator = Scalar._make(table, den, dict(table._one_terms))
        self.scale = scale
        self.coord_rows = tuple(tuple(r) for r in rows)
        if rows:
            self._hnf = intlinalg.hnf(rows)
            self.canonical_coords = tuple(
                r for r in self._hnf.h if any(r)
            )
        else:
            self._hnf = None
            self.canonical_coords = ()

    def canonical_generators(self):
        """Generators reassembled from the HNF rows; same Z-span, canonical."""
        out = []
        t = len(self.monomials)
        factor = self.table.rational(Fraction(1, self.scale)) / self.denominator
        for row in self.canonical_coords:
            vec = []
            for c in range(self.ambient_dim):
                num = {}
                for j, mono in enumerate(self.monomials):
                    coeff = row[c * t + j]
                    if coeff:
                        num[mono] = Fraction(coeff)
                poly = Scalar._make(self.table, num, dict(self.table._one_terms))
                vec.append(poly * factor)
            out.append(tuple(vec))
        return out

    def contains(self, vector):
        """Integer coefficients on the original generators, or None.

        Decisive: the symbols are algebraically independent, so monomial
        coordinates faithfully represent the vectors.
        """
        vector = tuple(vector)
        if len(vector) != self.ambient_dim:
            raise ValueError("vector has wrong length")
        if not self.generators:
            return () if all(x.is_zero() for x in vector) else None
        mono, _, _, rows = coordinates(
            self.table, self.generators + (vector,)
        )
        gen_rows, target = rows[:-1], rows[-1]
        a = [[gen_rows[g][i] for g in range(len(gen_rows))] for i in range(len(target))]
        result = intlinalg.solve_diophantine(a, target)
        if not result.solvable:
            return None
        return result.particular

    def kernel(self):
        """Basis of the integer relations among the original generators."""
        if not self.generators:
            return ()
        a = [
            [self.coord_rows[g][i] for g in range(len(self.generators))]
            for i in range(len(self.coord_rows[0]))
        ]
        result = intlinalg.solve_diophantine(a, [0] * len(a))
        return result.kernel_basis

    def same_span(self, other):
        if self.ambient_dim != other.ambient_dim:
            return False
        return all(other.contains(v) is not None for v in self.generators) and all(
            self.contains(v) is not None for v in other.generators
        )
