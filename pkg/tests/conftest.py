from fractions import Fraction

import pytest

from quasifolds.affpseudo import AffineMap, OpenCell, Transition
from quasifolds.scalarfield import SymbolTable

SQRT2 = 1.4142135623730951
SQRT3 = 1.7320508075688772


@pytest.fixture
def table():
    return SymbolTable([("l", SQRT2)])


@pytest.fixture
def table3():
    return SymbolTable([("l", SQRT2), ("m", SQRT3)])


def random_rational(rng, num=8, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_invertible_map(table, rng, dim, allow_symbol=True):
    """A random non-identity invertible affine map with small exact entries.

    The linear part is triangular with nonzero rational diagonal (so the
    determinant is trivially nonzero), optionally with one symbolic entry.
    """
    one, zero = table.one, table.zero
    while True:
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                if i == j:
                    d = rng.choice([1, 1, -1, 2, Fraction(1, 2), 3])
                    row.append(table.rational(d))
                elif j > i and rng.random() < 0.4:
                    if allow_symbol and table.names and rng.random() < 0.3:
                        row.append(table.symbol(rng.choice(table.names)))
                    else:
                        row.append(table.rational(random_rational(rng, 3, 2)))
                else:
                    row.append(zero)
            rows.append(row)
        offset = []
        for _ in range(dim):
            if allow_symbol and table.names and rng.random() < 0.25:
                offset.append(table.symbol(rng.choice(table.names)))
            else:
                offset.append(table.rational(random_rational(rng)))
        m = AffineMap(table, rows, offset)
        if not m.is_identity():
            return m


def random_transitions(table, rng, dim, count):
    whole = OpenCell.whole(table, dim)
    return [
        Transition(random_invertible_map(table, rng, dim), whole)
        for _ in range(count)
    ]
