"""Exact arithmetic in Q(s1, ..., sk), rational functions in declared
algebraically independent real symbols.

Every exact number in the library is a Scalar: a reduced fraction of
multivariate polynomials with arbitrary-precision rational coefficients,
kept in canonical form under a fixed graded-lexicographic monomial order.
Because the symbols are declared transcendental and algebraically
independent, equality of canonical forms decides equality of the
represented real numbers.  A symbol may carry a floating-point "shadow"
used for order decisions and numeric cross-checks, never for equality.

All values are immutable after construction.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from math import gcd as _igcd

__all__ = [
    "SymbolTable",
    "Scalar",
    "parse_scalar",
    "arith",
    "expand",
    "reassemble",
    "shadow_eval",
    "ScalarSyntaxError",
    "UnknownSymbolError",
    "MissingShadowError",
]

# A polynomial is a map {exponent tuple -> nonzero Fraction}; the zero
# polynomial is the empty map.  Exponent tuples have one entry per table
# symbol.  By convention these dicts are never mutated once built.
Exponents = tuple
Terms = dict

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ScalarSyntaxError(ValueError):
    """Raised on malformed scalar expressions; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(ValueError):
    """Raised when an expression names a symbol absent from the table."""

    def __init__(self, name, position=None):
        at = f" (at position {position})" if position is not None else ""
        super().__init__(f"unknown symbol {name!r}{at}")
        self.name = name
        self.position = position


class MissingShadowError(ValueError):
    """Raised when shadow evaluation touches a symbol with no shadow value."""


# ---------------------------------------------------------------------------
# polynomial helpers (exponent-dict representation)

def _grlex(e):
    return (sum(e), e)


def _lead(t):
    """Leading (exponent, coefficient) of a nonzero polynomial under grlex."""
    e = max(t, key=_grlex)
    return e, t[e]


def _padd(a, b):
    r = dict(a)
    for e, c in b.items():
        s = r.get(e, 0) + c
        if s:
            r[e] = s
        else:
            r.pop(e, None)
    return r


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pscale(a, c):
    if not c:
        return {}
    return {e: q * c for e, q in a.items()}


def _emul(e1, e2):
    return tuple(x + y for x, y in zip(e1, e2))


def _pmul(a, b):
    r = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = _emul(e1, e2)
            s = r.get(e, 0) + c1 * c2
            if s:
                r[e] = s
            else:
                r.pop(e, None)
    return r


def _ppow(a, n):
    r = None
    base = a
    while n:
        if n & 1:
            r = base if r is None else _pmul(r, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return r


def _pdivmod(a, b):
    """Single-divisor multivariate division under grlex: a = q*b + r."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    eb, cb = _lead(b)
    q = {}
    r = dict(a)
    rem = {}
    while r:
        er, cr = _lead(r)
        if all(x >= y for x, y in zip(er, eb)):
            e = tuple(x - y for x, y in zip(er, eb))
            c = cr / cb
            q[e] = q.get(e, 0) + c
            r = _psub(r, _pmul({e: c}, b))
        else:
            rem[er] = cr
            del r[er]
    return q, rem


def _pdiv_exact(a, b):
    q, rem = _pdivmod(a, b)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return q


def _vars_used(t):
    used = set()
    for e in t:
        for i, x in enumerate(e):
            if x:
                used.add(i)
    return used


def _make_primitive(t):
    """Scale a nonzero polynomial to integer coefficients with content 1 and
    positive grlex-leading coefficient."""
    den = 1
    for c in t.values():
        den = den * c.denominator // _igcd(den, c.denominator)
    num = 0
    for c in t.values():
        num = _igcd(num, abs(c.numerator * (den // c.denominator)))
    factor = Fraction(den, num)
    r = {e: c * factor for e, c in t.items()}
    if _lead(r)[1] < 0:
        r = _pneg(r)
    return r


def _to_univ(t, v):
    """View terms as univariate in symbol v with polynomial coefficients."""
    u = {}
    for e, c in t.items():
        d = e[v]
        e0 = e[:v] + (0,) + e[v + 1:]
        coeff = u.setdefault(d, {})
        coeff[e0] = coeff.get(e0, 0) + c
    return u


def _from_univ(u, v):
    t = {}
    for d, coeff in u.items():
        for e0, c in coeff.items():
            e = e0[:v] + (d,) + e0[v + 1:]
            t[e] = c
    return t


def _prem(f, g):
    """Pseudo-remainder of univariate-view polynomials (dicts deg -> Terms)."""
    dg = max(g)
    lcg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lcr = r[dr]
        scaled = {d: _pmul(c, lcg) for d, c in r.items()}
        shift = {d + dr - dg: _pmul(c, lcr) for d, c in g.items()}
        r = {}
        for d in set(scaled) | set(shift):
            c = _psub(scaled.get(d, {}), shift.get(d, {}))
            if c:
                r[d] = c
    return r


def _content(coeffs):
    g = {}
    for c in coeffs:
        g = _gcd_primitive(g, c) if g else dict(c)
    return g


def _gcd_primitive(a, b):
    """GCD of integer-coefficient polynomials, primitive with positive lc.

    Primitive pseudo-remainder sequences, recursing on the number of
    symbols actually present; adequate for the small degrees this library
    produces.
    """
    if not a:
        return _make_primitive(b) if b else {}
    if not b:
        return _make_primitive(a)
    vs = _vars_used(a) | _vars_used(b)
    if not vs:
        e = next(iter(a))
        g = _igcd(abs(int(a[e])), abs(int(next(iter(b.values())))))
        return {e: Fraction(g)}
    v = min(vs)
    fa, fb = _to_univ(a, v), _to_univ(b, v)
    ca, cb = _content(fa.values()), _content(fb.values())
    c = _gcd_primitive(ca, cb)
    f = {d: _pdiv_exact(x, ca) for d, x in fa.items()}
    g = {d: _pdiv_exact(x, cb) for d, x in fb.items()}
    if max(f) < max(g):
        f, g = g, f
    while True:
        if not g:
            pp = f
            break
        if max(g) == 0:
            pp = {0: {_zero_exp(a): Fraction(1)}}
            break
        r = _prem(f, g)
        if not r:
            pp = g
            break
        cr = _content(r.values())
        f, g = g, {d: _pdiv_exact(x, cr) for d, x in r.items()}
    result = _pmul(c, _from_univ(pp, v))
    return _make_primitive(result)


def _zero_exp(t):
    e = next(iter(t))
    return (0,) * len(e)


def _pgcd(a, b):
    """GCD over Q of two polynomials, returned primitive over Z, positive lc."""
    if not a:
        return _make_primitive(b) if b else {}
    if not b:
        return _make_primitive(a)
    return _gcd_primitive(_make_primitive(a), _make_primitive(b))


# ---------------------------------------------------------------------------


class SymbolTable:
    """Ordered table of declared symbols with optional shadow values.

    Symbols are treated as transcendental and algebraically independent;
    there is deliberately no way to declare an algebraic relation (such as
    a square root), so canonical-form equality of Scalars is exact equality
    of real numbers.  Immutable after creation; all Scalars reference one
    table.
    """

    __slots__ = ("names", "shadows", "_index", "_one_terms")

    def __init__(self, symbols=()):
        names = []
        shadows = []
        for entry in symbols:
            if isinstance(entry, str):
                name, shadow = entry, None
            else:
                name, shadow = entry
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid symbol name {name!r}")
            if shadow is not None:
                shadow = float(shadow)
                if not math.isfinite(shadow) or shadow == 0.0:
                    raise ValueError(f"shadow for {name!r} must be finite and nonzero")
            names.append(name)
            shadows.append(shadow)
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be unique")
        present = [s for s in shadows if s is not None]
        if len(set(present)) != len(present):
            raise ValueError("shadow values must be pairwise distinct")
        self.names = tuple(names)
        self.shadows = tuple(shadows)
        self._index = {n: i for i, n in enumerate(names)}
        self._one_terms = {(0,) * len(names): Fraction(1)}

    @property
    def k(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbolError(name) from None

    def rational(self, value):
        q = Fraction(value)
        if q == 0:
            return Scalar(self, {}, dict(self._one_terms))
        return Scalar(self, {(0,) * self.k: q}, dict(self._one_terms))

    def symbol(self, name):
        i = self.index(name)
        e = tuple(1 if j == i else 0 for j in range(self.k))
        return Scalar(self, {e: Fraction(1)}, dict(self._one_terms))

    @property
    def zero(self):
        return self.rational(0)

    @property
    def one(self):
        return self.rational(1)

    def scalar(self, text):
        return parse_scalar(text, self)

    def has_all_shadows(self):
        return all(s is not None for s in self.shadows)

    def __repr__(self):
        parts = [n if s is None else f"{n}={s!r}" for n, s in zip(self.names, self.shadows)]
        return f"SymbolTable({', '.join(parts)})"


class Scalar:
    """An element of Q(s1, ..., sk) in canonical form.

    Canonical means: the fraction is reduced (gcd of numerator and
    denominator is 1) and the denominator is monic under the fixed
    graded-lexicographic order.  Never construct directly; use SymbolTable
    factories, parse_scalar, or arithmetic.
    """

    __slots__ = ("table", "num", "den", "_str")

    def __init__(self, table, num, den):
        self.table = table
        self.num = num
        self.den = den
        self._str = None

    # -- construction ------------------------------------------------------

    @staticmethod
    def _make(table, num, den):
        if not den:
            raise ZeroDivisionError("scalar with zero denominator")
        if not num:
            return Scalar(table, {}, dict(table._one_terms))
        if den != table._one_terms:
            g = _pgcd(num, den)
            if g != table._one_terms:
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
            lc = _lead(den)[1]
            if lc != 1:
                inv = 1 / lc
                num = _pscale(num, inv)
                den = _pscale(den, inv)
        return Scalar(table, num, den)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.table is not self.table:
                raise ValueError("scalars belong to different symbol tables")
            return other
        if isinstance(other, (int, Fraction)):
            return self.table.rational(other)
        return None

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.den == self.table._one_terms and self.num == self.table._one_terms

    def is_rational(self):
        return self.den == self.table._one_terms and (
            not self.num or set(self.num) == {(0,) * self.table.k}
        )

    def is_polynomial(self):
        return self.den == self.table._one_terms

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if not self.num:
            return Fraction(0)
        return next(iter(self.num.values()))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        one = self.table._one_terms
        if self.den == one and o.den == one:
            return Scalar._make(self.table, _padd(self.num, o.num), dict(one))
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return Scalar._make(self.table, num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.table, _pneg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        one = self.table._one_terms
        if self.den == one and o.den == one:
            return Scalar._make(self.table, _pmul(self.num, o.num), dict(one))
        return Scalar._make(
            self.table, _pmul(self.num, o.num), _pmul(self.den, o.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("scalar division by zero")
        return Scalar._make(
            self.table, _pmul(self.num, o.den), _pmul(self.den, o.num)
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return self.table.one
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero scalar to a negative power")
            return (self.table.one / self) ** (-n)
        return Scalar._make(self.table, _ppow(self.num, n), _ppow(self.den, n))

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        key = (
            tuple(sorted(self.num.items())),
            tuple(sorted(self.den.items())),
        )
        return hash(key)

    # -- printing --------------------------------------------------------------

    def _poly_str(self, t):
        if not t:
            return "0"
        parts = []
        for e in sorted(t, key=_grlex, reverse=True):
            c = t[e]
            factors = []
            mag = abs(c)
            if mag != 1 or not any(e):
                factors.append(str(mag))
            for name, exp in zip(self.table.names, e):
                if exp == 1:
                    factors.append(name)
                elif exp > 1:
                    factors.append(f"{name}^{exp}")
            body = "*".join(factors)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+" if c > 0 else "-") + body)
        return "".join(parts)

    def __str__(self):
        if self._str is None:
            num_s = self._poly_str(self.num)
            if self.den == self.table._one_terms:
                self._str = num_s
            else:
                if len(self.num) > 1:
                    num_s = f"({num_s})"
                den_s = self._poly_str(self.den)
                e = next(iter(self.den))
                atomic = len(self.den) == 1 and sum(1 for x in e if x) == 1
                if not atomic:
                    den_s = f"({den_s})"
                self._str = f"{num_s}/{den_s}"
        return self._str

    def __repr__(self):
        return f"Scalar({str(self)!r})"


# ---------------------------------------------------------------------------
# spec operations


def arith(a, b, op):
    """Field arithmetic on canonical Scalars; op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def expand(p):
    """Monomial expansion of a polynomial Scalar.

    Returns {exponent tuple: Fraction}, finitely supported; raises on
    non-polynomial input (clear the denominator first).
    """
    if not p.is_polynomial():
        raise ValueError(f"{p} is not a polynomial (denominator is not 1)")
    return dict(p.num)


def reassemble(table, expansion):
    """Inverse of expand: rebuild the polynomial Scalar from its coefficient map."""
    num = {}
    for e, c in expansion.items():
        c = Fraction(c)
        if c:
            num[tuple(e)] = c
    return Scalar._make(table, num, dict(table._one_terms))


def shadow_eval(p):
    """Evaluate a Scalar at the table's shadow values, in floating point.

    Used only for order decisions and oracles, never for equality.
    """
    table = p.table

    def eval_terms(t):
        total = 0.0
        for e, c in t.items():
            v = float(c)
            for i, exp in enumerate(e):
                if exp:
                    s = table.shadows[i]
                    if s is None:
                        raise MissingShadowError(
                            f"symbol {table.names[i]!r} has no shadow value"
                        )
                    v *= s ** exp
            total += v
        return total

    num = eval_terms(p.num)
    den = eval_terms(p.den)
    if den == 0.0:
        raise ZeroDivisionError("shadow denominator zero")
    value = num / den
    if not math.isfinite(value):
        raise OverflowError(f"shadow evaluation of {p} is not finite")
    return value


# ---------------------------------------------------------------------------
# parser for the scalar expression grammar
#
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := primary ('^' natural)*
#   primary:= integer | symbol | '(' expr ')'
#
# The leading unary minus is a strict extension of the input grammar so that
# canonical printed forms (which may start with '-') re-parse; whitespace is
# insignificant.

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()])|(\S)")


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        pos = m.start()
        if m.group(1):
            tokens.append(("int", m.group(1), pos))
        elif m.group(2):
            tokens.append(("name", m.group(2), pos))
        elif m.group(3):
            tokens.append(("op", m.group(3), pos))
        else:
            raise ScalarSyntaxError(f"unexpected character {m.group(4)!r}", pos)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, table):
        self.text = text
        self.table = table
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, value, pos = self.peek()
        if kind == "op" and value == op:
            return self.take()
        raise ScalarSyntaxError(f"expected {op!r}", pos)

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ScalarSyntaxError("trailing input", pos)
        return value

    def expr(self):
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if value == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                rhs = self.factor()
                if value == "*":
                    acc = acc * rhs
                else:
                    if rhs.is_zero():
                        raise ScalarSyntaxError("division by zero", pos)
                    acc = acc / rhs
            else:
                return acc

    def factor(self):
        acc = self.primary()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "^":
                self.take()
                kind, value, pos = self.peek()
                if kind != "int":
                    raise ScalarSyntaxError("exponent must be a natural number", pos)
                self.take()
                acc = acc ** int(value)
            else:
                return acc

    def primary(self):
        kind, value, pos = self.take()
        if kind == "int":
            return self.table.rational(int(value))
        if kind == "name":
            try:
                return self.table.symbol(value)
            except UnknownSymbolError:
                raise UnknownSymbolError(value, pos) from None
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ScalarSyntaxError("expected a number, symbol, or '('", pos)


def parse_scalar(text, table):
    """Parse an expression string into a canonical Scalar.

    parse -> print -> parse is the identity on canonical forms.
    """
    return _Parser(text, table).parse()
