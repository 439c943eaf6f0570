"""TOML problem-file loading for the command line front door.

One symbol table per file.  Scalars appear as grammar strings; affine maps
as {A = nested strings, b = strings} with an optional domain given as a
list of {normal, offset} strict inequalities.
"""

from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .affpseudo import AffineMap, FGAffineGroup, OpenCell, Transition
from .atlas import AtlasObject, AtlasTransition, QuasifoldChart
from .localmodel import LocalModelInput
from .scalarfield import SymbolTable, parse_scalar
from .torusfol import LinearFoliationSpec

__all__ = [
    "InputError",
    "load_toml",
    "symbol_table",
    "scalar_vector",
    "foliation_spec",
    "point_pair",
    "transition_list",
    "local_model_input",
    "orbit_problem",
    "atlas_object",
]


class InputError(ValueError):
    """Malformed problem file; the message carries location context."""


def load_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}")


def _require(data, key, where):
    if key not in data:
        raise InputError(f"{where}: missing required key {key!r}")
    return data[key]


def symbol_table(data, where="input"):
    entries = []
    for row in data.get("symbols", []):
        name = _require(row, "name", f"{where}.symbols")
        entries.append((name, row.get("shadow")))
    try:
        return SymbolTable(entries)
    except ValueError as exc:
        raise InputError(f"{where}.symbols: {exc}")


def _scalar(text, table, where):
    try:
        return parse_scalar(str(text), table)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def scalar_vector(values, table, where):
    return tuple(_scalar(v, table, f"{where}[{i}]") for i, v in enumerate(values))


def foliation_spec(data, where="input"):
    table = symbol_table(data, where)
    n = int(_require(data, "n", where))
    rows = _require(data, "directions", where)
    directions = [
        scalar_vector(row, table, f"{where}.directions[{i}]")
        for i, row in enumerate(rows)
    ]
    try:
        return LinearFoliationSpec(table, n, directions)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def point_pair(data, spec, where="input"):
    x = scalar_vector(_require(data, "x", where), spec.table, f"{where}.x")
    y = scalar_vector(_require(data, "y", where), spec.table, f"{where}.y")
    if len(x) != spec.n or len(y) != spec.n:
        raise InputError(f"{where}: points must have length n = {spec.n}")
    return x, y


def _affine_map(data, table, dim, where):
    rows = _require(data, "A", where)
    b = _require(data, "b", where)
    matrix = [
        scalar_vector(row, table, f"{where}.A[{i}]") for i, row in enumerate(rows)
    ]
    offset = scalar_vector(b, table, f"{where}.b")
    if len(offset) != dim or len(matrix) != dim:
        raise InputError(f"{where}: map must be {dim}x{dim}")
    try:
        return AffineMap(table, matrix, offset)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def _cell(rows, table, dim, where):
    inequalities = []
    for i, row in enumerate(rows or []):
        normal = scalar_vector(
            _require(row, "normal", f"{where}[{i}]"), table, f"{where}[{i}].normal"
        )
        offset = _scalar(
            _require(row, "offset", f"{where}[{i}]"), table, f"{where}[{i}].offset"
        )
        inequalities.append((normal, offset))
    try:
        return OpenCell(table, dim, inequalities)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def transition_list(data, where="input", tol=1e-9):
    """Shared generator-list format: dimension plus affine maps with
    optional domain cells."""
    table = symbol_table(data, where)
    dim = int(_require(data, "dimension", where))
    out = []
    for i, row in enumerate(_require(data, "generators", where)):
        m = _affine_map(row, table, dim, f"{where}.generators[{i}]")
        cell = _cell(row.get("domain"), table, dim, f"{where}.generators[{i}].domain")
        try:
            out.append(Transition(m, cell, check=True, tol=tol))
        except ValueError as exc:
            raise InputError(f"{where}.generators[{i}]: {exc}")
    if not out:
        raise InputError(f"{where}: needs at least one generator")
    return table, out


def local_model_input(data, where="input"):
    table = symbol_table(data, where)
    r = int(_require(data, "r", where))
    d = int(_require(data, "d", where))
    relations = data.get("relations", "free_abelian")
    psi, rho = [], []
    for i, row in enumerate(_require(data, "generators", where)):
        w = f"{where}.generators[{i}]"
        psi.append(scalar_vector(_require(row, "psi", w), table, f"{w}.psi"))
        rho_rows = _require(row, "rho", w) if d else row.get("rho", [])
        rho.append([
            scalar_vector(rr, table, f"{w}.rho[{j}]")
            for j, rr in enumerate(rho_rows)
        ])
    try:
        return LocalModelInput(table, r, d, relations, psi, rho)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")


def orbit_problem(data, where="input"):
    table = symbol_table(data, where)
    dim = int(_require(data, "dimension", where))
    maps = [
        _affine_map(row, table, dim, f"{where}.generators[{i}]")
        for i, row in enumerate(_require(data, "generators", where))
    ]
    group = FGAffineGroup(table, dim, maps)
    x = scalar_vector(_require(data, "x", where), table, f"{where}.x")
    y = scalar_vector(_require(data, "y", where), table, f"{where}.y")
    if len(x) != dim or len(y) != dim:
        raise InputError(f"{where}: points must have length {dim}")
    return group, x, y


def atlas_object(data, where="input", tol=1e-9):
    table = symbol_table(data, where)
    charts = []
    for i, row in enumerate(_require(data, "charts", where)):
        w = f"{where}.charts[{i}]"
        dim = int(_require(row, "dimension", w))
        maps = [
            _affine_map(g, table, dim, f"{w}.generators[{j}]")
            for j, g in enumerate(_require(row, "generators", w))
        ]
        cell = _cell(row.get("cell"), table, dim, f"{w}.cell")
        try:
            charts.append(QuasifoldChart(dim, FGAffineGroup(table, dim, maps), cell))
        except ValueError as exc:
            raise InputError(f"{w}: {exc}")
    transitions = []
    for i, row in enumerate(data.get("transitions", [])):
        w = f"{where}.transitions[{i}]"
        source = int(_require(row, "source", w))
        target = int(_require(row, "target", w))
        if not 0 <= source < len(charts):
            raise InputError(f"{w}: source chart index out of range")
        lift_data = _require(row, "lift", w)
        dim = charts[source].dim
        m = _affine_map(lift_data, table, dim, f"{w}.lift")
        cell = _cell(lift_data.get("domain"), table, dim, f"{w}.lift.domain")
        try:
            lift = Transition(m, cell, check=True, tol=tol)
        except ValueError as exc:
            raise InputError(f"{w}.lift: {exc}")
        transitions.append(AtlasTransition(source, target, lift))
    try:
        return table, AtlasObject(charts, transitions)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}")
