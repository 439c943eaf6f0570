"""Batch front door: parse problem files, run the pipelines, emit
structured reports.

Reports are byte-stable given identical inputs and seed: results carry
exact scalars as grammar strings and matrices as nested arrays, with
floating-point material confined to an explicitly labeled "numeric"
section.  Timings go to standard error.  Exit codes: 0 when a decision is
reached, 2 when a bounded search ends without a decision, 1 on input
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import inputs, localmodel, oracle, suspension, torusfol
from .affpseudo import OrbitVerdict, orbit_equal
from .atlas import (
    UncertifiedTransitionError,
    check_equivariance,
    quotient_point_equal,
    structural_pseudogroup,
)
from .inputs import InputError

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_WITHIN_BOUND = 2

GODEMENT_SAMPLES = 100


def _digest(path):
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _report_skeleton(args):
    return {
        "command": args.command,
        "options": {
            "input": args.input,
            "wordlen": args.wordlen,
            "tolerance": args.tolerance,
            "seed": args.seed,
            "format": args.format,
        },
        "input_digest": _digest(args.input),
        "results": {},
        "verdicts": {},
    }


def _render(report, fmt, out, prefix=""):
    if fmt == "json":
        out.write(json.dumps(report, indent=2))
        out.write("\n")
        return
    for key, value in report.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            _render(value, fmt, out, path + ".")
        elif isinstance(value, list):
            out.write(f"{path}: {json.dumps(value)}\n")
        else:
            out.write(f"{path}: {value}\n")


def _vectors(vectors):
    return [[str(x) for x in v] for v in vectors]


def _closure_results(spec, report, seed):
    closure = torusfol.rational_hull(spec)
    report["results"]["torus_dimension"] = spec.n
    report["results"]["leaf_dimension"] = spec.p
    report["results"]["hull_basis"] = [list(r) for r in closure.hull_basis]
    report["results"]["closure_dim"] = closure.closure_dim
    report["results"]["structure_dim"] = closure.structure_dim
    report["verdicts"]["dense_leaves"] = closure.dense
    if spec.table.has_all_shadows():
        ctx = oracle.ShadowContext(spec.table, seed=seed)
        report["numeric"] = {
            "epsilon_net_estimate": oracle.closure_dim_estimate(spec, ctx),
        }
    return closure


def cmd_closure(args, data):
    spec = inputs.foliation_spec(data)
    report = _report_skeleton(args)
    _closure_results(spec, report, args.seed)
    return report, EXIT_OK


def _deck_results(spec, report):
    deck = torusfol.deck_group(spec)
    group = deck.group
    report["results"]["complement_axes"] = list(deck.complement)
    report["results"]["projection_generators"] = _vectors(group.generators)
    report["results"]["canonical_generators"] = [
        list(v) for v in group.canonical_generator_strings()
    ]
    report["results"]["monomials"] = [
        str(_monomial(spec.table, e)) for e in group.monomials
    ]
    report["results"]["denominator"] = str(group.denominator)
    report["results"]["canonical_coords"] = [list(r) for r in group.canonical_coords()]
    return deck


def _monomial(table, exponents):
    s = table.one
    for name, e in zip(table.names, exponents):
        s = s * table.symbol(name) ** e
    return s


def cmd_deckgroup(args, data):
    spec = inputs.foliation_spec(data)
    report = _report_skeleton(args)
    _deck_results(spec, report)
    return report, EXIT_OK


def cmd_leafspace(args, data):
    spec = inputs.foliation_spec(data)
    report = _report_skeleton(args)
    closure = _closure_results(spec, report, args.seed)
    deck = _deck_results(spec, report)
    chart = torusfol.leaf_space_model(spec)
    report["results"]["chart"] = {
        "dimension": chart.dim,
        "group_generators": [
            list(v) for v in deck.group.canonical_generator_strings()
        ],
        "action": "translations",
        "cell": f"R^{chart.dim}",
    }
    report["verdicts"]["manifold_circle_factor"] = closure.structure_dim == 0
    return report, EXIT_OK


def cmd_sameleaf(args, data):
    spec = inputs.foliation_spec(data)
    x, y = inputs.point_pair(data, spec)
    report = _report_skeleton(args)
    decision = torusfol.point_same_leaf(spec, x, y)
    report["results"]["x"] = [str(v) for v in x]
    report["results"]["y"] = [str(v) for v in y]
    report["verdicts"]["leaf"] = decision.verdict.value
    if decision.coefficients is not None:
        report["results"]["membership_coefficients"] = list(decision.coefficients)
    return report, EXIT_OK


def cmd_suspend(args, data):
    _, gens = inputs.transition_list(data, tol=args.tolerance)
    complex_ = suspension.build_suspension(gens)
    report = _report_skeleton(args)
    report["results"] = complex_.serialize()
    report["verdicts"]["riemannian"] = suspension.riemannian_flag(complex_)
    return report, EXIT_OK


def cmd_check_cocycle(args, data):
    _, gens = inputs.transition_list(data, tol=args.tolerance)
    complex_ = suspension.build_suspension(gens)
    result = suspension.verify_cocycle(complex_)
    report = _report_skeleton(args)
    report["results"]["cases"] = [
        {"region": c.region, "ok": c.ok, **({"witness": c.witness} if c.witness else {})}
        for c in result.cases
    ]
    report["verdicts"]["cocycle"] = "pass" if result.passed else "fail"
    return report, EXIT_OK


def cmd_check_godement(args, data):
    _, gens = inputs.transition_list(data, tol=args.tolerance)
    complex_ = suspension.build_suspension(gens)
    result = suspension.verify_godement(
        complex_, GODEMENT_SAMPLES, seed=args.seed, tol=args.tolerance
    )
    report = _report_skeleton(args)
    report["results"]["samples"] = GODEMENT_SAMPLES
    report["results"]["cases"] = [
        {
            "case": c.name,
            "sequences": c.sequences,
            "limits_in_relation": c.limits_in_relation,
            "limits_escape_ambient": c.limits_escape,
            "failures": list(c.failures),
        }
        for c in result.cases
    ]
    report["results"]["chart_notes"] = list(result.chart_notes)
    report["verdicts"]["godement"] = "pass" if result.passed else "fail"
    return report, EXIT_OK


def cmd_localmodel(args, data):
    model_input = inputs.local_model_input(data)
    gpd = localmodel.build_local_model(model_input)
    report = _report_skeleton(args)
    report["results"]["r"] = gpd.r
    report["results"]["d"] = gpd.d
    report["results"]["relations"] = gpd.relations
    report["results"]["generators"] = [g.serialize() for g in gpd.group.generators]
    report["verdicts"]["block_affine"] = gpd.is_block_affine()
    report["verdicts"]["riemannian"] = gpd.is_riemannian()
    return report, EXIT_OK


def cmd_effective(args, data):
    model_input = inputs.local_model_input(data)
    gpd = localmodel.build_local_model(model_input)
    result = localmodel.effective_quotient(gpd, args.wordlen)
    report = _report_skeleton(args)
    report["results"]["kernel_words"] = list(result.kernel_words)
    report["results"]["exact"] = result.exact
    if result.kernel_basis is not None:
        report["results"]["kernel_basis"] = [list(v) for v in result.kernel_basis]
    report["results"]["effective_generators"] = [
        g.serialize() for g in result.effective_generators
    ]
    report["verdicts"]["kernel_trivial"] = not result.kernel_words
    return report, EXIT_OK


def cmd_orbit_eq(args, data):
    group, x, y = inputs.orbit_problem(data)
    decision = orbit_equal(group, x, y, args.wordlen)
    report = _report_skeleton(args)
    report["results"]["x"] = [str(v) for v in x]
    report["results"]["y"] = [str(v) for v in y]
    report["verdicts"]["orbit"] = decision.verdict.value
    if decision.word is not None:
        from .affpseudo import word_str

        report["results"]["witness_word"] = word_str(decision.word)
    if decision.coefficients is not None:
        report["results"]["generator_coefficients"] = list(decision.coefficients)
    code = (
        EXIT_NOT_WITHIN_BOUND
        if decision.verdict is OrbitVerdict.NOT_WITHIN_BOUND
        else EXIT_OK
    )
    return report, code


def cmd_atlas_pseudogroup(args, data):
    _, atlas = inputs.atlas_object(data, tol=args.tolerance)
    report = _report_skeleton(args)
    certs = []
    all_ok = True
    for t in atlas.transitions:
        cert = check_equivariance(atlas, t, args.wordlen)
        entry = {
            "source": t.source,
            "target": t.target,
            "certified": cert.certified,
        }
        if cert.certified:
            entry["certificate"] = [m.serialize() for m in cert.certificate]
        else:
            entry["failed_generator"] = cert.failed_generator
            all_ok = False
        certs.append(entry)
    report["results"]["certifications"] = certs
    report["verdicts"]["all_certified"] = all_ok
    if all_ok:
        gens = structural_pseudogroup(atlas, args.wordlen)
        report["results"]["generating_set_size"] = len(gens)
        report["results"]["generating_set"] = [
            {
                "source": g.source,
                "target": g.target,
                "map": g.transition.map.serialize(),
            }
            for g in gens
        ]
        if "query" in data:
            query = data["query"]
            table = atlas.charts[0].group.table
            i = int(query["source"])
            j = int(query["target"])
            x = inputs.scalar_vector(query["x"], table, "query.x")
            y = inputs.scalar_vector(query["y"], table, "query.y")
            decision = quotient_point_equal(
                atlas, i, x, j, y, args.wordlen, tol=args.tolerance
            )
            report["verdicts"]["quotient_points"] = decision.verdict.value
            if decision.verdict is OrbitVerdict.NOT_WITHIN_BOUND:
                return report, EXIT_NOT_WITHIN_BOUND
    return report, EXIT_OK


COMMANDS = {
    "closure": cmd_closure,
    "deckgroup": cmd_deckgroup,
    "leafspace": cmd_leafspace,
    "sameleaf": cmd_sameleaf,
    "suspend": cmd_suspend,
    "check-cocycle": cmd_check_cocycle,
    "check-godement": cmd_check_godement,
    "localmodel": cmd_localmodel,
    "effective": cmd_effective,
    "orbit-eq": cmd_orbit_eq,
    "atlas-pseudogroup": cmd_atlas_pseudogroup,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quasifolds",
        description="Exact affine transverse geometry: batch reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="TOML problem file")
        p.add_argument("--wordlen", type=int, default=6,
                       help="word-radius truncation for searches (default 6)")
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="shadow-evaluation tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampled verifications (default 0)")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        data = inputs.load_toml(args.input)
        report, code = COMMANDS[args.command](args, data)
    except (InputError, UncertifiedTransitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _render(report, args.format, sys.stdout)
    elapsed = time.perf_counter() - start
    print(f"# timing: {args.command} {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
