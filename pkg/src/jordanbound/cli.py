"""Command line interface.

    jordanbound run SPEC.json [--format json]
    jordanbound verify SPEC.json
    jordanbound catalog NAME -p key=value ... [-o SPEC.json]

Exit codes: 0 success, 1 input or usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import BUILDERS, build_entry
from .core import (
    CheckResult,
    abelian_normal_subgroups,
    build_near_identity_set,
    check_conjugation_invariance,
    jordan_pipeline,
    mc_volume_ratio,
)
from .errors import InputError, NotFiniteGroupError, TheoremViolation, VerificationError
from .groups import DEFAULT_MAX_ORDER, close_generators
from .linalg import Tolerance
from .norms import build_hermitian_form, build_summed_norm, verify_isometry
from .specfile import GroupSpec, dumps, read_spec

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
ORACLE_LIMIT = 64
FULL_CONJUGATION_LIMIT = 2000
MC_RATIO_SLACK = 0.05


def _tool_meta(args, command: str, tol: Tolerance) -> dict:
    return {
        "version": __version__,
        "command": command,
        "tol": tol.eq_tol,
        "residual_tol": tol.residual_tol,
        "max_order": args.max_order,
        "norm": args.norm,
        "seed": args.seed,
        "mc_samples": args.mc_samples,
    }


def _finite(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(x)


def _check_dict(c: CheckResult) -> dict:
    return {"name": c.name, "passed": bool(c.passed), "residual": _finite(c.residual), "detail": c.detail}


def summed_norm_checks(g, tol: Tolerance, seed: int, cross_check: bool) -> list[CheckResult]:
    ctx = build_summed_norm(g, seed=seed)
    iso = verify_isometry(ctx, g, samples=100, seed=seed)
    checks = [CheckResult("summed_norm_isometry", iso <= tol.residual_tol, iso,
                          "max |N(hv) - N(v)| / N(v) over 100 vectors")]
    if cross_check:
        worst = 0.0
        for k in g.generator_indices:
            interval = ctx.op_norm(g.elements[k])
            worst = max(worst, abs(interval.lower - 1.0), max(1.0 - interval.upper, 0.0))
        checks.append(CheckResult("summed_norm_generator_op_norm", worst <= tol.residual_tol, worst,
                                  "operator norm interval of each generator contains 1"))
    return checks


def analyze(spec: GroupSpec, args, verify: bool) -> tuple[dict, int]:
    """Run the pipeline (and the extended suite when ``verify``) and build the report document."""
    tol = Tolerance(eq_tol=args.tol)
    command = "verify" if verify else "run"
    doc = {"name": spec.name, "dimension": spec.dimension}
    try:
        g = close_generators(spec.generators, max_order=args.max_order, tol=tol, dim=spec.dimension)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            report = jordan_pipeline(g, tol)
    except (NotFiniteGroupError, TheoremViolation) as exc:
        invariant = "finite_group" if isinstance(exc, NotFiniteGroupError) else type(exc).__name__
        doc.update({"status": "fail", "error": {"invariant": invariant, "message": str(exc)},
                    "tool": _tool_meta(args, command, tol)})
        return doc, EXIT_VERIFY

    checks = list(report.checks)
    notes = list(report.warnings)
    if verify or args.norm == "summed":
        checks.extend(summed_norm_checks(g, tol, args.seed, cross_check=args.norm == "summed"))
    if args.norm == "summed":
        notes.append("M and A are classified with the averaged Hermitian form; "
                     "the summed norm is evaluated for cross-validation only")
    if verify:
        if g.order <= FULL_CONJUGATION_LIMIT:
            dist = build_near_identity_set(g, build_hermitian_form(g)).distances
            full = check_conjugation_invariance(g, dist, conjugators=range(g.order))
            full.name = "distance_conjugation_invariance_all"
            checks.append(full)
        if g.order <= ORACLE_LIMIT:
            subs = abelian_normal_subgroups(g, ORACLE_LIMIT, tol)
            best = max(s.order for s in subs)
            contains = any(list(s.member_indices) == report.a_indices for s in subs)
            checks.append(CheckResult("oracle_contains_a", contains and report.a_order <= best, None,
                                      f"|A| = {report.a_order}, largest abelian normal subgroup {best}"))
        if spec.dimension == 1:
            est = mc_volume_ratio(1, 1.25, 0.25, samples=args.mc_samples, seed=args.seed)
            err = abs(est.ratio - est.expected) / est.expected
            checks.append(CheckResult("mc_volume_ratio", err <= MC_RATIO_SLACK, err,
                                      f"ratio {est.ratio:.6g} vs {est.expected:g} "
                                      f"(rel. std. error {est.rel_std_error:.3g})"))
        else:
            notes.append(f"mc_volume_ratio skipped for n = {spec.dimension} (only run for n = 1)")

    passed = all(c.passed for c in checks)
    doc.update({
        "status": "pass" if passed else "fail",
        "group_order": report.group_order,
        "m_size": report.m_size,
        "a_order": report.a_order,
        "index": report.index,
        "bound": report.bound,
        "refined_bound": report.refined_bound,
        "min_separation": _finite(report.min_coset_separation),
        "coset_rep_indices": report.coset_rep_indices,
        "m_indices": report.m_indices,
        "a_indices": report.a_indices,
        "checks": [_check_dict(c) for c in checks],
        "warnings": notes,
        "tool": _tool_meta(args, command, tol),
    })
    return doc, EXIT_OK if passed else EXIT_VERIFY


def _big(x: int) -> str:
    s = str(x)
    return s if len(s) <= 24 else f"{s[:6]}...({len(s)} digits)"


def format_text(doc: dict) -> str:
    lines = [f"group {doc['name']} in dimension {doc['dimension']}: {doc['status'].upper()}"]
    if "error" in doc:
        lines.append(f"  failing invariant: {doc['error']['invariant']}")
        lines.append(f"  {doc['error']['message']}")
        return "\n".join(lines) + "\n"
    n2 = doc["dimension"] ** 2
    sep = doc["min_separation"]
    lines += [
        f"  |G| = {doc['group_order']}   |M| = {doc['m_size']}   |A| = {doc['a_order']}   index = {doc['index']}",
        f"  bound 25^{n2} = {_big(doc['bound'])}",
        f"  refined 25^{n2} - 9^{n2} = {_big(doc['refined_bound'])}",
        f"  min coset separation = {'inf (index 1)' if sep is None else f'{sep:.12g}'}",
        "  checks:",
    ]
    for c in doc["checks"]:
        res = "" if c["residual"] is None else f" residual={c['residual']:.3g}"
        lines.append(f"    [{'PASS' if c['passed'] else 'FAIL'}] {c['name']}{res}  {c['detail']}")
    for w in doc["warnings"]:
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_analyze(args, verify: bool) -> int:
    spec = read_spec(args.spec)
    doc, code = analyze(spec, args, verify)
    text = json.dumps(doc, indent=1) + "\n" if args.format == "json" else format_text(doc)
    _emit(text, args.output)
    if code == EXIT_VERIFY:
        failed = [c["name"] for c in doc.get("checks", []) if not c["passed"]]
        if "error" in doc:
            failed = [doc["error"]["invariant"]]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
    return code


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"parameter {item!r} is not of the form key=value")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise InputError(f"parameter {key!r} must be an integer, got {value!r}") from None
    return params


def _parse_part(text: str):
    name, _, rest = text.partition(":")
    return name, _parse_params([p for p in rest.split(",") if p])


def cmd_catalog(args) -> int:
    if args.list:
        for name, (_, params) in sorted(BUILDERS.items()):
            print(f"{name} {' '.join(f'{p}=<int>' for p in params)}".rstrip())
        print("block --part NAME:key=value,... --part ...")
        return EXIT_OK
    if not args.name:
        raise InputError("catalog needs an entry name (or --list)")
    parts = [_parse_part(p) for p in args.part or []]
    entry = build_entry(args.name, _parse_params(args.param), parts=parts or None)
    if args.conjugate:
        entry = entry.conjugate()
    spec = GroupSpec(entry.label, entry.dim, [np.asarray(g) for g in entry.generators])
    _emit(dumps(spec), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jordanbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("run", "run the pipeline on a group spec file"),
                           ("verify", "run the pipeline and the extended verifier suite")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("spec")
        p.add_argument("--tol", type=float, default=1e-8, help="element equality tolerance (Frobenius)")
        p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
        p.add_argument("--norm", choices=("hermitian", "summed"), default="hermitian")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--mc-samples", type=int, default=1_000_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-o", "--output")

    p = sub.add_parser("catalog", help="write a catalog group as a spec file")
    p.add_argument("name", nargs="?")
    p.add_argument("-p", "--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--part", action="append", metavar="NAME:KEY=VALUE,...", help="block factor")
    p.add_argument("--conjugate", action="store_true", help="apply the fixed non-unitary basis change")
    p.add_argument("--list", action="store_true")
    p.add_argument("-o", "--output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "catalog":
            return cmd_catalog(args)
        if args.max_order < 1 or args.mc_samples < 1:
            raise InputError("--max-order and --mc-samples must be positive")
        try:
            Tolerance(eq_tol=args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return _cmd_analyze(args, verify=args.command == "verify")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
