"""Command-line interface.

Subcommands: solve, check-map, local, two-local, counterexamples, verify-all.
Reports are emitted as JSON (schemaVersion "1") and are byte-identical across
repeated runs with the same configuration; wall-clock timing goes to stderr
and the report's timing field stays 0 to keep files reproducible.

Exit codes: 0 pass, 1 property failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import algebras
from .acceptance import (
    INTERIOR_MARGINS,
    run_all,
    thin_two_local_grid,
    wab_dimension_sweep,
)
from .algebras import AlgebraSpec, E, KeyOutOfDomain
from .dersolve import (
    check_delta_derivation,
    compare_families,
    derivation_pairs,
    expected_family,
    find_violation_witness,
    solve_half_derivations,
)
from .exactlin import SparseVec
from .literals import (
    ParseError,
    format_element,
    format_operator,
    parse_element,
    parse_operator,
    parse_range,
    parse_scalar,
)
from .locality import (
    certify_nonadditive,
    check_local,
    deterministic_sample,
    two_local_feasible_at,
)
from .operators import (
    SupportOverflow,
    ThinLocalDelta,
    ThinNabla,
    SolvDeltaBar,
    WindowTooSmall,
    WindowedMap,
    materialize,
    window_from_ranges,
)

HALF = Fraction(1, 2)

TSV_HEADER = "algebra\ta\tb\t|I|\t|O|\tdimSolved\tdimInterior"


class CliError(Exception):
    """Configuration problem surfaced with exit code 2."""


def _read_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    config = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        config[key.strip()] = value.strip()
    return config


def _merge_config(args: argparse.Namespace, config: dict) -> None:
    """Fill unset flags from the config file; flags always win."""
    aliases = {"in": "in_range", "out": "out_range"}
    for key, value in config.items():
        attr = aliases.get(key, key.replace("-", "_"))
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


def _algebra_from(args) -> AlgebraSpec:
    name = args.algebra
    if name is None:
        raise CliError("--algebra is required")
    if name == "wab":
        if args.a is None or args.b is None:
            raise CliError("wab requires --a and --b")
        return algebras.wab(parse_scalar(args.a), parse_scalar(args.b))
    if args.a is not None or args.b is not None:
        raise CliError(f"{name} takes no --a/--b parameters")
    try:
        return AlgebraSpec(name)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _window_from(args, alg: AlgebraSpec):
    if args.in_range is None:
        raise CliError("--in lo..hi is required")
    in_range = parse_range(args.in_range)
    out_range = parse_range(args.out_range) if args.out_range else in_range
    try:
        return window_from_ranges(alg, in_range, out_range)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _serialize_map(m: WindowedMap) -> dict:
    return {str(k): format_element(m.image[k]) for k in m.window.keys}


def _write_report(args, command: str, inputs: dict, results: dict) -> dict:
    report = {
        "schemaVersion": "1",
        "command": command,
        "inputsEcho": inputs,
        "results": results,
        "timing": 0,
    }
    if getattr(args, "json_path", None):
        Path(args.json_path).write_text(json.dumps(report, indent=2) + "\n")
    return report


def _echo_inputs(args, alg: Optional[AlgebraSpec] = None) -> dict:
    inputs = {}
    if alg is not None:
        inputs["algebra"] = alg.name
        if alg.name == "wab":
            inputs["a"] = str(alg.a)
            inputs["b"] = str(alg.b)
    for field in ("in_range", "out_range", "map", "x", "y", "delta"):
        value = getattr(args, field, None)
        if value is not None:
            inputs[field.replace("_range", "")] = value
    return inputs


def _cmd_solve(args) -> int:
    alg = _algebra_from(args)
    w = _window_from(args, alg)
    margin = args.margin if args.margin is not None else INTERIOR_MARGINS[alg.name]
    solved = solve_half_derivations(alg, w)
    family = expected_family(alg, w)
    report = compare_families(solved, family, margin)
    results = {
        "algebra": alg.label(),
        "window": {"in": [str(k) for k in w.keys], "out": [str(k) for k in w.out_keys]},
        "dimSolved": report.dim_solved,
        "dimExpected": report.dim_expected,
        "dimInterior": report.dim_interior,
        "expectedContained": report.expected_contained,
        "interiorMargin": report.interior_margin,
        "solvedInteriorContained": report.solved_interior_contained,
        "basis": [_serialize_map(m) for m in solved.basis],
    }
    _write_report(args, "solve", _echo_inputs(args, alg), results)
    if args.tsv_path:
        row = "\t".join(
            [
                alg.name,
                str(alg.a) if alg.a is not None else "-",
                str(alg.b) if alg.b is not None else "-",
                str(len(w.keys)),
                str(len(w.out_keys)),
                str(report.dim_solved),
                str(report.dim_interior),
            ]
        )
        Path(args.tsv_path).write_text(TSV_HEADER + "\n" + row + "\n")
    ok = report.expected_contained and report.solved_interior_contained
    print(
        f"{alg.label()}: dimSolved={report.dim_solved} dimExpected={report.dim_expected} "
        f"dimInterior={report.dim_interior} certified={ok}"
    )
    return 0 if ok else 1


def _cmd_check_map(args) -> int:
    alg = _algebra_from(args)
    w = _window_from(args, alg)
    if args.map is None:
        raise CliError("--map <operator literal> is required")
    op = parse_operator(args.map, alg)
    delta = parse_scalar(args.delta) if args.delta else HALF
    if isinstance(op, ThinNabla):
        raise CliError("thin-nabla is nonlinear; use the two-local command")
    try:
        table = materialize(op, w)
    except SupportOverflow as exc:
        raise CliError(f"window too small for {args.map}: {exc}") from None
    pairs = derivation_pairs(alg, w.keys)
    violations = check_delta_derivation(alg, table, delta, pairs)
    results = {
        "operator": format_operator(op),
        "delta": str(delta),
        "pairsChecked": len(pairs),
        "violations": [
            {"pair": [str(k1), str(k2)], "residual": format_element(res)}
            for (k1, k2), res in violations
        ],
    }
    _write_report(args, "check-map", _echo_inputs(args, alg), results)
    print(f"{args.map}: {len(violations)} violation(s) over {len(pairs)} pairs")
    return 0 if not violations else 1


def _family_for(args, alg):
    w = _window_from(args, alg)
    return w, solve_half_derivations(alg, w)


def _serialize_params(params) -> Optional[dict]:
    if params is None:
        return None
    return {str(idx): str(coeff) for idx, coeff in params.items()}


def _cmd_local(args) -> int:
    alg = _algebra_from(args)
    if args.map is None:
        raise CliError("--map <operator literal> is required")
    candidate = parse_operator(args.map, alg)
    w, family = _family_for(args, alg)
    if args.x is not None:
        elements = [parse_element(args.x)]
    else:
        elements = deterministic_sample(w.keys)
    reports = check_local(candidate, family, elements)
    results = {
        "candidate": format_operator(candidate),
        "familyDim": len(family),
        "elements": [
            {
                "element": format_element(r.element),
                "feasible": r.feasible,
                "params": _serialize_params(r.params),
            }
            for r in reports
        ],
        "allFeasible": all(r.feasible for r in reports),
    }
    _write_report(args, "local", _echo_inputs(args, alg), results)
    feasible = sum(1 for r in reports if r.feasible)
    print(f"{args.map}: locally feasible at {feasible}/{len(reports)} sample elements")
    return 0 if feasible == len(reports) else 1


def _cmd_two_local(args) -> int:
    alg = _algebra_from(args)
    if args.map is None:
        raise CliError("--map <operator literal> is required")
    candidate = parse_operator(args.map, alg)
    w, family = _family_for(args, alg)
    if (args.x is None) != (args.y is None):
        raise CliError("provide both --x and --y, or neither")
    if args.x is not None:
        pairs = [(parse_element(args.x), parse_element(args.y))]
    elif alg.name == "thin":
        pairs = thin_two_local_grid()
    else:
        sample = deterministic_sample(w.keys)
        pairs = list(zip(sample[:-1], sample[1:]))[:20]
    reports = [two_local_feasible_at(candidate, x, y, family) for x, y in pairs]
    results = {
        "candidate": format_operator(candidate),
        "familyDim": len(family),
        "pairs": [
            {
                "x": format_element(r.x),
                "y": format_element(r.y),
                "feasible": r.feasible,
                "params": _serialize_params(r.params),
            }
            for r in reports
        ],
        "allFeasible": all(r.feasible for r in reports),
    }
    _write_report(args, "two-local", _echo_inputs(args, alg), results)
    feasible = sum(1 for r in reports if r.feasible)
    print(f"{args.map}: two-local feasible at {feasible}/{len(reports)} pairs")
    return 0 if feasible == len(reports) else 1


def _cmd_counterexamples(args) -> int:
    name = args.algebra or "thin"
    if name == "thin":
        alg = algebras.thin()
        probe = find_violation_witness(alg, ThinLocalDelta(), HALF, [E(1), E(3)])
        first = find_violation_witness(alg, ThinLocalDelta(), HALF, [E(i) for i in range(1, 9)])
        x = SparseVec({E(1): 1, E(2): 1})
        y = SparseVec({E(1): -1, E(2): 1})
        additivity = certify_nonadditive(ThinNabla(), x, y)
        results = {
            "probeWitness": {
                "pair": [str(k) for k in probe[0]],
                "residual": format_element(probe[1]),
            },
            "firstWitness": {
                "pair": [str(k) for k in first[0]],
                "residual": format_element(first[1]),
            },
            "nonadditivity": {
                "x": format_element(x),
                "y": format_element(y),
                "nonadditive": additivity.nonadditive,
                "lhs": format_element(additivity.lhs),
                "rhs": format_element(additivity.rhs),
            },
        }
        ok = probe is not None and first is not None and additivity.nonadditive
    elif name == "solv":
        alg = algebras.solv_abelian()
        witness = find_violation_witness(alg, SolvDeltaBar(), HALF, [E(i) for i in range(1, 5)])
        w = window_from_ranges(alg, (1, 8), (1, 8))
        family = solve_half_derivations(alg, w)
        sample = deterministic_sample(w.keys)
        reports = check_local(SolvDeltaBar(), family, sample)
        results = {
            "witness": {
                "pair": [str(k) for k in witness[0]],
                "residual": format_element(witness[1]),
            },
            "locallyFeasibleOnSample": all(r.feasible for r in reports),
            "sampleSize": len(reports),
        }
        ok = witness is not None and all(r.feasible for r in reports)
    else:
        raise CliError(f"no catalogued counterexamples for algebra {name!r}")
    _write_report(args, "counterexamples", {"algebra": name}, results)
    print(f"counterexamples[{name}]: confirmed={ok}")
    return 0 if ok else 1


def _cmd_verify_all(args) -> int:
    results = run_all(quick=args.quick)
    for r in results:
        print(r.line())
        if not r.passed:
            for d in r.details:
                if "FAILED" in d:
                    print(f"    {d}")
    payload = {
        "quick": args.quick,
        "criteria": [
            {
                "number": r.number,
                "title": r.title,
                "passed": r.passed,
                "details": list(r.details),
            }
            for r in results
        ],
        "allPassed": all(r.passed for r in results),
    }
    _write_report(args, "verify-all", {"quick": args.quick}, payload)
    if args.tsv_path:
        lines = [TSV_HEADER]
        for row in wab_dimension_sweep(args.quick):
            lines.append(
                "\t".join(
                    [
                        row["algebra"],
                        str(row["a"]),
                        str(row["b"]),
                        str(row["in_size"]),
                        str(row["out_size"]),
                        str(row["dim_solved"]),
                        str(row["dim_interior"]),
                    ]
                )
            )
        Path(args.tsv_path).write_text("\n".join(lines) + "\n")
    return 0 if payload["allPassed"] else 1


def _add_common(parser: argparse.ArgumentParser, window: bool = True) -> None:
    parser.add_argument("--algebra", choices=list(algebras.ALGEBRA_NAMES))
    parser.add_argument("--a", help="rational parameter a (wab only)")
    parser.add_argument("--b", help="rational parameter b (wab only)")
    if window:
        parser.add_argument("--in", dest="in_range", metavar="LO..HI")
        parser.add_argument("--out", dest="out_range", metavar="LO..HI")
    parser.add_argument("--config", help="flat key=value config file; flags override")
    parser.add_argument("--json", dest="json_path", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltader",
        description="Exact delta-derivation spaces of graded Lie algebras on index windows",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the windowed half-derivation space")
    _add_common(p)
    p.add_argument("--margin", type=int, help="interior margin (default: frozen per-algebra value)")
    p.add_argument("--tsv", dest="tsv_path", help="write a dimensions TSV row here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check-map", help="check an operator for the delta-derivation law")
    _add_common(p)
    p.add_argument("--map", help="operator literal")
    p.add_argument("--delta", help="rational delta (default 1/2)")
    p.set_defaults(func=_cmd_check_map)

    p = sub.add_parser("local", help="pointwise feasibility against the solved family")
    _add_common(p)
    p.add_argument("--map", help="candidate operator literal")
    p.add_argument("--x", help="element literal (default: deterministic sample)")
    p.set_defaults(func=_cmd_local)

    p = sub.add_parser("two-local", help="pairwise feasibility against the solved family")
    _add_common(p)
    p.add_argument("--map", help="candidate operator literal")
    p.add_argument("--x", help="first element literal")
    p.add_argument("--y", help="second element literal")
    p.set_defaults(func=_cmd_two_local)

    p = sub.add_parser("counterexamples", help="certify the catalogued counterexamples")
    _add_common(p, window=False)
    p.set_defaults(func=_cmd_counterexamples)

    p = sub.add_parser("verify-all", help="run the bundled verification suite")
    p.add_argument("--quick", action="store_true", help="smaller windows")
    p.add_argument("--config", help="flat key=value config file; flags override")
    p.add_argument("--json", dest="json_path", help="write the JSON report here")
    p.add_argument("--tsv", dest="tsv_path", help="write the b-sweep dimensions TSV here")
    p.set_defaults(func=_cmd_verify_all)

    return parser


_VALUE_FLAGS = {"--in", "--out", "--a", "--b", "--x", "--y", "--delta", "--margin"}


def _canonicalize_argv(argv: List[str]) -> List[str]:
    """Join value flags with their argument so values may start with '-'."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_canonicalize_argv(list(argv)))
    started = time.monotonic()
    try:
        if getattr(args, "config", None):
            _merge_config(args, _read_config(args.config))
        code = args.func(args)
    except (CliError, ParseError, KeyOutOfDomain, WindowTooSmall, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = int((time.monotonic() - started) * 1000)
    print(f"elapsed {elapsed_ms} ms", file=sys.stderr)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
