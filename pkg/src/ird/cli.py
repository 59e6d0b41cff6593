"""Command-line interface: ``ird <command> ...``.

Exit codes: 0 success, 1 an asserted condition did not hold, 2 validation or
configuration error (including bad flags), 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import timedelta
from pathlib import Path

from . import serialization as ser
from .algebra import ComparisonResult, compare, ird_of_model, weakest_dimension
from .combination import CfAssignment, CombinationError, add, subtract
from .core_model import ModelError, SchemaError, validate_model
from .factor_graph import KnowledgeBaseError, audit, default_kb, default_kb_text, kb_from_dict
from .simulator import (
    LayeredScenario,
    RngSpec,
    ScenarioError,
    WeaknessScenario,
    bundled_scenario_names,
    load_bundled_scenario,
    redundancy_curve,
    run_outage_scenario,
    run_weakness_scenario,
    scenario_from_dict,
    write_oracle_csv,
    write_outage_csv,
    write_weakness_csv,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INVALID = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_INVALID)


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}", EXIT_IO) from exc


def _load(path: str, decode):
    doc = _read_json(path)
    try:
        return decode(doc)
    except SchemaError as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from exc
    except (KeyError, TypeError, AttributeError) as exc:
        raise CliError(f"{path}: malformed document: {exc}", EXIT_IO) from exc


def _load_assignment(path: str | None) -> CfAssignment:
    return CfAssignment() if path is None else _load(path, ser.cf_assignment_from_dict)


# --- commands --------------------------------------------------------------


def cmd_eval(args, out) -> int:
    model = _load(args.model, ser.model_from_dict)
    violations = validate_model(model)
    if violations:
        raise CliError("invalid model:\n" + "\n".join(f"  {v}" for v in violations), EXIT_INVALID)
    ird = ird_of_model(model)
    out.write(ser.dumps(ser.ird_to_dict(ird)))
    if args.weakest:
        name, live = weakest_dimension(ird)
        out.write(f"weakest: {name} {live!r}\n")
    return EXIT_OK


def cmd_compare(args, out) -> int:
    a = _load(args.ird_a, ser.ird_from_dict)
    b = _load(args.ird_b, ser.ird_from_dict)
    result = compare(a, b)
    out.write(result.value + "\n")
    if args.assert_first_higher and result is not ComparisonResult.FIRST_HIGHER:
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_combine(args, out) -> int:
    a = _load(args.ird_a, ser.ird_from_dict)
    b = _load(args.ird_b, ser.ird_from_dict)
    out.write(ser.dumps(ser.ird_to_dict(add(a, b, _load_assignment(args.cf)))))
    return EXIT_OK


def cmd_subtract(args, out) -> int:
    ird = _load(args.ird, ser.ird_from_dict)
    removal = _load(args.removal, ser.removal_from_dict)
    out.write(ser.dumps(ser.ird_to_dict(subtract(ird, removal, _load_assignment(args.cf)))))
    return EXIT_OK


def _declared(values) -> list[str]:
    ids = []
    for v in values or ():
        ids.extend(x for x in v.split(",") if x.strip())
    return ids


def cmd_factors(args, out) -> int:
    model = _load(args.model, ser.model_from_dict)
    kb = default_kb() if args.kb is None else _load(args.kb, kb_from_dict)
    report = audit(model, kb, _declared(args.declared), timedelta(seconds=args.time_window))
    if args.format == "json":
        doc = {
            "factors": [
                {
                    "id": f.id,
                    "axis": f.axis,
                    "origin": f.origin,
                    "derived_from": None if f.derived_from is None else {"factor": f.derived_from[0], "relation": f.derived_from[1]},
                }
                for f in report.factors
            ],
            "coverage": [
                {"factor": e.factor, "status": e.status, "evidence": [list(g) for g in e.evidence]}
                for e in report.entries
            ],
        }
        out.write(ser.dumps(doc))
    else:
        for f, e in zip(report.factors, report.entries):
            origin = "declared" if f.derived_from is None else f"from {f.derived_from[0]} via {f.derived_from[1]}"
            evidence = " | ".join(",".join(g) for g in e.evidence)
            out.write(f"{e.factor}: {e.status}\t{origin}\t{evidence}\n")
    if args.fail_on_uncovered and report.uncovered:
        return EXIT_ASSERTION
    return EXIT_OK


def _load_scenario(ref: str):
    if not Path(ref).exists() and ref in bundled_scenario_names():
        return load_bundled_scenario(ref)
    return _load(ref, scenario_from_dict)


def cmd_sim(args, out) -> int:
    scenario = _load_scenario(args.scenario)
    if isinstance(scenario, LayeredScenario):
        if args.trials is not None:
            raise CliError("--trials applies to weakness scenarios only", EXIT_INVALID)
        if args.rounds is not None:
            scenario = replace(scenario, rounds=args.rounds)
        if args.jitter is not None:
            scenario = replace(scenario, jitter_width=args.jitter)
        if args.oracle and scenario.jitter_width != 0:
            raise CliError("--oracle requires --jitter 0", EXIT_INVALID)
    else:
        if args.rounds is not None or args.jitter is not None:
            raise CliError("--rounds/--jitter apply to layered scenarios only", EXIT_INVALID)
        if args.trials is not None:
            scenario = replace(scenario, trials=args.trials)
    if args.oracle and args.out is None:
        raise CliError("--oracle needs --out", EXIT_INVALID)

    rng = RngSpec(args.seed)
    if isinstance(scenario, WeaknessScenario):
        report = run_weakness_scenario(scenario, rng, args.partitions)
        writer, rounds = write_weakness_csv, None
    else:
        report = run_outage_scenario(scenario, rng, args.partitions)
        writer, rounds = write_outage_csv, scenario.rounds

    if args.out is None:
        writer(report, out)
        return EXIT_OK
    target = Path(args.out)
    try:
        with target.open("w", encoding="utf-8", newline="\n") as fh:
            writer(report, fh)
        if args.oracle:
            with oracle_path(target).open("w", encoding="utf-8", newline="\n") as fh:
                write_oracle_csv(report, rounds, fh)
    except OSError as exc:
        raise CliError(f"{target}: {exc.strerror or exc}", EXIT_IO) from exc
    return EXIT_OK


def oracle_path(out: Path) -> Path:
    return out.with_name(out.stem + ".oracle.csv")


def cmd_curve(args, out) -> int:
    if args.n_max < 1 or not 0.0 <= args.p <= 1.0:
        raise CliError("--p must lie in [0, 1] and --n-max be >= 1", EXIT_INVALID)
    out.write("n,probability\n")
    for n, value in enumerate(redundancy_curve(args.p, args.n_max), start=1):
        out.write(f"{n},{value!r}\n")
    return EXIT_OK


def cmd_kb_dump(args, out) -> int:
    out.write(default_kb_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ird", description="Independence redundancy degree toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="compute the IRD of a system model")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--weakest", action="store_true", help="append the weakest dimension line")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="compare two IRD files")
    p.add_argument("ird_a")
    p.add_argument("ird_b")
    p.add_argument("--assert-first-higher", action="store_true", help="exit 1 unless the first IRD ranks higher")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("combine", help="add two IRDs")
    p.add_argument("ird_a")
    p.add_argument("ird_b")
    p.add_argument("cf", nargs="?", help="combination-function assignment JSON (default: independent)")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("subtract", help="remove paths from an IRD")
    p.add_argument("ird")
    p.add_argument("removal", help="removal list JSON, or an IRD whose paths are all removed")
    p.add_argument("cf", nargs="?", help="combination-function assignment JSON (default: independent)")
    p.set_defaults(func=cmd_subtract)

    p = sub.add_parser("factors", help="expand singleness factors and audit a model")
    p.add_argument("model")
    p.add_argument("--kb", help="knowledge base JSON (default: embedded)")
    p.add_argument("--declared", action="append", metavar="IDS", help="declared factor ids, comma separated; repeatable")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--time-window", type=float, default=86400.0, metavar="SECONDS", help="minimum expiry spread for time factors")
    p.add_argument("--fail-on-uncovered", action="store_true", help="exit 1 if any factor is uncovered")
    p.set_defaults(func=cmd_factors)

    p = sub.add_parser("sim", help="run a simulation scenario")
    p.add_argument("scenario", help="scenario JSON file or bundled name (" + ", ".join(bundled_scenario_names()) + ")")
    p.add_argument("--seed", type=int, default=0, help="master seed (64-bit unsigned)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--rounds", type=int, help="rounds for a layered scenario")
    group.add_argument("--trials", type=int, help="trials for a weakness scenario")
    p.add_argument("--jitter", type=float, help="total jitter width for a layered scenario")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--oracle", action="store_true", help="also write <out>.oracle.csv with analytic probabilities")
    p.add_argument("--partitions", type=int, default=1, help="worker threads; output is identical for any value")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("curve", help="success probability vs number of independent modules")
    p.add_argument("--p", type=float, required=True, help="per-module success probability")
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("kb-dump", help="print the embedded knowledge base")
    p.set_defaults(func=cmd_kb_dump)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except CliError as exc:
        err.write(f"{exc}\n")
        return exc.code
    except (ModelError, CombinationError, ScenarioError, KnowledgeBaseError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
