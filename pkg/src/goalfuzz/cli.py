"""Command-line front end.

Exit codes: 0 success, 2 unreadable file or syntax error, 3 model fails
validation, 4 unknown symbol or misused flag. Reports go to stdout; every
failure writes exactly one diagnostic line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from . import errors
from .engine import (
    ImpactMatrix,
    enumerate_chains,
    impact,
    impact_matrix,
    impacts_to,
    satisfaction,
)
from .grammar_io import (
    export_csv,
    export_dot,
    export_json,
    format_number,
    model_from_document,
    parse_document,
)
from .model import TreatmentModel, require_goal, symbol_sort_key, validate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVALID = 3
EXIT_USAGE = 4

PROG = "goalfuzz"


class UsageError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2) with a usage dump
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Analyze weighted AND/OR treatment goal models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a model and list findings")
    p.add_argument("model", help="model file, or - for stdin")

    p = sub.add_parser("impact", help="impact of goals on interventions")
    p.add_argument("model")
    p.add_argument("--from", dest="source", metavar="GOAL")
    p.add_argument("--to", dest="target", metavar="SYMBOL")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("chains", help="list derivation chains between two symbols")
    p.add_argument("model")
    p.add_argument("--from", dest="source", metavar="GOAL", required=True)
    p.add_argument("--to", dest="target", metavar="SYMBOL", required=True)

    p = sub.add_parser("satisfy", help="goal satisfaction for employed interventions")
    p.add_argument("model")
    p.add_argument(
        "--employ",
        default="",
        metavar="LIST",
        help="comma-separated interventions, each optionally NAME=DEGREE",
    )
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")

    p = sub.add_parser("export", help="write the model as DOT or JSON")
    p.add_argument("model")
    p.add_argument("--format", choices=("dot", "json"), required=True)
    p.add_argument("--with-impact", action="store_true", help="include the impact matrix (json)")
    return parser


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise _Exit(EXIT_INPUT, f"{path}: file not found") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise _Exit(EXIT_INPUT, f"{path}: cannot read: {exc}") from None


def _load(path: str) -> TreatmentModel:
    text = _read(path)
    try:
        return model_from_document(parse_document(text))
    except errors.ModelSyntaxError as exc:
        raise _Exit(EXIT_INPUT, f"{path}: {exc}") from None
    except errors.ModelError as exc:
        raise _Exit(EXIT_INVALID, f"{path}: {exc.code}: {exc}") from None


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in rows
    )


def _cmd_validate(args, out) -> int:
    text = _read(args.model)
    try:
        model = model_from_document(parse_document(text))
    except errors.ModelSyntaxError as exc:
        raise _Exit(EXIT_INPUT, f"{args.model}: {exc}") from None
    except errors.ModelError as exc:
        out.write(f"error {exc.code}: {exc}\n")
        out.write("1 error(s), 0 warning(s)\n")
        raise _Exit(EXIT_INVALID, f"{args.model}: validation failed") from None

    report = validate(model)
    for finding in report.errors:
        out.write(f"error {finding.code}: {finding.message}\n")
    for finding in report.warnings:
        out.write(f"warning {finding.code}: {finding.message}\n")
    out.write(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)\n")
    if not report.ok:
        raise _Exit(EXIT_INVALID, f"{args.model}: validation failed")
    return EXIT_OK


def _cmd_impact(args, out) -> int:
    model = _load(args.model)
    if args.source is not None:
        model.kind(args.source)
        require_goal(model, args.source)
    if args.target is not None:
        model.kind(args.target)

    if args.source is not None and args.target is not None:
        out.write(format_number(impact(model, args.source, args.target)) + "\n")
        return EXIT_OK

    goals = [args.source] if args.source is not None else model.ordered_goals()
    targets = [args.target] if args.target is not None else model.ordered_interventions()
    values = {}
    for v in targets:
        column = impacts_to(model, v)
        for g in goals:
            values[g, v] = column[g]
    matrix = ImpactMatrix(model.fingerprint, tuple(goals), tuple(targets), values)

    if args.format == "csv":
        out.write(export_csv(matrix))
    elif args.format == "json":
        doc = {g: {v: matrix[g, v] for v in matrix.interventions} for g in matrix.goals}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        rows = [["goal", *matrix.interventions]]
        rows += [[g, *(format_number(x) for x in matrix.row(g))] for g in matrix.goals]
        out.write(_table(rows))
    return EXIT_OK


def _cmd_chains(args, out) -> int:
    model = _load(args.model)
    model.kind(args.target)
    require_goal(model, args.source)
    chains = enumerate_chains(model, args.source, args.target)
    chains.sort(
        key=lambda c: (
            -c.membership,
            [symbol_sort_key(s) for s in c.symbols],
            [symbol_sort_key(r) for r in c.rule_ids],
        )
    )
    for chain in chains:
        out.write(f"{chain} [{format_number(chain.membership)}]\n")
    return EXIT_OK


def parse_employ(spec: str) -> dict[str, float]:
    """``"i1,i5=0.6"`` -> ``{"i1": 1.0, "i5": 0.6}``."""
    degrees: dict[str, float] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not name:
            raise UsageError(f"--employ: missing intervention name in {item!r}")
        if not sep:
            degrees[name] = 1.0
            continue
        try:
            degree = float(value)
        except ValueError:
            raise UsageError(f"--employ: {value.strip()!r} is not a number") from None
        if not 0.0 <= degree <= 1.0:
            raise UsageError(f"--employ: degree {value.strip()} for {name} is outside [0, 1]")
        degrees[name] = degree
    return degrees


def _cmd_satisfy(args, out) -> int:
    model = _load(args.model)
    degrees = parse_employ(args.employ)
    sat = satisfaction(model, degrees)
    if args.format == "json":
        out.write(json.dumps(sat, indent=2) + "\n")
    elif args.format == "csv":
        out.write("goal,satisfaction\n")
        out.write("".join(f"{g},{format_number(x)}\n" for g, x in sat.items()))
    else:
        out.write(_table([[g, format_number(x)] for g, x in sat.items()]))
    return EXIT_OK


def _cmd_export(args, out) -> int:
    if args.with_impact and args.format != "json":
        raise UsageError("--with-impact requires --format json")
    model = _load(args.model)
    if args.format == "dot":
        out.write(export_dot(model))
    else:
        matrix = impact_matrix(model) if args.with_impact else None
        out.write(export_json(model, matrix))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "impact": _cmd_impact,
    "chains": _cmd_chains,
    "satisfy": _cmd_satisfy,
    "export": _cmd_export,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Execute one invocation and return its exit code."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        code, message = EXIT_USAGE, str(exc)
    except _Exit as exc:
        code, message = exc.code, str(exc)
    except (errors.UnknownSymbolError, errors.NotAGoalError, errors.UnknownInterventionError) as exc:
        code, message = EXIT_USAGE, f"{exc.code}: {exc}"
    except errors.ModelError as exc:
        code, message = EXIT_INVALID, f"{exc.code}: {exc}"
    stderr.write(f"{PROG}: error: {message}\n")
    return code


def main() -> None:
    sys.exit(run())
