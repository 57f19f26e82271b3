"""Command-line driver: ``qsim run|validate|generate|report``.

Exit codes: 0 success (also when some qulets failed; a warning goes to
stderr), 2 syntax/schema errors or malformed results, 3 semantic errors,
4 I/O failures.
"""

from __future__ import annotations

import argparse
import io
import logging
import os
import sys

from .runner import run_scenario
from .workload import (
    RESULTS_HEADER,
    ResultsFormatError,
    ScenarioSyntaxError,
    SchemaError,
    SemanticError,
    dump_qulet_fragment,
    format_table,
    generate_workload,
    parse_generator_params,
    parse_scenario,
    read_results,
    report_rows,
    results_rows,
    summarize,
    summary_rows,
    write_results,
)

EXIT_OK, EXIT_SYNTAX, EXIT_SEMANTIC, EXIT_IO = 0, 2, 3, 4
LOG_LEVELS = ("quiet", "events", "debug")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _diagnose(exc: Exception, path: str) -> int:
    if isinstance(exc, (ScenarioSyntaxError, SchemaError)):
        kind, code = ("SyntaxError" if isinstance(exc, ScenarioSyntaxError) else "SchemaError"), EXIT_SYNTAX
    elif isinstance(exc, SemanticError):
        kind, code = "SemanticError", EXIT_SEMANTIC
    else:
        kind, code = "IOError", EXIT_IO
    print(f"{path}: {kind}: {exc}", file=sys.stderr)
    return code


def _load(path: str, parser):
    try:
        return parser(_read(path)), EXIT_OK
    except (OSError, UnicodeDecodeError) as exc:
        return None, _diagnose(exc, path)
    except (ScenarioSyntaxError, SchemaError, SemanticError) as exc:
        return None, _diagnose(exc, path)


def cmd_run(args) -> int:
    scenario, code = _load(args.scenario, parse_scenario)
    if scenario is None:
        return code
    if args.seed is not None:
        scenario.seed = args.seed
    sink = print if args.log_level in ("events", "debug") else None
    result = run_scenario(scenario, log_sink=sink)

    if args.out:
        try:
            write_results(result, args.out)
        except OSError as exc:
            return _diagnose(exc, args.out)
    elif args.format == "table":
        sys.stdout.write(format_table(RESULTS_HEADER, results_rows(result)))
        sys.stdout.write(format_table(["metric", "value"], summary_rows(result)))
    else:
        write_results(result, sys.stdout)

    if result.failed:
        ids = ", ".join(str(q) for q in result.failed)
        print(f"warning: {len(result.failed)} qulet(s) failed: {ids}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    scenario, code = _load(args.scenario, parse_scenario)
    if scenario is None:
        return code
    print("OK")
    return EXIT_OK


def cmd_generate(args) -> int:
    params, code = _load(args.params, parse_generator_params)
    if params is None:
        return code
    text = dump_qulet_fragment(generate_workload(params, args.seed if args.seed is not None else 0))
    if not args.out:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        return _diagnose(exc, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        results = read_results(_read(args.results))
    except OSError as exc:
        return _diagnose(exc, args.results)
    except ResultsFormatError as exc:
        print(f"{args.results}: malformed results: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    rows = report_rows(summarize(results))
    if args.format == "table":
        sys.stdout.write(format_table(["metric", "value"], rows))
    else:
        buf = io.StringIO()
        buf.write("metric,value\n")
        buf.writelines(f"{k},{v}\n" for k, v in rows)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    default_level = os.environ.get("QSIM_LOG_LEVEL", "events")
    if default_level not in LOG_LEVELS:
        default_level = "events"

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=_u64, help="override the scenario/generator seed")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=default_level)
    common.add_argument("--format", choices=("csv", "table"), default="csv")

    parser = argparse.ArgumentParser(prog="qsim", description="Quantum cloud discrete-event simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="simulate a scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", parents=[common], help="parse and check a scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", parents=[common], help="generate a synthetic qulet list")
    p.add_argument("params")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("report", parents=[common], help="summarize a results file")
    p.add_argument("results")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level != "debug":
        return args.func(args)
    # scoped to this invocation so repeated calls do not stack handlers
    log = logging.getLogger("qsim")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    previous = log.level
    log.addHandler(handler)
    log.setLevel(logging.DEBUG)
    try:
        return args.func(args)
    finally:
        log.removeHandler(handler)
        log.setLevel(previous)


if __name__ == "__main__":
    sys.exit(main())
