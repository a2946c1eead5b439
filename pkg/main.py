#!/usr/bin/env python3
"""
fibcat - Main Entry Point

Checks finite categories, internal categories and their families
against the Isbell condition and its fibrational versions:

1. Finite categories
   - Choice sets and the Isbell report
   - Concretization into finite sets

2. Fibrations of families
   - Externalization Fam(C) and its cartesian lifts
   - Fibrational Isbell condition for the Fam and small-fibration choice spans
   - Concreteness of Fam(C) built from finite limits

Usage:
    python main.py run spec.fib                  # every check directive in the file
    python main.py fib-isbell spec.fib --bound 2
    python main.py concretize spec.fib --target Arr --json report.json
    python main.py fmt spec.fib                  # canonical form of the file
    python main.py --version
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import structlog

from config.settings import MAX_BOUND, get_settings

COMMANDS = [
    "validate",
    "isbell-check",
    "concretize",
    "externalize",
    "fib-isbell",
    "mediating-form",
    "cloven-form",
    "concrete-check",
    "smallness-check",
    "construct-equivalence",
]
ON_CATEGORIES = {"isbell-check", "concretize", "construct-equivalence"}
ON_SMALLNESS = {"smallness-check"}


def configure_logging(level: str, as_json: bool) -> None:
    """structlog to stderr; stdout carries only reports"""
    renderer = structlog.processors.JSONRenderer() if as_json else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(logging.getLevelName(level.upper())),
        # sys.stderr is looked up per logger
        logger_factory=lambda *_: structlog.PrintLogger(sys.stderr),
        cache_logger_on_first_use=False,
    )


def synthesize_directives(doc, command: str, targets: Optional[list[str]]):
    """The file's own directives for this command, else one per fitting declaration"""
    from src.api.schemas.document import CheckDirective

    if targets:
        return [CheckDirective(directive=command, args=targets)]
    declared = [d for d in doc.checks if d.directive == command]
    if declared:
        return declared
    if command == "validate":
        return [CheckDirective(directive=command)]
    if command in ON_CATEGORIES:
        names = [d.name for d in doc.categories]
    elif command in ON_SMALLNESS:
        names = [d.name for d in doc.smallness]
    else:
        names = [d.name for d in doc.categories] + [d.name for d in doc.internals]
    return [CheckDirective(directive=command, args=[name]) for name in names]


def run(args: argparse.Namespace) -> int:
    from src.api.schemas.report import RunReport
    from src.core.errors import SpecSyntaxError
    from src.dsl import load, parse, print_document
    from src.services.checker import run_all

    settings = get_settings()
    raw = Path(args.file).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as error:
        line = raw.count(b"\n", 0, error.start) + 1
        column = error.start - (raw.rfind(b"\n", 0, error.start) + 1) + 1
        raise SpecSyntaxError("file is not valid UTF-8", line, column) from error
    doc = parse(text)
    if args.command == "fmt":
        sys.stdout.write(print_document(doc))
        return 0

    bound = args.bound if args.bound is not None else settings.default_bound
    workspace = load(doc, bound)
    if args.command == "run":
        directives = doc.checks or synthesize_directives(doc, "validate", None)
    else:
        directives = synthesize_directives(doc, args.command, args.target)

    reports = run_all(
        workspace,
        directives,
        bound=args.bound,
        schema_version=settings.report_schema_version,
        parallel=args.parallel,
        workers=settings.parallel_workers,
    )
    result = RunReport.combine(reports, source=args.file, schema_version=settings.report_schema_version)
    payload = result.model_dump_json(indent=2) + "\n"
    if args.json:
        Path(args.json).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return result.exit_code


def bound_value(text: str) -> int:
    """--bound: an int in 0..MAX_BOUND"""
    try:
        bound = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bound {text!r}") from None
    if not 0 <= bound <= MAX_BOUND:
        raise argparse.ArgumentTypeError(f"bound must be between 0 and {MAX_BOUND}, got {bound}")
    return bound


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="fibcat",
        description="fibcat - Isbell conditions for finite categories and their fibrations",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    parser.add_argument("command", choices=["run", "fmt", *COMMANDS], help="Command to run")
    parser.add_argument("file", help="A .fib document")
    parser.add_argument("--bound", type=bound_value, default=None, help="Largest finite set in the universe")
    parser.add_argument("--json", default=None, metavar="OUT", help="Write the report here instead of stdout")
    parser.add_argument("--parallel", action="store_true", help="Run directives on worker threads")
    parser.add_argument("--target", action="append", default=None, metavar="NAME",
                        help="Directive arguments, repeatable; overrides the file's directives")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    from src.core.errors import FibcatError

    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_json)
    logger = structlog.get_logger()
    try:
        code = run(args)
    except FibcatError as error:
        logger.error("fibcat_error", command=args.command, error=str(error))
        sys.stderr.write(f"fibcat: {error}\n")
        return 2
    except OSError as error:
        sys.stderr.write(f"fibcat: {error}\n")
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
