"""Command-line front door for the batch pipeline and the HTTP service.

Subcommands: ingest, grade, select, generate, validate, analyze, serve,
study-init. The store root comes from --data-dir or LADDERFORGE_DATA.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import storage
from .generator import (
    GenerationError,
    GenerationParams,
    MockCompleter,
    OpenAIChatCompleter,
    generate_ladder,
    ladder_from_dict,
    ladder_to_dict,
)
from .model import bucket_of, parse_value_literal
from .runner import EnvironmentError_, builtin_toolchains, grade as grade_submission, load_toolchains, run_source
from .storage import Store
from .study import build_study_definition
from .validator import Severity, report_to_dict, validate_ladder

DATA_DIR_ENV = "LADDERFORGE_DATA"


def _store_from(args: argparse.Namespace) -> Store:
    root = args.data_dir or os.environ.get(DATA_DIR_ENV) or "./data"
    return Store(Path(root))


def _toolchain_from(args: argparse.Namespace):
    if getattr(args, "toolchain_config", None):
        available = load_toolchains(Path(args.toolchain_config))
    else:
        available = builtin_toolchains()
    name = getattr(args, "toolchain", None) or "java"
    if name not in available:
        raise SystemExit(f"unknown toolchain {name!r}; have {sorted(available)}")
    return available[name]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladderforge")
    parser.add_argument("--data-dir", help=f"store root (default $${DATA_DIR_ENV} or ./data)")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="load problem bundles and submissions")
    ingest.add_argument("--problems", help="directory of problem bundles")
    ingest.add_argument("--submissions", help="delimited submissions file")

    grade_cmd = commands.add_parser("grade", help="compile and score submissions")
    grade_cmd.add_argument("--all", action="store_true", help="grade every submission")
    grade_cmd.add_argument("--submission", help="grade one submission id")
    grade_cmd.add_argument("--toolchain", default="java")
    grade_cmd.add_argument("--toolchain-config", help="extra toolchain definitions (JSON)")
    grade_cmd.add_argument("--workers", type=int, default=4)

    select = commands.add_parser("select", help="pick the study set (one per bucket per problem)")
    select.add_argument("--problems", nargs="*", help="problem ids (default: all)")

    generate = commands.add_parser("generate", help="generate feedback ladders")
    generate.add_argument("--submission", help="one submission id (default: all eligible)")
    generate.add_argument("--mock", help="directory of canned responses keyed by submission id")
    generate.add_argument("--model", default="gpt-4")
    generate.add_argument("--temperature", type=float, default=0.0)
    generate.add_argument("--max-tokens", type=int, default=1024)
    generate.add_argument("--base-url", default="https://api.openai.com/v1")

    validate = commands.add_parser("validate", help="run fidelity checks on stored ladders")
    validate.add_argument("--submission", help="one submission id (default: all ladders)")
    validate.add_argument("--toolchain", default="java")
    validate.add_argument("--toolchain-config")

    analyze = commands.add_parser("analyze", help="export agreement and figure tables")
    analyze.add_argument("--out", default="exports", help="output directory")

    serve = commands.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--toolchain", default="java")
    serve.add_argument("--toolchain-config")

    study_init = commands.add_parser("study-init", help="build the study definition")
    study_init.add_argument("--config", required=True, help="study setup JSON")
    study_init.add_argument("--toolchain", default="java")
    study_init.add_argument("--toolchain-config")

    return parser


def cmd_ingest(args: argparse.Namespace) -> int:
    store = _store_from(args)
    if not args.problems and not args.submissions:
        print("nothing to ingest; pass --problems and/or --submissions", file=sys.stderr)
        return 1
    if args.problems:
        count = store.ingest_problems(Path(args.problems))
        print(f"ingested {count} problem(s)")
    if args.submissions:
        report = store.ingest_submissions(Path(args.submissions))
        print(f"ingested {report.accepted} submission(s)")
        for line in report.rejected:
            print(f"rejected {line}", file=sys.stderr)
    return 0


def cmd_grade(args: argparse.Namespace) -> int:
    store = _store_from(args)
    toolchain = _toolchain_from(args)
    if args.submission:
        targets = [args.submission]
    elif args.all:
        targets = store.submission_ids()
    else:
        print("pass --all or --submission ID", file=sys.stderr)
        return 1
    for submission_id in targets:
        submission = store.load_submission(submission_id)
        problem = store.load_problem(submission.problem_id)
        report = grade_submission(submission, problem, toolchain, max_workers=args.workers)
        store.save_grade(report)
        if report.compiled:
            print(f"{submission_id}: score {report.score:.2f} ({bucket_of(report.score).value})")
        else:
            print(f"{submission_id}: did not compile")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    store = _store_from(args)
    if args.problems:
        problem_ids = args.problems
    else:
        problem_ids = [
            pid for pid in store.problem_ids() if store.submissions_for_problem(pid)
        ]
    selection = storage.select_study_set(store, problem_ids)
    print(json.dumps(selection, indent=2, sort_keys=True))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    store = _store_from(args)
    params = GenerationParams(
        model_name=args.model,
        temperature=args.temperature,
        max_tokens=args.max_tokens,
        base_url=args.base_url,
    )
    completer = MockCompleter(Path(args.mock)) if args.mock else OpenAIChatCompleter()
    if args.submission:
        targets = [args.submission]
    else:
        targets = [
            sid
            for sid in store.graded_ids()
            if (report := store.load_grade(sid)).compiled and report.score < 1.0
        ]
    generated = 0
    for submission_id in targets:
        submission = store.load_submission(submission_id)
        problem = store.load_problem(submission.problem_id)
        report = store.load_grade(submission_id)
        ladder = generate_ladder(
            problem,
            submission,
            params,
            completer,
            score=report.score,
            compiled=report.compiled,
        )
        store.save_ladder(submission_id, ladder_to_dict(ladder))
        generated += 1
    print(f"generated {generated} ladder(s)")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    store = _store_from(args)
    toolchain = _toolchain_from(args)
    targets = [args.submission] if args.submission else store.ladder_ids()
    any_errors = False
    for submission_id in targets:
        ladder = ladder_from_dict(store.load_ladder(submission_id))
        submission = store.load_submission(submission_id)
        problem = store.load_problem(submission.problem_id)
        grade_report = store.load_grade(submission_id)
        report = validate_ladder(ladder, problem, submission, grade_report, toolchain)
        store.save_validation(submission_id, report_to_dict(report))
        if not report.flags:
            print(f"{submission_id}: clean")
        for flag in report.flags:
            marker = "ERROR" if flag.severity is Severity.ERROR else "warn "
            print(f"{submission_id}: {marker} {flag.code.value}: {flag.detail}")
            any_errors = any_errors or flag.severity is Severity.ERROR
    return 1 if any_errors else 0


def cmd_analyze(args: argparse.Namespace) -> int:
    from .analytics import export_all

    store = _store_from(args)
    ratings = store.ratings()
    if not ratings:
        print("no ratings stored yet", file=sys.stderr)
        return 1
    bucket_by_submission: dict[str, str] = {}
    if store.has_study():
        for chosen in store.load_study()["items"].values():
            for bucket, submission_id in chosen.items():
                bucket_by_submission[submission_id] = bucket
    else:
        for submission_id in store.graded_ids():
            report = store.load_grade(submission_id)
            if report.compiled and report.score is not None:
                bucket_by_submission[submission_id] = bucket_of(report.score).value
    written = export_all(ratings, bucket_by_submission, Path(args.out))
    for name, path in sorted(written.items()):
        print(f"wrote {name}: {path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    store = _store_from(args)
    toolchain = _toolchain_from(args)
    app = create_app(store, toolchain)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_study_init(args: argparse.Namespace) -> int:
    store = _store_from(args)
    toolchain = _toolchain_from(args)
    setup = json.loads(Path(args.config).read_text())
    selection = storage.select_study_set(store, setup["problems"])

    eligibility = setup["eligibility"]
    problem = store.load_problem(eligibility["problemId"])
    code = eligibility.get("code") or problem.reference_solution
    if not code:
        print("eligibility problem has no code to show", file=sys.stderr)
        return 1
    expected_outputs = []
    for input_row in eligibility["inputs"]:
        arguments = [
            parse_value_literal(literal, param.value_type)
            for literal, param in zip(input_row, problem.signature.parameters)
        ]
        outcome = run_source(code, problem, arguments, toolchain)
        expected_outputs.append(outcome.stdout.strip())
    build_study_definition(store, setup, selection, expected_outputs, code)
    print(
        f"study initialized: {len(setup['problems'])} problems, "
        f"{len(setup['calibration'])} calibration items"
    )
    return 0


HANDLERS = {
    "ingest": cmd_ingest,
    "grade": cmd_grade,
    "select": cmd_select,
    "generate": cmd_generate,
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "serve": cmd_serve,
    "study-init": cmd_study_init,
}


def cli_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (storage.StorageError, GenerationError, EnvironmentError_) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
