"""Command-line surface: classify, enumerate, verify, generate.

Exit codes: 0 classified/consistent, 1 inconsistent verify, 2 invalid
instance, 3 resource limit hit, 4 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import files
from .classify import ALMOST_UNIVERSAL, INCONCLUSIVE, ClassifierConfig, evaluate
from .errors import (
    AssumptionViolated,
    EnumerationBudgetExceeded,
    FactorizationLimit,
    GiveUp,
    NonClassicForm,
    NotPositiveDefinite,
    OutOfScope,
    ParseError,
)
from .generate import DEFAULT_ENTRY_BOUND, DEFAULT_MAX_REJECTS, generate_instances
from .spectrum import DEFAULT_ENUM_BUDGET, predicted_misses, represents_h, spectrum

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 4

DEFAULT_BOUND = 20_000
DEFAULT_QLIMIT = 50

_INVALID_INSTANCE = (NonClassicForm, OutOfScope, AssumptionViolated, NotPositiveDefinite)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "machine":
        sys.stdout.write(files.render_machine(report))
    else:
        sys.stdout.write(files.render_text(report))


def _load(path: str) -> files.InstanceSource:
    try:
        return files.read_instance(path)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc


def cmd_classify(args: argparse.Namespace) -> int:
    source = _load(args.path)
    try:
        inst = files.build_instance(source, rho_iterations=args.factor_limit)
    except _INVALID_INSTANCE as exc:
        report = files.build_report(source, status=type(exc).__name__, message=str(exc))
        _emit(report, args.format)
        return EXIT_INVALID
    cfg = ClassifierConfig(enum_budget=args.enum_budget)
    verdict = evaluate(inst, cfg)
    report = files.build_report(source, inst=inst, verdict=verdict)
    _emit(report, args.format)
    return EXIT_RESOURCE if verdict.status == INCONCLUSIVE else EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.bound < 1:
        print(f"enumerate: --bound must be positive, got {args.bound}", file=sys.stderr)
        return EXIT_USAGE
    source = _load(args.path)
    try:
        inst = files.build_instance(source, lenient=True)
    except _INVALID_INSTANCE as exc:
        report = files.build_report(source, status=type(exc).__name__, message=str(exc))
        _emit(report, args.format)
        return EXIT_INVALID
    spec = spectrum(inst, args.bound, budget=args.enum_budget)
    report = files.build_report(source, inst=inst, spec=spec)
    _emit(report, args.format)
    return EXIT_OK


def _check(label: str, ok: bool, lines: list[str]) -> bool:
    lines.append(f"  [{'ok' if ok else 'FAIL'}] {label}")
    return ok


def cmd_verify(args: argparse.Namespace) -> int:
    source = _load(args.path)
    try:
        inst = files.build_instance(source)
    except _INVALID_INSTANCE as exc:
        report = files.build_report(source, status=type(exc).__name__, message=str(exc))
        _emit(report, "text")
        return EXIT_INVALID
    verdict = evaluate(inst)
    if verdict.status == INCONCLUSIVE:
        print("verify: classifier ran out of enumeration budget", file=sys.stderr)
        return EXIT_RESOURCE
    bound = args.bound
    spec = spectrum(inst, bound)
    report = files.build_report(source, inst=inst, verdict=verdict, spec=spec)
    sys.stdout.write(files.render_text(report))

    half = bound // 2
    top = [t for t in spec.exceptions if t > half]
    lines: list[str] = ["checks:"]
    consistent = True
    if verdict.status == ALMOST_UNIVERSAL:
        consistent &= _check(
            f"AlmostUniversal: no exceptions in ({half}, {bound}] (found {len(top)})",
            not top,
            lines,
        )
    else:
        consistent &= _check(
            f"NotAlmostUniversal: exceptions persist in ({half}, {bound}] (found {len(top)})",
            bool(top),
            lines,
        )
    if verdict.clause == "exhausted" and inst.alpha - inst.beta in (2, 3):
        candidates = predicted_misses(inst, args.qlimit)
        confirmed = []
        for t in candidates:
            missed = (
                not spec.is_represented(t) if t <= bound else not represents_h(inst, t)
            )
            if missed:
                confirmed.append(t)
        consistent &= _check(
            f"spinor progression: {len(confirmed)} of {len(candidates)} candidate "
            f"targets up to q={args.qlimit} are confirmed misses",
            bool(confirmed),
            lines,
        )
    lines.append(f"verify: {'CONSISTENT' if consistent else 'INCONSISTENT'}")
    print("\n".join(lines))
    if not consistent:
        # The full trace is already in the report above; repeat the verdict
        # line so a failure is self-contained in the tail of the output.
        print(
            f"verify: classifier said {verdict.status}"
            + (f" via clause {verdict.clause}" if verdict.clause else ""),
            file=sys.stderr,
        )
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.count < 1:
        print(f"generate: --count must be positive, got {args.count}", file=sys.stderr)
        return EXIT_USAGE
    instances = generate_instances(
        args.count,
        seed=args.seed,
        entry_bound=args.entry_bound,
        max_rejects=args.max_rejects,
    )
    os.makedirs(args.out, exist_ok=True)
    width = max(3, len(str(args.count)))
    for idx, inst in enumerate(instances, start=1):
        name = f"instance_{idx:0{width}d}.txt"
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(
                files.render_instance(
                    inst, comment=f"generated: seed={args.seed} entry_bound={args.entry_bound}"
                )
            )
        print(path)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auternary",
        description="Almost-universality of ternary quadratic polynomials with conductor-2 shifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="run the classifier on an instance file")
    p_classify.add_argument("path")
    p_classify.add_argument("--format", choices=("text", "machine"), default="text")
    p_classify.add_argument("--factor-limit", type=int, default=None, metavar="N")
    p_classify.add_argument(
        "--enum-budget", type=int, default=DEFAULT_ENUM_BUDGET, metavar="N"
    )
    p_classify.set_defaults(func=cmd_classify)

    p_enum = sub.add_parser("enumerate", help="enumerate the exception spectrum")
    p_enum.add_argument("path")
    p_enum.add_argument("--bound", type=int, default=DEFAULT_BOUND, metavar="B")
    p_enum.add_argument("--format", choices=("text", "machine"), default="text")
    p_enum.add_argument(
        "--enum-budget", type=int, default=DEFAULT_ENUM_BUDGET, metavar="N"
    )
    p_enum.set_defaults(func=cmd_enumerate)

    p_verify = sub.add_parser(
        "verify", help="check the classifier verdict against an enumerated spectrum"
    )
    p_verify.add_argument("path")
    p_verify.add_argument("--bound", type=int, default=DEFAULT_BOUND, metavar="B")
    p_verify.add_argument("--qlimit", type=int, default=DEFAULT_QLIMIT, metavar="Q")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("generate", help="write a corpus of random valid instances")
    p_gen.add_argument("--count", type=int, default=1, metavar="N")
    p_gen.add_argument("--seed", type=int, default=0, metavar="S")
    p_gen.add_argument(
        "--entry-bound", type=int, default=DEFAULT_ENTRY_BOUND, metavar="E"
    )
    p_gen.add_argument(
        "--max-rejects", type=int, default=DEFAULT_MAX_REJECTS, metavar="R"
    )
    p_gen.add_argument("--out", default=".", metavar="DIR")
    p_gen.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors.
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationBudgetExceeded, FactorizationLimit, GiveUp) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def entrypoint() -> None:
    sys.exit(main())
