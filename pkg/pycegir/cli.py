from typing import Optional, Sequence

import argparse
import asyncio
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from .__version__ import __version__
from .corpus import runCorpus
from .engine import InvariantEngine, analyzeComplexity, inferFromTraces
from .errors import Error, BudgetError, UnknownLocationError
from .lang import parseProgram
from .models.options import InferenceOptions
from .models.report import Report
from .traces import readTraces, writeTraces


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Error):
    pass


def _commonFlags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=int, default=200, help="term cap for the automatic degree")
    common.add_argument("--degree", type=int, help="template degree, overrides --alpha")
    common.add_argument("--oct-range", type=int, default=10, help="octagon bounds live in [-M, M]")
    common.add_argument("--mode", choices=["exhaustive", "random"], help="verifier backend")
    common.add_argument("--budget", type=int, help="inputs tried per verifier call")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--locations", help="comma separated locations to analyse")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--wrap64", action="store_true", help="64-bit wrap-around arithmetic")
    common.add_argument("--timings", action="store_true", help="add wall-clock timings")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    return common


def buildParser() -> argparse.ArgumentParser:
    common = _commonFlags()
    parser = argparse.ArgumentParser(
        prog="pycegir",
        description="Numerical invariants from counterexample-guided trace inference.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    infer = commands.add_parser("infer", parents=[common], help="invariants of a program")
    infer.add_argument("path", type=Path)
    infer.add_argument("--dump-traces", type=Path, help="write every recorded trace as CSV")
    infer.set_defaults(handler=cmdInfer)

    traces = commands.add_parser("traces", parents=[common], help="candidates from a trace CSV")
    traces.add_argument("path", type=Path)
    traces.set_defaults(handler=cmdTraces)

    complexity = commands.add_parser(
        "complexity", parents=[common], help="loop counter bounds of a program"
    )
    complexity.add_argument("path", type=Path)
    complexity.set_defaults(handler=cmdComplexity)

    corpus = commands.add_parser("corpus", parents=[common], help="check a program directory")
    corpus.add_argument("path", type=Path)
    corpus.add_argument("--jobs", type=int, default=1, help="concurrent entries")
    corpus.set_defaults(handler=cmdCorpus)
    return parser


def optionsFromArgs(args: argparse.Namespace) -> InferenceOptions:
    verify = {"seed": args.seed}
    if args.mode is not None:
        verify["mode"] = args.mode
    if args.budget is not None:
        verify["maxInputs"] = args.budget
    locations = None
    if args.locations:
        locations = [loc.strip() for loc in args.locations.split(",") if loc.strip()]
    try:
        return InferenceOptions(
            alpha=args.alpha,
            degree=args.degree,
            octRange=args.oct_range,
            verify=verify,
            seed=args.seed,
            locations=locations,
            format=args.format,
            wrap64=args.wrap64,
            timings=args.timings,
            jobs=getattr(args, "jobs", 1),
        )
    except ValidationError as exc:
        raise UsageError(f"bad option: {exc}")


def _readSource(path: Path) -> str:
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    return path.read_text()


def _emit(report: Report, options: InferenceOptions):
    if options.format == "json":
        sys.stdout.write(report.toJson() + "\n")
    else:
        sys.stdout.write(report.toText())


def cmdInfer(args: argparse.Namespace, options: InferenceOptions) -> int:
    program = parseProgram(_readSource(args.path), name=args.path.stem)
    engine = InvariantEngine(program, options)
    report = engine.run()
    _emit(report, options)
    if args.dump_traces is not None:
        with open(args.dump_traces, "w", newline="") as stream:
            writeTraces(engine.recordedTraces(), stream)
    return EXIT_FAILURE if report.failed else EXIT_OK


def cmdTraces(args: argparse.Namespace, options: InferenceOptions) -> int:
    if not args.path.is_file():
        raise UsageError(f"no such file: {args.path}")
    with open(args.path, newline="") as stream:
        traces = readTraces(stream)
    logger.debug(f"cmdTraces() [path:{args.path}, traces:{len(traces)}]")
    report = inferFromTraces(traces, options, name=args.path.stem)
    _emit(report, options)
    return EXIT_FAILURE if report.failed else EXIT_OK


def cmdComplexity(args: argparse.Namespace, options: InferenceOptions) -> int:
    program = parseProgram(_readSource(args.path), name=args.path.stem)
    report, _ = analyzeComplexity(program, options)
    _emit(report, options)
    return EXIT_OK


def cmdCorpus(args: argparse.Namespace, options: InferenceOptions) -> int:
    if not args.path.is_dir():
        raise UsageError(f"no such directory: {args.path}")
    summary = asyncio.run(runCorpus(args.path, options))
    if options.format == "json":
        sys.stdout.write(summary.toJson() + "\n")
    else:
        sys.stdout.write(summary.toText())
    return EXIT_FAILURE if summary.failed else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = buildParser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        options = optionsFromArgs(args)
        return args.handler(args, options)
    except (UsageError, UnknownLocationError, BudgetError) as exc:
        sys.stderr.write(f"pycegir: {exc.message}\n")
        return EXIT_USAGE
    except Error as exc:
        sys.stderr.write(f"pycegir: {exc.message}\n")
        return EXIT_FAILURE

