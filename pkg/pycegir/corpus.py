from typing import Optional, Dict, List, Literal, Any, Tuple

import asyncio
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import sympy
from pydantic import BaseModel, ValidationError

from .engine import InvariantEngine, analyzeComplexity
from .errors import Error, SidecarError
from .lang import parseExpression, parseProgram
from .models.options import InferenceOptions
from .models.report import Report
from .octagon import octagonFromExpr
from .polynomial import equalityFromExpr, exprToSympy
from .simplify import InvariantSet, isImpliedEq, isImpliedOct


logger = logging.getLogger(__name__)

PROGRAM_SUFFIX = ".mpl"
SIDECAR_SUFFIX = ".expected.json"

RowStatus = Literal["Correct", "Fail", "NoSidecar", "Error"]


class Sidecar(BaseModel):
    kind: Literal["infer", "complexity"] = "infer"
    # Option overrides for this program, e.g. {"degree": 2}.
    options: Dict[str, Any] = {}
    # Expected invariants per location, in program expression syntax.
    locations: Dict[str, List[str]] = {}
    # Expected counter bounds for complexity entries.
    bounds: List[str] = []

    class Config:
        extra = "forbid"


class CorpusRow(BaseModel):
    name: str
    kind: str = "infer"
    status: RowStatus
    # Invariants (or bounds) reported.
    invariants: int = 0
    # Expectations the output does not imply.
    missing: List[str] = []
    time: Optional[float] = None
    error: Optional[str] = None
    report: Optional[Report] = None


class CorpusSummary(BaseModel):
    rows: List[CorpusRow] = []

    @property
    def failed(self) -> bool:
        return any(row.status in ("Fail", "Error") for row in self.rows)

    def toJson(self) -> str:
        return self.json(indent=2, exclude_none=True)

    def toText(self) -> str:
        lines = [f"{'program':<16} {'kind':<11} {'invs':>5} {'time':>9}  correct"]
        for row in self.rows:
            elapsed = "-" if row.time is None else f"{row.time:.2f}s"
            lines.append(
                f"{row.name:<16} {row.kind:<11} {row.invariants:>5} {elapsed:>9}  {row.status}"
            )
            for expectation in row.missing:
                lines.append(f"    missing: {expectation}")
            if row.error:
                lines.append(f"    error: {row.error}")
        return "\n".join(lines) + "\n"


def loadSidecar(path: Path) -> Sidecar:
    try:
        return Sidecar.parse_file(path)
    except (ValidationError, ValueError) as exc:
        raise SidecarError(f"bad sidecar {path.name}: {exc}")


def mergeOptions(options: InferenceOptions, overrides: Dict[str, Any]) -> InferenceOptions:
    merged = options.dict()
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    try:
        return InferenceOptions(**merged)
    except ValidationError as exc:
        raise SidecarError(f"bad sidecar options: {exc}")


def _implied(invariants: InvariantSet, expectation: str) -> bool:
    expr = parseExpression(expectation)
    try:
        if getattr(expr, "op", None) == "==":
            cand = equalityFromExpr(expr)
            if not invariants.equalities:
                return False
            degree = math.ceil(
                max([e.degree for e in invariants.equalities] + [cand.degree]) / 2
            )
            return isImpliedEq(invariants.equalities, cand, max(degree, 1))
        return isImpliedOct(invariants, octagonFromExpr(expr))
    except ValueError as exc:
        raise SidecarError(f"bad expectation {expectation!r}: {exc}")


def _checkInfer(
    program, options: InferenceOptions, sidecar: Optional[Sidecar]
) -> Tuple[Report, List[str], int]:
    engine = InvariantEngine(program, options)
    report = engine.run()
    count = sum(len(loc.equalities) + len(loc.octagons) for loc in report.locations)
    missing = []
    for location, expectations in (sidecar.locations if sidecar else {}).items():
        produced = engine.invariants.get(location)
        for expectation in expectations:
            if produced is None or not _implied(produced, expectation):
                missing.append(f"{location}: {expectation}")
    return report, missing, count


def _checkComplexity(
    program, options: InferenceOptions, sidecar: Optional[Sidecar]
) -> Tuple[Report, List[str], int]:
    report, bounds = analyzeComplexity(program, options)
    produced = [bound.expression for bound in bounds.bounds]
    missing = []
    matched = set()
    for expectation in sidecar.bounds if sidecar else []:
        try:
            expected = exprToSympy(parseExpression(expectation))
        except ValueError as exc:
            raise SidecarError(f"bad bound {expectation!r}: {exc}")
        hit = next(
            (i for i, g in enumerate(produced) if sympy.expand(g - expected) == 0), None
        )
        if hit is None:
            missing.append(f"bound: {expectation}")
        else:
            matched.add(hit)
    if sidecar is not None:
        missing.extend(
            f"unexpected bound: {g}" for i, g in enumerate(produced) if i not in matched
        )
        if not bounds.verified:
            missing.append("divisibility identity not verified")
    return report, missing, len(produced)


def evaluateEntry(path: Path, options: InferenceOptions) -> CorpusRow:
    """Analyse one corpus program and compare against its sidecar."""
    name = path.name[: -len(PROGRAM_SUFFIX)]
    sidecarPath = path.with_name(name + SIDECAR_SUFFIX)
    row = CorpusRow(name=name, status="Error")
    start = time.perf_counter()
    try:
        sidecar: Optional[Sidecar] = None
        if sidecarPath.exists():
            sidecar = loadSidecar(sidecarPath)
            options = mergeOptions(options, sidecar.options)
            row.kind = sidecar.kind
        else:
            logger.warning(f"evaluateEntry() | missing sidecar for {name}")
        program = parseProgram(path.read_text(), name=name)
        check = _checkComplexity if row.kind == "complexity" else _checkInfer
        row.report, row.missing, row.invariants = check(program, options, sidecar)
        if sidecar is None:
            row.status = "NoSidecar"
        else:
            row.status = "Fail" if row.missing else "Correct"
    except Error as exc:
        logger.warning(f"evaluateEntry() | {name} failed: {exc.message}")
        row.error = exc.message
    if options.timings:
        row.time = round(time.perf_counter() - start, 6)
    logger.debug(f"evaluateEntry() [name:{name}, status:{row.status}]")
    return row


def listCorpus(directory: Path) -> List[Path]:
    return sorted(p for p in directory.iterdir() if p.name.endswith(PROGRAM_SUFFIX))


async def runCorpus(
    directory: Path, options: Optional[InferenceOptions] = None
) -> CorpusSummary:
    """Evaluate every program of directory, options.jobs entries at a time.

    Rows come back in file name order whatever the completion order.
    """
    options = options or InferenceOptions()
    entries = listCorpus(directory)
    logger.debug(f"runCorpus() [directory:{directory}, entries:{len(entries)}, jobs:{options.jobs}]")
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=options.jobs) as executor:
        rows = await asyncio.gather(
            *[loop.run_in_executor(executor, evaluateEntry, path, options) for path in entries]
        )
    return CorpusSummary(rows=list(rows))
