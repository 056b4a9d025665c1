from typing import Optional, Dict, List, Tuple

import logging
import time

from pyee import EventEmitter

from .__version__ import __version__
from .complexity import BoundsResult, extractBounds, inferCounterRelation
from .eqinfer import EqSystem, extractEqts, inferEqualities, pruneImplied, solve
from .errors import UnknownLocationError
from .lang.scope import extractVars
from .models.options import InferenceOptions
from .models.program import Program
from .models.report import ComplexityReport, LocationReport, Report, VerifierStats
from .ineqinfer import inferOctagons
from .octagon import OctConstraint, enumerateOctTerms
from .polynomial import Equality, autoDegree, createTerms
from .simplify import InvariantSet, removeRedundant
from .traces import Trace, TraceSet
from .verify import Verifier


logger = logging.getLogger(__name__)


def _optionsEcho(options: InferenceOptions) -> dict:
    return options.dict(exclude={"format", "jobs", "timings"})


def _residualCheck(invariants: InvariantSet, traces: List[Trace]) -> InvariantSet:
    kept = InvariantSet()
    for equality in invariants.equalities:
        if all(equality.holds(t.valuation) for t in traces):
            kept.equalities.append(equality)
        else:
            logger.warning(f"residual check dropped {equality}")
    for octagon in invariants.octagons:
        if all(octagon.holds(t.valuation) for t in traces):
            kept.octagons.append(octagon)
        else:
            logger.warning(f"residual check dropped {octagon}")
    return kept


class InvariantEngine:
    """Equalities, then octagons, then joint simplification, per location.

    Every location shares one verifier, so runs made for one location are
    reused by the next.
    """

    def __init__(self, program: Program, options: Optional[InferenceOptions] = None):
        self._program: Program = program
        self._options: InferenceOptions = options or InferenceOptions()
        self._verifier: Verifier = Verifier(program, self._options)
        self._observer: EventEmitter = EventEmitter()
        # Counterexample inputs seen since the last reset.
        self._cexInputs: int = 0
        self._verifier.observer.on("cex", self._onCex)
        # Simplified invariants per analysed location.
        self._invariants: Dict[str, InvariantSet] = {}

    @property
    def program(self) -> Program:
        return self._program

    @property
    def options(self) -> InferenceOptions:
        return self._options

    @property
    def verifier(self) -> Verifier:
        return self._verifier

    # Invariants of the locations analysed so far.
    @property
    def invariants(self) -> Dict[str, InvariantSet]:
        return self._invariants

    # Observer.
    # @emits location - (report: LocationReport)
    @property
    def observer(self) -> EventEmitter:
        return self._observer

    def _onCex(self, input, candidates):
        self._cexInputs += 1

    # Locations to analyse, in program order.
    # @raise {UnknownLocationError} for a filtered location the program lacks.
    def locations(self) -> List[str]:
        if self._options.locations is None:
            return list(self._program.locations)
        for location in self._options.locations:
            if location not in self._program.locations:
                raise UnknownLocationError(location)
        return [loc for loc in self._program.locations if loc in self._options.locations]

    def inferLocation(self, location: str) -> Tuple[LocationReport, InvariantSet]:
        logger.debug(f"InvariantEngine inferLocation() [location:{location}]")
        calls, runs = self._verifier.calls, self._verifier.runs
        self._cexInputs = 0
        timings: Dict[str, float] = {}
        report = LocationReport(
            location=location, variables=extractVars(self._program, location)
        )

        start = time.perf_counter()
        equalities = inferEqualities(
            self._program, location, self._options, verifier=self._verifier
        )
        timings["equalities"] = time.perf_counter() - start
        report.status = equalities.status
        report.degree = equalities.degree or None
        report.iterations = equalities.iterations
        report.acceptedOnBox = equalities.acceptedOnBox
        if equalities.status == "unreachable":
            report.stats = self._stats(calls, runs, 0)
            self._invariants[location] = InvariantSet()
            self._observer.emit("location", report)
            return report, InvariantSet()

        start = time.perf_counter()
        octagons = inferOctagons(
            self._program,
            location,
            options=self._options,
            verifier=self._verifier,
            traces=equalities.traces,
        )
        timings["octagons"] = time.perf_counter() - start

        start = time.perf_counter()
        invariants = removeRedundant(
            InvariantSet(list(equalities.equalities), list(octagons.constraints))
        )
        recorded = self._verifier.tracesAt(location).at(location)
        invariants = _residualCheck(invariants, recorded)
        timings["simplify"] = time.perf_counter() - start

        report.equalities = [str(e) for e in invariants.equalities]
        report.octagons = [str(o) for o in invariants.octagons]
        report.traces = len(recorded)
        report.stats = self._stats(calls, runs, octagons.checks)
        if self._options.timings:
            report.timings = {k: round(v, 6) for k, v in timings.items()}
        logger.debug(
            f"InvariantEngine inferLocation() | done [location:{location}, invariants:{len(invariants)}]"
        )
        self._invariants[location] = invariants
        self._observer.emit("location", report)
        return report, invariants

    def _stats(self, calls: int, runs: int, boundChecks: int) -> VerifierStats:
        return VerifierStats(
            calls=self._verifier.calls - calls,
            boundChecks=boundChecks,
            cexInputs=self._cexInputs,
            runs=self._verifier.runs - runs,
        )

    def run(self) -> Report:
        start = time.perf_counter()
        report = Report(
            version=__version__,
            kind="infer",
            program=self._program.name,
            seed=self._options.seed,
            options=_optionsEcho(self._options),
        )
        for location in self.locations():
            locationReport, _ = self.inferLocation(location)
            report.locations.append(locationReport)
        if self._options.timings:
            report.timings = {"total": round(time.perf_counter() - start, 6)}
        return report

    def recordedTraces(self) -> TraceSet:
        """Every trace recorded so far, at every location."""
        traces = TraceSet()
        for location in self._program.locations:
            traces.merge(self._verifier.tracesAt(location))
        return traces


def inferProgram(program: Program, options: Optional[InferenceOptions] = None) -> Report:
    return InvariantEngine(program, options).run()


def _solveTraces(traces: List[Trace], options: InferenceOptions) -> Tuple[str, List[Equality], int]:
    names = traces[0].names
    degree = options.degree or autoDegree(len(names), options.alpha)
    terms = createTerms(names, degree)
    if len(traces) < len(terms):
        return "notEnoughTraces", [], degree
    system = EqSystem(terms)
    system.extend(traces)
    return "ok", pruneImplied(extractEqts(solve(system), terms), degree), degree


def _extrema(traces: List[Trace], octRange: int) -> List[OctConstraint]:
    constraints = []
    for term in enumerateOctTerms(traces[0].names):
        k = max(term.evaluate(t.valuation) for t in traces)
        if -octRange <= k <= octRange:
            constraints.append(OctConstraint(term, k))
    return constraints


def inferFromTraces(
    traces: TraceSet, options: Optional[InferenceOptions] = None, name: str = "traces"
) -> Report:
    """Single-shot inference over recorded traces, with no verifier.

    Every candidate is reported as unverified.
    """
    options = options or InferenceOptions()
    report = Report(
        version=__version__,
        kind="traces",
        program=name,
        seed=options.seed,
        options=_optionsEcho(options),
    )
    locations = traces.locations
    if options.locations is not None:
        locations = [loc for loc in locations if loc in options.locations]
    for location in locations:
        rows = traces.at(location)
        status, equalities, degree = _solveTraces(rows, options)
        invariants = removeRedundant(
            InvariantSet(equalities, _extrema(rows, options.octRange))
        )
        logger.debug(
            f"inferFromTraces() [location:{location}, rows:{len(rows)}, status:{status}]"
        )
        report.locations.append(
            LocationReport(
                location=location,
                status=status,
                variables=list(rows[0].names),
                degree=degree,
                equalities=[str(e) for e in invariants.equalities],
                octagons=[str(o) for o in invariants.octagons],
                unverified=True,
                traces=len(rows),
            )
        )
    return report


def analyzeComplexity(
    program: Program, options: Optional[InferenceOptions] = None
) -> Tuple[Report, BoundsResult]:
    """Counter relation at exit, its roots, and octagonal bounds on the counter."""
    options = options or InferenceOptions()
    start = time.perf_counter()
    relation = inferCounterRelation(program, options)
    bounds = extractBounds(relation, options=options)

    verifier = relation.verifier
    octagons = inferOctagons(
        relation.program,
        relation.location,
        options=options,
        verifier=verifier,
        traces=verifier.tracesAt(relation.location),
    )
    counterOctagons = removeRedundant(
        InvariantSet(
            octagons=[
                o for o in octagons.constraints if relation.counter in o.term.variables
            ]
        )
    ).octagons

    report = Report(
        version=__version__,
        kind="complexity",
        program=program.name,
        seed=options.seed,
        options=_optionsEcho(options),
        complexity=ComplexityReport(
            location=relation.location,
            relation=str(relation.relation),
            tDegree=relation.tDegree,
            bounds=[str(b) for b in bounds.bounds],
            residual=None if bounds.residual is None else str(bounds.residual),
            verified=bounds.verified,
            counterOctagons=[str(o) for o in counterOctagons],
        ),
    )
    if options.timings:
        report.timings = {"total": round(time.perf_counter() - start, 6)}
    return report, bounds
