from typing import Optional, List, Literal, Sequence, Set

import logging
from dataclasses import dataclass, field

import sympy

from .errors import Error
from .lang.scope import extractVars
from .linalg import nullspace, rank, rref
from .models.options import InferenceOptions
from .models.program import Program
from .polynomial import Term, Equality, autoDegree, createTerms, termCount
from .traces import Input, Trace, TraceSet
from .verify import FALSE, Candidate, Verifier


logger = logging.getLogger(__name__)

EqStatus = Literal["ok", "unreachable", "notEnoughTraces"]


@dataclass
class EqSystem:
    """Template instantiated with traces: one row per trace."""

    terms: List[Term]
    rows: List[List[int]] = field(default_factory=list)

    def extend(self, traces: Sequence[Trace]):
        self.rows.extend(instantiate(self.terms, traces))

    @property
    def rank(self) -> int:
        return rank(self.rows, len(self.terms))


@dataclass
class EqualityResult:
    location: str
    status: EqStatus
    equalities: List[Equality] = field(default_factory=list)
    degree: int = 0
    terms: int = 0
    # Refinement rounds of the second loop.
    iterations: int = 0
    traces: TraceSet = field(default_factory=TraceSet)
    inputs: List[Input] = field(default_factory=list)
    # The last verifier call swept the whole input box.
    acceptedOnBox: bool = False


def instantiate(terms: Sequence[Term], traces: Sequence[Trace]) -> List[List[int]]:
    """One row per trace: every term evaluated at the trace's valuation."""
    rows = []
    for trace in traces:
        valuation = trace.valuation
        try:
            rows.append([term.evaluate(valuation) for term in terms])
        except KeyError as exc:
            raise Error(f"trace {trace} lacks variable {exc.args[0]}")
    return rows


def solve(system: EqSystem) -> List[List[sympy.Rational]]:
    """Reduced nullspace basis of the system.

    The basis is row reduced with columns ordered from the greatest term down,
    so every vector has a distinct leading term and the basis is unique.
    """
    if not system.rows:
        raise Error("solve() needs at least one row")
    width = len(system.terms)
    basis = nullspace(system.rows, width)
    if not basis:
        return []
    order = sorted(range(width), key=lambda i: system.terms[i], reverse=True)
    permuted = [[vector[i] for i in order] for vector in basis]
    reduced, _ = rref(permuted, width)
    canonical = []
    for row in reduced:
        vector = [sympy.Integer(0)] * width
        for position, column in enumerate(order):
            vector[column] = row[position]
        canonical.append(vector)
    return canonical


def extractEqts(basis: Sequence[Sequence], terms: Sequence[Term]) -> List[Equality]:
    equalities: List[Equality] = []
    for vector in basis:
        if len(vector) != len(terms):
            raise Error("basis vector and terms differ in length")
        if all(c == 0 for c in vector):
            raise Error("zero vector is not a valid basis element")
        equality = Equality.fromVector(vector, terms)
        if equality not in equalities:
            equalities.append(equality)
    return equalities


def pruneImplied(equalities: Sequence[Equality], degree: int) -> List[Equality]:
    """Keep a generating set: drop equalities in the span of the multiples,
    up to degree, of smaller kept ones.

    Stops as soon as that span holds every candidate.
    """
    ordered = sorted(set(equalities), key=lambda e: (e.leadingTerm, e.coefficients))
    names = sorted({v for e in ordered for v in e.variables})
    if not names:
        return ordered[:1]
    if len(ordered) < 2:
        return ordered
    degree = max([degree] + [e.degree for e in ordered])
    columns = {term: i for i, term in enumerate(createTerms(names, degree))}
    width = len(columns)

    def dense(row) -> List[int]:
        vector = [0] * width
        for term, c in row.items():
            vector[columns[term]] = c
        return vector

    candidates = [dense(e.asDict) for e in ordered]
    kept: List[Equality] = []
    span: List[List[int]] = []
    spanRank = 0
    for equality, vector in zip(ordered, candidates):
        if span and rank(span + [vector], width) == spanRank:
            continue
        kept.append(equality)
        room = degree - equality.degree
        multipliers = createTerms(names, room) if room > 0 else [Term()]
        span.extend(dense(equality.times(m)) for m in multipliers)
        spanRank = rank(span, width)
        if rank(span + candidates, width) == spanRank:
            break
    logger.debug(f"pruneImplied() [candidates:{len(ordered)}, kept:{len(kept)}, degree:{degree}]")
    return kept


def _fallbackDegree(numVars: int, degree: int, rows: int) -> int:
    cap = max(rows, numVars + 1)
    fallback = 1
    while fallback < degree and termCount(numVars, fallback + 1) <= cap:
        fallback += 1
    return fallback


def inferEqualities(
    program: Program,
    location: str,
    options: Optional[InferenceOptions] = None,
    verifier: Optional[Verifier] = None,
    variables: Optional[Sequence[str]] = None,
) -> EqualityResult:
    """Polynomial equalities at location, optionally over a subset of its
    variables."""
    options = options or InferenceOptions()
    names = extractVars(program, location)
    if variables is not None:
        missing = sorted(set(variables) - set(names))
        if missing:
            raise Error(f"variables {missing} not in scope at {location}")
        names = sorted(set(variables))
    verifier = verifier or Verifier(program, options)
    result = EqualityResult(location=location, status="ok")
    if not names:
        if verifier.checkReachable(location) is None:
            result.status = "unreachable"
        return result

    degree = options.degree or autoDegree(len(names), options.alpha)
    terms = createTerms(names, degree)
    system = EqSystem(terms)
    traces = result.traces
    inputs = result.inputs
    logger.debug(
        f"inferEqualities() [location:{location}, vars:{names}, degree:{degree}, terms:{len(terms)}]"
    )

    def addTraces(newTraces: TraceSet) -> int:
        fresh = []
        for trace in newTraces.at(location):
            if traces.add(trace.project(names), newTraces.provenance(trace)):
                fresh.append(trace.project(names))
        system.extend(fresh)
        return len(fresh)

    # Gather traces until the system has enough rows.
    minimum = len(terms) + 10
    while True:
        if len(system.rows) >= minimum and len(system.rows) >= 2 * len(terms) - system.rank:
            break
        reach = verifier.findCex(location, [Candidate(FALSE)], known=inputs)
        if not reach.cexInputs:
            if not inputs:
                logger.debug(f"inferEqualities() | unreachable [location:{location}]")
                result.status = "unreachable"
                return result
            if not reach.complete:
                logger.debug(
                    f"inferEqualities() | not enough traces [location:{location}, rows:{len(system.rows)}]"
                )
                result.status = "notEnoughTraces"
                return result
            # Every reachable state is known; fit the degree to the traces.
            if len(system.rows) < len(terms):
                degree = _fallbackDegree(len(names), degree, len(system.rows))
                terms = createTerms(names, degree)
                system = EqSystem(terms)
                system.extend(traces.at(location))
                logger.debug(
                    f"inferEqualities() | trace-complete, degree lowered [location:{location}, degree:{degree}]"
                )
            break
        inputs.extend(reach.cexInputs)
        addTraces(reach.cexTraces)

    result.degree = degree
    result.terms = len(terms)

    candidates = extractEqts(solve(system), terms)
    logger.debug(
        f"inferEqualities() | first solve [location:{location}, rows:{len(system.rows)}, candidates:{len(candidates)}]"
    )
    invs: List[Equality] = []
    disproved: Set[Equality] = set()
    while candidates and result.iterations < options.maxIterations:
        result.iterations += 1
        pending = [Candidate(equality) for equality in candidates]
        check = verifier.findCex(location, pending, known=inputs)
        result.acceptedOnBox = check.complete
        for candidate in pending:
            if candidate.stat == "disproved":
                disproved.add(candidate.predicate)
            elif candidate.predicate not in invs:
                invs.append(candidate.predicate)
        logger.debug(
            f"inferEqualities() | iteration {result.iterations} [location:{location}, saved:{len(invs)}, cex:{len(check.cexInputs)}]"
        )
        if not check.cexInputs:
            break
        inputs.extend(check.cexInputs)
        addTraces(check.cexTraces)
        candidates = [
            equality
            for equality in extractEqts(solve(system), terms)
            if equality not in invs and equality not in disproved
        ]
    else:
        if candidates:
            logger.warning(
                f"inferEqualities() | iteration cap reached [location:{location}, pending:{len(candidates)}]"
            )

    # Residual check against every trace used.
    gathered = traces.at(location)
    consistent = []
    for equality in invs:
        if all(equality.holds(trace.valuation) for trace in gathered):
            consistent.append(equality)
        else:
            logger.warning(f"inferEqualities() | dropped by residual check: {equality}")
    result.equalities = pruneImplied(consistent, degree)
    logger.debug(
        f"inferEqualities() | done [location:{location}, equalities:{[str(e) for e in result.equalities]}]"
    )
    return result
