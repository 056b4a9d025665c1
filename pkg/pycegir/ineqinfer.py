from typing import Optional, Dict, List, Literal, Tuple

import logging
from dataclasses import dataclass, field

from .errors import Error, BoundSearchError
from .lang.scope import extractVars
from .models.options import InferenceOptions
from .models.program import Program
from .octagon import OctTerm, OctConstraint, enumerateOctTerms
from .traces import Trace, TraceSet
from .verify import FALSE, Candidate, Verifier


logger = logging.getLogger(__name__)

OctStatus = Literal["ok", "unreachable"]


def ceilDiv(a: int, b: int) -> int:
    """Ceiling of a / b for b > 0, exact for negative a."""
    return -((-a) // b)


@dataclass
class BoundCheck:
    k: int
    holds: bool
    # Largest value of the term over the cex traces, None when term <= k held.
    observed: Optional[int] = None


@dataclass
class BoundSearchState:
    term: OctTerm
    minV: int
    maxV: int
    history: List[BoundCheck] = field(default_factory=list)
    result: Optional[int] = None

    @property
    def checks(self) -> int:
        return len(self.history)


@dataclass
class OctagonResult:
    location: str
    status: OctStatus = "ok"
    constraints: List[OctConstraint] = field(default_factory=list)
    # Terms refuted at the top of the range.
    unbounded: List[OctTerm] = field(default_factory=list)
    checks: int = 0
    traces: TraceSet = field(default_factory=TraceSet)


def _checkBound(state: BoundSearchState, verifier: Verifier, location: str, k: int) -> BoundCheck:
    candidate = Candidate(OctConstraint(state.term, k))
    try:
        check = verifier.findCex(location, [candidate])
    except Error as exc:
        raise BoundSearchError(
            f"bound search for {state.term} failed: {exc.message}", state.minV, state.maxV
        )
    if not check.cexInputs and candidate.stat != "disproved":
        outcome = BoundCheck(k, True)
    else:
        cexTraces = check.cexTraces.at(location)
        if candidate.witness is not None:
            cexTraces.append(candidate.witness)
        outcome = BoundCheck(k, False, max(state.term.evaluate(t.valuation) for t in cexTraces))
    state.history.append(outcome)
    logger.debug(
        f"findUpperBound() | check [term:{state.term}, k:{k}, holds:{outcome.holds}, observed:{outcome.observed}]"
    )
    return outcome


def _search(state: BoundSearchState, verifier: Verifier, location: str) -> Optional[int]:
    minV, maxV = state.minV, state.maxV
    if minV == maxV:
        return maxV
    if maxV - minV == 1:
        return minV if _checkBound(state, verifier, location, minV).holds else maxV
    midV = ceilDiv(maxV + minV, 2)
    outcome = _checkBound(state, verifier, location, midV)
    if outcome.holds:
        state.maxV = midV
    else:
        if outcome.observed > maxV:
            # A trace exceeds the bound accepted earlier; no bound in range.
            logger.warning(
                f"findUpperBound() | {state.term} observed {outcome.observed} above accepted bound {maxV}"
            )
            return None
        state.minV = outcome.observed
    return _search(state, verifier, location)


def searchUpperBound(
    term: OctTerm,
    minV: int,
    maxV: int,
    program: Program,
    location: str,
    verifier: Optional[Verifier] = None,
    options: Optional[InferenceOptions] = None,
    checkMax: bool = False,
) -> BoundSearchState:
    """Divide-and-conquer search for the least k in [minV, maxV] with term <= k.

    Assumes term <= maxV already holds unless checkMax is set.
    """
    if minV > maxV:
        raise ValueError(f"empty search interval [{minV}, {maxV}]")
    verifier = verifier or Verifier(program, options)
    state = BoundSearchState(term, minV, maxV)
    if checkMax and not _checkBound(state, verifier, location, maxV).holds:
        return state
    state.result = _search(state, verifier, location)
    return state


def findUpperBound(
    term: OctTerm,
    minV: int,
    maxV: int,
    program: Program,
    location: str,
    verifier: Optional[Verifier] = None,
    options: Optional[InferenceOptions] = None,
    checkMax: bool = False,
) -> Optional[int]:
    """Least k in [minV, maxV] with term <= k unrefuted; None if unbounded in range."""
    return searchUpperBound(
        term, minV, maxV, program, location, verifier, options, checkMax
    ).result


def findLowerBound(
    term: OctTerm,
    minV: int,
    maxV: int,
    program: Program,
    location: str,
    verifier: Optional[Verifier] = None,
    options: Optional[InferenceOptions] = None,
    checkMax: bool = False,
) -> Optional[int]:
    """Greatest k in [minV, maxV] with k <= term unrefuted."""
    upper = findUpperBound(
        term.negate(), -maxV, -minV, program, location, verifier, options, checkMax
    )
    return None if upper is None else -upper


def _seedTraces(
    verifier: Verifier, location: str, options: InferenceOptions, traces: Optional[TraceSet]
) -> TraceSet:
    if traces is not None and traces.count(location):
        return traces.only(location)
    reach = verifier.findCex(location, [Candidate(FALSE)], maxCex=options.octInitialInputs)
    return reach.cexTraces.only(location)


def inferOctagons(
    program: Program,
    location: str,
    octRange: Optional[int] = None,
    options: Optional[InferenceOptions] = None,
    verifier: Optional[Verifier] = None,
    traces: Optional[TraceSet] = None,
) -> OctagonResult:
    options = options or InferenceOptions()
    bound = octRange or options.octRange
    names = extractVars(program, location)
    verifier = verifier or Verifier(program, options)
    result = OctagonResult(location=location)
    if not names:
        return result

    seeds = _seedTraces(verifier, location, options, traces)
    result.traces = seeds
    seeded: List[Trace] = seeds.at(location)
    if not seeded:
        result.status = "unreachable"
        return result

    terms = enumerateOctTerms(names)
    observed: Dict[OctTerm, int] = {
        term: max(term.evaluate(t.valuation) for t in seeded) for term in terms
    }
    survivors = []
    for term in terms:
        if observed[term] > bound:
            result.unbounded.append(term)
        else:
            survivors.append(term)

    # One call checks every surviving term at the top of the range.
    candidates = [Candidate(OctConstraint(term, bound)) for term in survivors]
    if candidates:
        verifier.findCex(location, candidates)
        result.checks += 1
    passed: List[Tuple[OctTerm, int]] = []
    for term, candidate in zip(survivors, candidates):
        if candidate.stat == "disproved":
            result.unbounded.append(term)
        else:
            passed.append((term, max(observed[term], -bound)))
    logger.debug(
        f"inferOctagons() | prefilter [location:{location}, terms:{len(terms)}, bounded:{len(passed)}]"
    )

    for term, low in passed:
        state = searchUpperBound(term, low, bound, program, location, verifier)
        result.checks += state.checks
        if state.result is None:
            result.unbounded.append(term)
            continue
        constraint = OctConstraint(term, state.result)
        if all(constraint.holds(t.valuation) for t in seeded):
            result.constraints.append(constraint)
        else:
            logger.warning(f"inferOctagons() | dropped by residual check: {constraint}")
    result.unbounded.sort(key=lambda t: t.sortKey())
    logger.debug(
        f"inferOctagons() | done [location:{location}, constraints:{[str(c) for c in result.constraints]}]"
    )
    return result
