from typing import Optional, List, Sequence, Tuple

import logging
import random
from dataclasses import dataclass, field

import sympy

from .eqinfer import inferEqualities, instantiate
from .errors import InferenceError
from .linalg import nullspace, rref
from .lang.instrument import COUNTER, exitLocation, instrumentCounter
from .models.options import InferenceOptions
from .models.program import Program
from .polynomial import Equality, Term, autoDegree, createTerms
from .traces import Trace, TraceSet
from .verify import Verifier


logger = logging.getLogger(__name__)


@dataclass
class CounterRelation:
    relation: Equality
    # Highest power of the counter in relation.
    tDegree: int
    counter: str = COUNTER
    location: str = ""
    # Every equality found over the counter and the inputs.
    equalities: List[Equality] = field(default_factory=list)
    # Exit traces projected on the counter and the inputs.
    traces: TraceSet = field(default_factory=TraceSet)
    program: Optional[Program] = None
    # Verifier over the instrumented program, runs cached.
    verifier: Optional[Verifier] = None


@dataclass(frozen=True)
class BoundExpr:
    """A root t = expression of the counter relation."""

    expression: sympy.Expr

    def evaluate(self, valuation) -> sympy.Rational:
        return self.expression.subs(
            {symbol: valuation[symbol.name] for symbol in self.expression.free_symbols}
        )

    def __str__(self) -> str:
        return str(self.expression)


@dataclass
class BoundsResult:
    bounds: List[BoundExpr] = field(default_factory=list)
    # Unfactored part of the relation, None when fully factored.
    residual: Optional[sympy.Expr] = None
    # The extracted factors times residual reproduce the relation up to a scalar.
    verified: bool = False


def _involves(equality: Equality, counter: str) -> bool:
    return any(term.power(counter) > 0 for term in equality.terms)


def inferCounterRelation(
    program: Program, options: Optional[InferenceOptions] = None
) -> CounterRelation:
    """Relation between the ghost counter and the inputs at program exit.

    Without an explicit degree, degrees are tried from 1 upward until an
    equality involving the counter appears.
    """
    options = options or InferenceOptions()
    instrumented = instrumentCounter(program)
    location = exitLocation(instrumented)
    names = sorted(set(program.inputNames) | {COUNTER})
    verifier = Verifier(instrumented, options)
    if options.degree is not None:
        degrees = [options.degree]
    else:
        degrees = list(range(1, autoDegree(len(names), options.alpha) + 1))

    for degree in degrees:
        result = inferEqualities(
            instrumented,
            location,
            options.copy(update={"degree": degree}),
            verifier=verifier,
            variables=names,
        )
        if result.status != "ok":
            raise InferenceError(
                f"no counter relation at {location}: {result.status}", result.status
            )
        related = [e for e in result.equalities if _involves(e, COUNTER)]
        logger.debug(
            f"inferCounterRelation() | degree {degree} [relations:{[str(e) for e in related]}]"
        )
        if related:
            relation = related[0]
            projected = TraceSet()
            for trace in verifier.tracesAt(location).at(location):
                projected.add(trace.project(names))
            return CounterRelation(
                relation=relation,
                tDegree=max(term.power(COUNTER) for term in relation.terms),
                location=location,
                equalities=result.equalities,
                traces=projected,
                program=instrumented,
                verifier=verifier,
            )
    raise InferenceError(f"no relation involving {COUNTER} at {location}", "noRelation")


def _divides(poly: sympy.Poly, root: sympy.Expr, t: sympy.Symbol) -> Optional[sympy.Poly]:
    """Quotient of poly by (t - root) if the division is exact."""
    divisor = sympy.Poly(t - root, *poly.gens)
    if not sympy.prem(poly, divisor).is_zero:
        return None
    return sympy.pquo(poly, divisor)


def _neighbourhood(traces: Sequence[Trace], seed: Trace, inputs: Sequence[str], size: int) -> List[Trace]:
    def distance(trace: Trace) -> Tuple[int, tuple]:
        return (sum(abs(trace[n] - seed[n]) for n in inputs), trace.values)

    return sorted(traces, key=distance)[:size]


def _rootCandidate(
    subset: Sequence[Trace], inputTerms: Sequence[Term], counter: str
) -> Optional[sympy.Expr]:
    """Solve counter = g(inputs) over subset, None if the subset pins no g."""
    columns = [Term.of({counter: 1})] + list(inputTerms)
    basis = nullspace(instantiate(columns, subset), len(columns))
    if not basis:
        return None
    # The counter column comes first, so at most one basis row involves it.
    reduced, pivots = rref(basis, len(columns))
    if not pivots or pivots[0] != 0:
        return None
    row = reduced[0]
    g = -sympy.Add(*[row[i] * columns[i].toSympy() for i in range(1, len(columns))])
    return sympy.expand(g)


def extractBounds(
    relation: CounterRelation,
    traces: Optional[TraceSet] = None,
    options: Optional[InferenceOptions] = None,
) -> BoundsResult:
    """Roots of the relation viewed as a polynomial in the counter.

    Powers of t give the bound 0; other roots are guessed from equality
    inference over neighbourhoods of traces and kept only when (t - g)
    divides the relation exactly. A final linear factor a*t + b always gives
    the bound -b/a, a rational function when a does not divide b.
    """
    options = options or InferenceOptions()
    counter = relation.counter
    t = sympy.Symbol(counter)
    expr = relation.relation.toSympy()
    if relation.program is not None:
        inputs = sorted(relation.program.inputNames)
    else:
        inputs = sorted(v for v in relation.relation.variables if v != counter)
    gens = [t] + [sympy.Symbol(name) for name in inputs]
    poly = sympy.Poly(expr, *gens)
    result = BoundsResult()
    accepted: List[sympy.Expr] = []
    # Factors divided out of the relation so far.
    factors: List[sympy.Expr] = []

    # Factor out t^k.
    k = min(monom[0] for monom in poly.monoms())
    if k > 0:
        poly = sympy.Poly(sympy.cancel(poly.as_expr() / t**k), *gens)
        accepted.append(sympy.Integer(0))
        factors.append(t**k)

    traces = traces if traces is not None else relation.traces
    pool = [trace for trace in traces if trace[counter] != 0] if k > 0 else list(traces)
    rng = random.Random(options.seed)
    inputTerms = createTerms(inputs, options.rootDegree) if inputs else [Term()]
    size = len(inputTerms) + 5
    attempts = 0

    while poly.degree(t) > 1 and pool and attempts < options.rootSubsets:
        attempts += 1
        seed = pool[rng.randrange(len(pool))]
        subset = _neighbourhood(pool, seed, inputs, size)
        root = _rootCandidate(subset, inputTerms, counter)
        if root is None or root in accepted:
            continue
        quotient = _divides(poly, root, t)
        if quotient is None:
            continue
        logger.debug(f"extractBounds() | root accepted [{counter} = {root}] after {attempts} subsets")
        accepted.append(root)
        factors.append(t - root)
        poly = quotient
        pool = [trace for trace in pool if _evalRoot(root, trace) != trace[counter]]

    if poly.degree(t) == 1:
        a, b = poly.as_expr().coeff(t, 1), poly.as_expr().coeff(t, 0)
        quotient, remainder = sympy.div(-b, a, *gens[1:]) if gens[1:] else (-b / a, 0)
        if remainder == 0:
            accepted.append(sympy.expand(quotient))
            factors.append(t - quotient)
            poly = sympy.Poly(a, *gens)
        else:
            # a*t + b with a not dividing b: the root is a quotient of inputs.
            root = sympy.cancel(-b / a)
            logger.debug(f"extractBounds() | rational root [{counter} = {root}]")
            accepted.append(root)
            factors.append(a * t + b)
            poly = sympy.Poly(1, *gens)

    result.bounds = [BoundExpr(root) for root in accepted]
    if poly.degree(t) > 0 or poly.total_degree() > 0:
        result.residual = poly.as_expr()

    product = sympy.Mul(*factors) * poly.as_expr()
    ratio = sympy.cancel(expr / product)
    result.verified = ratio.is_number and ratio != 0
    logger.debug(
        f"extractBounds() | done [bounds:{[str(b) for b in result.bounds]}, residual:{result.residual}, verified:{result.verified}]"
    )
    return result


def _evalRoot(root: sympy.Expr, trace: Trace) -> sympy.Rational:
    return root.subs({symbol: trace[symbol.name] for symbol in root.free_symbols})
