from typing import Optional, Dict, List, Iterable

from pycegir.models.program import Program
from pycegir.octagon import OctConstraint
from pycegir.traces import Input, Trace
from pycegir.verify import Candidate, Verifier, VerifyResult


class ScriptedVerifier(Verifier):
    """Answers bound checks from a script instead of running the program.

    script maps a checked bound k to the term value of the counterexample
    trace, or to None when `term <= k` must survive.
    """

    def __init__(self, program: Program, script: Dict[int, Optional[int]]):
        super(ScriptedVerifier, self).__init__(program)
        self._script = script
        # Bounds checked, in order.
        self.asked: List[int] = []

    def findCex(
        self,
        location: str,
        candidates: Iterable[Candidate],
        known: Iterable[Input] = (),
        maxCex: Optional[int] = None,
    ) -> VerifyResult:
        candidates = list(candidates)
        result = VerifyResult(location=location, candidates=candidates)
        for candidate in candidates:
            constraint: OctConstraint = candidate.predicate
            self.asked.append(constraint.k)
            observed = self._script[constraint.k]
            if observed is None:
                continue
            input = Input(("x", "y"), (len(self.asked), len(self.asked)))
            witness = _witness(location, constraint, observed)
            candidate.disprove(witness)
            result.cexInputs.append(input)
            result.cexTraces.add(witness, input)
        self._calls += 1
        self.observer.emit("call", result)
        return result


def _witness(location: str, constraint: OctConstraint, observed: int) -> Trace:
    # A valuation giving the term the scripted value: v1 carries it all.
    term = constraint.term
    names = sorted(term.variables)
    values = {name: 0 for name in names}
    values[term.v1] = observed * term.a1
    return Trace(location, tuple(names), tuple(values[name] for name in names))
