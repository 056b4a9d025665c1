from typing import Optional, Dict, List, Sequence, Tuple, Mapping

import logging
import math
from dataclasses import dataclass, field

import sympy

from .linalg import rank, rref
from .octagon import OctConstraint, Octagon, octTermFromLinear
from .polynomial import Term, Equality, createTerms


logger = logging.getLogger(__name__)


@dataclass
class InvariantSet:
    equalities: List[Equality] = field(default_factory=list)
    octagons: List[OctConstraint] = field(default_factory=list)

    def holds(self, valuation: Mapping[str, int]) -> bool:
        return all(e.holds(valuation) for e in self.equalities) and all(
            o.holds(valuation) for o in self.octagons
        )

    def __len__(self) -> int:
        return len(self.equalities) + len(self.octagons)


def _multipliers(names: Sequence[str], degree: int) -> List[Term]:
    if degree < 0:
        return []
    if degree == 0 or not names:
        return [Term()]
    return createTerms(names, degree)


def isImpliedEq(others: Sequence[Equality], cand: Equality, degree: int) -> bool:
    """Whether cand lies in the span of m*e for e in others and monomials m
    with deg(m*e) <= 2*degree."""
    if cand in others:
        return True
    cap = 2 * degree
    if cand.degree > cap or not others:
        return False
    names = sorted({v for e in others for v in e.variables} | set(cand.variables))
    rows: List[Dict[Term, int]] = []
    for equality in others:
        for multiplier in _multipliers(names, cap - equality.degree):
            rows.append(equality.times(multiplier))
    if not rows:
        return False
    columns: Dict[Term, int] = {}
    for row in rows + [cand.asDict]:
        for term in row:
            columns.setdefault(term, len(columns))

    def dense(row: Dict[Term, int]) -> List[int]:
        vector = [0] * len(columns)
        for term, c in row.items():
            vector[columns[term]] = c
        return vector

    matrix = [dense(row) for row in rows]
    return rank(matrix + [dense(cand.asDict)], len(columns)) == rank(matrix, len(columns))


def _linearEqualities(equalities: Sequence[Equality]) -> List[Equality]:
    return [e for e in equalities if e.degree <= 1]


def _equalityOctagons(equality: Equality) -> List[OctConstraint]:
    """Octagon pair for a linear equality that is octagonal, e.g. x - y + 1 == 0."""
    coefficients = {t.variables[0]: c for t, c in equality.coefficients if not t.isConstant}
    constant = equality.coefficient(Term())
    term = octTermFromLinear(coefficients)
    if term is None:
        return []
    return [OctConstraint(term, -constant), OctConstraint(term.negate(), constant)]


def _reduceByEqualities(
    form: Dict[str, sympy.Rational], constant: sympy.Rational, equalities: Sequence[Equality]
) -> Optional[Tuple[Dict[str, sympy.Rational], sympy.Rational]]:
    """Rewrite an affine form modulo linear equalities; None if they are
    inconsistent."""
    names = sorted({v for e in equalities for v in e.variables} | set(form))
    index = {name: i for i, name in enumerate(names)}
    width = len(names) + 1
    rows = []
    for equality in equalities:
        row = [0] * width
        for term, c in equality.coefficients:
            if term.isConstant:
                row[-1] = c
            else:
                row[index[term.variables[0]]] = c
        rows.append(row)
    reduced, pivots = rref(rows, width)
    vector = [sympy.Rational(form.get(name, 0)) for name in names] + [sympy.Rational(constant)]
    for row, pivot in zip(reduced, pivots):
        if pivot == width - 1:
            return None
        factor = vector[pivot]
        if factor != 0:
            vector = [v - factor * r for v, r in zip(vector, row)]
    return {name: vector[i] for i, name in enumerate(names) if vector[i] != 0}, vector[-1]


def _upperByIntervals(form: Mapping[str, sympy.Rational], octagon: Octagon) -> Optional[sympy.Rational]:
    total = sympy.Integer(0)
    for name, c in form.items():
        if name not in octagon.names:
            return None
        low, high = octagon.bounds(name)
        bound = high if c > 0 else low
        if bound is None:
            return None
        total += c * bound
    return total


def isImpliedOct(others: InvariantSet, cand: OctConstraint) -> bool:
    """Sound, incomplete entailment of cand by others.

    Octagons, plus octagonal linear equalities, are closed; then cand is
    rewritten modulo the linear equalities and bounded by interval evaluation.
    """
    if cand in others.octagons:
        return True
    linear = _linearEqualities(others.equalities)
    constraints = list(others.octagons)
    for equality in linear:
        constraints.extend(_equalityOctagons(equality))
    octagon = Octagon.fromConstraints(constraints, cand.term.variables)
    if octagon.entails(cand):
        return True
    if not linear:
        return False
    form = {name: sympy.Integer(c) for name, c in cand.term.coefficients.items()}
    reduced = _reduceByEqualities(form, sympy.Integer(0), linear)
    if reduced is None:
        return True
    form, constant = reduced
    if not form:
        return bool(constant <= cand.k)
    integral = {name: int(c) for name, c in form.items() if c.is_Integer}
    term = octTermFromLinear(integral) if len(integral) == len(form) else None
    if term is not None:
        bound = octagon.upper(term)
        if bound is not None and bound + constant <= cand.k:
            return True
    upper = _upperByIntervals(form, octagon)
    return upper is not None and bool(upper + constant <= cand.k)


def removeRedundant(invariants: InvariantSet) -> InvariantSet:
    """Greedily drop members implied by the surviving rest.

    Equalities are visited greatest leading term first, octagons by term and
    then weakest bound first. Octagons never remove equalities.
    """
    equalities = sorted(
        set(invariants.equalities), key=lambda e: (e.leadingTerm, e.coefficients)
    )
    if equalities:
        degree = math.ceil(max(e.degree for e in equalities) / 2)
        for equality in list(reversed(equalities)):
            rest = [e for e in equalities if e != equality]
            if isImpliedEq(rest, equality, degree):
                logger.debug(f"removeRedundant() | implied equality: {equality}")
                equalities.remove(equality)

    octagons = sorted(set(invariants.octagons), key=lambda o: o.sortKey())
    for octagon in list(reversed(octagons)):
        rest = InvariantSet(equalities, [o for o in octagons if o != octagon])
        if isImpliedOct(rest, octagon):
            logger.debug(f"removeRedundant() | implied octagon: {octagon}")
            octagons.remove(octagon)
    return InvariantSet(equalities, octagons)
