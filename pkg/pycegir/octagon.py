from typing import Optional, Dict, List, Mapping, Sequence, Iterable, Tuple

import math
from dataclasses import dataclass

import sympy

from .lang.nodes import Expr, Binary
from .polynomial import exprToSympy


@dataclass(frozen=True)
class OctTerm:
    """a1*v1 + a2*v2 with unit coefficients; single-variable terms have a2 == 0."""

    a1: int
    v1: str
    a2: int = 0
    v2: Optional[str] = None

    def __post_init__(self):
        if self.a1 not in (-1, 1) or self.a2 not in (-1, 0, 1):
            raise ValueError(f"bad octagon coefficients ({self.a1}, {self.a2})")
        if self.a2 == 0 and self.v2 is not None:
            raise ValueError("single-variable term carries a second variable")
        if self.a2 != 0 and (self.v2 is None or not self.v1 < self.v2):
            raise ValueError(f"variables must be distinct and ordered: {self.v1}, {self.v2}")

    @property
    def isUnary(self) -> bool:
        return self.a2 == 0

    @property
    def variables(self) -> Tuple[str, ...]:
        return (self.v1,) if self.isUnary else (self.v1, self.v2)

    @property
    def coefficients(self) -> Dict[str, int]:
        if self.isUnary:
            return {self.v1: self.a1}
        return {self.v1: self.a1, self.v2: self.a2}

    def evaluate(self, valuation: Mapping[str, int]) -> int:
        value = self.a1 * valuation[self.v1]
        if not self.isUnary:
            value += self.a2 * valuation[self.v2]
        return value

    def negate(self) -> "OctTerm":
        return OctTerm(-self.a1, self.v1, -self.a2, self.v2)

    # Enumeration order: unary terms first, then by variables, positive
    # coefficients first.
    def sortKey(self) -> tuple:
        return (0 if self.isUnary else 1, self.v1, self.v2 or "", -self.a1, -self.a2)

    def __str__(self) -> str:
        text = self.v1 if self.a1 > 0 else f"-{self.v1}"
        if not self.isUnary:
            text += f" + {self.v2}" if self.a2 > 0 else f" - {self.v2}"
        return text


@dataclass(frozen=True)
class OctConstraint:
    """term <= k."""

    term: OctTerm
    k: int

    def holds(self, valuation: Mapping[str, int]) -> bool:
        return self.term.evaluate(valuation) <= self.k

    @property
    def variables(self) -> List[str]:
        return list(self.term.variables)

    def sortKey(self) -> tuple:
        return (self.term.sortKey(), self.k)

    def __str__(self) -> str:
        return f"{self.term} <= {self.k}"


def enumerateOctTerms(names: Sequence[str]) -> List[OctTerm]:
    """All 2n + 4*C(n,2) octagonal terms over names."""
    if not names:
        raise ValueError("enumerateOctTerms() needs at least one variable")
    ordered = sorted(set(names))
    terms = []
    for name in ordered:
        terms.append(OctTerm(1, name))
        terms.append(OctTerm(-1, name))
    for i, first in enumerate(ordered):
        for second in ordered[i + 1:]:
            for a1, a2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                terms.append(OctTerm(a1, first, a2, second))
    return terms


def octTermFromLinear(coefficients: Mapping[str, int]) -> Optional[OctTerm]:
    """OctTerm for a linear form, or None if it is not octagonal."""
    items = sorted((v, c) for v, c in coefficients.items() if c != 0)
    if not items or len(items) > 2 or any(abs(c) != 1 for _, c in items):
        return None
    if len(items) == 1:
        return OctTerm(items[0][1], items[0][0])
    (v1, a1), (v2, a2) = items
    return OctTerm(a1, v1, a2, v2)


def linearForm(expr: sympy.Expr) -> Tuple[Dict[str, int], int]:
    """Split an integer linear sympy expression into ({var: coeff}, constant)."""
    expr = sympy.expand(expr)
    symbols = sorted(expr.free_symbols, key=lambda s: s.name)
    if not symbols:
        return {}, int(expr)
    poly = sympy.Poly(expr, *symbols)
    if poly.total_degree() > 1:
        raise ValueError(f"not linear: {expr}")
    coefficients: Dict[str, int] = {}
    constant = 0
    for monom, c in poly.terms():
        if not c.is_Integer:
            raise ValueError(f"non-integer coefficient in {expr}")
        if sum(monom) == 0:
            constant = int(c)
        else:
            coefficients[symbols[monom.index(1)].name] = int(c)
    return coefficients, constant


def octagonFromExpr(expr: Expr) -> OctConstraint:
    """OctConstraint from a comparison such as `r <= y - 1` or `2 <= a + y`."""
    if not (isinstance(expr, Binary) and expr.op in ("<", "<=", ">=", ">")):
        raise ValueError("expected an inequality")
    left, right = exprToSympy(expr.left), exprToSympy(expr.right)
    # Normalize to form <= bound.
    if expr.op in ("<", "<="):
        form = left - right
    else:
        form = right - left
    coefficients, constant = linearForm(form)
    bound = -constant - (1 if expr.op in ("<", ">") else 0)
    term = octTermFromLinear(coefficients)
    if term is None:
        raise ValueError(f"not an octagonal constraint: {form} <= 0")
    return OctConstraint(term, bound)


class Octagon:
    """Integer octagon as a difference-bound matrix over 2n signed nodes.

    Node 2i stands for +v_i and node 2i+1 for -v_i; entry m[p][q] bounds
    V_q - V_p.
    """

    def __init__(self, names: Iterable[str]):
        self._names: List[str] = sorted(set(names))
        self._index: Dict[str, int] = {name: i for i, name in enumerate(self._names)}
        size = 2 * len(self._names)
        self._m: List[List[float]] = [
            [0 if p == q else math.inf for q in range(size)] for p in range(size)
        ]
        self._closed = True

    @classmethod
    def fromConstraints(cls, constraints: Iterable[OctConstraint], names: Iterable[str] = ()) -> "Octagon":
        constraints = list(constraints)
        allNames = set(names)
        for constraint in constraints:
            allNames.update(constraint.term.variables)
        octagon = cls(allNames)
        for constraint in constraints:
            octagon.add(constraint)
        return octagon

    @property
    def names(self) -> List[str]:
        return list(self._names)

    def _node(self, coefficient: int, name: str) -> int:
        return 2 * self._index[name] + (0 if coefficient > 0 else 1)

    # Matrix cell and bound scale for term <= k.
    def _cell(self, term: OctTerm) -> Tuple[int, int, int]:
        p = self._node(term.a1, term.v1)
        if term.isUnary:
            return p ^ 1, p, 2
        q = self._node(-term.a2, term.v2)
        return q, p, 1

    def add(self, constraint: OctConstraint):
        for name in constraint.term.variables:
            if name not in self._index:
                raise KeyError(name)
        row, col, scale = self._cell(constraint.term)
        bound = scale * constraint.k
        if bound < self._m[row][col]:
            self._m[row][col] = bound
            self._m[col ^ 1][row ^ 1] = bound
            self._closed = False

    def close(self):
        """Tight closure: shortest paths, integer tightening, strengthening."""
        if self._closed:
            return
        m = self._m
        size = len(m)
        for k in range(size):
            mk = m[k]
            for i in range(size):
                mik = m[i][k]
                if mik == math.inf:
                    continue
                mi = m[i]
                for j in range(size):
                    candidate = mik + mk[j]
                    if candidate < mi[j]:
                        mi[j] = candidate
        for i in range(size):
            if m[i][i ^ 1] != math.inf:
                m[i][i ^ 1] = 2 * (m[i][i ^ 1] // 2)
        for i in range(size):
            for j in range(size):
                if m[i][i ^ 1] == math.inf or m[j ^ 1][j] == math.inf:
                    continue
                strengthened = m[i][i ^ 1] // 2 + m[j ^ 1][j] // 2
                if strengthened < m[i][j]:
                    m[i][j] = strengthened
        self._closed = True

    @property
    def isEmpty(self) -> bool:
        self.close()
        return any(self._m[i][i] < 0 for i in range(len(self._m))) or any(
            self._m[i][i ^ 1] + self._m[i ^ 1][i] < 0 for i in range(len(self._m))
        )

    def upper(self, term: OctTerm) -> Optional[int]:
        """Tightest implied k with term <= k, None if unbounded."""
        if any(name not in self._index for name in term.variables):
            return None
        self.close()
        row, col, scale = self._cell(term)
        bound = self._m[row][col]
        if bound == math.inf:
            return None
        return bound // scale

    def bounds(self, name: str) -> Tuple[Optional[int], Optional[int]]:
        upper = self.upper(OctTerm(1, name))
        lower = self.upper(OctTerm(-1, name))
        return (None if lower is None else -lower), upper

    def entails(self, constraint: OctConstraint) -> bool:
        if self.isEmpty:
            return True
        bound = self.upper(constraint.term)
        return bound is not None and bound <= constraint.k
