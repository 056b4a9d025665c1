from typing import Dict, List, Mapping, Sequence, Tuple, Union, Iterable

import functools
import itertools
import math
from dataclasses import dataclass

import sympy

from .lang.nodes import Expr, Num, BoolLit, Var, Unary, Binary


Number = Union[int, sympy.Rational]


@functools.total_ordering
@dataclass(frozen=True)
class Term:
    """A monomial; exponents are kept sorted by variable name."""

    exponents: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, powers: Mapping[str, int]) -> "Term":
        return cls(tuple(sorted((v, e) for v, e in powers.items() if e > 0)))

    @classmethod
    def product(cls, names: Iterable[str]) -> "Term":
        powers: Dict[str, int] = {}
        for name in names:
            powers[name] = powers.get(name, 0) + 1
        return cls.of(powers)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.exponents)

    @property
    def isConstant(self) -> bool:
        return not self.exponents

    def power(self, name: str) -> int:
        for v, e in self.exponents:
            if v == name:
                return e
        return 0

    def evaluate(self, valuation: Mapping[str, int]) -> int:
        value = 1
        for v, e in self.exponents:
            value *= valuation[v] ** e
        return value

    def __mul__(self, other: "Term") -> "Term":
        powers = dict(self.exponents)
        for v, e in other.exponents:
            powers[v] = powers.get(v, 0) + e
        return Term.of(powers)

    # Graded lexicographic order, alphabetically first variable most
    # significant: x > y, x*y > y^2, and any degree-2 term > any degree-1 term.
    def __lt__(self, other: "Term") -> bool:
        if not isinstance(other, Term):
            return NotImplemented
        if self.degree != other.degree:
            return self.degree < other.degree
        for name in sorted(set(self.variables) | set(other.variables)):
            mine, theirs = self.power(name), other.power(name)
            if mine != theirs:
                return mine < theirs
        return False

    def toSympy(self) -> sympy.Expr:
        return sympy.Mul(*[sympy.Symbol(v) ** e for v, e in self.exponents])

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exponents)


CONSTANT = Term()


def createTerms(names: Sequence[str], degree: int) -> List[Term]:
    """All monomials over names up to degree, by ascending degree."""
    if not names:
        raise ValueError("createTerms() needs at least one variable")
    if degree < 1:
        raise ValueError("createTerms() needs degree >= 1")
    terms = [CONSTANT]
    for d in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(names, d):
            terms.append(Term.product(combo))
    return terms


def termCount(numVars: int, degree: int) -> int:
    return math.comb(numVars + degree, degree)


def autoDegree(numVars: int, alpha: int) -> int:
    """Largest degree whose term count stays within alpha, at least 1."""
    if numVars < 1:
        raise ValueError("autoDegree() needs at least one variable")
    degree = 1
    while termCount(numVars, degree + 1) <= alpha:
        degree += 1
    return degree


def _toRational(value) -> sympy.Rational:
    if isinstance(value, sympy.Rational):
        return value
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if numerator is not None and denominator is not None:
        return sympy.Rational(int(numerator), int(denominator))
    return sympy.Rational(value)


@dataclass(frozen=True)
class Equality:
    """Polynomial relation sum(c * term) == 0 in canonical form.

    Coefficients are coprime integers, the leading (graded-lex greatest) term
    has a positive coefficient, and terms are stored greatest first, so two
    equalities are equal iff their coefficient maps are.
    """

    coefficients: Tuple[Tuple[Term, int], ...]

    @classmethod
    def fromCoefficients(cls, coefficients: Mapping[Term, Number]) -> "Equality":
        rationals = {
            term: _toRational(c) for term, c in coefficients.items() if c != 0
        }
        if not rationals:
            raise ValueError("zero polynomial is not an equality")
        scale = functools.reduce(sympy.ilcm, (c.q for c in rationals.values()), 1)
        integers = {term: int(c * scale) for term, c in rationals.items()}
        content = functools.reduce(math.gcd, (abs(c) for c in integers.values()))
        ordered = sorted(integers.items(), key=lambda item: item[0], reverse=True)
        sign = 1 if ordered[0][1] > 0 else -1
        return cls(tuple((term, sign * c // content) for term, c in ordered))

    @classmethod
    def fromVector(cls, vector: Sequence[Number], terms: Sequence[Term]) -> "Equality":
        if len(vector) != len(terms):
            raise ValueError("vector and terms differ in length")
        coefficients: Dict[Term, Number] = {}
        for term, c in zip(terms, vector):
            if c != 0:
                coefficients[term] = coefficients.get(term, 0) + c
        return cls.fromCoefficients(coefficients)

    @classmethod
    def fromSympy(cls, expr: sympy.Expr) -> "Equality":
        expr = sympy.expand(expr)
        symbols = sorted(expr.free_symbols, key=lambda s: s.name)
        if not symbols:
            return cls.fromCoefficients({CONSTANT: sympy.Rational(expr)})
        poly = sympy.Poly(expr, *symbols)
        coefficients = {}
        for monom, c in poly.terms():
            term = Term.of({s.name: e for s, e in zip(symbols, monom)})
            coefficients[term] = c
        return cls.fromCoefficients(coefficients)

    @property
    def asDict(self) -> Dict[Term, int]:
        return dict(self.coefficients)

    @property
    def terms(self) -> List[Term]:
        return [term for term, _ in self.coefficients]

    @property
    def leadingTerm(self) -> Term:
        return self.coefficients[0][0]

    @property
    def degree(self) -> int:
        return max(term.degree for term, _ in self.coefficients)

    @property
    def variables(self) -> List[str]:
        return sorted({v for term, _ in self.coefficients for v in term.variables})

    def coefficient(self, term: Term) -> int:
        return self.asDict.get(term, 0)

    def evaluate(self, valuation: Mapping[str, int]) -> int:
        return sum(c * term.evaluate(valuation) for term, c in self.coefficients)

    def holds(self, valuation: Mapping[str, int]) -> bool:
        return self.evaluate(valuation) == 0

    def times(self, term: Term) -> Dict[Term, int]:
        return {t * term: c for t, c in self.coefficients}

    def toSympy(self) -> sympy.Expr:
        return sympy.Add(*[c * term.toSympy() for term, c in self.coefficients])

    def __str__(self) -> str:
        left = [(t, c) for t, c in self.coefficients if c > 0]
        right = [(t, -c) for t, c in self.coefficients if c < 0]
        return f"{_formatSum(left)} == {_formatSum(right)}"


def _formatSum(items: List[Tuple[Term, int]]) -> str:
    if not items:
        return "0"
    parts = []
    for term, c in items:
        if term.isConstant:
            parts.append(str(c))
        elif c == 1:
            parts.append(str(term))
        else:
            parts.append(f"{c}*{term}")
    return " + ".join(parts)


def exprToSympy(expr: Expr) -> sympy.Expr:
    """Convert an integer polynomial expression (+, -, *) to sympy."""
    if isinstance(expr, Num):
        return sympy.Integer(expr.value)
    if isinstance(expr, Var):
        return sympy.Symbol(expr.name)
    if isinstance(expr, Unary) and expr.op == "-":
        return -exprToSympy(expr.operand)
    if isinstance(expr, Binary) and expr.op in ("+", "-", "*"):
        left, right = exprToSympy(expr.left), exprToSympy(expr.right)
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        return left * right
    if isinstance(expr, BoolLit):
        raise ValueError("boolean literal in polynomial expression")
    raise ValueError(f"not a polynomial expression: {expr!r}")


def equalityFromExpr(expr: Expr) -> Equality:
    """Equality from `lhs == rhs`."""
    if not (isinstance(expr, Binary) and expr.op == "=="):
        raise ValueError("expected an `lhs == rhs` relation")
    return Equality.fromSympy(exprToSympy(expr.left) - exprToSympy(expr.right))
