import unittest
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from pycegir.lang import parseExpression
from pycegir.linalg import nullspace, rank, rref
from pycegir.polynomial import (
    CONSTANT,
    Equality,
    Term,
    autoDegree,
    createTerms,
    equalityFromExpr,
    termCount,
)

x, y, q, r = sympy.symbols("x y q r")


class TestMethods(unittest.TestCase):
    def test_create_terms_counts(self):
        self.assertEqual(len(createTerms(["x", "y", "z"], 2)), 10)
        self.assertEqual(len(createTerms(["a", "b", "q", "r", "x", "y"], 2)), 28)
        self.assertEqual(termCount(3, 2), 10)
        self.assertEqual(termCount(6, 2), 28)

    def test_create_terms_order(self):
        terms = createTerms(["x", "y"], 2)
        self.assertEqual(
            [str(t) for t in terms], ["1", "x", "y", "x^2", "x*y", "y^2"]
        )
        self.assertEqual(terms[0], CONSTANT)
        with self.assertRaises(ValueError):
            createTerms([], 2)
        with self.assertRaises(ValueError):
            createTerms(["x"], 0)

    def test_auto_degree(self):
        self.assertEqual(autoDegree(4, 200), 5)
        self.assertEqual(autoDegree(12, 200), 2)
        self.assertEqual(autoDegree(6, 200), 3)
        # Never below 1, even when alpha is tiny.
        self.assertEqual(autoDegree(30, 5), 1)

    @given(st.integers(1, 6), st.integers(1, 4))
    def test_term_count_matches_enumeration(self, numVars, degree):
        names = [f"v{i}" for i in range(numVars)]
        terms = createTerms(names, degree)
        self.assertEqual(len(terms), termCount(numVars, degree))
        self.assertEqual(len(set(terms)), len(terms))

    def test_term_order(self):
        self.assertLess(Term.of({"y": 1}), Term.of({"x": 1}))
        self.assertLess(Term.of({"y": 2}), Term.of({"x": 1, "y": 1}))
        self.assertLess(Term.of({"x": 5}), Term.of({"y": 6}))
        self.assertLess(CONSTANT, Term.of({"z": 1}))

    def test_equality_canonical(self):
        e = Equality.fromSympy(x - q * y - r)
        self.assertEqual(e, Equality.fromSympy(-3 * x + 3 * q * y + 3 * r))
        self.assertEqual(e, Equality.fromSympy(sympy.Rational(1, 2) * (q * y + r - x)))
        self.assertEqual(e.leadingTerm, Term.of({"q": 1, "y": 1}))
        self.assertEqual(e.coefficient(e.leadingTerm), 1)
        self.assertEqual(str(e), "q*y + r == x")
        self.assertEqual(e, equalityFromExpr(parseExpression("x == q*y + r")))

    @given(
        st.lists(st.integers(-20, 20), min_size=3, max_size=3).filter(any),
        st.integers(-7, 7).filter(lambda k: k != 0),
    )
    def test_canonical_under_scaling(self, coefficients, k):
        terms = [CONSTANT, Term.of({"x": 1}), Term.of({"x": 1, "y": 1})]
        e = Equality.fromVector(coefficients, terms)
        scaled = Equality.fromVector([Fraction(c * k, 3) for c in coefficients], terms)
        self.assertEqual(e, scaled)
        self.assertGreater(e.coefficients[0][1], 0)

    def test_zero_equality(self):
        with self.assertRaises(ValueError):
            Equality.fromCoefficients({CONSTANT: 0})

    def test_holds(self):
        e = Equality.fromSympy(x - q * y - r)
        self.assertTrue(e.holds({"x": 15, "q": 7, "y": 2, "r": 1}))
        self.assertFalse(e.holds({"x": 15, "q": 7, "y": 2, "r": 2}))


class TestLinearAlgebra(unittest.TestCase):
    def test_rref(self):
        rows, pivots = rref([[2, 4, 6], [1, 2, 3], [0, 1, 1]], 3)
        self.assertEqual(pivots, (0, 1))
        self.assertEqual(rows, [[1, 0, 1], [0, 1, 1]])
        self.assertEqual(rank([[2, 4, 6], [1, 2, 3]], 3), 1)
        self.assertEqual(rref([], 3), ([], ()))

    def test_nullspace(self):
        rows = [[1, 1, 0], [0, 1, 1]]
        basis = nullspace(rows, 3)
        self.assertEqual(basis, [[1, -1, 1]])
        for vector in basis:
            for row in rows:
                self.assertEqual(sum(a * b for a, b in zip(row, vector)), 0)

    def test_exact_rationals(self):
        basis = nullspace([[3, 7]], 2)
        self.assertEqual(basis, [[sympy.Rational(-7, 3), 1]])
