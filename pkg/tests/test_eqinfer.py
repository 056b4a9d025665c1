import time
import unittest

import sympy

from pycegir.eqinfer import (
    EqSystem,
    extractEqts,
    inferEqualities,
    instantiate,
    pruneImplied,
    solve,
)
from pycegir.errors import Error
from pycegir.lang import parseProgram
from pycegir.models.options import InferenceOptions, VerifyBudget
from pycegir.polynomial import Equality, createTerms
from pycegir.simplify import isImpliedEq
from pycegir.traces import Trace

from . import loadCorpusProgram, corpusOptions
from .fake_programs import boxTraces, generatePlantedProgram

a, b, i, j, n, q, r, s, t, x, y = sympy.symbols("a b i j n q r s t x y")


def _line(*points):
    return [Trace("L", ("x", "y"), point) for point in points]


class TestSystem(unittest.TestCase):
    def test_instantiate(self):
        terms = createTerms(["x", "y"], 2)
        rows = instantiate(terms, _line((2, 3)))
        # 1, x, y, x^2, x*y, y^2
        self.assertEqual(rows, [[1, 2, 3, 4, 6, 9]])

    def test_solve_line(self):
        terms = createTerms(["x", "y"], 1)
        system = EqSystem(terms)
        system.extend(_line((0, 1), (1, 3), (2, 5)))
        self.assertEqual(system.rank, 2)
        equalities = extractEqts(solve(system), terms)
        self.assertEqual(equalities, [Equality.fromSympy(y - 2 * x - 1)])

    def test_solve_full_rank(self):
        terms = createTerms(["x", "y"], 1)
        system = EqSystem(terms)
        system.extend(_line((0, 1), (1, 3), (2, 4)))
        self.assertEqual(solve(system), [])

    def test_errors(self):
        terms = createTerms(["x", "y"], 1)
        with self.assertRaises(Error):
            solve(EqSystem(terms))
        with self.assertRaises(Error):
            extractEqts([[0, 0, 0]], terms)
        with self.assertRaises(Error):
            extractEqts([[1, 0]], terms)
        with self.assertRaises(Error):
            instantiate(createTerms(["x", "z"], 1), _line((1, 1)))

    def test_prune_multiples(self):
        line = Equality.fromSympy(j - 2 * i)
        multiples = [
            Equality.fromSympy(sympy.expand(i * (j - 2 * i))),
            Equality.fromSympy(sympy.expand(j**2 - 4 * i**2)),
            Equality.fromSympy(sympy.expand(n**2 * (j - 2 * i))),
        ]
        self.assertEqual(pruneImplied(multiples + [line], 3), [line])
        circle = Equality.fromSympy(i**2 + j**2 - n)
        self.assertEqual(set(pruneImplied([circle, line], 2)), {circle, line})
        self.assertEqual(pruneImplied([], 2), [])


class TestMethods(unittest.TestCase):
    def test_cohendiv(self):
        program = loadCorpusProgram("cohendiv")
        result = inferEqualities(program, "L1", InferenceOptions(degree=2))
        self.assertEqual(result.status, "ok")
        self.assertEqual(result.degree, 2)
        self.assertEqual(result.terms, 28)
        self.assertEqual(
            set(result.equalities),
            {Equality.fromSympy(x - q * y - r), Equality.fromSympy(b - a * y)},
        )
        self.assertTrue(result.acceptedOnBox)

    def test_sqrt1(self):
        program = loadCorpusProgram("sqrt1")
        result = inferEqualities(program, "L", corpusOptions("sqrt1"))
        self.assertEqual(result.status, "ok")
        for expected in (t - 2 * a - 1, t * t + 2 * t + 1 - 4 * s):
            self.assertTrue(
                isImpliedEq(result.equalities, Equality.fromSympy(expected), 2), expected
            )

    def test_planted(self):
        for seed in range(10):
            source, planted, degree = generatePlantedProgram(seed)
            program = parseProgram(source)
            result = inferEqualities(program, "L", InferenceOptions(degree=degree))
            self.assertEqual(result.equalities, [planted], f"seed {seed}")
            for trace in boxTraces(program, "L"):
                self.assertTrue(planted.holds(trace.valuation), f"seed {seed}: {trace}")

    def test_variable_subset(self):
        program = loadCorpusProgram("cohendiv")
        result = inferEqualities(
            program, "L1", InferenceOptions(degree=2), variables=["a", "b", "y"]
        )
        self.assertEqual(result.equalities, [Equality.fromSympy(b - a * y)])
        with self.assertRaises(Error):
            inferEqualities(program, "L1", variables=["nope"])

    def test_unreachable(self):
        program = parseProgram(
            "inputs n in [0, 3];\nx = 0;\nif (n > 5) { x = 1;\n[L] }\n"
        )
        result = inferEqualities(program, "L")
        self.assertEqual(result.status, "unreachable")
        self.assertEqual(result.equalities, [])

    def test_not_enough_traces(self):
        program = parseProgram("inputs n;\nx = 2 * n;\n[L]\n")
        options = InferenceOptions(degree=3, verify=VerifyBudget(maxInputs=5))
        result = inferEqualities(program, "L", options)
        self.assertEqual(result.status, "notEnoughTraces")

    def test_constant(self):
        program = loadCorpusProgram("const")
        result = inferEqualities(program, "L")
        self.assertEqual(result.status, "ok")
        self.assertEqual(result.degree, 1)
        self.assertEqual(result.equalities, [Equality.fromSympy(x - 5)])
        self.assertEqual(str(result.equalities[0]), "x == 5")

    def test_disjunction(self):
        program = parseProgram(
            "inputs n in [0, 9];\nif (n % 2 == 0) { x = 2; } else { x = -2; }\n[L]\n"
        )
        result = inferEqualities(program, "L")
        self.assertEqual(result.status, "ok")
        self.assertEqual(result.equalities, [Equality.fromSympy(x**2 - 4)])
        self.assertEqual(str(result.equalities[0]), "x^2 == 4")

    def test_default_degree_runtime(self):
        start = time.perf_counter()
        result = inferEqualities(loadCorpusProgram("doubling"), "L1")
        elapsed = time.perf_counter() - start
        self.assertEqual(result.degree, 8)
        self.assertEqual(result.equalities, [Equality.fromSympy(j - 2 * i)])
        self.assertLess(elapsed, 60)
