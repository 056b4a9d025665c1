import unittest

from hypothesis import given, settings, strategies as st

from pycegir.errors import ParseError, UnknownLocationError, InstrumentationError
from pycegir.lang import (
    parseProgram,
    parseExpression,
    extractVars,
    formatProgram,
    formatExpr,
    instrumentCounter,
    exitLocation,
)
from pycegir.lang.nodes import Assign, Binary, Num, Var, While, walkStmts

from . import loadCorpusProgram
from .fake_programs import generateLoopProgram, generatePlantedProgram


class TestMethods(unittest.TestCase):
    def test_parse_cohendiv(self):
        program = loadCorpusProgram("cohendiv")
        self.assertEqual(program.name, "cohendiv")
        self.assertEqual(program.locations, ["L1", "L2"])
        self.assertEqual(program.inputNames, ["x", "y"])
        self.assertEqual((program.inputs[0].low, program.inputs[0].high), (1, 30))
        self.assertEqual(program.boxSize, 900)

    def test_extract_vars(self):
        program = loadCorpusProgram("cohendiv")
        self.assertEqual(extractVars(program, "L1"), ["a", "b", "q", "r", "x", "y"])
        # a and b are assigned inside the outer loop only.
        self.assertEqual(extractVars(program, "L2"), ["q", "r", "x", "y"])
        with self.assertRaises(UnknownLocationError):
            extractVars(program, "L9")

    def test_branch_scope(self):
        program = parseProgram(
            "inputs n in [0, 3];\n"
            "if (n > 1) { a = 1; b = 2; } else { a = 0; }\n"
            "[L]\n"
        )
        self.assertEqual(extractVars(program, "L"), ["a", "n"])

    def test_duplicate_location(self):
        with self.assertRaises(ParseError):
            parseProgram("x = 1;\n[L]\nx = 2;\n[L]\n")

    def test_undeclared_variable(self):
        with self.assertRaises(ParseError) as cm:
            parseProgram("inputs n;\nx = y + 1;\n")
        self.assertEqual(cm.exception.line, 2)

    def test_read_after_loop_local(self):
        with self.assertRaises(ParseError):
            parseProgram("inputs n in [0, 3];\nwhile (n > 0) { k = 1; n--; }\nx = k;\n")

    def test_syntax_errors(self):
        for source in ["x = ;", "x = 1 < 2 < 3;", "while (x) {", "inputs x in [3, 1];"]:
            with self.assertRaises(ParseError, msg=source):
                parseProgram(source)

    def test_sugar(self):
        program = parseProgram("inputs n;\nx = 0;\nx++;\nx += n;\nx *= 2;\n[L]\n")
        stmts = program.body.stmts
        self.assertEqual(stmts[1], Assign("x", Binary("+", Var("x"), Num(1))))
        self.assertEqual(stmts[2], Assign("x", Binary("+", Var("x"), Var("n"))))
        self.assertEqual(stmts[3], Assign("x", Binary("*", Var("x"), Num(2))))

    def test_expression_precedence(self):
        self.assertEqual(formatExpr(parseExpression("a + b * c")), "a + b * c")
        self.assertEqual(formatExpr(parseExpression("(a + b) * c")), "(a + b) * c")
        self.assertEqual(formatExpr(parseExpression("a - (b - c)")), "a - (b - c)")
        self.assertEqual(
            parseExpression("x == q*y + r"),
            Binary("==", Var("x"), Binary("+", Binary("*", Var("q"), Var("y")), Var("r"))),
        )

    def test_format_round_trip_corpus(self):
        for name in ["cohendiv", "dijkstra", "triple", "branchstep"]:
            program = loadCorpusProgram(name)
            again = parseProgram(formatProgram(program))
            self.assertEqual(again.body, program.body, msg=name)
            self.assertEqual(again.scopes, program.scopes, msg=name)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=10**6))
    def test_format_round_trip_generated(self, seed):
        source = generateLoopProgram(seed) if seed % 2 else generatePlantedProgram(seed)[0]
        program = parseProgram(source)
        again = parseProgram(formatProgram(program))
        self.assertEqual(again.body, program.body)
        self.assertEqual(again.inputs, program.inputs)

    def test_instrument_triple(self):
        program = loadCorpusProgram("triple")
        instrumented = instrumentCounter(program)
        self.assertEqual(exitLocation(instrumented), "L")
        self.assertIn("t", extractVars(instrumented, "L"))
        loops = [s for s in walkStmts(instrumented.body) if isinstance(s, While)]
        self.assertEqual(len(loops), 3)
        for loop in loops:
            self.assertEqual(loop.body.stmts[0], Assign("t", Binary("+", Var("t"), Num(1))))

    def test_instrument_adds_exit(self):
        program = parseProgram("inputs n in [0, 3];\ni = 0;\nwhile (i < n) { i++; }\n")
        instrumented = instrumentCounter(program)
        self.assertEqual(exitLocation(instrumented), "Lexit")
        self.assertEqual(extractVars(instrumented, "Lexit"), ["i", "n", "t"])

    def test_instrument_errors(self):
        with self.assertRaises(InstrumentationError):
            instrumentCounter(parseProgram("inputs n;\nx = n;\n"))
        with self.assertRaises(InstrumentationError):
            instrumentCounter(loadCorpusProgram("sqrt1"))
