import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

import sympy

from pycegir.cli import main
from pycegir.corpus import SIDECAR_SUFFIX, listCorpus, loadSidecar
from pycegir.engine import InvariantEngine, analyzeComplexity, inferFromTraces
from pycegir.errors import TraceFormatError, UnknownLocationError
from pycegir.lang import parseExpression, parseProgram
from pycegir.models.options import InferenceOptions
from pycegir.models.report import Report
from pycegir.octagon import octagonFromExpr
from pycegir.polynomial import Equality
from pycegir.simplify import isImpliedOct
from pycegir.traces import readTraces

from . import CORPUS, loadCorpusProgram, corpusOptions

a, b, q, r, x, y = sympy.symbols("a b q r x y")


def _traces(text: str):
    return readTraces(io.StringIO(text))


class TestMethods(unittest.TestCase):
    def test_cohendiv(self):
        engine = InvariantEngine(loadCorpusProgram("cohendiv"), corpusOptions("cohendiv"))
        seen = []
        engine.observer.on("location", lambda report: seen.append(report.location))
        report = engine.run()
        self.assertEqual(seen, ["L1", "L2"])
        self.assertFalse(report.failed)

        first = engine.invariants["L1"]
        self.assertEqual(
            set(first.equalities),
            {Equality.fromSympy(x - q * y - r), Equality.fromSympy(b - a * y)},
        )
        for expectation in ("y <= b", "b <= r", "r <= x", "a <= b", "2 <= a + y"):
            self.assertTrue(
                isImpliedOct(first, octagonFromExpr(parseExpression(expectation))), expectation
            )

        second = engine.invariants["L2"]
        self.assertIn(Equality.fromSympy(x - q * y - r), second.equalities)
        for expectation in ("0 <= r", "r <= y - 1", "r <= x", "1 <= q + r"):
            self.assertTrue(
                isImpliedOct(second, octagonFromExpr(parseExpression(expectation))), expectation
            )

        l1 = report.locations[0]
        self.assertEqual(l1.variables, ["a", "b", "q", "r", "x", "y"])
        self.assertEqual(l1.degree, 2)
        self.assertTrue(l1.acceptedOnBox)
        self.assertGreater(l1.stats.calls, 0)
        self.assertGreater(l1.traces, 0)

    def test_location_filter(self):
        program = loadCorpusProgram("doubling")
        report = InvariantEngine(program, InferenceOptions(locations=["L2"])).run()
        self.assertEqual([loc.location for loc in report.locations], ["L2"])
        with self.assertRaises(UnknownLocationError):
            InvariantEngine(program, InferenceOptions(locations=["L9"])).run()

    def test_constant(self):
        report = InvariantEngine(loadCorpusProgram("const")).run()
        self.assertEqual(report.locations[0].equalities, ["x == 5"])
        self.assertEqual(report.locations[0].octagons, [])

    def test_unreachable(self):
        program = parseProgram("inputs n in [0, 3];\nx = 0;\nif (n > 5) { x = 1;\n[L] }\n")
        report = InvariantEngine(program).run()
        self.assertEqual(report.locations[0].status, "unreachable")
        self.assertTrue(report.failed)

    def test_no_locations(self):
        program = parseProgram("inputs n in [0, 3];\nx = n + 1;\n")
        report = InvariantEngine(program).run()
        self.assertEqual(report.locations, [])
        self.assertFalse(report.failed)
        self.assertFalse(inferFromTraces(_traces("loc,x\n")).failed)
        self.assertFalse(Report(version="0", program="empty").failed)

    def test_recorded_traces(self):
        engine = InvariantEngine(loadCorpusProgram("doubling"))
        engine.run()
        traces = engine.recordedTraces()
        self.assertEqual(traces.locations, ["L1", "L2"])
        self.assertEqual(traces.count("L2"), 21)

    def test_json_deterministic(self):
        for path in listCorpus(CORPUS):
            name = path.stem
            with self.subTest(entry=name):
                program = loadCorpusProgram(name)
                sidecar = loadSidecar(CORPUS / f"{name}{SIDECAR_SUFFIX}")

                def render() -> str:
                    options = corpusOptions(name, seed=3)
                    if sidecar.kind == "complexity":
                        return analyzeComplexity(program, options)[0].toJson()
                    return InvariantEngine(program, options).run().toJson()

                first = render()
                self.assertEqual(first, render())
                payload = json.loads(first)
                self.assertEqual(payload["schemaVersion"], 1)
                self.assertEqual(payload["seed"], 3)
                self.assertEqual(payload["kind"], sidecar.kind)
                self.assertNotIn("timings", payload)

    def test_timings(self):
        report = InvariantEngine(
            loadCorpusProgram("const"), InferenceOptions(timings=True)
        ).run()
        self.assertIn("total", report.timings)
        self.assertIn("equalities", report.locations[0].timings)

    def test_traces_mode(self):
        rows = "".join(f"L,{i},{2 * i + 1}\n" for i in range(10))
        report = inferFromTraces(_traces("loc,x,y\n" + rows), InferenceOptions(degree=1))
        location = report.locations[0]
        self.assertEqual(report.kind, "traces")
        self.assertTrue(location.unverified)
        self.assertEqual(location.equalities, [str(Equality.fromSympy(y - 2 * x - 1))])

    def test_traces_too_few(self):
        report = inferFromTraces(_traces("loc,x,y\nL,1,2\n"))
        self.assertEqual(report.locations[0].status, "notEnoughTraces")
        self.assertEqual(report.locations[0].equalities, [])

    def test_traces_header_mismatch(self):
        with self.assertRaises(TraceFormatError):
            _traces("loc,x,y\nL,1,2\nloc,x,z\nL,1,3\n")

    def test_complexity(self):
        report, bounds = analyzeComplexity(loadCorpusProgram("triple"))
        self.assertEqual(report.kind, "complexity")
        self.assertTrue(report.complexity.verified)
        self.assertEqual(report.complexity.tDegree, 3)
        self.assertEqual(len(bounds.bounds), 3)
        self.assertFalse(report.failed)


class TestCli(unittest.TestCase):
    def invoke(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            code = main([str(arg) for arg in argv])
        return code, stdout.getvalue(), stderr.getvalue()

    def write(self, directory: str, name: str, text: str) -> Path:
        path = Path(directory) / name
        path.write_text(text)
        return path

    def test_infer_json(self):
        code, out, _ = self.invoke("infer", CORPUS / "doubling.mpl", "--format", "json")
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["program"], "doubling")
        self.assertEqual([loc["location"] for loc in payload["locations"]], ["L1", "L2"])

    def test_infer_text(self):
        code, out, _ = self.invoke("infer", CORPUS / "const.mpl")
        self.assertEqual(code, 0)
        self.assertIn("x == 5", out)

    def test_dump_traces(self):
        with tempfile.TemporaryDirectory() as directory:
            dump = Path(directory) / "traces.csv"
            code, _, _ = self.invoke("infer", CORPUS / "doubling.mpl", "--dump-traces", dump)
            self.assertEqual(code, 0)
            with open(dump, newline="") as stream:
                self.assertEqual(readTraces(stream).count("L2"), 21)

    def test_usage_errors(self):
        code, _, err = self.invoke("infer", "no/such/file.mpl")
        self.assertEqual(code, 2)
        self.assertIn("no such file", err)
        code, _, _ = self.invoke("infer", CORPUS / "doubling.mpl", "--locations", "L9")
        self.assertEqual(code, 2)
        code, _, _ = self.invoke("infer", CORPUS / "doubling.mpl", "--oct-range", "0")
        self.assertEqual(code, 2)
        with self.assertRaises(SystemExit):
            self.invoke("infer")

    def test_exhaustive_unbounded(self):
        with tempfile.TemporaryDirectory() as directory:
            path = self.write(directory, "free.mpl", "inputs n;\nx = n;\n[L]\n")
            code, _, _ = self.invoke("infer", path, "--mode", "exhaustive")
            self.assertEqual(code, 2)

    def test_analysis_failures(self):
        with tempfile.TemporaryDirectory() as directory:
            bad = self.write(directory, "bad.mpl", "x = ;\n")
            code, _, err = self.invoke("infer", bad)
            self.assertEqual(code, 1)
            self.assertTrue(err.startswith("pycegir:"))
            never = self.write(
                directory, "never.mpl", "inputs n in [0, 3];\nif (n > 5) { x = 1;\n[L] }\n"
            )
            code, out, _ = self.invoke("infer", never)
            self.assertEqual(code, 1)
            self.assertIn("unreachable", out)

    def test_nothing_to_analyse(self):
        with tempfile.TemporaryDirectory() as directory:
            plain = self.write(directory, "plain.mpl", "inputs n in [0, 3];\nx = n;\n")
            code, _, _ = self.invoke("infer", plain, "--format", "json")
            self.assertEqual(code, 0)
            header = self.write(directory, "header.csv", "loc,x\n")
            code, _, _ = self.invoke("traces", header)
            self.assertEqual(code, 0)

    def test_traces_command(self):
        with tempfile.TemporaryDirectory() as directory:
            rows = "".join(f"L,{i},{3 * i}\n" for i in range(12))
            path = self.write(directory, "line.csv", "loc,x,y\n" + rows)
            code, out, _ = self.invoke("traces", path, "--degree", "1", "--format", "json")
            self.assertEqual(code, 0)
            self.assertTrue(json.loads(out)["locations"][0]["unverified"])
            broken = self.write(directory, "broken.csv", "L,1,2\n")
            code, _, _ = self.invoke("traces", broken)
            self.assertEqual(code, 1)

    def test_complexity_command(self):
        code, out, _ = self.invoke("complexity", CORPUS / "triple.mpl")
        self.assertEqual(code, 0)
        self.assertIn("bounds:", out)
