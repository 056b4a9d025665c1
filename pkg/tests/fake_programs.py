from typing import List, Tuple

import itertools
import random

import sympy

from pycegir.execution import run
from pycegir.models.program import Program
from pycegir.polynomial import Equality
from pycegir.traces import Input, Trace


def _affine(rng: random.Random, names: List[str]) -> str:
    parts = [str(rng.randint(-3, 3))]
    for name in names:
        coefficient = rng.randint(-2, 2)
        if coefficient:
            parts.append(f"{coefficient} * {name}")
    return " + ".join(parts)


def generateLoopProgram(seed: int) -> str:
    """Straight-line setup followed by a single counting loop."""
    rng = random.Random(seed)
    low = rng.randint(-3, 0)
    lines = [
        f"program random{seed};",
        f"inputs a in [{low}, {low + rng.randint(2, 5)}], b in [-2, {rng.randint(0, 3)}];",
        f"x = {_affine(rng, ['a', 'b'])};",
        f"y = {_affine(rng, ['a', 'x'])};",
        "i = 0;",
    ]
    if rng.random() < 0.5:
        lines.append("if (a > b) { x = x - 1; } else { y = y + 1; }")
    lines += [
        "while [L] (i < a) {",
        f"  x = x + {rng.randint(-2, 2)};",
        f"  y = y + {rng.choice(['1', 'i', '-1', 'b'])};",
        "  i++;",
        "}",
        "[Lexit]",
    ]
    return "\n".join(lines) + "\n"


def _source(poly: sympy.Poly) -> str:
    # Integer polynomial in i written with products only.
    parts = []
    for (k,), c in poly.terms():
        factors = [str(c)] + ["i"] * k
        parts.append(" * ".join(factors))
    return " + ".join(f"({p})" for p in parts) if parts else "0"


def generatePlantedProgram(seed: int) -> Tuple[str, Equality, int]:
    """A loop keeping s == P(i) for a random integer P of degree 2 to 4.

    n reaches 24 so that more than deg(P)**2 values of i are seen for at
    least deg(P) + 1 values of n; fewer let box-only equalities through.

    Returns the source, the planted equality and its degree.
    """
    rng = random.Random(seed)
    degree = 2 + seed % 3
    i = sympy.Symbol("i")
    coefficients = [rng.randint(-3, 3) for _ in range(degree)] + [rng.choice([-2, -1, 1, 2])]
    P = sum(c * i**k for k, c in enumerate(coefficients))
    step = sympy.Poly(sympy.expand(P - P.subs(i, i - 1)), i)
    source = "\n".join(
        [
            f"program planted{seed};",
            "inputs n in [0, 24];",
            "i = 0;",
            f"s = {coefficients[0]};",
            "while [L] (i < n) {",
            "  i++;",
            f"  s = s + {_source(step)};",
            "}",
        ]
    )
    planted = Equality.fromSympy(sympy.Symbol("s") - P)
    return source + "\n", planted, degree


def boxTraces(program: Program, location: str) -> List[Trace]:
    """Every trace at location over the whole input box, run independently."""
    traces: List[Trace] = []
    ranges = [range(decl.low, decl.high + 1) for decl in program.inputs]
    for values in itertools.product(*ranges):
        result = run(program, Input(tuple(program.inputNames), values))
        if result.ok:
            traces.extend(result.traces.at(location))
    return traces
