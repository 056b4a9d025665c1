from typing import Optional, Literal, List

from pydantic import BaseModel, PositiveInt, PositiveFloat, conint


VerifyMode = Literal["exhaustive", "random"]

OutputFormat = Literal["text", "json"]


class StepBudget(BaseModel):
    # Maximum number of interpreter steps per run.
    maxSteps: PositiveInt = 10**6


class VerifyBudget(BaseModel):
    # Search backend. None selects exhaustive enumeration when the input box
    # holds at most exhaustiveLimit points, random sampling otherwise.
    mode: Optional[VerifyMode] = None
    # Maximum number of inputs tried per call. None means the whole box in
    # exhaustive mode and randomSamples in random mode.
    maxInputs: Optional[PositiveInt] = None
    # Wall-clock limit per call, in seconds.
    timeLimit: Optional[PositiveFloat] = None
    # Seed of the random backend.
    seed: conint(ge=0) = 0
    # Fresh counterexample inputs collected per call.
    maxCex: PositiveInt = 10
    exhaustiveLimit: PositiveInt = 10**6
    randomSamples: PositiveInt = 10**5
    # Sampling window for inputs declared without a range.
    unboundedSpan: PositiveInt = 100


class InferenceOptions(BaseModel):
    # Term cap used to pick the template degree automatically.
    alpha: PositiveInt = 200
    # Explicit template degree, overrides alpha.
    degree: Optional[PositiveInt] = None
    # Octagonal bounds are searched within [-octRange, octRange].
    octRange: PositiveInt = 10
    verify: VerifyBudget = VerifyBudget()
    stepBudget: StepBudget = StepBudget()
    # Traces kept per location per run.
    traceCap: PositiveInt = 10**4
    seed: conint(ge=0) = 0
    # Restrict the analysis to these locations.
    locations: Optional[List[str]] = None
    format: OutputFormat = "text"
    # Mimic C 64-bit wrap-around in the interpreter.
    wrap64: bool = False
    # Cap on refinement rounds of the equality loop.
    maxIterations: PositiveInt = 50
    # Inputs gathered before the octagon search when no traces are supplied.
    octInitialInputs: PositiveInt = 20
    # Emit wall-clock timings in reports.
    timings: bool = False
    # Concurrent corpus entries.
    jobs: PositiveInt = 1
    # Trace subsets sampled when extracting complexity bounds.
    rootSubsets: PositiveInt = 64
    # Degree of the root candidates t = g(inputs).
    rootDegree: PositiveInt = 2
