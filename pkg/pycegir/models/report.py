from typing import Optional, Dict, List, Literal, Any

from pydantic import BaseModel


SCHEMA_VERSION = 1

LocationStatus = Literal["ok", "unreachable", "notEnoughTraces"]

ReportKind = Literal["infer", "traces", "complexity"]


class VerifierStats(BaseModel):
    # Verifier calls made for the location, bound checks included.
    calls: int = 0
    # Verifier calls made by bound searches.
    boundChecks: int = 0
    # Counterexample inputs returned.
    cexInputs: int = 0
    # Fresh program runs.
    runs: int = 0


class LocationReport(BaseModel):
    location: str
    status: LocationStatus = "ok"
    variables: List[str] = []
    # Template degree of the equality search.
    degree: Optional[int] = None
    equalities: List[str] = []
    octagons: List[str] = []
    # Candidates were never checked by the verifier (trace-only mode).
    unverified: bool = False
    # The verifier swept the whole input box with no counterexample.
    acceptedOnBox: bool = False
    iterations: int = 0
    traces: int = 0
    stats: VerifierStats = VerifierStats()
    timings: Optional[Dict[str, float]] = None


class ComplexityReport(BaseModel):
    location: str
    relation: str
    tDegree: int
    bounds: List[str] = []
    residual: Optional[str] = None
    # Factors times residual reproduce the relation.
    verified: bool = False
    # Octagonal bounds involving the counter.
    counterOctagons: List[str] = []


class Report(BaseModel):
    schemaVersion: int = SCHEMA_VERSION
    version: str
    kind: ReportKind = "infer"
    program: str
    seed: int = 0
    # Echo of the options the run used.
    options: Dict[str, Any] = {}
    locations: List[LocationReport] = []
    complexity: Optional[ComplexityReport] = None
    timings: Optional[Dict[str, float]] = None

    @property
    def failed(self) -> bool:
        """At least one location was analysed and every one was unreachable."""
        if self.complexity is not None:
            return False
        return bool(self.locations) and all(
            loc.status == "unreachable" for loc in self.locations
        )

    def toJson(self) -> str:
        return self.json(indent=2, exclude_none=True)

    def toText(self) -> str:
        lines = [f"program {self.program} ({self.kind}, seed {self.seed})"]
        for loc in self.locations:
            header = f"{loc.location}: {loc.status}"
            if loc.variables:
                header += f" [{', '.join(loc.variables)}]"
            if loc.unverified:
                header += " (unverified)"
            elif loc.acceptedOnBox:
                header += " (proved on input box)"
            lines.append(header)
            for invariant in loc.equalities + loc.octagons:
                lines.append(f"  {invariant}")
        if self.complexity is not None:
            c = self.complexity
            lines.append(f"{c.location}: {c.relation}")
            lines.append(f"  bounds: t in {{{', '.join(c.bounds)}}}")
            if c.residual is not None:
                lines.append(f"  residual: {c.residual}")
            for octagon in c.counterOctagons:
                lines.append(f"  {octagon}")
        return "\n".join(lines) + "\n"
