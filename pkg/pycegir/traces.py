from typing import Optional, Dict, List, Tuple, Iterator, Iterable, Mapping, TextIO

import csv
import logging
import re
from dataclasses import dataclass

from .errors import TraceFormatError


logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Input:
    """A valuation of a program's declared inputs, in declaration order."""

    names: Tuple[str, ...]
    values: Tuple[int, ...]

    @classmethod
    def fromDict(cls, names: Iterable[str], valuation: Mapping[str, int]) -> "Input":
        names = tuple(names)
        return cls(names, tuple(int(valuation[name]) for name in names))

    def asDict(self) -> Dict[str, int]:
        return dict(zip(self.names, self.values))

    def __str__(self) -> str:
        pairs = ", ".join(f"{n}={v}" for n, v in zip(self.names, self.values))
        return f"({pairs})"


@dataclass(frozen=True)
class Trace:
    """Valuation of the in-scope variables at one visit of a location."""

    location: str
    # Alphabetical, as returned by extractVars.
    names: Tuple[str, ...]
    values: Tuple[int, ...]

    @property
    def valuation(self) -> Dict[str, int]:
        return dict(zip(self.names, self.values))

    def __getitem__(self, name: str) -> int:
        return self.values[self.names.index(name)]

    def project(self, names: Iterable[str]) -> "Trace":
        names = tuple(names)
        return Trace(self.location, names, tuple(self[name] for name in names))

    def __str__(self) -> str:
        pairs = ", ".join(f"{n}={v}" for n, v in zip(self.names, self.values))
        return f"{self.location}({pairs})"


class TraceSet:
    """Ordered, duplicate-free traces per location.

    Deduplication is by (location, valuation); the first input that produced
    a trace is kept as its provenance.
    """

    def __init__(self, traces: Iterable[Trace] = ()):
        self._traces: Dict[str, Dict[Trace, Optional[Input]]] = {}
        for trace in traces:
            self.add(trace)

    def add(self, trace: Trace, provenance: Optional[Input] = None) -> bool:
        bucket = self._traces.setdefault(trace.location, {})
        if trace in bucket:
            return False
        bucket[trace] = provenance
        return True

    def merge(self, other: "TraceSet") -> int:
        added = 0
        for location in other.locations:
            for trace, provenance in other._traces[location].items():
                added += self.add(trace, provenance)
        return added

    @property
    def locations(self) -> List[str]:
        return list(self._traces)

    def at(self, location: str) -> List[Trace]:
        return list(self._traces.get(location, {}))

    def only(self, location: str) -> "TraceSet":
        result = TraceSet()
        for trace, provenance in self._traces.get(location, {}).items():
            result.add(trace, provenance)
        return result

    def provenance(self, trace: Trace) -> Optional[Input]:
        return self._traces.get(trace.location, {}).get(trace)

    def inputs(self, location: Optional[str] = None) -> List[Input]:
        """Distinct provenance inputs, in first-seen order."""
        locations = self.locations if location is None else [location]
        seen: Dict[Input, None] = {}
        for loc in locations:
            for provenance in self._traces.get(loc, {}).values():
                if provenance is not None:
                    seen.setdefault(provenance, None)
        return list(seen)

    def count(self, location: str) -> int:
        return len(self._traces.get(location, {}))

    def __contains__(self, trace: Trace) -> bool:
        return trace in self._traces.get(trace.location, {})

    def __iter__(self) -> Iterator[Trace]:
        for bucket in self._traces.values():
            yield from bucket

    def __len__(self) -> int:
        return sum(len(bucket) for bucket in self._traces.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return {loc: set(b) for loc, b in self._traces.items() if b} == {
            loc: set(b) for loc, b in other._traces.items() if b
        }

    def __repr__(self) -> str:
        counts = ", ".join(f"{loc}:{len(b)}" for loc, b in self._traces.items())
        return f"TraceSet({counts})"


# Trace CSV: a header row `loc,var1,var2,...` followed by one row per trace.
# A later row starting with `loc` opens a new block, so traces of locations
# with different scopes can share a file.
def writeTraces(traces: TraceSet, stream: TextIO):
    writer = csv.writer(stream, lineterminator="\n")
    for location in traces.locations:
        rows = traces.at(location)
        if not rows:
            continue
        writer.writerow(["loc", *rows[0].names])
        for trace in rows:
            writer.writerow([location, *trace.values])


def readTraces(stream: TextIO) -> TraceSet:
    traces = TraceSet()
    header: Optional[Tuple[str, ...]] = None
    scopes: Dict[str, Tuple[str, ...]] = {}
    for lineno, row in enumerate(csv.reader(stream), start=1):
        cells = [cell.strip() for cell in row]
        if not cells or cells == [""]:
            continue
        if cells[0] == "loc":
            names = tuple(cells[1:])
            if not names:
                raise TraceFormatError(f"line {lineno}: header names no variable")
            for name in names:
                if not _IDENTIFIER.match(name):
                    raise TraceFormatError(f"line {lineno}: bad variable name {name!r}")
            if len(set(names)) != len(names):
                raise TraceFormatError(f"line {lineno}: duplicate variable in header")
            if list(names) != sorted(names):
                raise TraceFormatError(f"line {lineno}: header variables not sorted")
            header = names
            continue
        if header is None:
            raise TraceFormatError(f"line {lineno}: row before any header")
        if len(cells) != len(header) + 1:
            raise TraceFormatError(
                f"line {lineno}: expected {len(header) + 1} cells, got {len(cells)}"
            )
        if not _IDENTIFIER.match(cells[0]):
            raise TraceFormatError(f"line {lineno}: bad location {cells[0]!r}")
        if scopes.setdefault(cells[0], header) != header:
            raise TraceFormatError(
                f"line {lineno}: location {cells[0]} seen with another header"
            )
        try:
            values = tuple(int(cell) for cell in cells[1:])
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-integer value")
        traces.add(Trace(cells[0], header, values))
    logger.debug(f"readTraces() | read [traces:{traces!r}]")
    return traces
