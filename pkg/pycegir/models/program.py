from typing import Optional, List, Dict, Any, Iterator

from pydantic import BaseModel


class InputDecl(BaseModel):
    name: str
    # Inclusive range; None on either side means unbounded.
    low: Optional[int] = None
    high: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return self.low is not None and self.high is not None

    # Number of values in the range, None if unbounded.
    @property
    def size(self) -> Optional[int]:
        if not self.bounded:
            return None
        return max(0, self.high - self.low + 1)

    def contains(self, value: int) -> bool:
        if self.low is not None and value < self.low:
            return False
        if self.high is not None and value > self.high:
            return False
        return True

    # Values of the range, smallest magnitude first (0, 1, -1, 2, -2, ...),
    # ties broken by the positive value.
    def values(self) -> Iterator[int]:
        if not self.bounded:
            raise ValueError(f"input {self.name} has no finite range")
        low, high = self.low, self.high
        if low > high:
            return
        if low >= 0:
            yield from range(low, high + 1)
            return
        if high <= 0:
            yield from range(high, low - 1, -1)
            return
        yield 0
        magnitude = 1
        while magnitude <= high or -magnitude >= low:
            if magnitude <= high:
                yield magnitude
            if -magnitude >= low:
                yield -magnitude
            magnitude += 1


class Program(BaseModel):
    name: str = "main"
    inputs: List[InputDecl] = []
    # Statement tree (pycegir.lang.nodes.Block).
    body: Any
    # Marked locations in order of appearance.
    locations: List[str] = []
    # Alphabetically ordered variables in scope at each location.
    scopes: Dict[str, List[str]] = {}

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @property
    def inputNames(self) -> List[str]:
        return [decl.name for decl in self.inputs]

    def inputDecl(self, name: str) -> InputDecl:
        for decl in self.inputs:
            if decl.name == name:
                return decl
        raise KeyError(name)

    # Number of points of the declared input box, None if any range is
    # unbounded.
    @property
    def boxSize(self) -> Optional[int]:
        size = 1
        for decl in self.inputs:
            if decl.size is None:
                return None
            size *= decl.size
        return size
