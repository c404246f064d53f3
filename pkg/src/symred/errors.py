from __future__ import annotations


class SymredError(Exception):
    pass


class ArityMismatchError(SymredError, ValueError):
    def __init__(self, expected: int, actual: int, what: str = "point") -> None:
        super().__init__(f"{what} has arity {actual}, expected {expected}")
        self.expected = expected
        self.actual = actual
