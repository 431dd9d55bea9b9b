"""
Exception hierarchy for polytope computations
"""

from typing import Optional


class PolytopeError(Exception):
    """Base class for all errors raised by the package"""


class DimensionMismatchError(PolytopeError):
    """Vectors or hyperplanes of different ambient dimensions were combined"""


class EmptyInputError(PolytopeError):
    """An operation needing at least one point received none"""


class CapacityError(PolytopeError):
    """A desk-scale limit was exceeded"""

    def __init__(self, what: str, size: int, limit: int, setting: str):
        self.what = what
        self.size = size
        self.limit = limit
        self.setting = setting
        super().__init__(
            f"{what}: size {size} exceeds the limit {limit} "
            f"(raise SPECIALSIMPLEX_{setting.upper()} to override)"
        )


class InputError(PolytopeError):
    """User data could not be turned into a valid object"""

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[int] = None
    ):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class JoinError(InputError):
    """Two triangulations are not in position to be joined"""


class InternalInconsistencyError(PolytopeError):
    """A structural result that must hold was violated; this is a bug"""
