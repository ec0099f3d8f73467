"""Exception hierarchy shared by the library and the CLI."""


class CompJacError(Exception):
    """Base class for all errors raised by compjac."""

    exit_code = 1


class GraphValidationError(CompJacError, ValueError):
    """Malformed graph input or an argument that does not fit the graph."""

    exit_code = 2


class SumMismatchError(GraphValidationError):
    """A (normalized) multidegree whose total does not match the graph."""


class CapExceededError(CompJacError):
    """An enumeration would exceed its configured size cap."""

    exit_code = 3

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InvariantError(CompJacError, AssertionError):
    """Two independent computations disagreed."""

    exit_code = 4
