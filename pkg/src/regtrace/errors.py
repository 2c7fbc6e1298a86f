"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class RegTraceError(Exception):
    """Base class for all library errors."""


class GraphError(RegTraceError):
    """The input does not describe an admissible graph."""


class NotRegular(GraphError):
    pass


class NotSimple(GraphError):
    pass


class NotConnected(GraphError):
    pass


class DegreeTooSmall(GraphError):
    pass


class DocumentError(GraphError):
    """Malformed graph document (bad keys, types or vertex ids)."""


class InfeasibleParameters(RegTraceError):
    pass


class GenerationFailed(RegTraceError):
    pass


class InvalidLength(RegTraceError):
    pass


class BudgetExceeded(RegTraceError):
    pass


class ConvergenceFailure(RegTraceError):
    pass


class QuadratureFailure(RegTraceError):
    pass


class NotNearInteger(RegTraceError):
    def __init__(self, l: int, value: float):
        super().__init__(f"gp_{l} estimate {value!r} is not within the rounding window of an integer")
        self.l = l
        self.value = value


class SupportExceedsTruncation(RegTraceError):
    pass
