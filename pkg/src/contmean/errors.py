"""Exception hierarchy shared by every contmean module."""


class ContMeanError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class ParseError(ContMeanError):
    pass


class ValidationError(ContMeanError):
    pass


class MetricEdgeViolation(ValidationError):
    """An edge is strictly longer than some alternative path between its endpoints."""

    def __init__(self, message: str, edges: list[int] | None = None):
        super().__init__(message)
        self.edges = list(edges or [])


class InvalidParameter(ContMeanError, ValueError):
    pass


class EmptyEdgeSet(ContMeanError):
    pass


class NotATree(ContMeanError):
    pass


class NotACactus(ContMeanError):
    pass


class NotUniform(ContMeanError):
    pass


class CapExceeded(ContMeanError):
    pass
