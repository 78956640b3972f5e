"""Shared exception types."""


class GazechartError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GazechartError, ValueError):
    """A supplied parameter violates its documented range or type."""


class LayoutError(GazechartError):
    """The requested chart geometry cannot be satisfied."""


class StateError(GazechartError):
    """An operation was applied to a terminal or incompatible state."""


class ProtocolError(GazechartError):
    """A session step was taken out of order or answered twice."""


class ConfigurationError(GazechartError):
    """A campaign definition is inconsistent. Carries one entry per problem."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        super().__init__("; ".join(self.issues))


class ParseError(GazechartError):
    """An input file could not be parsed. Carries 1-based offending line numbers."""

    def __init__(self, message, line_numbers=()):
        self.line_numbers = tuple(line_numbers)
        super().__init__(message)


class DataError(GazechartError):
    """Well-formed data that cannot support the requested computation."""


class EmptyDataError(DataError):
    """An aggregate was requested over zero usable samples."""
