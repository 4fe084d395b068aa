"""Exception hierarchy shared by all coalearn modules."""


class CoalearnError(Exception):
    """Base class for every error raised by this package."""


class SystemValidationError(CoalearnError, ValueError):
    """A system violates one of its structural invariants.

    ``violations`` holds the individual messages from :func:`validate_system`.
    """

    def __init__(self, violations, context=None):
        self.violations = list(violations)
        head = f"{context}: " if context else ""
        super().__init__(head + "; ".join(self.violations))


class UnknownStateError(CoalearnError, KeyError):
    def __str__(self):
        return f"unknown state {self.args[0]!r}"


class MalformedTestError(CoalearnError, ValueError):
    """A test does not belong to the logic of the system it is used with."""


class ProtocolError(CoalearnError, ValueError):
    """Teacher and learner disagree on the kind or alphabet of the system."""


class UnclosedTableError(CoalearnError, RuntimeError):
    """A conjecture was requested for a table that is not closed."""


class InvariantViolation(CoalearnError, AssertionError):
    """A learning-loop invariant failed; this indicates a bug, not bad input."""


class ParseError(CoalearnError, ValueError):
    """A system document could not be parsed."""
