"""Exception types shared across the package."""


class PLogicError(Exception):
    """Base class for all package errors."""


class ParseError(PLogicError, ValueError):
    """Malformed formula, problem file or evidence file."""

    def __init__(self, message, position=None, line=None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class InfeasibleError(PLogicError):
    """The belief constraints admit no distribution over worlds."""


class InconsistencyError(PLogicError):
    """Input values contradict each other (assessments, prior solutions, evidence)."""
