"""
Exception hierarchy
Every failure raised by the library derives from PathlinkError; the CLI maps kinds to exit codes.
"""
from typing import Optional


class PathlinkError(Exception):
    """Base error"""
    exit_code = 1


class UsageError(PathlinkError):
    """Bad parameters or inadmissible orders"""
    exit_code = 3


class PreconditionError(PathlinkError):
    """An operation precondition does not hold"""
    exit_code = 3


class DesignParseError(PathlinkError):
    """Malformed design, down-link or bundle file"""
    exit_code = 3

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NotCatalogedError(PathlinkError):
    """Admissible, but no construction or catalog entry covers it"""
    exit_code = 1


class InternalConsistencyError(PathlinkError):
    """A construction disagreed with the verifier or the oracle"""
    exit_code = 1


class BudgetExhaustedError(PathlinkError):
    """The oracle ran out of budget where an answer was required"""
    exit_code = 2
