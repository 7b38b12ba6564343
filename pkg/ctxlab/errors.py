"""
Error types for ctxlab
Every failure maps to a CLI exit code; nothing is swallowed
"""
from typing import Optional


class CtxlabError(Exception):
    """Base error carrying the CLI exit code"""

    exit_code: int = 1


class ParseError(CtxlabError):
    """Input file could not be parsed or failed schema validation"""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PreconditionError(CtxlabError):
    """An operation was called on input outside its domain"""

    exit_code = 3


class UnknownEdge(PreconditionError):
    pass


class UnknownVertex(PreconditionError):
    pass


class LoopCollapse(PreconditionError):
    pass


class NotComposable(PreconditionError):
    pass


class MarginMismatch(PreconditionError):
    pass


class NotASubcomplex(PreconditionError):
    pass


class NotCollapsible(PreconditionError):
    pass


class NotConnected(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


class NullHomotopicInput(PreconditionError):
    pass


class NonPrimeD(PreconditionError):
    pass


class EvenMinusCount(PreconditionError):
    pass


class WrongOutcomeArity(PreconditionError):
    pass


class WrongSemiring(PreconditionError):
    pass


class InconsistentDistribution(PreconditionError):
    """Edge matrices disagree on a vertex marginal or are not normalized"""
    pass


class InvalidParams(PreconditionError):
    pass


class TooLarge(CtxlabError):
    """Labeling count exceeds the configured cap"""

    exit_code = 4


class DeciderDisagreement(CtxlabError):
    """Two independent deciders returned different verdicts"""

    exit_code = 1
