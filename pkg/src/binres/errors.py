"""Exception hierarchy shared by all binres modules."""


class BinresError(Exception):
    """Base class for every error raised by binres."""


class DivisionByZero(BinresError, ZeroDivisionError):
    pass


class SingularMatrix(BinresError):
    pass


class NotUnimodular(BinresError):
    pass


class NonGenericWeight(BinresError):
    pass


class NotAnExponent(BinresError):
    pass


class ColoopConfiguration(BinresError):
    pass


class TruncationExceeded(BinresError):
    """Series reconstruction did not stabilise within the configured order."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InternalInconsistency(BinresError):
    """A computed value failed one of its mandatory verification gates."""


class ReductionBudgetExceeded(BinresError):
    pass


class ParseError(BinresError):
    pass


class ValidationError(BinresError):
    pass


class UsageError(BinresError):
    pass
