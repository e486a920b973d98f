"""Exception hierarchy shared by every module."""


class DistpartError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class BudgetExceeded(DistpartError):
    """A search ran out of its node budget (CLI exit code 2)."""


Timeout = BudgetExceeded


class FormatError(DistpartError):
    pass


class NonUniform(DistpartError):
    pass


class NotATree(DistpartError):
    pass


class NotRegular(DistpartError):
    pass


class TooLarge(DistpartError):
    pass


class UnlabeledVertex(DistpartError):
    pass


class TooManyDistinctLabels(DistpartError):
    pass


class InsufficientData(DistpartError):
    pass


class EvenParameter(DistpartError):
    pass


class NotApplicableCase(DistpartError):
    pass


class TooFewEdges(DistpartError):
    pass


class TooSmallM1(DistpartError):
    pass


class CatalogueExhausted(DistpartError):
    pass


class NoTail(DistpartError):
    pass


class BadPartition(DistpartError):
    pass


class ParityViolation(DistpartError):
    pass


class RetriesExhausted(DistpartError):
    pass


class WrongCase(DistpartError):
    pass


class PreconditionError(DistpartError):
    pass
