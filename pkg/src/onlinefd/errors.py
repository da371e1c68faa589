"""Exception hierarchy shared by every module of the package."""


class FairDivisionError(Exception):
    """Base class for all errors raised by onlinefd."""


class InvalidIndex(FairDivisionError, IndexError):
    pass


class InvalidValue(FairDivisionError, ValueError):
    pass


class InvalidAdvice(FairDivisionError, ValueError):
    pass


class InvalidInterval(InvalidAdvice):
    """Certified total bounds that do not bracket the realized total."""


class AdviceMismatch(FairDivisionError):
    """The advice announced to an allocator is of a kind it cannot use."""


class Unsupported(AdviceMismatch):
    """Allocator/instance combination outside the algorithm's domain (e.g. wrong n)."""


class AdversaryInconsistent(FairDivisionError):
    """The emitted stream contradicts the advice the adversary announced."""


class IncompleteAllocation(FairDivisionError, ValueError):
    pass


class BruteForceBudgetExceeded(FairDivisionError):
    pass


class IdenticalViolation(FairDivisionError, ValueError):
    """An identical-valuation allocator received a non-constant value vector."""


class PredictionViolated(FairDivisionError):
    """An arriving value is absent from the remaining frequency multiset."""


class CardinalityMismatch(FairDivisionError, ValueError):
    pass


class SequenceLengthMismatch(FairDivisionError, ValueError):
    pass


class NotIdo(FairDivisionError, ValueError):
    pass


class ExhaustedPredictions(FairDivisionError):
    pass


class ParseError(FairDivisionError, ValueError):
    """Malformed instance, advice or allocation file."""
