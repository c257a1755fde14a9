"""Exception hierarchy shared by every module."""


class RootnumError(Exception):
    """Base class for domain errors raised by this package."""


class NotMonic(RootnumError, ValueError):
    pass


# alias kept for callers that follow the older spelling
NonMonic = NotMonic


class NotAUnit(RootnumError, ValueError):
    pass


class IndicatorNotIntegral(RootnumError, ArithmeticError):
    pass


class NotSymplectic(RootnumError, ValueError):
    pass


class NotADivisor(RootnumError, ValueError):
    pass


class GroupMismatch(RootnumError, ValueError):
    pass


class UndefinedIndicator(RootnumError, ValueError):
    pass


class NotSymplecticFeasible(RootnumError, ValueError):
    pass


class IrrationalRestriction(RootnumError, ValueError):
    pass


class RankDeficient(RootnumError, ValueError):
    pass


class WeightViolation(RootnumError, ValueError):
    pass


class DimensionMismatch(RootnumError, ValueError):
    pass


class RankOrder(RootnumError, ValueError):
    pass


class LedgerInvalid(RootnumError, ValueError):
    pass


class UnsupportedBranch(RootnumError, ValueError):
    pass


class InconsistentGroup(RootnumError, ValueError):
    pass


class SchemaError(RootnumError, ValueError):
    """Input document failed validation; ``errors`` holds (path, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        text = "; ".join(f"{path or '$'}: {msg}" for path, msg in self.errors)
        super().__init__(text)
