from typing import Any, Optional


class SiltredError(Exception):
    """Base error; exit_code is what the CLI returns when it surfaces."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# Input errors (exit 2)

class InputError(SiltredError):
    exit_code = 2


class MalformedSpec(InputError):
    """Parse or reference error in an input file."""


class InfiniteDimensional(InputError):
    """Path growth did not close within the configured length bound."""


# Budget errors (exit 3)

class BudgetExceeded(SiltredError):
    """A search ran out of budget. `partial` holds what was found so far."""

    exit_code = 3

    def __init__(self, detail: str, partial: Optional[Any] = None):
        super().__init__(detail)
        self.partial = partial


class HomCountBudgetExceeded(BudgetExceeded):
    pass


# Undecided identity (exit 4)

class UndecidedIdentity(SiltredError):
    exit_code = 4

    def __init__(self, detail: str, pair: tuple = ()):
        super().__init__(detail)
        self.pair = pair


# Property failures (exit 1)

class InvariantViolation(SiltredError):
    pass


class IdempotentSearchIncomplete(SiltredError):
    pass


class RealizationUnavailable(SiltredError):
    pass


class RankUnknown(SiltredError):
    pass


class NotRigid(InvariantViolation):
    pass


class ApproximationNotMinimalizable(SiltredError):
    pass


class MutationUndefined(SiltredError):
    pass


class WitnessSearchExhausted(SiltredError):
    def __init__(self, detail: str, bound: int = 0):
        super().__init__(detail)
        self.bound = bound


class NoSiltingExtension(SiltredError):
    pass


class NonUniqueExtremum(InvariantViolation):
    pass


class RewritingFailed(InvariantViolation):
    pass
