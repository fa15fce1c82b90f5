"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of the requested operation."""


class BranchCutError(DomainError):
    """Target point lies on the branch cut [1, +inf) of the inverse branches."""


class PoleError(DomainError):
    """Evaluation too close to a pole of the circle map."""


class MapOverflowError(OverflowError):
    """exp(-Re z) left the double range during forward iteration.

    Carries whatever partial data was computed before the overflow.
    """

    def __init__(self, message, step=None, symbols=None):
        super().__init__(message)
        self.step = step
        self.symbols = tuple(symbols) if symbols is not None else None


class NoConvergenceError(RuntimeError):
    """An iteration failed to reach its tolerance within its budget."""


class PullbackBudgetError(NoConvergenceError):
    """A ray evaluation would need more pullback steps than the budget allows."""


class NestingViolationError(RuntimeError):
    """A pulled-back square sample escaped its parent square beyond tolerance."""

    def __init__(self, message, point=None, level=None):
        super().__init__(message)
        self.point = point
        self.level = level


class ScanExhaustedError(RuntimeError):
    """A ray probe never exceeded the requested modulus within the scan budget."""


class SlowConvergenceError(NoConvergenceError):
    """Nested-arc inversion stalled near the parabolic boundary point."""


class UndecidableSequenceError(ValueError):
    """The sequence's tail descriptor does not determine its class."""


class ConstantWordError(DomainError):
    """A periodic-point search needs a word that uses both symbols."""
