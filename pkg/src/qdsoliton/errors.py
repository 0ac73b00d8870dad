"""Exception types raised by the qdsoliton modules."""


class QDSolitonError(ValueError):
    """Base class for all domain errors raised by this package."""


class DegenerateEnergyError(QDSolitonError):
    """Energy does not exceed the local potential, so no compact soliton exists."""


class MatchingSingularityError(QDSolitonError):
    """A wall-matching denominator (cos of a phase) vanishes."""


class ArccosDomainError(QDSolitonError):
    """The arrival-time arccos argument lies outside [-1, 1]."""

    def __init__(self, argument):
        super().__init__(f"arccos argument {argument!r} outside [-1, 1]")
        self.argument = argument


class RegimeError(QDSolitonError):
    """Operation is only defined for a different energy regime."""


class BoundViolationError(QDSolitonError):
    """Position spread is below the minimum transmitted distance pi/dk."""


class InsufficientGridError(QDSolitonError):
    """Too few usable sample points for the finite-difference stencil."""


class ZeroDensityError(QDSolitonError):
    """A finite-difference stencil touches a point of (near) zero density."""


class ConfigError(QDSolitonError):
    """Run configuration failed to parse or validate.

    ``problems`` lists every violation found, not just the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
