"""Exception types shared across the package."""


class DimcritError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DimcritError, ValueError):
    """An input violates a documented precondition (bad spec, missing edge, ...)."""


class GeometryError(DimcritError):
    """A geometric construction failed to meet its own tolerances."""


class ApexSolveError(DomainError):
    """The apex-point system has no real solution.

    Carries the discriminant so callers can see how far out of range the
    inputs were.
    """

    def __init__(self, message: str, discriminant: float):
        super().__init__(f"{message} (discriminant={discriminant:.6g})")
        self.discriminant = discriminant


class UnresolvedDimensionError(DimcritError):
    """An exact dimension was required but only an interval could be certified."""

    def __init__(self, message: str, lower: int, upper: int):
        super().__init__(f"{message} (certified interval [{lower}, {upper}])")
        self.lower = lower
        self.upper = upper
