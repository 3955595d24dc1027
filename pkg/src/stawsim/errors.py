"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An input lies outside the domain of an operation."""


class RegimeError(ValueError):
    """The requested formula does not apply in this parameter regime."""


class NumericalQualityError(RuntimeError):
    """A numerical run failed its own accuracy monitors."""


class TruncationError(NumericalQualityError):
    """Too much probability reached the edge of the momentum lattice."""


class StepSizeError(NumericalQualityError):
    """Norm drift of the integrator exceeded the allowed bound."""
