"""Exception types shared across the library."""


class PunctlapError(Exception):
    """Base class for all library errors."""


class DomainError(PunctlapError):
    """An argument lies outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """Evaluation was requested at (or too close to) the singular point."""


class PoleError(DomainError):
    """A parameter hit a pole of the formula being evaluated."""


class ContractViolationError(PunctlapError):
    """A caller-certified precondition does not hold."""


class EvaluationError(PunctlapError):
    """The integrand returned a non-finite value inside the interval."""

    def __init__(self, abscissa: float, value):
        self.abscissa = abscissa
        self.value = value
        super().__init__(
            f"integrand returned non-finite value {value!r} at x={abscissa!r}"
        )


class NonConvergenceError(PunctlapError):
    """An iterative procedure failed its convergence diagnostic."""
