class ShiftKError(Exception):
    """Base class for every failure raised by the library."""


class ValidationError(ShiftKError, ValueError):
    """Input violates a type invariant or an operation precondition."""


class StabilityError(ValidationError):
    """Some pole has modulus >= 1."""


class ConfigError(ValidationError):
    """Run configuration could not be parsed."""


class DegenerateConfigurationError(ShiftKError):
    """Poles collide (duplicate poles, or a pole equal to rho)."""


class SingularConfigurationError(ShiftKError):
    """A closed form divides by zero for this configuration."""


class ConditioningError(ShiftKError):
    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (condition estimate {estimate:.3e})")
        self.estimate = estimate


class DomainError(ShiftKError):
    """Evaluation point lies outside the domain of a formula."""


class BranchError(DomainError):
    """Closed form leaves its principal branch."""


class DivergenceError(ShiftKError):
    def __init__(self, message: str, epoch: int):
        super().__init__(f"{message} (epoch {epoch})")
        self.epoch = epoch


class OutOfRegimeWarning(UserWarning):
    """Asymptotic formula evaluated outside the regime it describes."""


class NumericalError(ShiftKError):
    """A closed form produced an inconsistent value (e.g. a non-real loss)."""
