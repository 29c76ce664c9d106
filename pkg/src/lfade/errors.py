"""Exception hierarchy shared by all layers."""


class LfadeError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(LfadeError, ValueError):
    """A model or basis parameter violates its admissible range."""


class DomainError(LfadeError, ValueError):
    """An evaluation point lies outside the domain of an operator."""


class NumericError(LfadeError, ArithmeticError):
    """A numerical procedure failed (pole hit, non-convergence, singular matrix)."""


class ConfigError(LfadeError, ValueError):
    """A run configuration is malformed or inconsistent."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field
