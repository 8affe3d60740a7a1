"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class ConfigError(ValueError):
    """A network or experiment configuration is malformed or out of range."""

    def __init__(self, message, key=None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class NumericError(ArithmeticError):
    """A numerical routine failed to converge within its budget."""


class ZenoError(RuntimeError):
    """Event times accumulate without advancing the clock."""
