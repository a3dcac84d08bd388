"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """A run or solver is set up inconsistently (grid, time step, config file)."""


class NumericalAbort(RuntimeError):
    """A run was stopped because a monitored quantity left its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
