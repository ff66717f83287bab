"""Exception types shared across the package."""


class SaiqhError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(SaiqhError, ValueError):
    """A parameter, state, configuration or CLI input violates a documented bound."""


class DomainError(SaiqhError, ValueError):
    """An operation was evaluated outside its mathematical domain."""


class NoEndemicEquilibrium(DomainError):
    """The endemic equilibrium was requested for a model with R0 <= 1."""

    def __init__(self, r0: float):
        super().__init__(f"no endemic equilibrium: R0 = {r0} <= 1")
        self.r0 = r0


class StepError(SaiqhError, RuntimeError):
    """A simulation step failed; carries the failing step index."""

    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.message = message


class PositivityError(StepError):
    """A solver output came out negative beyond the round-off clamp window.

    The update matrix has a nonnegative inverse, so a genuine negative
    signals an implementation bug rather than a property of the scheme.
    """
