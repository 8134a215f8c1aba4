"""Exception types."""

from __future__ import annotations


class LambdaRingError(ValueError):
    """Base class for invalid lambda-ring input."""


class ConditionViolation(LambdaRingError):
    """A classification condition fails; ``prime`` names the witness when there is one."""

    def __init__(self, condition: str, message: str, prime: int | None = None):
        super().__init__(message)
        self.condition = condition
        self.prime = prime


class WindowError(LambdaRingError):
    """A prime outside the window an explicit table was defined on."""


class NonIntegralError(LambdaRingError):
    """A Newton-recursion division was not exact."""

    def __init__(self, m: int, value):
        super().__init__(f"division by {m} is not exact for {value}")
        self.m = m
        self.value = value


class NotSymmetricError(ValueError):
    pass
