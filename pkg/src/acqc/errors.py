"""Exception types shared across the package.

Plain ``ValueError`` is used for ordinary argument validation; the classes
here mark failure modes that callers may want to catch specifically
(schedule synthesis limits, numerical breakdown, shape mismatches).
"""

from __future__ import annotations


class AcqcError(Exception):
    """Base class for package-specific errors."""


class DimensionError(AcqcError, ValueError):
    """A state vector or bitstring does not match the qubit count."""


class SingularScheduleError(AcqcError, ValueError):
    """Counterdiabatic synthesis hit a vanishing drive denominator.

    The transformed controls divide by omega^2 + delta^2; schedules where
    both controls pass near zero simultaneously cannot be transformed.
    """


class LimitViolationError(AcqcError, ValueError):
    """A synthesized control exceeds the declared hardware limits.

    Attributes:
        quantity: which control exceeded its bound ("omega" or "delta").
        value: worst offending value.
        limit: the bound that was exceeded.
        time: time (us) at which the worst excess occurs.
    """

    def __init__(self, quantity: str, value: float, limit: float, time: float):
        self.quantity = quantity
        self.value = float(value)
        self.limit = float(limit)
        self.time = float(time)
        super().__init__(
            f"{quantity} reaches {value:.6g} at t = {time:.6g} us, "
            f"exceeding the limit {limit:.6g}"
        )


class IntegrationError(AcqcError, RuntimeError):
    """Time evolution failed or lost more norm than tolerated."""
