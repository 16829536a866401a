"""Exception types shared across the package."""

from __future__ import annotations


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to reach its target accuracy.

    ``estimate`` is the best value available when the procedure gave up and
    ``achieved`` the accuracy it did reach (an absolute error estimate, or the
    last certified bound for the adaptive quadrature driver).
    """

    def __init__(self, message: str, estimate: float = float("nan"),
                 achieved: float = float("inf"), payload: object = None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved = achieved
        self.payload = payload
