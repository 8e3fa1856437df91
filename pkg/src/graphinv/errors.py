"""Shared exception types."""

from __future__ import annotations


class InvalidInputError(ValueError):
    """Malformed graph, bad flag value, or violated precondition."""


class BudgetExceededError(RuntimeError):
    """An operation was asked to run beyond its documented resource budget.

    Carries enough structure for the CLI to print a machine-readable
    resource message and exit with the dedicated status code.
    """

    def __init__(self, operation: str, limit: str, requested: str):
        self.operation = operation
        self.limit = limit
        self.requested = requested
        super().__init__(f"{operation}: requested {requested}, budget {limit}")
