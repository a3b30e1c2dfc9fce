"""Package-wide error types that map onto distinct CLI exit codes."""

from __future__ import annotations


class DivergentDurationError(ValueError):
    """The requested quantity does not exist: the game never terminates.

    Raised by duration moments and simulation for the one-cell, multi-ball
    configuration, where every round leaves the state unchanged.
    """


class BudgetExceededError(RuntimeError):
    """A computation would exceed its configured enumeration or size budget."""
