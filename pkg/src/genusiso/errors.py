"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed text input; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class BudgetExceeded(RuntimeError):
    """A search ran out of its node or time budget.

    Never used to signal a negative answer: callers must treat it as
    "unknown", distinct from "no embedding" or "not isomorphic".
    """


class GenusBoundExceeded(ValueError):
    """The input needs a surface of larger Euler genus than allowed."""
