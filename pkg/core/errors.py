"""
Exception types shared by the parsers and solvers.
"""

from typing import Optional


class MapFormatError(ValueError):
    """Malformed MovingAI map text."""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class ScenarioFormatError(ValueError):
    """Malformed MovingAI scenario text. ``row`` is 1-based over the whole file."""

    def __init__(self, message: str, row: int):
        self.row = row
        super().__init__(f"row {row}: {message}")


class SolutionFormatError(ValueError):
    """Malformed line in a stored solution file."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ContractViolation(ValueError):
    """A caller broke an operation's precondition."""


class ScenarioExhausted(ValueError):
    """More agents were requested than the scenario provides."""

    def __init__(self, requested: int, available: int):
        self.requested = requested
        self.available = available
        super().__init__(f"scenario exhausted: requested {requested} agents, "
                         f"scenario has {available}")


class UnreachableGoal(ValueError):
    """An agent's goal cannot be reached from its start."""

    def __init__(self, agent: int, start, goal):
        self.agent = agent
        super().__init__(f"agent {agent}: goal {goal} unreachable from start {start}")


class SearchTimeout(RuntimeError):
    """Raised from inside a search when its deadline expires."""


class UsageError(ValueError):
    """Invalid or incompatible command-line parameters."""
