"""Command implementations grouped by concern."""
from typing import NamedTuple, Optional


class CommandResult(NamedTuple):
    """Exit status, machine-readable report, one-line summary and an optional produced document."""
    status: int
    report: dict
    summary: str
    document: Optional[str] = None
