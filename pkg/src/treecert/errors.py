"""Error types shared across the package.

Every raised error carries a stable machine-readable ``code`` so the CLI
and the experiment runner can classify failures without string matching.
"""

from __future__ import annotations


class ToolError(Exception):
    """Base class for all package errors.

    code: stable identifier, e.g. "SELF_LOOP", "TOO_LARGE", "NO_CONVERGENCE".
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class ParseError(ToolError):
    """Input-text error; ``line`` is the 1-based offending line number."""

    def __init__(self, code: str, line: int, message: str):
        super().__init__(code, f"line {line}: {message}")
        self.line = line
