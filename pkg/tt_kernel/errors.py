"""Error types shared by the parser, the elaborator and the CLI."""

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Span:
    """1-based source position."""
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class KernelError(Exception):
    """A user-facing failure: bad input text or an ill-typed declaration."""

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is None:
            return self.message
        return f"{self.span}: {self.message}"


class ParseError(KernelError):
    pass


class TypeCheckError(KernelError):

    def __init__(self, message: str, span: Optional[Span] = None, decl: Optional[str] = None):
        super().__init__(message, span)
        self.decl = decl


class InternalError(Exception):
    """Kernel invariant violated. Never caught by the CLI."""
