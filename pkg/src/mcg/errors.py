"""Shared exception types."""

from __future__ import annotations


class McgError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLabel(McgError):
    """A curve or shift label violates the index ranges of its model."""


class UndefinedSymmetry(McgError):
    """A symmetry name is not resolvable in the model (alias not bound,
    or the symmetry has no label action, like the end-swap tau on S(n))."""


class ModelMismatch(McgError):
    """Two words built over different models were combined."""


class OutOfWindow(McgError):
    """A homology computation referenced a class outside the truncation window."""


class NotAnInvolution(McgError):
    """The conjugating element of an involution check does not square to 1."""


class WindowTooSmall(McgError):
    """The truncation window is below the displacement bound of a word."""


class BudgetExhausted(McgError):
    """The rewrite budget ran out before normalization finished."""

    def __init__(self, spent: int):
        super().__init__(f"rewrite budget exhausted after {spent} applications")
        self.spent = spent


class ScriptError(McgError):
    """Base for proof-script parse/replay errors carrying a source position."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, col {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ParseError(ScriptError):
    pass


class UndefinedName(ScriptError):
    pass


class Redefinition(ScriptError):
    pass


class ModelFileError(McgError):
    """Model file parse error with position."""

    def __init__(self, message: str, path: str, line: int):
        super().__init__(f"{path}:{line}: {message}")
        self.message = message
        self.path = path
        self.line = line
