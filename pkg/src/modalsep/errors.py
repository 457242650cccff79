"""Exception hierarchy shared by every module."""


class ModalSepError(Exception):
    """Base class for all library errors."""

    kind = "error"


class ParseError(ModalSepError, ValueError):
    """Malformed formula or model text."""

    kind = "parse"

    def __init__(self, message, offset=None, line=None):
        self.offset = offset
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} (at {', '.join(where)})"
        super().__init__(message)


class ValidationError(ModalSepError, ValueError):
    """Well-formed input that violates a structural invariant."""

    kind = "validation"


class UnknownAtomError(ValidationError):
    kind = "unknown-atom"


class ResourceCapError(ModalSepError, RuntimeError):
    """A configured size ceiling would be exceeded."""

    kind = "resource"


class IllegalMoveError(ModalSepError, ValueError):
    kind = "illegal-move"
