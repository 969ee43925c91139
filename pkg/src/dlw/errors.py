"""Exception hierarchy shared by the whole package."""


class DLWError(Exception):
    """Base class for every error raised by dlw."""


class FormulaSyntaxError(DLWError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class UnassignedAtomError(DLWError, KeyError):
    def __init__(self, atom: str):
        super().__init__(atom)
        self.atom = atom

    def __str__(self) -> str:
        return f"atom {self.atom!r} has no truth value"


class TheoryError(DLWError, ValueError):
    """A default theory failed to parse or validate."""


class TheorySyntaxError(TheoryError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InconsistentBackgroundError(TheoryError):
    pass


class ReservedAtomError(TheoryError):
    pass


class DuplicateNameError(TheoryError):
    pass


class ResourceLimitError(DLWError, RuntimeError):
    """A search explored more prefixes than its cap allows."""


class PreconditionError(DLWError, ValueError):
    """An operation was called outside its domain."""


class NotAProcessError(PreconditionError):
    pass


class NoExtensionError(PreconditionError):
    pass


class UnsupportedSemanticsError(PreconditionError):
    pass


class GuardError(PreconditionError):
    """Input too large for an exhaustive check."""


class StuckError(DLWError, RuntimeError):
    """Greedy construction reached a successful, non-closed process with no
    successful one-step extension.  ``prefix`` is that process."""

    def __init__(self, prefix: tuple[int, ...]):
        super().__init__(f"no successful continuation of {list(prefix)}")
        self.prefix = prefix
