"""Exception types shared across the patternforge pipeline."""

from __future__ import annotations


class PatternForgeError(Exception):
    """Base class for all errors raised by this package."""


class ScsSyntaxError(PatternForgeError):
    """Malformed SCS source text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class TypeNameError(PatternForgeError):
    """A declaration names something that cannot be a type."""


class ModelError(PatternForgeError):
    """Invalid API model document (dangling reference, duplicate, cycle...)."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class UnknownType(PatternForgeError):
    """Type name not present in the API graph."""


class UnknownMethodToken(PatternForgeError):
    """A linearized call token does not resolve to any method node."""


class NoMatch(PatternForgeError):
    """Pattern call sequence does not embed in the example."""


class UnknownPattern(PatternForgeError):
    """No pattern registered under the requested id."""


class UnknownGroup(PatternForgeError):
    """No hole group with the requested id in the session."""


class GroupAlreadyFilled(PatternForgeError):
    """The group already has an assignment; undo first."""


class TypeMismatch(PatternForgeError):
    """Chosen expression does not fit the group's declared type."""


class ModelMismatch(PatternForgeError):
    """Session context references types absent from the API graph."""


class UnknownCandidate(PatternForgeError):
    """Chosen candidate is not in the group's current candidate list."""


class UnknownSession(PatternForgeError):
    """No live or persisted session under the requested id."""


class UndoEmpty(PatternForgeError):
    """Undo requested on a session with no fills to revert."""


class SessionIncomplete(PatternForgeError):
    """Code emission requested before every group was assigned."""


class NoEmbedding(NoMatch):
    """Simulation goal example does not contain the pattern."""
