"""Exception types shared across the engine."""


class QchessError(Exception):
    """Base class for all engine errors."""


class ParseError(QchessError):
    """Malformed move or position text. Carries the 0-based column."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (column {position})")
        self.position = position


class ImpossibleMoveError(QchessError):
    """No possibility equation is satisfied; the turn is not consumed."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


class CorruptLogError(QchessError):
    """A recorded measurement outcome has zero probability on replay."""


class PositionError(QchessError):
    """Invalid position or save document."""


class InfeasibleBudgetError(QchessError):
    """A piece budget violates the multiplicity/promotion constraints."""
