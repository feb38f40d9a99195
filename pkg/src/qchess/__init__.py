"""Quantum chess engine.

Sparse occupancy-qubit simulation of quantum chess: movement unitaries
(jump/slide/split/merge and their path-controlled variants), projective
no-double-occupancy measurements with seeded replayable sampling, the full
rule set and QCAN notation, superposition-size bounds, plus a CLI and a
local game server.
"""

from ._backend import BACKEND as KERNEL_BACKEND
from .bounds import (
    RuntimeGuard,
    max_superposition_size,
    naive_bound,
    subspace_size,
    superposition_bound,
)
from .errors import (
    CorruptLogError,
    ImpossibleMoveError,
    InfeasibleBudgetError,
    ParseError,
    PositionError,
    QchessError,
)
from .game import Game, GameStatus, TurnOutcome
from .measure import MeasurementSpec, RngStream, forced_measure, measure, probability_of_one
from .moves import Move, MoveKind, Variant, classify, execute, legal_moves
from .notation import format_move, parse_move, parse_position, serialize_position
from .state import (
    AncillaRegistry,
    ClassicalLayer,
    FlagSet,
    Superposition,
    square_index,
    square_name,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaRegistry",
    "ClassicalLayer",
    "CorruptLogError",
    "FlagSet",
    "Game",
    "GameStatus",
    "ImpossibleMoveError",
    "InfeasibleBudgetError",
    "KERNEL_BACKEND",
    "MeasurementSpec",
    "Move",
    "MoveKind",
    "ParseError",
    "PositionError",
    "QchessError",
    "RngStream",
    "RuntimeGuard",
    "Superposition",
    "TurnOutcome",
    "Variant",
    "classify",
    "execute",
    "forced_measure",
    "format_move",
    "legal_moves",
    "max_superposition_size",
    "measure",
    "naive_bound",
    "parse_move",
    "parse_position",
    "probability_of_one",
    "serialize_position",
    "square_index",
    "square_name",
    "subspace_size",
    "superposition_bound",
]
