"""Turn loop and rules arbiter.

A Game owns one state triple (superposition, values, flags) plus the
ancilla registry, the seeded rng and the move log. Moves that have no
effect on the occupancy superposition do not consume the turn; the log
records only state-changing moves, with measurement outcome suffixes, so
seed + log replays bit-exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .bounds import RuntimeGuard
from .errors import CorruptLogError, ImpossibleMoveError, ParseError
from .measure import RngStream
from .moves import SPLIT_VARIANTS, classify, execute, legal_moves
from .notation import (
    Move,
    PositionDoc,
    format_move,
    parse_move,
    parse_position,
    serialize_position,
)
from .state import (
    BLACK,
    EMPTY,
    PROB_EPS,
    WHITE,
    AncillaRegistry,
    ClassicalLayer,
    Superposition,
    piece_color,
    square_name,
)

START_DOC = None  # standard chess start; built lazily


class GameStatus(str, Enum):
    ONGOING = "ongoing"
    WHITE_WINS = "white_wins"
    BLACK_WINS = "black_wins"
    DRAW = "draw"


@dataclass
class TurnOutcome:
    accepted: bool
    reason: Optional[str] = None  # rejection code when not accepted
    message: str = ""
    outcome: Optional[int] = None  # measurement outcome, if the move measured
    notation: str = ""  # canonical logged text (with suffix) when accepted
    status: GameStatus = GameStatus.ONGOING
    warnings: tuple = ()


class Game:
    """One quantum chess game with a single logical writer."""

    def __init__(
        self,
        position: Union[str, PositionDoc, None] = None,
        seed: int = 0,
        guard: Optional[RuntimeGuard] = None,
        free_play: bool = False,
    ):
        if position is None:
            layer = ClassicalLayer.start()
            doc = PositionDoc(
                Superposition.classical(layer.occupied_squares()),
                layer,
                AncillaRegistry(),
            )
        elif isinstance(position, PositionDoc):
            doc = position
        else:
            doc = parse_position(position)
        self.state = doc.state
        self.layer = doc.layer
        self.registry = doc.registry
        if doc.seed is not None:
            seed = doc.seed
        self.seed = seed
        # Live play consumes exactly one draw per measuring (suffixed) move,
        # so a loaded log pins the stream position.
        counter = sum(1 for entry in doc.move_log if "." in entry)
        self.rng = RngStream(seed, counter)
        self.log: list = list(doc.move_log)
        self.guard = guard
        self.free_play = free_play
        # Termination is judged on move results (rules): a color whose king
        # was never in play (demo/exercise positions) cannot lose by its
        # absence, so record who starts with king presence.
        self.status = GameStatus.ONGOING
        self._king_in_play = {
            color: self.king_presence(color) > PROB_EPS for color in (WHITE, BLACK)
        }

    # -- queries --------------------------------------------------------

    @property
    def ply(self) -> int:
        return len(self.log)

    def king_presence(self, color: str) -> float:
        king = "K" if color == WHITE else "k"
        squares = self.layer.squares_with(king)
        if not squares:
            return 0.0
        return 1.0 - self.state.joint_probability(zeros=squares)

    def _derive_status(self) -> GameStatus:
        white_gone = self._king_in_play[WHITE] and self.king_presence(WHITE) <= PROB_EPS
        black_gone = self._king_in_play[BLACK] and self.king_presence(BLACK) <= PROB_EPS
        if white_gone and black_gone:
            return GameStatus.DRAW
        if white_gone:
            return GameStatus.BLACK_WINS
        if black_gone:
            return GameStatus.WHITE_WINS
        return GameStatus.ONGOING

    def legal_moves(self) -> list:
        """Possibility-level moves for the side to move, as QCAN strings."""
        return [format_move(m) for m in legal_moves(self.layer)]

    def state_fingerprint(self) -> str:
        """sha256 over the exact state triple; replay must reproduce it."""
        digest = hashlib.sha256()
        for key in sorted(self.state.terms):
            amp = self.state.terms[key]
            digest.update(f"{key:x}:{amp.real!r}:{amp.imag!r};".encode())
        digest.update("".join(self.layer.values).encode())
        digest.update(self.layer.flags.text().encode())
        return digest.hexdigest()

    def snapshot(self) -> dict:
        """Read-only display document (versioned)."""
        margs = self.state.marginals()
        squares = [
            {
                "square": square_name(i),
                "piece": self.layer.values[i] if self.layer.values[i] != EMPTY else None,
                "probability": margs[i],
            }
            for i in range(64)
        ]
        captured = [
            {
                "ancilla": e.index,
                "piece": e.piece,
                "origin": square_name(e.origin),
                "ply": e.ply,
                "probability": margs[e.index] if e.index < len(margs) else 0.0,
            }
            for e in self.registry.entries
        ]
        last = None
        if self.log:
            text = self.log[-1]
            last = {"notation": text, "outcome": int(text[-1]) if "." in text else None}
        return {
            "version": 1,
            "status": self.status.value,
            "turn": self.layer.flags.turn,
            "flags": self.layer.flags.text(),
            "squares": squares,
            "captured": captured,
            "last_move": last,
            "term_count": len(self.state),
            "move_count": len(self.log),
        }

    # -- mutation -------------------------------------------------------

    def _reject(self, reason: str, message: str = "") -> TurnOutcome:
        return TurnOutcome(False, reason, message, status=self.status)

    def submit_move(self, text: str) -> TurnOutcome:
        """Parses, classifies and executes one move for the side to move."""
        if self.status != GameStatus.ONGOING:
            return self._reject("game_over", "the game has ended")
        try:
            move = parse_move(text)
        except ParseError as exc:
            return self._reject("parse_error", str(exc))
        if move.outcome is not None:
            return self._reject(
                "recorded_outcome", "outcome suffixes are only valid in replay"
            )
        return self._run(move, forced_outcome=None)

    def replay_move(self, text: str) -> TurnOutcome:
        """Replays one logged move, forcing its recorded outcome."""
        move = parse_move(text)
        return self._run(move, forced_outcome=move.outcome, replaying=True)

    def _run(self, move: Move, forced_outcome: Optional[int], replaying: bool = False) -> TurnOutcome:
        mover = piece_color(self.layer.values[move.source])
        layer = self.layer
        if self.free_play:
            if mover is not None and mover != layer.flags.turn:
                layer = layer.with_flags(layer.flags.with_(turn=mover))
        elif mover is not None and mover != layer.flags.turn:
            return self._reject("wrong_color", "source piece is not yours")
        try:
            kind = classify(move, layer)
        except ImpossibleMoveError as exc:
            if replaying:
                raise CorruptLogError(f"logged move is impossible: {exc}") from exc
            return self._reject(exc.code, str(exc))

        if replaying:
            if (kind.measurement is not None) != (forced_outcome is not None):
                raise CorruptLogError(
                    "log outcome suffix does not match the move's measurement"
                )
        warnings = []
        if self.guard is not None and kind.variant in SPLIT_VARIANTS:
            if not self.guard.allows_split(len(self.state)):
                return self._reject(
                    "guard", f"split refused: could exceed {self.guard.ceiling} terms"
                )

        result = execute(
            self.state, layer, self.registry, kind, self.rng, self.ply, forced_outcome
        )
        if not result.legal:
            if replaying:
                raise CorruptLogError("logged move had no effect on replay")
            return self._reject("no_effect", "move leaves the state unchanged; pick another")

        self.state = result.state
        self.layer = result.layer
        self.log.append(result.notation)
        self.status = self._derive_status()
        if self.guard is not None:
            event = self.guard.check(len(self.state))
            if event:
                warnings.append(event)
        return TurnOutcome(
            True,
            outcome=result.outcome,
            notation=result.notation,
            status=self.status,
            warnings=tuple(warnings),
        )

    # -- persistence ----------------------------------------------------

    def save(self) -> str:
        return serialize_position(
            PositionDoc(self.state, self.layer, self.registry, self.seed, tuple(self.log))
        )

    @classmethod
    def load(cls, text: str) -> "Game":
        return cls(parse_position(text))

    @classmethod
    def replay(
        cls,
        log_lines,
        position: Union[str, PositionDoc, None] = None,
        seed: int = 0,
        free_play: bool = False,
    ) -> "Game":
        """Builds a game by forced replay of a QCAN log."""
        game = cls(position, seed=seed, free_play=free_play)
        game.rng.counter = 0
        game.log = []
        for line in log_lines:
            line = line.strip()
            if line:
                game.replay_move(line)
        return game
