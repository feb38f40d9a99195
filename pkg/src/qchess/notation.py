"""Quantum Chess Algebraic Notation and position documents.

Move grammar (ASCII ^ for the wedge):

    standard    a1a2
    split       a1^a2a3          (target order is semantic)
    merge       a3a2^a1
    promotion   a7a8Q
    suffix      .m0 / .m1        (recorded measurement outcome)

Castling is written as the king's source and target (e1g1, e1c1); there
are no O-O forms.

Position documents come in two forms: a classical FEN-style line
("placement turn castling ep") for superposition-free positions, and a
versioned JSON save document carrying the amplitude list, ancilla
registry, seed and move log for bit-exact round trips.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError, PositionError
from .measure import RNG_ALGORITHM
from .state import (
    EMPTY,
    FILES,
    PIECE_LETTERS,
    AncillaEntry,
    AncillaRegistry,
    ClassicalLayer,
    FlagSet,
    Superposition,
    check_classical_consistency,
    square_index,
    square_name,
)

SAVE_VERSION = 1
PROMOTION_LETTERS = frozenset("QRBNqrbn")


@dataclass(frozen=True)
class Move:
    """A parsed QCAN move. Exactly one of the three shapes:

    standard:  source -> target (optional promotion piece)
    split:     source -> (target, target2), order preserved
    merge:     (source, source2) -> target
    """

    source: int
    target: int
    target2: Optional[int] = None
    source2: Optional[int] = None
    promotion: Optional[str] = None
    outcome: Optional[int] = None  # recorded measurement outcome, if any

    @property
    def kind(self) -> str:
        if self.target2 is not None:
            return "split"
        if self.source2 is not None:
            return "merge"
        return "standard"

    def without_outcome(self) -> "Move":
        if self.outcome is None:
            return self
        return Move(self.source, self.target, self.target2, self.source2, self.promotion)


def _square_at(text: str, pos: int) -> int:
    if pos + 2 > len(text):
        raise ParseError("expected square", pos)
    f, r = text[pos], text[pos + 1]
    if f not in FILES:
        raise ParseError(f"expected file a-h, got {f!r}", pos)
    if r not in "12345678":
        raise ParseError(f"expected rank 1-8, got {r!r}", pos + 1)
    return square_index(text[pos : pos + 2])


def parse_move(text: str) -> Move:
    """Parses one QCAN move string; errors carry the offending column."""
    if not text:
        raise ParseError("empty move", 0)
    body = text
    outcome = None
    dot = text.find(".")
    if dot >= 0:
        body, suffix = text[:dot], text[dot + 1 :]
        if len(suffix) < 2 or not suffix[:-1].isalpha() or not suffix[:-1].islower():
            raise ParseError("expected measurement label", dot + 1)
        if suffix[-1] not in "01":
            raise ParseError("expected outcome bit 0 or 1", len(text) - 1)
        outcome = int(suffix[-1])

    caret = body.find("^")
    if caret == 2:  # split: s^t1t2
        source = _square_at(body, 0)
        t1 = _square_at(body, 3)
        t2 = _square_at(body, 5)
        if len(body) != 7:
            raise ParseError("trailing characters after split move", 7)
        if t1 == t2:
            raise ParseError("split targets must differ", 5)
        if source in (t1, t2):
            raise ParseError("split source collides with a target", 3)
        return Move(source, t1, target2=t2, outcome=outcome)
    if caret == 4:  # merge: s1s2^t
        s1 = _square_at(body, 0)
        s2 = _square_at(body, 2)
        target = _square_at(body, 5)
        if len(body) != 7:
            raise ParseError("trailing characters after merge move", 7)
        if s1 == s2:
            raise ParseError("merge sources must differ", 2)
        if target in (s1, s2):
            raise ParseError("merge target collides with a source", 5)
        return Move(s1, target, source2=s2, outcome=outcome)
    if caret >= 0:
        raise ParseError("misplaced ^", caret)

    source = _square_at(body, 0)
    target = _square_at(body, 2)
    promotion = None
    if len(body) == 5:
        promotion = body[4]
        if promotion not in PROMOTION_LETTERS:
            raise ParseError(f"bad promotion piece {promotion!r}", 4)
    elif len(body) != 4:
        raise ParseError("trailing characters after move", 4)
    if source == target:
        raise ParseError("source equals target", 2)
    return Move(source, target, promotion=promotion, outcome=outcome)


def format_move(move: Move, outcome: Optional[int] = None, label: str = "m") -> str:
    """Canonical text; round-trips through parse_move."""
    if move.kind == "split":
        text = f"{square_name(move.source)}^{square_name(move.target)}{square_name(move.target2)}"
    elif move.kind == "merge":
        text = f"{square_name(move.source)}{square_name(move.source2)}^{square_name(move.target)}"
    else:
        text = f"{square_name(move.source)}{square_name(move.target)}"
        if move.promotion:
            text += move.promotion
    if outcome is None:
        outcome = move.outcome
    if outcome is not None:
        text += f".{label}{outcome}"
    return text


# --- position documents ----------------------------------------------------


@dataclass
class PositionDoc:
    """Everything a saved game carries. Classical FEN documents leave the
    seed at None and the log empty."""

    state: Superposition
    layer: ClassicalLayer
    registry: AncillaRegistry
    seed: Optional[int] = None
    move_log: tuple = ()


def _parse_placement(placement: str) -> tuple:
    ranks = placement.split("/")
    if len(ranks) != 8:
        raise PositionError("placement needs 8 ranks")
    values = [EMPTY] * 64
    for rank_offset, row in enumerate(ranks):
        rank = 7 - rank_offset  # FEN lists rank 8 first
        file = 0
        for ch in row:
            if ch.isdigit():
                file += int(ch)
            elif ch in PIECE_LETTERS:
                if file > 7:
                    raise PositionError(f"rank overflow in {row!r}")
                values[rank * 8 + file] = ch
                file += 1
            else:
                raise PositionError(f"bad placement char {ch!r}")
        if file != 8:
            raise PositionError(f"rank {row!r} does not cover 8 files")
    return tuple(values)


def _format_placement(values: tuple) -> str:
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        run = 0
        for file in range(8):
            v = values[rank * 8 + file]
            if v == EMPTY:
                run += 1
            else:
                if run:
                    row += str(run)
                    run = 0
                row += v
        if run:
            row += str(run)
        rows.append(row)
    return "/".join(rows)


def parse_classical(text: str) -> PositionDoc:
    """FEN-style classical position: every occupied square has amplitude
    weight 1 in a single basis term."""
    parts = text.split()
    if not parts:
        raise PositionError("empty position")
    values = _parse_placement(parts[0])
    if len(parts) == 1:
        flags = FlagSet()
    else:
        turn = parts[1]
        castling = parts[2] if len(parts) > 2 else "-"
        ep = parts[3] if len(parts) > 3 else "-"
        flags = FlagSet.from_text(f"{turn} {castling} {ep}")
    layer = ClassicalLayer(values, flags)
    state = Superposition.classical(layer.occupied_squares())
    return PositionDoc(state, layer, AncillaRegistry())


def serialize_classical(layer: ClassicalLayer) -> str:
    return f"{_format_placement(layer.values)} {layer.flags.text()}"


def serialize_position(doc: PositionDoc) -> str:
    """Versioned JSON save document; bit-exact round trip."""
    amplitudes = [
        [format(key, "x"), amp.real, amp.imag] for key, amp in doc.state.terms.items()
    ]
    payload = {
        "version": SAVE_VERSION,
        "rng": RNG_ALGORITHM,
        "v": "".join(doc.layer.values),
        "flags": doc.layer.flags.text(),
        "amplitudes": amplitudes,
        "ancillas": [
            [e.index, e.piece, square_name(e.origin), e.ply, e.kind]
            for e in doc.registry.entries
        ],
        "seed": doc.seed,
        "move_log": list(doc.move_log),
    }
    return json.dumps(payload)


def parse_save(text: str) -> PositionDoc:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PositionError(f"bad JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("version") != SAVE_VERSION:
        raise PositionError("unsupported save version")
    if payload.get("rng", RNG_ALGORITHM) != RNG_ALGORITHM:
        raise PositionError(f"unsupported rng {payload.get('rng')!r}")
    v = payload.get("v", "")
    if len(v) != 64:
        raise PositionError("v must have 64 entries")
    layer = ClassicalLayer(tuple(v), FlagSet.from_text(payload.get("flags", "w - -")))
    registry = AncillaRegistry()
    for index, piece, origin, ply, kind in payload.get("ancillas", ()):
        if index != registry.next_index():
            raise PositionError("ancilla indices must be contiguous from 64")
        registry.entries.append(
            AncillaEntry(index, piece, square_index(origin), ply, kind)
        )
    width = 64 + len(registry)
    terms = {}
    for hexkey, re_part, im_part in payload.get("amplitudes", ()):
        key = int(hexkey, 16)
        if key in terms:
            raise PositionError(f"duplicate basis key {hexkey}")
        terms[key] = complex(re_part, im_part)
    try:
        state = Superposition(terms, width)
    except ValueError as exc:
        raise PositionError(str(exc)) from exc
    check_classical_consistency(state, layer)
    return PositionDoc(
        state,
        layer,
        registry,
        seed=payload.get("seed"),
        move_log=tuple(payload.get("move_log", ())),
    )


def parse_position(text: str) -> PositionDoc:
    """Dispatches on document shape: JSON save docs vs classical FEN."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return parse_save(stripped)
    doc = parse_classical(stripped)
    check_classical_consistency(doc.state, doc.layer)
    return doc
