"""Move taxonomy: classification, possibility evaluation, and execution.

classify() evaluates the possibility equations against the classical
layer and returns the unique matching variant with its operands and (for
measuring variants) the projective measurement that enforces No Double
Occupancy. execute() then runs the measuring / non-measuring procedure:
measure, conditionally apply the variant's unitary, decide legality by
whether the occupancy superposition changed (modulo global phase), and
refresh the classical layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ImpossibleMoveError
from .measure import MeasurementSpec, RngStream, forced_measure, measure
from .notation import Move, format_move
from .state import (
    BLACK,
    BLACK_PIECES,
    EMPTY,
    FILES,
    PROB_EPS,
    WHITE,
    WHITE_PIECES,
    AncillaEntry,
    AncillaRegistry,
    ClassicalLayer,
    Superposition,
    file_of,
    piece_color,
    rank_of,
    square_index,
)
from .unitaries import (
    ISWAP,
    ControlSpec,
    apply_gate,
    apply_jump,
    apply_merge,
    apply_merge_slide,
    apply_slide,
    apply_split,
    apply_split_slide,
    embed,
)


class Variant(str, Enum):
    STANDARD_JUMP = "standard_jump"
    BLOCKED_JUMP = "blocked_jump"
    CAPTURE_JUMP = "capture_jump"
    STANDARD_SLIDE = "standard_slide"
    BLOCKED_SLIDE = "blocked_slide"
    CAPTURE_SLIDE = "capture_slide"
    SPLIT_JUMP = "split_jump"
    SPLIT_SLIDE = "split_slide"
    MERGE_JUMP = "merge_jump"
    MERGE_SLIDE = "merge_slide"
    PAWN_STEP = "pawn_step"
    BLOCKED_PAWN_STEP = "blocked_pawn_step"
    PAWN_TWO_STEP = "pawn_two_step"
    BLOCKED_PAWN_TWO_STEP = "blocked_pawn_two_step"
    PAWN_CAPTURE = "pawn_capture"
    STANDARD_EP = "standard_ep"
    BLOCKED_EP = "blocked_ep"
    CAPTURE_EP = "capture_ep"
    CASTLE_KS = "castle_ks"
    CASTLE_QS = "castle_qs"


MEASURING_VARIANTS = frozenset(
    {
        Variant.BLOCKED_JUMP,
        Variant.CAPTURE_JUMP,
        Variant.BLOCKED_SLIDE,
        Variant.CAPTURE_SLIDE,
        Variant.BLOCKED_PAWN_STEP,
        Variant.BLOCKED_PAWN_TWO_STEP,
        Variant.PAWN_CAPTURE,
        Variant.BLOCKED_EP,
        Variant.CAPTURE_EP,
        Variant.CASTLE_KS,
        Variant.CASTLE_QS,
    }
)

SPLIT_VARIANTS = frozenset({Variant.SPLIT_JUMP, Variant.SPLIT_SLIDE})


@dataclass(frozen=True)
class MoveKind:
    """A classified, executable move variant."""

    variant: Variant
    move: Move  # canonicalized (promotion case fixed, outcome stripped)
    color: str
    piece: str
    path: tuple = ()  # slide path s->t (or s1->t for merges)
    path2: tuple = ()  # second path for split/merge slides (s->t2 / s2->t)
    ep_square: Optional[int] = None
    captured: Optional[str] = None  # piece value on the target, if capturing
    ep_captured: Optional[str] = None  # pawn value on the e.p. square
    promotion: Optional[str] = None  # canonical promotion value
    rook_from: Optional[int] = None
    rook_to: Optional[int] = None
    b_square: Optional[int] = None  # queen-side castle control square
    measurement: Optional[MeasurementSpec] = None

    @property
    def mover_value(self) -> str:
        return self.promotion or self.piece


@dataclass
class MoveResult:
    """Outcome of execute(). An illegal (no-effect) move leaves the state
    triple untouched and does not consume the turn."""

    legal: bool
    reason: Optional[str]
    outcome: Optional[int]
    state: Superposition
    layer: ClassicalLayer
    entries: tuple = ()
    notation: str = ""


# --- geometry ---------------------------------------------------------------


def valid_pattern(t: int, s: int, piece: str) -> bool:
    """Geometric reachability under standard movement patterns, ignoring
    occupancy. Pawns are handled by pawn_geometry."""
    if s == t:
        return False
    df = abs(file_of(t) - file_of(s))
    dr = abs(rank_of(t) - rank_of(s))
    up = piece.upper()
    if up == "N":
        return (df, dr) in ((1, 2), (2, 1))
    if up == "K":
        return max(df, dr) == 1
    if up == "B":
        return df == dr
    if up == "R":
        return df == 0 or dr == 0
    if up == "Q":
        return df == dr or df == 0 or dr == 0
    return False


def ray_path(s: int, t: int) -> Optional[tuple]:
    """Squares strictly between s and t along a queen line, or None."""
    df = file_of(t) - file_of(s)
    dr = rank_of(t) - rank_of(s)
    if not (df == 0 or dr == 0 or abs(df) == abs(dr)) or (df == 0 and dr == 0):
        return None
    step_f = (df > 0) - (df < 0)
    step_r = (dr > 0) - (dr < 0)
    path = []
    f, r = file_of(s) + step_f, rank_of(s) + step_r
    while (f, r) != (file_of(t), rank_of(t)):
        path.append(r * 8 + f)
        f += step_f
        r += step_r
    return tuple(path)


def pawn_geometry(t: int, s: int, color: str, flags=None) -> Optional[str]:
    """Classifies pawn geometry: step, two_step, diagonal, or ep when the
    target file matches the e.p. flag (deeper e.p. validity is classify's
    job)."""
    forward = 1 if color == WHITE else -1
    df = file_of(t) - file_of(s)
    dr = rank_of(t) - rank_of(s)
    if df == 0 and dr == forward:
        return "step"
    first_rank = 1 if color == WHITE else 6
    if df == 0 and dr == 2 * forward and rank_of(s) == first_rank:
        return "two_step"
    if abs(df) == 1 and dr == forward:
        if flags is not None and flags.ep_file == FILES[file_of(t)]:
            return "ep"
        return "diagonal"
    return None


# --- measurement constructions (the M1 membership tests) --------------------


def _m1_target_empty(t: int) -> MeasurementSpec:
    return MeasurementSpec.bits_clear((t,), "target empty")


def _m1_source_occupied(s: int) -> MeasurementSpec:
    return MeasurementSpec.bit_set(s, "source occupied")


def _m1_capture_slide(s: int, t: int, path: tuple) -> MeasurementSpec:
    path_mask = 0
    for sq in path:
        path_mask |= 1 << sq
    # Path clear and source occupied, or path blocked and target empty.
    # With no path squares the blocked clause can never fire.
    clauses = ((1 << s, path_mask, 0),)
    if path_mask:
        clauses += ((0, 1 << t, path_mask),)
    return MeasurementSpec(clauses, "path clear and source occupied, or path blocked and target empty")


def _m1_squares_empty(squares: tuple) -> MeasurementSpec:
    return MeasurementSpec.bits_clear(squares, "castle target squares empty")


# --- composite capture gates -------------------------------------------------
# Per-term conditional gates whose fire condition reads the operand bits
# themselves (the circuit form encodes the condition into a control
# ancilla that stays a function of the board, so it never needs to be
# materialized). These
# matrices are only applied on the reachable subspace: fresh capture
# ancillas are |0> and measuring variants project the source first.


def _conditional(composite: np.ndarray, fires) -> np.ndarray:
    dim = composite.shape[0]
    out = np.eye(dim, dtype=complex)
    for r in range(dim):
        if fires(r):
            out[:, r] = composite[:, r]
    return out


# Pawn capture on (s, t, c): move only when both source and target are
# occupied (diagonal pawn movement only captures).
_PAWN_CAPTURE_GATE = _conditional(
    embed(ISWAP, (0, 1), 3) @ embed(ISWAP, (1, 2), 3),
    lambda r: (r & 0b011) == 0b011,
)

# E.p. on (s, t, ep, c): capture the bypassed pawn into c and advance,
# only when both the source and the e.p. square are occupied.
_EP_GATE = _conditional(
    embed(ISWAP, (0, 1), 4) @ embed(ISWAP, (2, 3), 4),
    lambda r: (r & 0b0101) == 0b0101,
)

# Capture e.p. on (s, t, ep, c1, c2): two captured ancillas; fires when
# the source is occupied and either the target or the e.p. square is.
_CAPTURE_EP_GATE = _conditional(
    embed(ISWAP, (0, 1), 5) @ embed(ISWAP, (1, 4), 5) @ embed(ISWAP, (2, 3), 5),
    lambda r: (r & 1) and (r & 0b110),
)


# --- classification ----------------------------------------------------------


def _impossible(code: str, detail: str = "") -> ImpossibleMoveError:
    return ImpossibleMoveError(code, detail)


def classify(move: Move, layer: ClassicalLayer) -> MoveKind:
    """Returns the unique variant whose possibility equation holds, or
    raises ImpossibleMoveError (turn not consumed)."""
    move = move.without_outcome()
    values = layer.values
    flags = layer.flags
    piece = values[move.source]
    if piece == EMPTY:
        raise _impossible("empty_source", "no piece on the source square")
    color = piece_color(piece)
    white = color == WHITE
    own = WHITE_PIECES if white else BLACK_PIECES
    opp = BLACK_PIECES if white else WHITE_PIECES
    up = piece.upper()

    if move.kind == "split":
        return _classify_split(move, values, piece, up, own)
    if move.kind == "merge":
        return _classify_merge(move, values, piece, up)

    if move.promotion is not None and up != "P":
        raise _impossible("bad_promotion", "only pawns promote")

    if up == "P":
        return _classify_pawn(move, values, flags, piece, color, opp)

    if up == "K":
        castle = _try_castle(move, values, flags, piece, color)
        if castle is not None:
            return castle

    if up in ("N", "K"):
        if not valid_pattern(move.target, move.source, piece):
            raise _impossible("pattern", f"{piece} cannot reach that square")
        return _jump_family(move, values, piece, color, own, opp)

    if up in ("B", "R", "Q"):
        if not valid_pattern(move.target, move.source, piece):
            raise _impossible("pattern", f"{piece} cannot reach that square")
        path = ray_path(move.source, move.target)
        return _slide_family(move, values, piece, color, own, opp, path)

    raise _impossible("pattern", f"unknown piece {piece!r}")


def _jump_family(move, values, piece, color, own, opp) -> MoveKind:
    v_t = values[move.target]
    if v_t == EMPTY or v_t == piece:
        return MoveKind(Variant.STANDARD_JUMP, move, color, piece)
    if v_t in opp:
        return MoveKind(
            Variant.CAPTURE_JUMP,
            move,
            color,
            piece,
            captured=v_t,
            measurement=_m1_source_occupied(move.source),
        )
    # v_t is another of our own piece values: the move would double-occupy.
    return MoveKind(
        Variant.BLOCKED_JUMP,
        move,
        color,
        piece,
        measurement=_m1_target_empty(move.target),
    )


def _slide_family(move, values, piece, color, own, opp, path) -> MoveKind:
    v_t = values[move.target]
    if v_t == EMPTY or v_t == piece:
        return MoveKind(Variant.STANDARD_SLIDE, move, color, piece, path=path)
    if v_t in opp:
        return MoveKind(
            Variant.CAPTURE_SLIDE,
            move,
            color,
            piece,
            path=path,
            captured=v_t,
            measurement=_m1_capture_slide(move.source, move.target, path),
        )
    return MoveKind(
        Variant.BLOCKED_SLIDE,
        move,
        color,
        piece,
        path=path,
        measurement=_m1_target_empty(move.target),
    )


def _classify_split(move, values, piece, up, own) -> MoveKind:
    if move.promotion is not None:
        raise _impossible("bad_promotion", "splits cannot promote")
    if up == "P":
        raise _impossible("pawn_split", "pawns may not split")
    t1, t2 = move.target, move.target2
    if not (valid_pattern(t1, move.source, piece) and valid_pattern(t2, move.source, piece)):
        raise _impossible("pattern", "both targets must be reachable")
    for t in (t1, t2):
        if values[t] not in (EMPTY, piece):
            raise _impossible("target_occupied", "split targets must be empty or hold the same piece")
    color = piece_color(piece)
    if up in ("N", "K"):
        return MoveKind(Variant.SPLIT_JUMP, move, color, piece)
    # Same-ray splits put one target on the other target's path; the
    # move's own operand squares never count as blockers, so a same-ray
    # merge exactly undoes the same-ray split.
    operands = {move.source, t1, t2}
    return MoveKind(
        Variant.SPLIT_SLIDE,
        move,
        color,
        piece,
        path=tuple(sq for sq in ray_path(move.source, t1) if sq not in operands),
        path2=tuple(sq for sq in ray_path(move.source, t2) if sq not in operands),
    )


def _classify_merge(move, values, piece, up) -> MoveKind:
    if move.promotion is not None:
        raise _impossible("bad_promotion", "merges cannot promote")
    if up == "P":
        raise _impossible("pawn_merge", "pawns may not merge")
    s1, s2, t = move.source, move.source2, move.target
    if values[s2] != piece:
        raise _impossible("merge_mismatch", "merge sources must hold the same piece")
    if not (valid_pattern(t, s1, piece) and valid_pattern(t, s2, piece)):
        raise _impossible("pattern", "target must be reachable from both sources")
    if values[t] not in (EMPTY, piece):
        raise _impossible("target_occupied", "merge target must be empty or hold the same piece")
    color = piece_color(piece)
    if up in ("N", "K"):
        return MoveKind(Variant.MERGE_JUMP, move, color, piece)
    operands = {s1, s2, t}
    return MoveKind(
        Variant.MERGE_SLIDE,
        move,
        color,
        piece,
        path=tuple(sq for sq in ray_path(s1, t) if sq not in operands),
        path2=tuple(sq for sq in ray_path(s2, t) if sq not in operands),
    )


def _try_castle(move, values, flags, piece, color) -> Optional[MoveKind]:
    white = color == WHITE
    rank = 0 if white else 7
    home = rank * 8 + 4  # e-file
    if move.source != home or rank_of(move.target) != rank:
        return None
    rook = "R" if white else "r"
    if move.target == rank * 8 + 6:  # king side: e -> g
        if not (flags.castle_K if white else flags.castle_k):
            raise _impossible("castle_rights", "king-side castling unavailable")
        if values[rank * 8 + 7] != rook:
            raise _impossible("castle_rook", "no rook on the h-file home square")
        f_sq, g_sq = rank * 8 + 5, rank * 8 + 6
        return MoveKind(
            Variant.CASTLE_KS,
            move,
            color,
            piece,
            rook_from=rank * 8 + 7,
            rook_to=f_sq,
            measurement=_m1_squares_empty((f_sq, g_sq)),
        )
    if move.target == rank * 8 + 2:  # queen side: e -> c
        if not (flags.castle_Q if white else flags.castle_q):
            raise _impossible("castle_rights", "queen-side castling unavailable")
        if values[rank * 8] != rook:
            raise _impossible("castle_rook", "no rook on the a-file home square")
        c_sq, d_sq = rank * 8 + 2, rank * 8 + 3
        return MoveKind(
            Variant.CASTLE_QS,
            move,
            color,
            piece,
            rook_from=rank * 8,
            rook_to=d_sq,
            b_square=rank * 8 + 1,
            measurement=_m1_squares_empty((c_sq, d_sq)),
        )
    return None


def _classify_pawn(move, values, flags, piece, color, opp) -> MoveKind:
    white = color == WHITE
    geom = pawn_geometry(move.target, move.source, color, flags)
    if geom is None:
        raise _impossible("pattern", "not a pawn movement pattern")

    last_rank = 7 if white else 0
    promotion = None
    if rank_of(move.target) == last_rank:
        if move.promotion is None:
            raise _impossible("promotion_required", "moves to the last rank must name a piece")
        if move.promotion.upper() not in "QRBN":
            raise _impossible("bad_promotion", "promotion must be Q, R, B or N")
        promotion = move.promotion.upper() if white else move.promotion.lower()
    elif move.promotion is not None:
        raise _impossible("bad_promotion", "promotion only on the last rank")
    canonical = Move(move.source, move.target, promotion=promotion)

    own_pawn = piece
    v_t = values[move.target]
    if geom == "step":
        if v_t == EMPTY or v_t == own_pawn:
            return MoveKind(Variant.PAWN_STEP, canonical, color, piece, promotion=promotion)
        return MoveKind(
            Variant.BLOCKED_PAWN_STEP,
            canonical,
            color,
            piece,
            promotion=promotion,
            measurement=_m1_target_empty(move.target),
        )
    if geom == "two_step":
        mid = ray_path(move.source, move.target)
        if v_t == EMPTY or v_t == own_pawn:
            return MoveKind(Variant.PAWN_TWO_STEP, canonical, color, piece, path=mid)
        return MoveKind(
            Variant.BLOCKED_PAWN_TWO_STEP,
            canonical,
            color,
            piece,
            path=mid,
            measurement=_m1_target_empty(move.target),
        )

    # Diagonal: e.p. context takes precedence when it genuinely applies.
    opp_pawn = "p" if white else "P"
    ep_sq = rank_of(move.source) * 8 + file_of(move.target)
    ep_ok = (
        geom == "ep"
        and values[ep_sq] == opp_pawn
        and rank_of(move.source) == (4 if white else 3)
    )
    if ep_ok:
        if v_t == EMPTY or v_t == own_pawn:
            return MoveKind(
                Variant.STANDARD_EP,
                canonical,
                color,
                piece,
                ep_square=ep_sq,
                ep_captured=opp_pawn,
            )
        if v_t in opp:
            return MoveKind(
                Variant.CAPTURE_EP,
                canonical,
                color,
                piece,
                ep_square=ep_sq,
                captured=v_t,
                ep_captured=opp_pawn,
                measurement=_m1_source_occupied(move.source),
            )
        return MoveKind(
            Variant.BLOCKED_EP,
            canonical,
            color,
            piece,
            ep_square=ep_sq,
            ep_captured=opp_pawn,
            measurement=_m1_target_empty(move.target),
        )
    if v_t in opp:
        return MoveKind(
            Variant.PAWN_CAPTURE,
            canonical,
            color,
            piece,
            promotion=promotion,
            captured=v_t,
            measurement=_m1_source_occupied(move.source),
        )
    raise _impossible("pawn_diagonal", "diagonal pawn moves must capture")


# --- execution ---------------------------------------------------------------


def _apply_variant(
    state: Superposition, kind: MoveKind, anc_base: int, ply: int
) -> tuple:
    """Applies the variant's unitary; returns (state, ancilla entries)."""
    v = kind.variant
    mv = kind.move
    s, t = mv.source, mv.target
    entries = []

    if v in (Variant.STANDARD_JUMP, Variant.PAWN_STEP, Variant.BLOCKED_JUMP, Variant.BLOCKED_PAWN_STEP):
        state = apply_jump(state, s, t)
    elif v in (Variant.STANDARD_SLIDE, Variant.BLOCKED_SLIDE, Variant.PAWN_TWO_STEP, Variant.BLOCKED_PAWN_TWO_STEP):
        state = apply_slide(state, s, t, kind.path)
    elif v == Variant.CAPTURE_JUMP:
        c = anc_base
        entries.append(AncillaEntry(c, kind.captured, t, ply))
        state = state.widened(1)
        state = apply_jump(state, t, c)
        state = apply_jump(state, s, t)
    elif v == Variant.CAPTURE_SLIDE:
        c = anc_base
        entries.append(AncillaEntry(c, kind.captured, t, ply))
        state = state.widened(1)
        state = apply_slide(state, t, c, kind.path)
        state = apply_slide(state, s, t, kind.path)
    elif v == Variant.SPLIT_JUMP:
        state = apply_split(state, s, t, mv.target2)
    elif v == Variant.SPLIT_SLIDE:
        state = apply_split_slide(state, s, t, mv.target2, kind.path, kind.path2)
    elif v == Variant.MERGE_JUMP:
        state = apply_merge(state, s, mv.source2, t)
    elif v == Variant.MERGE_SLIDE:
        state = apply_merge_slide(state, s, mv.source2, t, kind.path, kind.path2)
    elif v == Variant.PAWN_CAPTURE:
        c = anc_base
        entries.append(AncillaEntry(c, kind.captured, t, ply))
        state = state.widened(1)
        state = apply_gate(state, (_PAWN_CAPTURE_GATE,), (s, t, c))
    elif v in (Variant.STANDARD_EP, Variant.BLOCKED_EP):
        c = anc_base
        entries.append(AncillaEntry(c, kind.ep_captured, kind.ep_square, ply))
        state = state.widened(1)
        state = apply_gate(state, (_EP_GATE,), (s, t, kind.ep_square, c))
    elif v == Variant.CAPTURE_EP:
        c1, c2 = anc_base, anc_base + 1
        entries.append(AncillaEntry(c1, kind.ep_captured, kind.ep_square, ply))
        entries.append(AncillaEntry(c2, kind.captured, t, ply))
        state = state.widened(2)
        state = apply_gate(state, (_CAPTURE_EP_GATE,), (s, t, kind.ep_square, c1, c2))
    elif v == Variant.CASTLE_KS:
        state = apply_jump(state, kind.rook_from, kind.rook_to)
        state = apply_jump(state, s, t)
    elif v == Variant.CASTLE_QS:
        ctrl = ControlSpec.make(zeros=(kind.b_square,))
        state = apply_jump(state, s, t, ctrl)
        state = apply_jump(state, kind.rook_from, kind.rook_to, ctrl)
    else:  # pragma: no cover
        raise AssertionError(f"unhandled variant {v}")
    return state, entries


_HOME_RIGHTS = {
    square_index("e1"): ("castle_K", "castle_Q"),
    square_index("h1"): ("castle_K",),
    square_index("a1"): ("castle_Q",),
    square_index("e8"): ("castle_k", "castle_q"),
    square_index("h8"): ("castle_k",),
    square_index("a8"): ("castle_q",),
}


def _involved_squares(kind: MoveKind) -> set:
    mv = kind.move
    involved = {mv.source, mv.target}
    if mv.target2 is not None:
        involved.add(mv.target2)
    if mv.source2 is not None:
        involved.add(mv.source2)
    if kind.ep_square is not None:
        involved.add(kind.ep_square)
    if kind.rook_from is not None:
        involved.update((kind.rook_from, kind.rook_to))
    return involved


def _refresh_classical(
    state: Superposition, layer: ClassicalLayer, kind: MoveKind, outcome: Optional[int]
) -> ClassicalLayer:
    margs = state.marginals()
    values = list(layer.values)

    if outcome != 0:  # the unitary ran: targets take the mover's value
        mv = kind.move
        assignments = {}
        if kind.variant == Variant.CASTLE_KS or kind.variant == Variant.CASTLE_QS:
            assignments[mv.target] = kind.piece
            assignments[kind.rook_to] = "R" if kind.color == WHITE else "r"
        else:
            assignments[mv.target] = kind.mover_value
            if mv.target2 is not None:
                assignments[mv.target2] = kind.mover_value
        for sq, value in assignments.items():
            if margs[sq] > PROB_EPS:
                values[sq] = value

    for sq in range(64):
        if margs[sq] <= PROB_EPS:
            values[sq] = EMPTY

    flags = layer.flags
    rights = {}
    for sq in _involved_squares(kind):
        for right in _HOME_RIGHTS.get(sq, ()):
            if getattr(flags, right):
                rights[right] = False

    ep_file = None
    if kind.variant == Variant.PAWN_TWO_STEP or (
        kind.variant == Variant.BLOCKED_PAWN_TWO_STEP and outcome == 1
    ):
        ep_file = FILES[file_of(kind.move.source)]

    flags = flags.with_(
        turn=BLACK if kind.color == WHITE else WHITE, ep_file=ep_file, **rights
    )
    return ClassicalLayer(tuple(values), flags)


def execute(
    state: Superposition,
    layer: ClassicalLayer,
    registry: AncillaRegistry,
    kind: MoveKind,
    rng: RngStream,
    ply: int,
    forced_outcome: Optional[int] = None,
) -> MoveResult:
    """Runs the (measuring) move procedure on an immutable state triple.

    Illegal moves (no effect on the occupancy superposition, modulo global
    phase) roll back completely, including the rng draw; this is safe
    because a measuring move can only be a no-op when its outcome was
    certain.
    """
    start_counter = rng.counter
    psi0 = state
    psi = state
    outcome = None
    if kind.measurement is not None:
        if forced_outcome is None:
            outcome, psi, _ = measure(psi, kind.measurement, rng)
        else:
            rng.draw()  # keep the stream aligned with live play
            psi = forced_measure(psi, kind.measurement, forced_outcome)
            outcome = forced_outcome

    entries = []
    if outcome != 0:
        psi, entries = _apply_variant(psi, kind, registry.next_index(), ply)

    before = psi0.widened(psi.width - psi0.width)
    if psi.equal_mod_global_phase(before):
        rng.counter = start_counter
        return MoveResult(False, "no_effect", outcome, psi0, layer)

    registry.extend(entries)
    new_layer = _refresh_classical(psi, layer, kind, outcome)
    notation = format_move(
        kind.move, outcome=outcome if kind.measurement is not None else None
    )
    return MoveResult(True, None, outcome, psi, new_layer, tuple(entries), notation)


# --- enumeration -------------------------------------------------------------


def _try_classify(move: Move, layer: ClassicalLayer, out: list) -> None:
    try:
        classify(move, layer)
    except ImpossibleMoveError:
        return
    out.append(move)


def legal_moves(layer: ClassicalLayer) -> list:
    """Every move whose possibility equation holds for the side to move.

    Possibility-level only: some of these may still have no effect when
    executed (and would not consume the turn)."""
    moves: list = []
    turn = layer.flags.turn
    for s in range(64):
        piece = layer.values[s]
        if piece == EMPTY or piece_color(piece) != turn:
            continue
        up = piece.upper()
        if up == "P":
            _pawn_candidates(s, piece, layer, moves)
            continue
        targets = [t for t in range(64) if valid_pattern(t, s, piece)]
        for t in targets:
            _try_classify(Move(s, t), layer, moves)
        if up == "K":
            rank = rank_of(s)
            for target_file in (6, 2):
                _try_classify(Move(s, rank * 8 + target_file), layer, moves)
        split_targets = [t for t in targets if layer.values[t] in (EMPTY, piece)]
        for t1 in split_targets:
            for t2 in split_targets:
                if t1 != t2:
                    _try_classify(Move(s, t1, target2=t2), layer, moves)
        partners = [sq for sq in layer.squares_with(piece) if sq != s]
        for s2 in partners:
            for t in split_targets:
                if t != s2 and valid_pattern(t, s2, piece):
                    _try_classify(Move(s, t, source2=s2), layer, moves)
    return moves


def _pawn_candidates(s: int, piece: str, layer: ClassicalLayer, moves: list) -> None:
    color = piece_color(piece)
    white = color == WHITE
    forward = 1 if white else -1
    last_rank = 7 if white else 0
    r, f = rank_of(s), file_of(s)
    candidates = []
    for dr, df in ((forward, 0), (2 * forward, 0), (forward, -1), (forward, 1)):
        nr, nf = r + dr, f + df
        if 0 <= nr <= 7 and 0 <= nf <= 7:
            candidates.append(nr * 8 + nf)
    for t in candidates:
        if rank_of(t) == last_rank:
            for promo in "QRBN":
                letter = promo if white else promo.lower()
                _try_classify(Move(s, t, promotion=letter), layer, moves)
        else:
            _try_classify(Move(s, t), layer, moves)
