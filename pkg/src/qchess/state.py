"""Hybrid quantum/classical board state.

The quantum part is a sparse superposition over occupancy basis states:
one bit per board square (a1=0, b1=1, ..., h8=63), ancilla bits appended
from 64 upward in the order they are created. Piece identity stays
classical: a 64-entry value vector of FEN letters ("0" = empty) plus the
flag set (turn, castling rights, en-passant file).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional

from ._backend import kernels
from .errors import PositionError

FILES = "abcdefgh"
WHITE = "w"
BLACK = "b"
EMPTY = "0"
WHITE_PIECES = frozenset("PNBRQK")
BLACK_PIECES = frozenset("pnbrqk")
PIECE_LETTERS = WHITE_PIECES | BLACK_PIECES

PRUNE_EPS = 1e-12  # amplitudes below this are dropped
PROB_EPS = 1e-9  # probabilities below this count as zero
NORM_TOL = 1e-9
PHASE_TOL = 1e-9

START_VALUES = (
    "RNBQKBNR" + "P" * 8 + EMPTY * 32 + "p" * 8 + "rnbqkbnr"
)


def square_index(name: str) -> int:
    """Converts algebraic coordinates ("e4") to the 0..63 square index."""
    if len(name) != 2 or name[0] not in FILES or name[1] not in "12345678":
        raise ValueError(f"bad square {name!r}")
    return (int(name[1]) - 1) * 8 + FILES.index(name[0])


def square_name(index: int) -> str:
    return FILES[index % 8] + str(index // 8 + 1)


def file_of(index: int) -> int:
    return index % 8


def rank_of(index: int) -> int:
    return index // 8


def piece_color(piece: str) -> Optional[str]:
    if piece in WHITE_PIECES:
        return WHITE
    if piece in BLACK_PIECES:
        return BLACK
    return None


@dataclass(frozen=True)
class FlagSet:
    """Classical flags: side to move, castling rights, e.p. file."""

    turn: str = WHITE
    castle_K: bool = True
    castle_Q: bool = True
    castle_k: bool = True
    castle_q: bool = True
    ep_file: Optional[str] = None  # "a".."h" while en passant is available

    def castling_text(self) -> str:
        text = "".join(
            letter
            for letter, flag in (
                ("K", self.castle_K),
                ("Q", self.castle_Q),
                ("k", self.castle_k),
                ("q", self.castle_q),
            )
            if flag
        )
        return text or "-"

    def text(self) -> str:
        return f"{self.turn} {self.castling_text()} {self.ep_file or '-'}"

    @classmethod
    def from_text(cls, text: str) -> "FlagSet":
        parts = text.split()
        if len(parts) < 3:
            raise PositionError(f"bad flags {text!r}")
        turn, castling, ep = parts[0], parts[1], parts[2]
        if turn not in (WHITE, BLACK):
            raise PositionError(f"bad turn {turn!r}")
        if castling != "-" and not set(castling) <= set("KQkq"):
            raise PositionError(f"bad castling {castling!r}")
        # FEN gives a square ("e3") for e.p.; we track just the file.
        if ep == "-":
            ep_file = None
        elif ep[0] in FILES and len(ep) <= 2:
            ep_file = ep[0]
        else:
            raise PositionError(f"bad e.p. field {ep!r}")
        return cls(
            turn=turn,
            castle_K="K" in castling,
            castle_Q="Q" in castling,
            castle_k="k" in castling,
            castle_q="q" in castling,
            ep_file=ep_file,
        )

    def with_(self, **changes) -> "FlagSet":
        return replace(self, **changes)


@dataclass(frozen=True)
class AncillaEntry:
    """One appended qubit: which piece it absorbed and where from."""

    index: int
    piece: str
    origin: int  # square index the piece was captured from
    ply: int
    kind: str = "captured"


class AncillaRegistry:
    """Append-only record of ancilla qubits, indices contiguous from 64."""

    def __init__(self, entries: Iterable[AncillaEntry] = ()):
        self.entries: list[AncillaEntry] = list(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def next_index(self) -> int:
        return 64 + len(self.entries)

    def append(self, piece: str, origin: int, ply: int, kind: str = "captured") -> int:
        index = self.next_index()
        self.entries.append(AncillaEntry(index, piece, origin, ply, kind))
        return index

    def extend(self, entries: Iterable[AncillaEntry]) -> None:
        for entry in entries:
            if entry.index != self.next_index():
                raise ValueError("ancilla indices must be contiguous")
            self.entries.append(entry)

    def copy(self) -> "AncillaRegistry":
        return AncillaRegistry(self.entries)


class Superposition:
    """Sparse occupancy superposition: basis key -> complex amplitude.

    Instances are treated as immutable snapshots; every operation returns
    a new value. Keys share the same bit width: 64 board bits plus one bit
    per registered ancilla.
    """

    __slots__ = ("terms", "width")

    def __init__(self, terms: dict, width: int = 64, *, check: bool = True):
        if check:
            norm = kernels.norm_sq(terms)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state norm {norm} outside tolerance")
            limit = 1 << width
            for key in terms:
                if key < 0 or key >= limit:
                    raise ValueError("basis key exceeds declared width")
        self.terms = terms
        self.width = width

    @classmethod
    def _wrap(cls, terms: dict, width: int) -> "Superposition":
        return cls(terms, width, check=False)

    @classmethod
    def classical(cls, occupied: Iterable[int]) -> "Superposition":
        key = 0
        for square in occupied:
            key |= 1 << square
        return cls._wrap({key: 1.0 + 0.0j}, 64)

    def __len__(self) -> int:
        return len(self.terms)

    def norm_sq(self) -> float:
        return kernels.norm_sq(self.terms)

    def marginal_occupancy(self, index: int) -> float:
        """Probability that square/ancilla ``index`` is occupied."""
        if index < 0 or index >= self.width:
            raise IndexError(f"bit {index} out of range for width {self.width}")
        mask = 1 << index
        return kernels.prob_clauses(self.terms, ((mask, 0, 0),))

    def joint_probability(self, ones: Iterable[int] = (), zeros: Iterable[int] = ()) -> float:
        """Probability that every `ones` bit is set and every `zeros` bit clear."""
        ones_mask = 0
        zeros_mask = 0
        for i in ones:
            ones_mask |= 1 << i
        for i in zeros:
            zeros_mask |= 1 << i
        if ones_mask & zeros_mask:
            raise ValueError("ones and zeros overlap")
        if (ones_mask | zeros_mask) >> self.width:
            raise IndexError("bit index out of range")
        return kernels.prob_clauses(self.terms, ((ones_mask, zeros_mask, 0),))

    def marginals(self) -> list:
        return kernels.marginals(self.terms, self.width)

    def widened(self, extra_bits: int) -> "Superposition":
        """Tensors on `extra_bits` fresh |0> ancillas (keys unchanged)."""
        return Superposition._wrap(dict(self.terms), self.width + extra_bits)

    def pruned(self) -> "Superposition":
        terms = kernels.prune_renorm(self.terms, PRUNE_EPS)
        if not terms:
            raise ValueError("projection onto empty subspace (zero norm)")
        return Superposition._wrap(terms, self.width)

    def equal_mod_global_phase(self, other: "Superposition", tol: float = PHASE_TOL) -> bool:
        """True when the states differ only by a global phase.

        The reference phase is fixed by this state's largest-magnitude
        term, then compared term-wise.
        """
        if self.width != other.width:
            raise ValueError("bit width mismatch")
        if not self.terms or not other.terms:
            return not self.terms and not other.terms
        anchor = max(self.terms, key=lambda k: abs(self.terms[k]))
        other_amp = other.terms.get(anchor)
        if other_amp is None or abs(other_amp) == 0.0:
            return False
        phase = self.terms[anchor] / other_amp
        mag = abs(phase)
        if abs(mag - 1.0) > tol:
            return False
        phase /= mag
        for key in self.terms.keys() | other.terms.keys():
            a = self.terms.get(key, 0j)
            b = other.terms.get(key, 0j)
            if abs(a - phase * b) > tol:
                return False
        return True

    def constant_ancilla_bits(self) -> dict:
        """Ancilla bits (>=64) holding the same value in every term."""
        if not self.terms:
            return {}
        keys = iter(self.terms)
        first = next(keys)
        same_ones = first
        same_zeros = ~first
        for key in keys:
            same_ones &= key
            same_zeros &= ~key
        constant = {}
        for bit in range(64, self.width):
            mask = 1 << bit
            if same_ones & mask:
                constant[bit] = 1
            elif same_zeros & mask:
                constant[bit] = 0
        return constant


def append_ancilla(
    state: Superposition,
    registry: AncillaRegistry,
    piece: str,
    origin: int,
    ply: int,
    kind: str = "captured",
) -> tuple:
    """Expands the Hilbert space by one |0> ancilla; returns (state, index)."""
    index = registry.append(piece, origin, ply, kind)
    return state.widened(1), index


@dataclass(frozen=True)
class ClassicalLayer:
    """Per-square piece values plus the flag set."""

    values: tuple
    flags: FlagSet

    def __post_init__(self):
        if len(self.values) != 64:
            raise PositionError("value vector must have 64 entries")
        for v in self.values:
            if v != EMPTY and v not in PIECE_LETTERS:
                raise PositionError(f"bad piece value {v!r}")

    @classmethod
    def start(cls) -> "ClassicalLayer":
        return cls(tuple(START_VALUES), FlagSet())

    def piece_at(self, square: int) -> str:
        return self.values[square]

    def squares_with(self, piece: str) -> list:
        return [i for i, v in enumerate(self.values) if v == piece]

    def occupied_squares(self) -> list:
        return [i for i, v in enumerate(self.values) if v != EMPTY]

    def with_values(self, values: tuple) -> "ClassicalLayer":
        return ClassicalLayer(values, self.flags)

    def with_flags(self, flags: FlagSet) -> "ClassicalLayer":
        return ClassicalLayer(self.values, flags)


def check_classical_consistency(state: Superposition, layer: ClassicalLayer) -> None:
    """Asserts values[s] != 0 <=> marginal(s) > PROB_EPS for every square."""
    margs = state.marginals()
    for square in range(64):
        occupied = margs[square] > PROB_EPS
        has_value = layer.values[square] != EMPTY
        if occupied != has_value:
            raise PositionError(
                f"square {square_name(square)}: value {layer.values[square]!r} "
                f"but occupancy probability {margs[square]:.3g}"
            )
