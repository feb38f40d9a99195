"""Shared test utilities: position builders, basis-state literals, the
engine/oracle mirror harness, and matrix reconstruction from basis
actions."""

from __future__ import annotations

import numpy as np

from qchess.game import Game
from qchess.moves import classify
from qchess.notation import parse_move
from qchess.state import Superposition, piece_color, square_index

from dense_oracle import DenseOracle


def fen_from_pieces(pieces: dict, turn: str = "w", castling: str = "-", ep: str = "-") -> str:
    """Builds a classical position line from {"e1": "K", ...}."""
    values = ["0"] * 64
    for name, letter in pieces.items():
        values[square_index(name)] = letter
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        run = 0
        for file in range(8):
            v = values[rank * 8 + file]
            if v == "0":
                run += 1
            else:
                if run:
                    row += str(run)
                    run = 0
                row += v
        if run:
            row += str(run)
        rows.append(row)
    return "/".join(rows) + f" {turn} {castling} {ep}"


def key_of(*square_names) -> int:
    key = 0
    for name in square_names:
        key |= 1 << square_index(name)
    return key


def state_of(term_map: dict, width: int = 64) -> Superposition:
    """term_map: {(sq names tuple or int key): amplitude}."""
    terms = {}
    for spec, amp in term_map.items():
        key = spec if isinstance(spec, int) else key_of(*spec)
        terms[key] = complex(amp)
    return Superposition(terms, width)


def amplitude(state: Superposition, *square_names) -> complex:
    return state.terms.get(key_of(*square_names), 0j)


def reconstruct_matrix(apply_fn, nbits: int) -> np.ndarray:
    """Rebuilds a unitary from its action on computational basis states,
    using the engine's own sparse application on low board bits."""
    dim = 1 << nbits
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        state = Superposition._wrap({col: 1.0 + 0.0j}, 64)
        result = apply_fn(state)
        for key, amp in result.terms.items():
            assert key < dim
            out[key, col] = amp
    return out


def region_squares(*names) -> list:
    return [square_index(n) for n in names]


def rect_region(files: str, ranks: str) -> list:
    return [square_index(f + r) for r in ranks for f in files]


class MirrorHarness:
    """Plays moves through the engine and mirrors every accepted move in
    the dense oracle, comparing amplitudes after each ply."""

    def __init__(self, position: str, region, seed: int = 0, free_play: bool = False):
        self.game = Game(position, seed=seed, free_play=free_play)
        self.region = list(region)
        self.oracle = DenseOracle(self.region, self.game.layer)
        self.deviations = []

    def _classify_current(self, text: str):
        move = parse_move(text)
        layer = self.game.layer
        mover = piece_color(layer.values[move.source])
        if self.game.free_play and mover is not None and mover != layer.flags.turn:
            layer = layer.with_flags(layer.flags.with_(turn=mover))
        return classify(move, layer)

    def play(self, text: str):
        kind = self._classify_current(text)
        for sq in self._touched(kind):
            assert sq in self.region, f"move {text} leaves the tracked region"
        outcome = self.game.submit_move(text)
        if outcome.accepted:
            self.oracle.apply_kind(kind, outcome.outcome)
            deviation = self.oracle.max_deviation(self.game.state)
            self.deviations.append(deviation)
            assert deviation <= 1e-9, f"engine deviates from oracle by {deviation}"
            self._compare_marginals()
        return outcome

    def _compare_marginals(self):
        """Engine per-square marginals match the dense oracle's at 1e-9."""
        import numpy as np

        probs = np.abs(self.oracle.vec) ** 2
        idx = np.arange(len(probs))
        engine = self.game.state.marginals()
        for qubit, square in enumerate(self.region):
            dense = float(probs[(idx >> qubit) & 1 == 1].sum())
            assert abs(dense - engine[square]) <= 1e-9

    @staticmethod
    def _touched(kind) -> set:
        mv = kind.move
        touched = {mv.source, mv.target}
        if mv.target2 is not None:
            touched.add(mv.target2)
        if mv.source2 is not None:
            touched.add(mv.source2)
        if kind.ep_square is not None:
            touched.add(kind.ep_square)
        if kind.rook_from is not None:
            touched.update((kind.rook_from, kind.rook_to))
        if kind.b_square is not None:
            touched.add(kind.b_square)
        touched.update(kind.path)
        touched.update(kind.path2)
        return touched
