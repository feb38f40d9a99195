"""Self-verifying demo sequences: Bell-state constructions and the
three-split interference experiment.

Each demo runs its move sequence from the documented starting position in
free-play mode (the sequences are single-sided exercises, not alternating
games) and checks the resulting amplitudes against the analytic values at
1e-9, returning a report dict.
"""

from __future__ import annotations

from typing import Dict

from .game import Game
from .state import Superposition, square_index

_SQ2 = 2**-0.5

LONE_KING_A1 = "8/8/8/8/8/8/8/K7 w - -"
BELL_PHI_POSITION = "8/8/8/8/8/1k6/8/1nB5 b - -"

# Square pair order is (high bit, low bit) of the reported 2-qubit state.
BELL_DEMOS: Dict[str, dict] = {
    "bell-psi+": {
        "position": LONE_KING_A1,
        "moves": ("a1^a2b1", "b1a1", "a2b1"),
        "pair": ("b1", "a1"),
        "expected": {0b01: _SQ2, 0b10: _SQ2},
        "label": "(|01> + |10>)/sqrt(2)",
    },
    "bell-psi-": {
        "position": LONE_KING_A1,
        "moves": ("a1^a2b1", "b1a1", "a2b1", "a1a2", "a2a1"),
        "pair": ("b1", "a1"),
        "expected": {0b01: _SQ2, 0b10: -_SQ2},
        "label": "(|01> - |10>)/sqrt(2)",
    },
    "bell-phi-": {
        "position": BELL_PHI_POSITION,
        "moves": ("b3^b2a3", "c1a3", "b1a3", "b2b1"),
        "pair": ("b1", "c1"),
        "expected": {0b00: _SQ2, 0b11: -_SQ2},
        "label": "(|00> - |11>)/sqrt(2)",
    },
    "bell-phi+": {
        "position": BELL_PHI_POSITION,
        "moves": ("b3^b2a3", "c1a3", "b1a3", "b2b1", "b1b2", "b2b1"),
        "pair": ("b1", "c1"),
        "expected": {0b00: _SQ2, 0b11: _SQ2},
        "label": "(|00> + |11>)/sqrt(2)",
    },
}

INTERFERENCE_MOVES = ("a1^a2b1", "a2^a1b2", "b1^a1b2")
INTERFERENCE_MOVES_SWAPPED = ("a1^a2b1", "a2^a1b2", "b1^b2a1")

# Constructive (1/2 + 1/(2 sqrt 2))^2 and destructive (1/2 - 1/(2 sqrt 2))^2
# weights. The destructive weight sits on b2; a2 is vacated by the second
# split and stays empty.
P_CONSTRUCTIVE = (0.5 + 0.5 * _SQ2) ** 2  # 0.7285533905932737
P_DESTRUCTIVE = (0.5 - 0.5 * _SQ2) ** 2  # 0.0214466094067262


def _run_moves(position: str, moves, seed: int = 0) -> Game:
    game = Game(position, seed=seed, free_play=True)
    for text in moves:
        outcome = game.submit_move(text)
        if not outcome.accepted:
            raise RuntimeError(f"demo move {text} rejected: {outcome.reason}")
    return game


def pair_state(state: Superposition, high: int, low: int) -> dict:
    """Two-qubit amplitudes on (high, low) once all other bits are a
    function of the pair pattern (constant or correlated bits discard
    cleanly; anything else is ambiguous and raises)."""
    out: dict = {}
    for key, amp in state.terms.items():
        pattern = (((key >> high) & 1) << 1) | ((key >> low) & 1)
        if pattern in out:
            raise ValueError("pair pattern is not unique across terms")
        out[pattern] = amp
    return out


def dict_equal_mod_phase(a: dict, b: dict, tol: float = 1e-9) -> bool:
    if not a or not b:
        return not a and not b
    anchor = max(a, key=lambda k: abs(a[k]))
    if anchor not in b or abs(b[anchor]) == 0.0:
        return False
    phase = a[anchor] / b[anchor]
    mag = abs(phase)
    if abs(mag - 1.0) > tol:
        return False
    phase /= mag
    return all(abs(a.get(k, 0j) - phase * b.get(k, 0j)) <= tol for k in a.keys() | b.keys())


def run_bell(name: str, tol: float = 1e-9) -> dict:
    spec = BELL_DEMOS[name]
    game = _run_moves(spec["position"], spec["moves"])
    high, low = (square_index(sq) for sq in spec["pair"])
    actual = pair_state(game.state, high, low)
    ok = dict_equal_mod_phase(actual, dict(spec["expected"]), tol)
    return {
        "name": name,
        "ok": ok,
        "pair": spec["pair"],
        "state": {format(k, "02b"): (amp.real, amp.imag) for k, amp in sorted(actual.items())},
        "expected": spec["label"],
        "log": list(game.log),
    }


def run_interference(swapped: bool = False, tol: float = 1e-9) -> dict:
    moves = INTERFERENCE_MOVES_SWAPPED if swapped else INTERFERENCE_MOVES
    game = _run_moves(LONE_KING_A1, moves)
    probs = {
        sq: game.state.marginal_occupancy(square_index(sq))
        for sq in ("a1", "a2", "b1", "b2")
    }
    if swapped:
        expected = {"a1": P_DESTRUCTIVE, "a2": 0.0, "b1": 0.25, "b2": P_CONSTRUCTIVE}
    else:
        expected = {"a1": P_CONSTRUCTIVE, "a2": 0.0, "b1": 0.25, "b2": P_DESTRUCTIVE}
    ok = all(abs(probs[sq] - expected[sq]) <= tol for sq in probs)
    return {
        "name": "interference-swapped" if swapped else "interference",
        "ok": ok,
        "probabilities": probs,
        "expected": expected,
        "log": list(game.log),
    }


def run_demo(name: str) -> dict:
    if name in BELL_DEMOS:
        return run_bell(name)
    if name == "interference":
        return run_interference(False)
    if name == "interference-swapped":
        return run_interference(True)
    raise KeyError(f"unknown demo {name!r}")


DEMO_NAMES = tuple(BELL_DEMOS) + ("interference", "interference-swapped")
