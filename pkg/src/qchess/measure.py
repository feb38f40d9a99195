"""Two-outcome projective measurements with seeded, replayable sampling.

A measurement is specified by its outcome-1 membership test over basis
states; outcome 0 is always the complement (M0 = I - M1). Predicates are
stored as clauses of bit masks so the kernel can evaluate them directly:
a clause (ones, zeros, any) matches a key when every `ones` bit is set,
every `zeros` bit is clear, and (if nonzero) at least one `any` bit is
set. M1 matches when any clause does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from ._backend import kernels
from .errors import CorruptLogError
from .state import PROB_EPS, PRUNE_EPS, Superposition

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

RNG_ALGORITHM = "splitmix64"  # named in the save format for replay


def _splitmix64(x: int) -> int:
    x = (x + _GAMMA) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class RngStream:
    """Counter-based splitmix64 stream: seed + draws consumed define the
    entire future, so replays and rollbacks are exact."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int, counter: int = 0):
        self.seed = seed & _MASK64
        self.counter = counter

    def draw(self) -> float:
        value = _splitmix64((self.seed + self.counter * _GAMMA) & _MASK64)
        self.counter += 1
        return value / 2.0**64

    def clone(self) -> "RngStream":
        return RngStream(self.seed, self.counter)


@dataclass(frozen=True)
class MeasurementSpec:
    """M1 membership test as mask clauses, plus a label for logs."""

    clauses: Tuple[tuple, ...]
    description: str = ""

    def matches(self, key: int) -> bool:
        for ones, zeros, anymask in self.clauses:
            if (key & ones) == ones and not (key & zeros):
                if anymask == 0 or (key & anymask):
                    return True
        return False

    @classmethod
    def bit_set(cls, index: int, description: str = "") -> "MeasurementSpec":
        return cls(((1 << index, 0, 0),), description)

    @classmethod
    def bits_clear(cls, indices: Iterable[int], description: str = "") -> "MeasurementSpec":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(((0, mask, 0),), description)


def probability_of_one(state: Superposition, spec: MeasurementSpec) -> float:
    return kernels.prob_clauses(state.terms, spec.clauses)


def _project(state: Superposition, spec: MeasurementSpec, outcome: int, p: float) -> Superposition:
    scale = 1.0 / p**0.5
    terms = kernels.project_clauses(state.terms, spec.clauses, outcome == 1, scale)
    terms = kernels.prune_renorm(terms, PRUNE_EPS)
    assert terms, "projection onto empty subspace; probability was computed first"
    return Superposition._wrap(terms, state.width)


def measure(state: Superposition, spec: MeasurementSpec, rng: RngStream):
    """Samples the two-outcome measurement and projects.

    Always consumes exactly one draw, even when the outcome is certain, so
    inserting or removing certain-outcome measurements never shifts later
    sampling. Returns (outcome, projected state, probability of outcome).
    """
    p1 = probability_of_one(state, spec)
    u = rng.draw()
    if p1 >= 1.0 - PROB_EPS:
        outcome = 1
    elif p1 <= PROB_EPS:
        outcome = 0
    else:
        outcome = 1 if u < p1 else 0
    p_outcome = p1 if outcome == 1 else 1.0 - p1
    if p_outcome >= 1.0 - PROB_EPS:
        return outcome, state, p_outcome
    return outcome, _project(state, spec, outcome, p_outcome), p_outcome


def forced_measure(state: Superposition, spec: MeasurementSpec, outcome: int) -> Superposition:
    """Projects onto a recorded outcome without consuming randomness.

    Used for log replay; a zero-probability recorded outcome means the
    log does not belong to this state.
    """
    p1 = probability_of_one(state, spec)
    p_outcome = p1 if outcome == 1 else 1.0 - p1
    if p_outcome <= PROB_EPS:
        raise CorruptLogError(
            f"recorded outcome {outcome} has probability {p_outcome:.3g}"
        )
    if p_outcome >= 1.0 - PROB_EPS:
        return state
    return _project(state, spec, outcome, p_outcome)
