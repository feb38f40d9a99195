"""Superposition-size analytics: exact combinatorial upper bounds, the
maximizer search over piece budgets, heatmap grids, and a runtime guard.

All bound arithmetic uses Python's arbitrary-precision integers. The
no-double-occupancy rule confines each piece value to its own square set,
so the board-wide bound is a product over piece values of binomial sums
S(s, m) = sum_{j<=m} C(s, j), subject to the promotion-rule multiplicity
constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

from .errors import InfeasibleBudgetError

# Starting multiplicities per piece letter (same for both colors).
START_MULTIPLICITY = {"P": 8, "N": 2, "B": 2, "R": 2, "Q": 1, "K": 1}
PROMOTABLE = ("N", "B", "R", "Q")
MAX_PROMOTIONS = 8

DEFAULT_CEILING = 10**6


@lru_cache(maxsize=None)
def subspace_size(s: int, m: int) -> int:
    """S(s, m) = sum of C(s, j) for j = 0..m: arrangements of at most m
    indistinguishable pieces on s squares."""
    if s < 0 or m < 0 or s > 64:
        raise ValueError("need 0 <= m and 0 <= s <= 64")
    return sum(math.comb(s, j) for j in range(min(m, s) + 1))


def naive_bound() -> int:
    """Occupancy-only bound: arrangements of up to 32 pieces on 64 squares."""
    return sum(math.comb(64, k) for k in range(33))


Budget = Dict[str, Tuple[int, int]]  # piece letter -> (squares, multiplicity)


def _check_color(budget: Budget, letters: Iterable[str]) -> None:
    promoted = 0
    for letter in letters:
        upper = letter.upper()
        s, m = budget[letter]
        if s < 0 or m < 0 or s > 64:
            raise InfeasibleBudgetError(f"bad budget for {letter}: {(s, m)}")
        if upper == "K" and m > 1:
            raise InfeasibleBudgetError("king multiplicity must be at most 1")
        if upper in PROMOTABLE:
            promoted += max(0, m - START_MULTIPLICITY[upper])
    if promoted > MAX_PROMOTIONS:
        raise InfeasibleBudgetError(f"{promoted} promotions exceed the 8 pawns")
    for letter in letters:
        upper = letter.upper()
        if upper == "P":
            _, m = budget[letter]
            if m > START_MULTIPLICITY["P"] - promoted:
                raise InfeasibleBudgetError("pawns left exceed 8 minus promotions")


def superposition_bound(budget: Budget) -> int:
    """Product bound over both colors for an explicit piece budget."""
    white = [c for c in "PNBRQK"]
    black = [c for c in "pnbrqk"]
    for letter in white + black:
        if letter not in budget:
            raise InfeasibleBudgetError(f"budget missing {letter}")
    if sum(s for s, _ in budget.values()) > 64:
        raise InfeasibleBudgetError("square sets exceed the board")
    _check_color(budget, white)
    _check_color(budget, black)
    product = 1
    for s, m in budget.values():
        product *= subspace_size(s, m)
    return product


def _color_dp(total_squares: int) -> list:
    """Best single-color product for every square allowance 0..total.

    DP over piece types with state (squares used, promotions used); each
    entry keeps (value, assignment) so the argmax budget can be reported.
    """
    states = {(0, 0): (1, ())}
    order = ("K", "Q", "R", "B", "N", "P")
    for letter in order:
        start = START_MULTIPLICITY[letter]
        new_states: dict = {}
        for (used, promos), (value, picks) in states.items():
            if letter == "K":
                m_choices = (1,)
            elif letter == "P":
                m_choices = range(0, start - promos + 1)
            else:
                m_choices = range(0, start + (MAX_PROMOTIONS - promos) + 1)
            for m in m_choices:
                extra = max(0, m - start) if letter in PROMOTABLE else 0
                s_lo = m if m > 0 else 0
                for s in range(s_lo, total_squares - used + 1):
                    if m == 0 and s > 0:
                        break  # squares for an absent piece never help
                    key = (used + s, promos + extra)
                    candidate = value * subspace_size(s, m)
                    best = new_states.get(key)
                    if best is None or candidate > best[0]:
                        new_states[key] = (candidate, picks + ((letter, s, m),))
        states = new_states
    best_by_budget = [(0, ())] * (total_squares + 1)
    for (used, _), (value, picks) in states.items():
        if value > best_by_budget[used][0]:
            best_by_budget[used] = (value, picks)
    # make monotone: allow unused squares
    for b in range(1, total_squares + 1):
        if best_by_budget[b][0] < best_by_budget[b - 1][0]:
            best_by_budget[b] = best_by_budget[b - 1]
    return best_by_budget


def max_superposition_size(total_squares: int = 64) -> tuple:
    """Exhaustive maximum of the product bound and one maximizing budget."""
    per_budget = _color_dp(total_squares)
    best_value = -1
    best_split = None
    for white_squares in range(total_squares + 1):
        w = per_budget[white_squares]
        b = per_budget[total_squares - white_squares]
        value = w[0] * b[0]
        if value > best_value:
            best_value = value
            best_split = (w[1], b[1])
    budget: Budget = {}
    for letter, s, m in best_split[0]:
        budget[letter] = (s, m)
    for letter, s, m in best_split[1]:
        budget[letter.lower()] = (s, m)
    return best_value, budget


def budget_from_values(values) -> Budget:
    """Sound budget for a live position: observed square counts with the
    largest multiplicity the promotion rules allow."""
    budget: Budget = {}
    for letter in "PNBRQKpnbrqk":
        squares = sum(1 for v in values if v == letter)
        upper = letter.upper()
        if upper == "K":
            cap = 1
        elif upper == "P":
            cap = START_MULTIPLICITY["P"]
        else:
            cap = START_MULTIPLICITY[upper] + MAX_PROMOTIONS
        budget[letter] = (squares, min(squares, cap))
    return budget


def position_bound(values) -> int:
    """Upper bound on the term count reachable from a position's v vector.

    Uses per-piece observed squares; multiplicities are capped by the
    promotion rules but not cross-constrained, so this stays an upper
    bound without knowing the true piece counts."""
    product = 1
    for s, m in budget_from_values(values).values():
        product *= subspace_size(s, m)
    return product


def heatmap(m_range: Iterable[int], s_range: Iterable[int]) -> list:
    """Rows of (m, s, log10 bound) for a single piece value."""
    rows = []
    for m in m_range:
        for s in s_range:
            rows.append((m, s, math.log10(subspace_size(s, m))))
    return rows


def contour_crossings(threshold: float, m_range: Iterable[int], s_max: int = 64) -> list:
    """For each multiplicity, the smallest square count whose bound
    reaches the threshold (None when it never does)."""
    crossings = []
    for m in m_range:
        found = None
        for s in range(0, s_max + 1):
            if subspace_size(s, m) >= threshold:
                found = s
                break
        crossings.append((m, found))
    return crossings


def heatmap_csv(m_range: Iterable[int], s_range: Iterable[int]) -> str:
    lines = ["m,s,log10_bound"]
    for m, s, value in heatmap(m_range, s_range):
        lines.append(f"{m},{s},{value:.6f}")
    return "\n".join(lines) + "\n"


@dataclass
class RuntimeGuard:
    """Watches the live term count against a ceiling.

    warn mode reports breaches; deny mode additionally refuses split moves
    that could exceed the ceiling (a split at most doubles the count).
    """

    ceiling: int = DEFAULT_CEILING
    mode: str = "warn"  # or "deny"

    def allows_split(self, term_count: int) -> bool:
        if self.mode != "deny":
            return True
        return 2 * term_count <= self.ceiling

    def check(self, term_count: int) -> Optional[str]:
        if term_count > self.ceiling:
            return f"term count {term_count} exceeds ceiling {self.ceiling}"
        return None
