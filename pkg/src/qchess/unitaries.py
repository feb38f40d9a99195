"""Movement unitaries applied at basis-state granularity.

Operand convention used everywhere: the rightmost label of a ket list is
the first operand and the least-significant matrix-index bit. So the jump
acts on |t,s> with s = bit 0, the split on |t2,t1,s> with s = bit 0 /
t1 = bit 1 / t2 = bit 2, and the merge on |s1,s2,t> with t = bit 0.

Path control bits are never materialized as ancilla qubits: each basis
term carries its own path occupancy, so the controlled unitary selects its
block from an OR over the path-square bits of that term. The dense test
oracle materializes the ancillas explicitly to cross-check this shortcut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from ._backend import kernels
from .state import PRUNE_EPS, Superposition

_SQ2 = 2**-0.5

ISWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 1j, 0],
        [0, 1j, 0, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

SQRT_ISWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, _SQ2, 1j * _SQ2, 0],
        [0, 1j * _SQ2, _SQ2, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

IDENTITY_4 = np.eye(4, dtype=complex)
IDENTITY_8 = np.eye(8, dtype=complex)


def embed(gate: np.ndarray, bits: tuple, nbits: int) -> np.ndarray:
    """Expands a small gate to act on the given bit positions of an
    nbits-qubit space (bits[j] carries matrix-index bit j of the gate)."""
    k = len(bits)
    dim = 1 << nbits
    out = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        sub = 0
        for j, b in enumerate(bits):
            if idx & (1 << b):
                sub |= 1 << j
        base = idx
        for b in bits:
            base &= ~(1 << b)
        for sub_out in range(1 << k):
            coeff = gate[sub_out, sub]
            if coeff == 0:
                continue
            out_idx = base
            for j, b in enumerate(bits):
                if sub_out & (1 << j):
                    out_idx |= 1 << b
            out[out_idx, idx] = coeff
    return out


# Split acting on |t2,t1,s>; merge on |s1,s2,t> is its hermitian
# conjugate. Not exactly iSwap(s,t2) . sqrt-iSwap(s,t1): the |101>/|110>
# columns carry an extra phase relative to that product (the basis-action
# table and the merge conjugate are consistent with this form).
SPLIT = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1j, 0, 0, 0],
        [0, 1j * _SQ2, _SQ2, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, -_SQ2, 1j * _SQ2, 0],
        [0, 1j * _SQ2, -_SQ2, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1j * _SQ2, -_SQ2, 0],
        [0, 0, 0, 1j, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ],
    dtype=complex,
)
MERGE = SPLIT.conj().T

# Block-diagonal slide variants, indexed by (p2, p1) path bits:
# clear/clear applies the split (merge), one blocked path degrades to a
# full iSwap toward the unblocked side, both blocked is the identity.
SPLIT_SLIDE_BLOCKS = (
    SPLIT,
    embed(ISWAP, (0, 2), 3),  # p1 blocked: iSwap(s, t2)
    embed(ISWAP, (0, 1), 3),  # p2 blocked: iSwap(s, t1)
    IDENTITY_8,
)
MERGE_SLIDE_BLOCKS = (
    MERGE,
    embed(ISWAP.conj().T, (0, 1), 3),  # p1 blocked: iSwap^dag(s2, t)
    embed(ISWAP.conj().T, (0, 2), 3),  # p2 blocked: iSwap^dag(s1, t)
    IDENTITY_8,
)


@dataclass(frozen=True)
class ControlSpec:
    """Classical controls: fire only when all `ones` bits are occupied and
    all `zeros` bits are empty. Must be disjoint from the operands."""

    ones: frozenset = field(default_factory=frozenset)
    zeros: frozenset = field(default_factory=frozenset)

    @classmethod
    def make(cls, ones: Iterable[int] = (), zeros: Iterable[int] = ()) -> "ControlSpec":
        return cls(frozenset(ones), frozenset(zeros))


def _mask(squares: Iterable[int]) -> int:
    mask = 0
    for square in squares:
        mask |= 1 << square
    return mask


@lru_cache(maxsize=None)
def _columns(dim: int, buf: bytes) -> tuple:
    """Column-sparse form: for input r, the (c, coeff) pairs of column r."""
    mat = np.frombuffer(buf, dtype=complex).reshape(dim, dim)
    cols = []
    for r in range(dim):
        entries = []
        for c in range(dim):
            coeff = mat[c, r]
            if coeff != 0:
                entries.append((c, complex(coeff)))
        cols.append(tuple(entries))
    return tuple(cols)


@lru_cache(maxsize=None)
def _prog(dim: int, buf: bytes, ops: tuple) -> tuple:
    """Turns sparse columns into xor-mask scatter programs."""
    prog = []
    for r, entries in enumerate(_columns(dim, buf)):
        row = []
        for c, coeff in entries:
            xor = 0
            diff = r ^ c
            for j, b in enumerate(ops):
                if diff & (1 << j):
                    xor |= 1 << b
            row.append((xor, coeff))
        prog.append(tuple(row))
    return tuple(prog)


def apply_gate(
    state: Superposition,
    mats: tuple,
    ops: tuple,
    sel_masks: tuple = (),
    ctrl: Optional[ControlSpec] = None,
) -> Superposition:
    """Applies one of `mats` (selected per term by the OR of each sel mask)
    to the operand bits, honoring the classical control spec."""
    if len(set(ops)) != len(ops):
        raise ValueError("operand collision")
    for b in ops:
        if b < 0 or b >= state.width:
            raise IndexError(f"operand bit {b} out of range")
    op_mask = _mask(ops)
    ones_mask = zeros_mask = 0
    if ctrl is not None:
        if ctrl.ones & ctrl.zeros:
            raise ValueError("control sets overlap")
        ones_mask = _mask(ctrl.ones)
        zeros_mask = _mask(ctrl.zeros)
        if (ones_mask | zeros_mask) & op_mask:
            raise ValueError("control overlaps operands")
    for mask in sel_masks:
        if mask & op_mask:
            raise ValueError("path overlaps operands")
    progs = tuple(_prog(m.shape[0], m.tobytes(), ops) for m in mats)
    op_masks = tuple(1 << b for b in ops)
    terms = kernels.apply_compiled(
        state.terms, ones_mask, zeros_mask, tuple(sel_masks), op_masks, progs
    )
    terms = kernels.prune_renorm(terms, PRUNE_EPS)
    return Superposition._wrap(terms, state.width)


def apply_jump(
    state: Superposition, s: int, t: int, ctrl: Optional[ControlSpec] = None
) -> Superposition:
    """iSwap of source and target occupancy; |01> -> i|10> and back."""
    return apply_gate(state, (ISWAP,), (s, t), ctrl=ctrl)


def apply_slide(
    state: Superposition, s: int, t: int, path: Iterable[int]
) -> Superposition:
    """Jump controlled on an empty path: per term, identity when any path
    square is occupied."""
    path = tuple(path)
    if s in path or t in path:
        raise ValueError("path overlaps operands")
    if not path:
        return apply_jump(state, s, t)
    return apply_gate(state, (ISWAP, IDENTITY_4), (s, t), sel_masks=(_mask(path),))


def apply_split(state: Superposition, s: int, t1: int, t2: int) -> Superposition:
    """Splits the piece on s across t1 and t2 (target order is semantic)."""
    return apply_gate(state, (SPLIT,), (s, t1, t2))


def apply_merge(state: Superposition, s1: int, s2: int, t: int) -> Superposition:
    """Hermitian conjugate of the split; undoes split(t; s2, s1)."""
    return apply_gate(state, (MERGE,), (t, s2, s1))


def apply_split_slide(
    state: Superposition,
    s: int,
    t1: int,
    t2: int,
    path1: Iterable[int],
    path2: Iterable[int],
) -> Superposition:
    """Split with per-term path controls; a single blocked path degrades to
    a full iSwap toward the other target."""
    return apply_gate(
        state,
        SPLIT_SLIDE_BLOCKS,
        (s, t1, t2),
        sel_masks=(_mask(path1), _mask(path2)),
    )


def apply_merge_slide(
    state: Superposition,
    s1: int,
    s2: int,
    t: int,
    path1: Iterable[int],
    path2: Iterable[int],
) -> Superposition:
    """Merge with per-term path controls (path1: s1->t, path2: s2->t)."""
    return apply_gate(
        state,
        MERGE_SLIDE_BLOCKS,
        (t, s2, s1),
        sel_masks=(_mask(path1), _mask(path2)),
    )
