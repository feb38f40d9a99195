"""Reference movement-unitary matrices, transcribed by hand so the
conformance checks stay one-way (nothing here is derived from the
engine)."""

import numpy as np

H = 2**-0.5
I = 1j

JUMP_4 = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, I, 0],
        [0, I, 0, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

SQRT_ISWAP_4 = np.array(
    [
        [1, 0, 0, 0],
        [0, H, I * H, 0],
        [0, I * H, H, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

# |p,t,s>: iSwap block for p=0, identity for p=1.
SLIDE_8 = np.eye(8, dtype=complex)
SLIDE_8[:4, :4] = JUMP_4

# |t2,t1,s>
SPLIT_8 = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, I, 0, 0, 0],
        [0, I * H, H, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, -H, I * H, 0],
        [0, I * H, -H, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, I * H, -H, 0],
        [0, 0, 0, I, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ],
    dtype=complex,
)

# |s1,s2,t|
MERGE_8 = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, -I * H, 0, -I * H, 0, 0, 0],
        [0, 0, H, 0, -H, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, -I, 0],
        [0, -I, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, -H, 0, -I * H, 0, 0],
        [0, 0, 0, -I * H, 0, -H, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ],
    dtype=complex,
)


def _iswap_on(b0: int, b1: int) -> np.ndarray:
    out = np.zeros((8, 8), dtype=complex)
    for idx in range(8):
        x, y = (idx >> b0) & 1, (idx >> b1) & 1
        if x == y:
            out[idx, idx] = 1
        else:
            out[idx ^ (1 << b0) ^ (1 << b1), idx] = I
    return out


def _blocks_32(blocks) -> np.ndarray:
    out = np.zeros((32, 32), dtype=complex)
    for block_index, block in enumerate(blocks):
        idxs = [block_index * 8 + base for base in range(8)]
        out[np.ix_(idxs, idxs)] = block
    return out


# |p2,p1,t2,t1,s>: split when both paths clear, a full iSwap toward the
# unblocked target when one is blocked, identity when both are.
SPLIT_SLIDE_32 = _blocks_32(
    (SPLIT_8, _iswap_on(0, 2), _iswap_on(0, 1), np.eye(8, dtype=complex))
)

# |p2,p1,s1,s2,t|
MERGE_SLIDE_32 = _blocks_32(
    (
        MERGE_8,
        _iswap_on(0, 1).conj().T,
        _iswap_on(0, 2).conj().T,
        np.eye(8, dtype=complex),
    )
)
