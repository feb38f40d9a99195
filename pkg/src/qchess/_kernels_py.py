"""Pure-Python sparse-term kernels.

Same API as the compiled extension in _kernels.pyx; see _backend for the
import-time selection. A state is a dict mapping basis keys (ints, bit i =
occupancy of square/ancilla i) to complex amplitudes.

Gate programs are precompiled by the unitaries module: ``progs[sel][r]`` is
a tuple of ``(xor_mask, coeff)`` pairs, meaning a term whose operand bits
read ``r`` scatters amplitude ``amp * coeff`` onto ``key ^ xor_mask``.
``sel`` indexes the matrix variant chosen per term from OR-tests of
``sel_masks`` (path occupancy bits).
"""

BACKEND_NAME = "python"


def norm_sq(terms):
    return sum(a.real * a.real + a.imag * a.imag for a in terms.values())


def prune_renorm(terms, prune_eps):
    """Drops terms below the prune threshold and rescales to unit norm."""
    kept = {}
    total = 0.0
    eps_sq = prune_eps * prune_eps
    for key, amp in terms.items():
        mag = amp.real * amp.real + amp.imag * amp.imag
        if mag >= eps_sq:
            kept[key] = amp
            total += mag
    if total <= 0.0:
        return {}
    factor = 1.0 / total**0.5
    if factor != 1.0:
        for key in kept:
            kept[key] = kept[key] * factor
    return kept


def apply_compiled(terms, ones_mask, zeros_mask, sel_masks, op_masks, progs):
    """Applies a compiled gate program term by term.

    Terms failing the classical controls (ones_mask all set, zeros_mask all
    clear) pass through unchanged.
    """
    out = {}
    for key, amp in terms.items():
        if (key & ones_mask) != ones_mask or (key & zeros_mask):
            out[key] = out.get(key, 0j) + amp
            continue
        sel = 0
        bit = 1
        for mask in sel_masks:
            if key & mask:
                sel |= bit
            bit <<= 1
        prog = progs[sel]
        r = 0
        bit = 1
        for mask in op_masks:
            if key & mask:
                r |= bit
            bit <<= 1
        for xor_mask, coeff in prog[r]:
            new_key = key ^ xor_mask
            out[new_key] = out.get(new_key, 0j) + amp * coeff
    return out


def _clause_match(key, clauses):
    for ones, zeros, anymask in clauses:
        if (key & ones) == ones and not (key & zeros):
            if anymask == 0 or (key & anymask):
                return True
    return False


def prob_clauses(terms, clauses):
    """Born-rule weight of the subspace selected by the clause list."""
    total = 0.0
    for key, amp in terms.items():
        if _clause_match(key, clauses):
            total += amp.real * amp.real + amp.imag * amp.imag
    return total


def project_clauses(terms, clauses, keep, scale):
    """Projects onto (or away from) the clause subspace, rescaling by scale."""
    out = {}
    for key, amp in terms.items():
        if _clause_match(key, clauses) == keep:
            out[key] = amp * scale
    return out


def marginals(terms, nbits):
    """Per-bit occupancy probabilities as a list of length nbits."""
    probs = [0.0] * nbits
    for key, amp in terms.items():
        mag = amp.real * amp.real + amp.imag * amp.imag
        k = key
        while k:
            low = k & -k
            probs[low.bit_length() - 1] += mag
            k ^= low
    return probs
