# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse-term kernels (API twin of _kernels_py).

Basis keys stay Python ints (they exceed 64 bits once capture ancillas
accumulate), so bit tests go through the object protocol; the win over
the pure-Python kernel comes from typed amplitude arithmetic and loop
machinery. Selected at import in qchess._backend, falling back to the
pure module when this extension is unavailable.
"""

BACKEND_NAME = "cython"


def norm_sq(dict terms):
    cdef double total = 0.0
    cdef double complex a
    cdef object amp
    for amp in terms.values():
        a = amp
        total += a.real * a.real + a.imag * a.imag
    return total


def prune_renorm(dict terms, double prune_eps):
    """Drops terms below the prune threshold and rescales to unit norm."""
    cdef dict kept = {}
    cdef double total = 0.0
    cdef double eps_sq = prune_eps * prune_eps
    cdef double mag
    cdef double complex a
    cdef object key, amp
    for key, amp in terms.items():
        a = amp
        mag = a.real * a.real + a.imag * a.imag
        if mag >= eps_sq:
            kept[key] = amp
            total += mag
    if total <= 0.0:
        return {}
    cdef double factor = 1.0 / total ** 0.5
    if factor != 1.0:
        for key in kept:
            kept[key] = kept[key] * factor
    return kept


def apply_compiled(dict terms, object ones_mask, object zeros_mask,
                   tuple sel_masks, tuple op_masks, tuple progs):
    """Applies a compiled gate program term by term (see _kernels_py)."""
    cdef dict out = {}
    cdef object key, amp, mask, new_key, prev, xor_mask
    cdef tuple prog, row, entry
    cdef Py_ssize_t r, sel, bit, n_sel = len(sel_masks), n_ops = len(op_masks)
    cdef Py_ssize_t i, j
    cdef double complex a, coeff, acc
    cdef bint has_ones = ones_mask != 0
    cdef bint has_zeros = zeros_mask != 0
    for key, amp in terms.items():
        if (has_ones and (key & ones_mask) != ones_mask) or \
           (has_zeros and (key & zeros_mask) != 0):
            prev = out.get(key)
            out[key] = amp if prev is None else prev + amp
            continue
        sel = 0
        for i in range(n_sel):
            if key & <object>sel_masks[i]:
                sel |= 1 << i
        prog = <tuple>progs[sel]
        r = 0
        for j in range(n_ops):
            if key & <object>op_masks[j]:
                r |= 1 << j
        row = <tuple>prog[r]
        a = amp
        for entry in row:
            xor_mask = <object>entry[0]
            coeff = <double complex>entry[1]
            new_key = key ^ xor_mask
            prev = out.get(new_key)
            if prev is None:
                out[new_key] = a * coeff
            else:
                acc = prev
                out[new_key] = acc + a * coeff
    return out


cdef bint _clause_match(object key, tuple clauses):
    cdef tuple clause
    cdef object ones, zeros, anymask
    for clause in clauses:
        ones = clause[0]
        zeros = clause[1]
        anymask = clause[2]
        if (key & ones) == ones and not (key & zeros):
            if anymask == 0 or (key & anymask):
                return True
    return False


def prob_clauses(dict terms, tuple clauses):
    """Born-rule weight of the subspace selected by the clause list."""
    cdef double total = 0.0
    cdef double complex a
    cdef object key, amp
    for key, amp in terms.items():
        if _clause_match(key, clauses):
            a = amp
            total += a.real * a.real + a.imag * a.imag
    return total


def project_clauses(dict terms, tuple clauses, bint keep, double scale):
    """Projects onto (or away from) the clause subspace, rescaling."""
    cdef dict out = {}
    cdef object key, amp
    for key, amp in terms.items():
        if _clause_match(key, clauses) == keep:
            out[key] = amp * scale
    return out


def marginals(dict terms, Py_ssize_t nbits):
    """Per-bit occupancy probabilities as a list of length nbits."""
    cdef list probs = [0.0] * nbits
    cdef double mag
    cdef double complex a
    cdef object key, amp, k, low
    cdef Py_ssize_t idx
    for key, amp in terms.items():
        a = amp
        mag = a.real * a.real + a.imag * a.imag
        k = key
        while k:
            low = k & (-k)
            idx = low.bit_length() - 1
            probs[idx] = <double>probs[idx] + mag
            k = k ^ low
    return probs
