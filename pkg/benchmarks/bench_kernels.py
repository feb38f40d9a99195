"""Benchmarks the compiled kernel against the pure-Python fallback on the
operations that dominate move execution, at several superposition sizes.

Run from the repo root after an editable install:

    python benchmarks/bench_kernels.py
"""

import random
import time

from qchess import _kernels_py as pyk

try:
    from qchess import _kernels as cyk
except ImportError:
    cyk = None

from qchess.unitaries import SPLIT, _mask, _prog


def make_state(n_terms: int, seed: int = 0) -> dict:
    """Random sparse state over the 64 board bits plus a few ancillas."""
    rng = random.Random(seed)
    terms = {}
    while len(terms) < n_terms:
        key = 0
        for _ in range(rng.randrange(4, 18)):
            key |= 1 << rng.randrange(0, 70)
        terms[key] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    norm = pyk.norm_sq(terms) ** 0.5
    return {k: v / norm for k, v in terms.items()}


def split_gate():
    ops = (10, 20, 30)
    progs = (_prog(8, SPLIT.tobytes(), ops),)
    op_masks = tuple(1 << b for b in ops)
    return 0, 0, (), op_masks, progs


def bench(kernel, terms, gate, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = kernel.apply_compiled(terms, *gate)
        out = kernel.prune_renorm(out, 1e-12)
        kernel.prob_clauses(out, ((1 << 10, 0, 0),))
        best = min(best, time.perf_counter() - start)
    return best


def main():
    gate = split_gate()
    print(f"{'terms':>10} {'python':>12} {'cython':>12} {'speedup':>8}")
    for n_terms in (100, 1_000, 10_000, 100_000):
        terms = make_state(n_terms)
        repeats = max(3, 200_000 // n_terms)
        t_py = bench(pyk, terms, gate, repeats)
        if cyk is None:
            print(f"{n_terms:>10} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'':>8}")
            continue
        t_cy = bench(cyk, terms, gate, repeats)
        print(
            f"{n_terms:>10} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms "
            f"{t_py / t_cy:>7.2f}x"
        )
    if cyk is None:
        print("compiled kernel unavailable; install with a working compiler")


if __name__ == "__main__":
    main()
