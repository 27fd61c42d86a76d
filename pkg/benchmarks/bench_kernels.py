"""Benchmark the compiled Cython kernels against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--m M] [--batch N] [--repeats R]

Times the batched word operations (delta/s/chop/TR/AD/inversions), the dense
Clifford product, and the exact-coefficient Clifford product on both backends
and prints a speedup table.  The two backends are also cross-checked on the
benchmark inputs, so this doubles as a parity smoke test.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from weylcurves._kernels import pure

try:
    from weylcurves._kernels import _speedups
except ImportError:
    _speedups = None

BATCH_FUNCS = (
    "delta_signs_batch",
    "s_batch",
    "delta_word_batch",
    "chop_batch",
    "tr_batch",
    "ad_batch",
    "inversions_batch",
)


def random_words(m: int, count: int, rng: np.random.Generator) -> np.ndarray:
    words = np.empty((count, m), dtype=np.int64)
    for r in range(count):
        words[r] = rng.permutation(np.arange(1, m + 1)) * rng.choice([-1, 1], m)
    return words


def best_of(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", type=int, default=7, help="word length")
    parser.add_argument("--batch", type=int, default=20_000, help="words per batch")
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    args = parser.parse_args()

    if _speedups is None:
        print("compiled kernels are not available; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    words = random_words(args.m, args.batch, rng)
    rows = []

    for name in BATCH_FUNCS:
        pure_fn, fast_fn = getattr(pure, name), getattr(_speedups, name)
        if not np.array_equal(np.asarray(pure_fn(words)), np.asarray(fast_fn(words))):
            raise SystemExit(f"backend mismatch in {name}")
        t_pure = best_of(lambda: pure_fn(words), args.repeats)
        t_fast = best_of(lambda: fast_fn(words), args.repeats)
        rows.append((f"{name}(batch={args.batch}, m={args.m})", t_pure, t_fast))

    m_dense = 6
    x, y = rng.normal(size=1 << m_dense), rng.normal(size=1 << m_dense)
    if not np.allclose(pure.dense_mul(x, y, m_dense), _speedups.dense_mul(x, y, m_dense)):
        raise SystemExit("backend mismatch in dense_mul")
    rows.append((
        f"dense_mul(m={m_dense}) x100",
        best_of(lambda: [pure.dense_mul(x, y, m_dense) for _ in range(100)], args.repeats),
        best_of(lambda: [_speedups.dense_mul(x, y, m_dense) for _ in range(100)], args.repeats),
    ))

    masks = np.arange(0, 32, 3, dtype=np.int64)
    coeffs = rng.integers(-4, 5, (len(masks), 3)).astype(np.int64)
    coeffs[:, 2] = np.abs(coeffs[:, 2])
    pa, pb = pure.exact_mul(masks, coeffs, masks, coeffs)
    sa, sb = _speedups.exact_mul(masks, coeffs, masks, coeffs)
    if not (np.array_equal(pa, sa) and np.array_equal(pb, sb)):
        raise SystemExit("backend mismatch in exact_mul")
    rows.append((
        f"exact_mul({len(masks)} blades) x1000",
        best_of(lambda: [pure.exact_mul(masks, coeffs, masks, coeffs) for _ in range(1000)], args.repeats),
        best_of(lambda: [_speedups.exact_mul(masks, coeffs, masks, coeffs) for _ in range(1000)], args.repeats),
    ))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for label, t_pure, t_fast in rows:
        print(f"{label:<{width}}  {t_pure * 1e3:>8.2f}ms  {t_fast * 1e3:>8.2f}ms  "
              f"{t_pure / t_fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
