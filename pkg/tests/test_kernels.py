import numpy as np
import pytest

from weylcurves import _kernels
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


def random_words(m, count, rng):
    words = np.empty((count, m), dtype=np.int64)
    for r in range(count):
        perm = rng.permutation(np.arange(1, m + 1))
        signs = rng.choice([-1, 1], size=m)
        words[r] = perm * signs
    return words


@pytest.mark.skipif(_speedups is None, reason="compiled kernels unavailable")
class TestBackendParity:
    def test_batch_functions_agree(self):
        rng = np.random.default_rng(0)
        for m in (2, 3, 5, 7):
            words = random_words(m, 500, rng)
            for name in BATCH_FUNCS:
                a = np.asarray(getattr(pure, name)(words))
                b = np.asarray(getattr(_speedups, name)(words))
                assert np.array_equal(a, b), name

    def test_blade_sign_agrees(self):
        rng = np.random.default_rng(1)
        for _ in range(2000):
            a, b = (int(x) for x in rng.integers(0, 256, 2))
            assert pure.blade_sign(a, b) == _speedups.blade_sign(a, b)

    def test_dense_mul_agrees(self):
        rng = np.random.default_rng(2)
        for m in (2, 4, 6):
            x = rng.normal(size=1 << m)
            y = rng.normal(size=1 << m)
            assert np.allclose(
                pure.dense_mul(x, y, m), _speedups.dense_mul(x, y, m)
            )

    def test_exact_mul_agrees(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n1, n2 = rng.integers(1, 6, 2)
            m1 = np.sort(rng.choice(16, size=n1, replace=False)).astype(np.int64)
            m2 = np.sort(rng.choice(16, size=n2, replace=False)).astype(np.int64)
            c1 = rng.integers(-5, 6, (n1, 3)).astype(np.int64)
            c2 = rng.integers(-5, 6, (n2, 3)).astype(np.int64)
            c1[:, 2] = np.abs(c1[:, 2])
            c2[:, 2] = np.abs(c2[:, 2])
            pa, pb = pure.exact_mul(m1, c1, m2, c2)
            sa, sb = _speedups.exact_mul(m1, c1, m2, c2)
            assert np.array_equal(pa, sa)
            assert np.array_equal(pb, sb)


class TestSelectedBackend:
    def test_exports_present(self):
        for name in BATCH_FUNCS + ("dense_mul", "exact_mul", "COMPILED"):
            assert hasattr(_kernels, name)

    def test_sign_table_square_antisymmetry(self):
        table = pure.sign_table(4)
        assert table.shape == (16, 16)
        for i in range(4):
            assert table[1 << i, 1 << i] == 1
