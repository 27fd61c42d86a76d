"""Pure-Python/numpy fallback for the hot kernels.

Same API as the compiled ``_speedups`` extension.  Words are (N, m) integer
arrays of signed 1-based one-line words.  Exact Clifford elements are pairs
(masks, coef) where masks is a sorted int64 array of blade bitmasks and
coef is an (n, 3) int64 array of (a, b, k) triples encoding (a + b*sqrt2)/2**k.
"""

from __future__ import annotations

import numpy as np

COMPILED = False

_XOR_CACHE: dict[int, np.ndarray] = {}
_SIGN_CACHE: dict[int, np.ndarray] = {}


def blade_sign(a: int, b: int) -> int:
    """Sign of e_A * e_B relative to e_(A xor B), convention e_i**2 = +1."""
    a >>= 1
    total = 0
    while a:
        total += (a & b).bit_count()
        a >>= 1
    return -1 if total & 1 else 1


def sign_table(m: int) -> np.ndarray:
    """(2**m, 2**m) int8 table of blade product signs."""
    if m not in _SIGN_CACHE:
        size = 1 << m
        table = np.empty((size, size), dtype=np.int8)
        for a in range(size):
            for b in range(size):
                table[a, b] = blade_sign(a, b)
        _SIGN_CACHE[m] = table
    return _SIGN_CACHE[m]


def _xor_index(m: int) -> np.ndarray:
    if m not in _XOR_CACHE:
        idx = np.arange(1 << m)
        _XOR_CACHE[m] = idx[:, None] ^ idx[None, :]
    return _XOR_CACHE[m]


def dense_mul(x: np.ndarray, y: np.ndarray, m: int) -> np.ndarray:
    """Dense Clifford product of coefficient vectors of length 2**m."""
    sign = sign_table(m)
    xor = _xor_index(m)
    # out[c] = sum_a x[a] * y[a ^ c] * sign[a, a ^ c]
    return (sign[np.arange(1 << m)[None, :], xor] * y[xor]) @ x


def normalize_coef(a: int, b: int, k: int) -> tuple[int, int, int]:
    """Minimal-k canonical form of (a + b*sqrt2)/2**k."""
    if a == 0 and b == 0:
        return 0, 0, 0
    while k > 0 and a % 2 == 0 and b % 2 == 0:
        a //= 2
        b //= 2
        k -= 1
    return a, b, k


def exact_mul(
    masks1: np.ndarray,
    coef1: np.ndarray,
    masks2: np.ndarray,
    coef2: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact Clifford product of two sparse elements."""
    acc: dict[int, tuple[int, int, int]] = {}
    m1 = masks1.tolist()
    c1 = coef1.tolist()
    m2 = masks2.tolist()
    c2 = coef2.tolist()
    for ma, (a1, b1, k1) in zip(m1, c1):
        for mb, (a2, b2, k2) in zip(m2, c2):
            sign = blade_sign(ma, mb)
            a = sign * (a1 * a2 + 2 * b1 * b2)
            b = sign * (a1 * b2 + b1 * a2)
            k = k1 + k2
            mask = ma ^ mb
            if mask in acc:
                oa, ob, ok = acc[mask]
                if ok < k:
                    shift = 1 << (k - ok)
                    oa *= shift
                    ob *= shift
                    ok = k
                elif k < ok:
                    shift = 1 << (ok - k)
                    a *= shift
                    b *= shift
                acc[mask] = (oa + a, ob + b, ok)
            else:
                acc[mask] = (a, b, k)
    out_masks = []
    out_coef = []
    for mask in sorted(acc):
        a, b, k = normalize_coef(*acc[mask])
        if a == 0 and b == 0:
            continue
        out_masks.append(mask)
        out_coef.append((a, b, k))
    if not out_masks:
        return np.empty(0, dtype=np.int64), np.empty((0, 3), dtype=np.int64)
    return (
        np.array(out_masks, dtype=np.int64),
        np.array(out_coef, dtype=np.int64),
    )


def delta_signs_batch(words: np.ndarray) -> np.ndarray:
    """delta_i signs for a batch of determinant +1 words."""
    words = np.asarray(words)
    absw = np.abs(words)
    # ne[i] = #{i' < i : |w[i']| > |w[i]|}
    greater = absw[:, :, None] > absw[:, None, :]  # [n, i', i]
    lower = np.tril(np.ones((words.shape[1],) * 2, dtype=bool), k=-1)  # [i, i']
    counts = (greater.transpose(0, 2, 1) & lower[None, :, :]).sum(axis=2)
    signs = np.sign(words).astype(np.int8)
    signs[counts % 2 == 1] *= -1
    return signs


def s_batch(words: np.ndarray) -> np.ndarray:
    return delta_signs_batch(words).sum(axis=1, dtype=np.int64)


def delta_word_batch(words: np.ndarray) -> np.ndarray:
    signs = delta_signs_batch(words).astype(words.dtype)
    return signs * np.arange(1, words.shape[1] + 1, dtype=words.dtype)


def chop_batch(words: np.ndarray) -> np.ndarray:
    """Word of Delta(Q) @ A for each word in the batch."""
    m = words.shape[1]
    signs = delta_signs_batch(words).astype(words.dtype)
    i = np.arange(m)
    a_sign = np.where(i % 2 == 0, 1, -1).astype(words.dtype)
    return signs * a_sign * (m - i).astype(words.dtype)


def tr_batch(words: np.ndarray) -> np.ndarray:
    """TR = transpose and flip signs at odd i+j, batched."""
    words = np.asarray(words)
    n, m = words.shape
    j = np.abs(words)  # column of row i+1
    i = np.broadcast_to(np.arange(1, m + 1, dtype=words.dtype), (n, m))
    sign = np.sign(words) * np.where((i + j) % 2 == 1, -1, 1)
    out = np.empty_like(words)
    np.put_along_axis(out, j - 1, (sign * i).astype(words.dtype), axis=1)
    return out


def ad_batch(words: np.ndarray) -> np.ndarray:
    """AD = half-turn rotation and sign flips at odd i+j, batched."""
    words = np.asarray(words)
    n, m = words.shape
    j = np.abs(words)
    i = np.broadcast_to(np.arange(1, m + 1, dtype=words.dtype), (n, m))
    sign = np.sign(words) * np.where((i + j) % 2 == 1, -1, 1)
    return (sign * (m + 1 - j)).astype(words.dtype)[:, ::-1]


def inversions_batch(words: np.ndarray) -> np.ndarray:
    absw = np.abs(np.asarray(words))
    later = absw[:, :, None] > absw[:, None, :]  # [n, i, i''] : w[i] > w[i'']
    upper = np.triu(np.ones((words.shape[1],) * 2, dtype=bool), k=1)
    return (later & upper[None, :, :]).sum(axis=(1, 2))
