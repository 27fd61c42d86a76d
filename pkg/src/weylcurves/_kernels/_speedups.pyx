# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: signed-word calculus and Clifford products.

Mirrors the API of ``weylcurves._kernels.pure``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True

_SIGN_CACHE = {}


cdef inline int _popcount(long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef inline int _blade_sign(long long a, long long b) nogil:
    cdef int total = 0
    a >>= 1
    while a:
        total += _popcount(a & b)
        a >>= 1
    return -1 if total & 1 else 1


def blade_sign(long long a, long long b):
    return _blade_sign(a, b)


def sign_table(int m):
    if m not in _SIGN_CACHE:
        size = 1 << m
        table = np.empty((size, size), dtype=np.int8)
        cdef_fill_sign_table(table, size)
        _SIGN_CACHE[m] = table
    return _SIGN_CACHE[m]


def cdef_fill_sign_table(cnp.int8_t[:, ::1] table, int size):
    cdef long long a, b
    for a in range(size):
        for b in range(size):
            table[a, b] = _blade_sign(a, b)


def dense_mul(x, y, int m):
    cdef cnp.float64_t[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.float64_t[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef int size = 1 << m
    out = np.zeros(size, dtype=np.float64)
    cdef cnp.float64_t[::1] ov = out
    cdef cnp.int8_t[:, ::1] sign = sign_table(m)
    cdef long long a, b
    cdef double xa
    with nogil:
        for a in range(size):
            xa = xv[a]
            if xa == 0.0:
                continue
            for b in range(size):
                if yv[b] != 0.0:
                    ov[a ^ b] += xa * yv[b] * sign[a, b]
    return out


def exact_mul(masks1, coef1, masks2, coef2):
    cdef cnp.int64_t[::1] m1 = np.ascontiguousarray(masks1, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] c1 = np.ascontiguousarray(coef1, dtype=np.int64).reshape(-1, 3)
    cdef cnp.int64_t[::1] m2 = np.ascontiguousarray(masks2, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] c2 = np.ascontiguousarray(coef2, dtype=np.int64).reshape(-1, 3)
    cdef int n1 = m1.shape[0], n2 = m2.shape[0]
    cdef long long max_mask = 0
    cdef int i, j
    for i in range(n1):
        if m1[i] > max_mask:
            max_mask = m1[i]
    for j in range(n2):
        if m2[j] > max_mask:
            max_mask = m2[j]
    cdef long long space = 1
    while space <= max_mask:
        space <<= 1
    if space < 2:
        space = 2

    acc = np.zeros((space, 3), dtype=np.int64)
    used = np.zeros(space, dtype=np.int8)
    cdef cnp.int64_t[:, ::1] av = acc
    cdef cnp.int8_t[::1] uv = used
    cdef long long mask, a, b, k, oa, ob, ok, shift
    cdef int sgn
    with nogil:
        for i in range(n1):
            for j in range(n2):
                sgn = _blade_sign(m1[i], m2[j])
                a = sgn * (c1[i, 0] * c2[j, 0] + 2 * c1[i, 1] * c2[j, 1])
                b = sgn * (c1[i, 0] * c2[j, 1] + c1[i, 1] * c2[j, 0])
                k = c1[i, 2] + c2[j, 2]
                mask = m1[i] ^ m2[j]
                if uv[mask]:
                    oa = av[mask, 0]
                    ob = av[mask, 1]
                    ok = av[mask, 2]
                    if ok < k:
                        shift = 1 << (k - ok)
                        oa *= shift
                        ob *= shift
                        ok = k
                    elif k < ok:
                        shift = 1 << (ok - k)
                        a *= shift
                        b *= shift
                    av[mask, 0] = oa + a
                    av[mask, 1] = ob + b
                    av[mask, 2] = ok
                else:
                    av[mask, 0] = a
                    av[mask, 1] = b
                    av[mask, 2] = k
                    uv[mask] = 1

    out_masks = []
    out_coef = []
    cdef long long ca, cb, ck
    for mask in range(space):
        if not uv[mask]:
            continue
        ca = av[mask, 0]
        cb = av[mask, 1]
        ck = av[mask, 2]
        if ca == 0 and cb == 0:
            continue
        while ck > 0 and ca % 2 == 0 and cb % 2 == 0:
            ca >>= 1
            cb >>= 1
            ck -= 1
        out_masks.append(mask)
        out_coef.append((ca, cb, ck))
    if not out_masks:
        return np.empty(0, dtype=np.int64), np.empty((0, 3), dtype=np.int64)
    return (
        np.array(out_masks, dtype=np.int64),
        np.array(out_coef, dtype=np.int64),
    )


def delta_signs_batch(words):
    cdef cnp.int64_t[:, ::1] w = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], m = w.shape[1]
    out = np.empty((n, m), dtype=np.int8)
    cdef cnp.int8_t[:, ::1] ov = out
    cdef Py_ssize_t r, i, ip
    cdef long long j
    cdef int count, sign
    with nogil:
        for r in range(n):
            for i in range(m):
                j = w[r, i]
                sign = 1 if j > 0 else -1
                if j < 0:
                    j = -j
                count = 0
                for ip in range(i):
                    if (w[r, ip] if w[r, ip] > 0 else -w[r, ip]) > j:
                        count += 1
                ov[r, i] = sign if count % 2 == 0 else -sign
    return out


def s_batch(words):
    return delta_signs_batch(words).sum(axis=1, dtype=np.int64)


def delta_word_batch(words):
    signs = delta_signs_batch(words).astype(np.int64)
    return signs * np.arange(1, np.asarray(words).shape[1] + 1, dtype=np.int64)


def chop_batch(words):
    cdef Py_ssize_t m = np.asarray(words).shape[1]
    signs = delta_signs_batch(words).astype(np.int64)
    i = np.arange(m)
    a_sign = np.where(i % 2 == 0, 1, -1).astype(np.int64)
    return signs * a_sign * (m - i)


def tr_batch(words):
    cdef cnp.int64_t[:, ::1] w = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], m = w.shape[1]
    out = np.empty((n, m), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] ov = out
    cdef Py_ssize_t r, i
    cdef long long j, sign
    with nogil:
        for r in range(n):
            for i in range(m):
                j = w[r, i]
                sign = 1 if j > 0 else -1
                if j < 0:
                    j = -j
                if (i + 1 + j) % 2 == 1:
                    sign = -sign
                ov[r, j - 1] = sign * (i + 1)
    return out


def ad_batch(words):
    cdef cnp.int64_t[:, ::1] w = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], m = w.shape[1]
    out = np.empty((n, m), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] ov = out
    cdef Py_ssize_t r, i
    cdef long long j, sign
    with nogil:
        for r in range(n):
            for i in range(m):
                j = w[r, i]
                sign = 1 if j > 0 else -1
                if j < 0:
                    j = -j
                if (i + 1 + j) % 2 == 1:
                    sign = -sign
                ov[r, m - 1 - i] = sign * (m + 1 - j)
    return out


def inversions_batch(words):
    cdef cnp.int64_t[:, ::1] w = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], m = w.shape[1]
    out = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef Py_ssize_t r, i, ip
    cdef long long ji, jp
    with nogil:
        for r in range(n):
            for i in range(m):
                ji = w[r, i] if w[r, i] > 0 else -w[r, i]
                for ip in range(i + 1, m):
                    jp = w[r, ip] if w[r, ip] > 0 else -w[r, ip]
                    if ji > jp:
                        ov[r] += 1
    return out
