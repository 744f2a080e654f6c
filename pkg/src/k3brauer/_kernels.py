"""numba kernels for the point-counting hot loop.

Field elements are handled through discrete logarithms: a nonzero element is
g^e with 0 <= e < m = q - 1 and the value m stands for zero. Addition uses the
Zech table zech[d] = log(1 + g^d).

A row is the restriction of a form to a line {x = x0, y = y0} of the
affine patch, written as a polynomial in z whose coefficients A_k are
assembled from the monomials (k, b, logc) meaning logc * y^b * z^k.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True, nogil=True, inline="always")
def _zadd(a, b, m, zech):
    if a == m:
        return b
    if b == m:
        return a
    d = b - a
    if d < 0:
        d += m
    z = zech[d]
    if z == m:
        return m
    r = a + z
    if r >= m:
        r -= m
    return r


@numba.njit(cache=True, nogil=True)
def _row_coefficients(ylog, mono_k, mono_b, mono_c, K, m, zech, out):
    for k in range(K + 1):
        out[k] = m
    for t in range(mono_k.shape[0]):
        b = mono_b[t]
        if ylog == m:
            if b > 0:
                continue
            term = mono_c[t]
        else:
            term = (mono_c[t] + b * ylog) % m
        k = mono_k[t]
        out[k] = _zadd(out[k], term, m, zech)


@numba.njit(cache=True, nogil=True)
def _compact(coef, K, m, ks, ts):
    # nonzero coefficients of degree >= 1; returns their number
    r = 0
    for k in range(1, K + 1):
        if coef[k] != m:
            ks[r] = k % m  # step per z -> g z; k may exceed m in tiny fields
            ts[r] = coef[k]
            r += 1
    return r


@numba.njit(cache=True, nogil=True)
def _row_sum_odd(coef, K, m, zech, ks, ts):
    """sum over z in F_q of 1 + chi(D(z)); m is even."""
    c0 = coef[0]
    total = 1 if c0 == m else (2 if c0 % 2 == 0 else 0)
    r = _compact(coef, K, m, ks, ts)
    for j in range(m):
        acc = c0
        for i in range(r):
            acc = _zadd(acc, ts[i], m, zech)
            t = ts[i] + ks[i]
            if t >= m:
                t -= m
            ts[i] = t
        if acc == m:
            total += 1
        elif acc % 2 == 0:
            total += 2
    return total


@numba.njit(cache=True, nogil=True)
def _row_sum_char2(ca, cb, KA, KB, m, zech, trace_of_log, ka, ta, kb, tb):
    """sum over z in F_q of #{w : w^2 + a(z) w + b(z) = 0}."""
    ra = _compact(ca, KA, m, ka, ta)
    rb = _compact(cb, KB, m, kb, tb)
    total = 0
    for j in range(-1, m):
        if j < 0:  # z = 0
            la = ca[0]
            lb = cb[0]
        else:
            la = ca[0]
            for i in range(ra):
                la = _zadd(la, ta[i], m, zech)
                t = ta[i] + ka[i]
                if t >= m:
                    t -= m
                ta[i] = t
            lb = cb[0]
            for i in range(rb):
                lb = _zadd(lb, tb[i], m, zech)
                t = tb[i] + kb[i]
                if t >= m:
                    t -= m
                tb[i] = t
        if la == m:
            total += 1
        elif lb == m:
            total += 2
        else:
            e = lb - 2 * la
            e %= m
            if trace_of_log[e] == 0:
                total += 2
    return total


@numba.njit(cache=True, nogil=True)
def count_rows_odd(ylogs, weights, mono_k, mono_b, mono_c, K, m, zech):
    coef = np.empty(K + 1, np.int64)
    ks = np.empty(K + 1, np.int64)
    ts = np.empty(K + 1, np.int64)
    total = 0
    for i in range(ylogs.shape[0]):
        _row_coefficients(ylogs[i], mono_k, mono_b, mono_c, K, m, zech, coef)
        total += weights[i] * _row_sum_odd(coef, K, m, zech, ks, ts)
    return total


@numba.njit(cache=True, nogil=True)
def count_rows_char2(ylogs, weights, a_k, a_b, a_c, KA, b_k, b_b, b_c, KB, m, zech, trace_of_log):
    ca = np.empty(KA + 1, np.int64)
    cb = np.empty(KB + 1, np.int64)
    ka = np.empty(KA + 1, np.int64)
    ta = np.empty(KA + 1, np.int64)
    kb = np.empty(KB + 1, np.int64)
    tb = np.empty(KB + 1, np.int64)
    total = 0
    for i in range(ylogs.shape[0]):
        _row_coefficients(ylogs[i], a_k, a_b, a_c, KA, m, zech, ca)
        _row_coefficients(ylogs[i], b_k, b_b, b_c, KB, m, zech, cb)
        total += weights[i] * _row_sum_char2(ca, cb, KA, KB, m, zech, trace_of_log, ka, ta, kb, tb)
    return total


@numba.njit(cache=True)
def frobenius_orbits(m, p):
    """Representatives and sizes of the orbits of e -> p e mod m on [0, m)."""
    seen = np.zeros(m, np.bool_)
    reps = np.empty(m, np.int64)
    sizes = np.empty(m, np.int64)
    r = 0
    for e in range(m):
        if seen[e]:
            continue
        size = 0
        f = e
        while not seen[f]:
            seen[f] = True
            size += 1
            f = f * p % m
        reps[r] = e
        sizes[r] = size
        r += 1
    return reps[:r], sizes[:r]
