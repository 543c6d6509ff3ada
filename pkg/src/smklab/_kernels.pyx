# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every routine here has a twin in ``_kernels_py`` that performs the same
floating-point operations in the same order, so both backends return
bit-identical results.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def poisson_sweep(double lam, long mode, double p_mode, double half_eps, long cap):
    """Poisson weights on a window around ``mode`` with geometric tail bounds.

    Returns ``(k_lo, weights, tail_lo, tail_hi, ok)``; ``ok`` is False when
    ``cap`` was reached before the upper tail bound fell below ``half_eps``.
    """
    cdef double p, tail, tail_lo = 0.0, tail_hi = 0.0
    cdef long k, n_down = 0, n_up = 0, i
    cdef bint ok = True

    # pass 1: window extent
    p = p_mode
    k = mode
    while k > 0:
        tail = p * (k / lam) / (1.0 - (k - 1) / lam)
        if tail < half_eps:
            break
        p = p * k / lam
        k -= 1
        n_down += 1
    if k > 0:
        tail_lo = tail

    p = p_mode
    k = mode
    while True:
        tail = p * (lam / (k + 1)) / (1.0 - lam / (k + 2))
        if tail < half_eps:
            break
        if k >= cap:
            ok = False
            break
        k += 1
        p = p * lam / k
        n_up += 1
    tail_hi = tail

    # pass 2: fill with the same recurrences
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n_down + n_up + 1, dtype=np.float64)
    out[n_down] = p_mode
    p = p_mode
    k = mode
    for i in range(n_down):
        p = p * k / lam
        k -= 1
        out[n_down - 1 - i] = p
    p = p_mode
    k = mode
    for i in range(n_up):
        k += 1
        p = p * lam / k
        out[n_down + 1 + i] = p
    return mode - n_down, out, tail_lo, tail_hi, ok


cdef void _slide(const double[:] src, long w, double[:] mx, double[:] mn, long[:] dq1, long[:] dq2):
    # sliding max/min over windows of w+1 consecutive entries (valid positions only)
    cdef long n = src.shape[0]
    cdef long h1 = 0, t1 = 0, h2 = 0, t2 = 0, i
    for i in range(n):
        while t1 > h1 and src[dq1[t1 - 1]] <= src[i]:
            t1 -= 1
        dq1[t1] = i
        t1 += 1
        while t2 > h2 and src[dq2[t2 - 1]] >= src[i]:
            t2 -= 1
        dq2[t2] = i
        t2 += 1
        if dq1[h1] <= i - w - 1:
            h1 += 1
        if dq2[h2] <= i - w - 1:
            h2 += 1
        if i >= w:
            mx[i - w] = src[dq1[h1]]
            mn[i - w] = src[dq2[h2]]


def oscillation_1d(cnp.ndarray[cnp.float64_t, ndim=1] values, long w):
    """Largest max-minus-min over windows of ``w + 1`` consecutive samples."""
    cdef long n = values.shape[0]
    if w >= n - 1:
        return float(values.max() - values.min())
    cdef long p = n - w, i
    cdef double best = 0.0, d
    mx = np.empty(p, dtype=np.float64)
    mn = np.empty(p, dtype=np.float64)
    dq1 = np.empty(n, dtype=np.int64)
    dq2 = np.empty(n, dtype=np.int64)
    _slide(np.ascontiguousarray(values), w, mx, mn, dq1, dq2)
    cdef double[:] vmx = mx, vmn = mn
    for i in range(p):
        d = vmx[i] - vmn[i]
        if d > best:
            best = d
    return best


def oscillation_2d(cnp.ndarray[cnp.float64_t, ndim=2] values, long w1, long w2):
    """Largest max-minus-min over ``(w1+1) x (w2+1)`` rectangles of samples."""
    cdef long n1 = values.shape[0], n2 = values.shape[1]
    if w1 > n1 - 1:
        w1 = n1 - 1
    if w2 > n2 - 1:
        w2 = n2 - 1
    cdef long p1 = n1 - w1, p2 = n2 - w2, i, j
    cdef double best = 0.0, d
    vals = np.ascontiguousarray(values)
    rmx = np.empty((n1, p2), dtype=np.float64)
    rmn = np.empty((n1, p2), dtype=np.float64)
    dq1 = np.empty(max(n1, n2), dtype=np.int64)
    dq2 = np.empty(max(n1, n2), dtype=np.int64)
    for i in range(n1):
        _slide(vals[i], w2, rmx[i], rmn[i], dq1, dq2)
    # column pass on the transposed row results
    cmx_t = np.ascontiguousarray(rmx.T)
    cmn_t = np.ascontiguousarray(rmn.T)
    mx = np.empty(p1, dtype=np.float64)
    mn = np.empty(p1, dtype=np.float64)
    junk = np.empty(p1, dtype=np.float64)
    cdef double[:] vmx = mx, vmn = mn
    for j in range(p2):
        _slide(cmx_t[j], w1, mx, junk, dq1, dq2)
        _slide(cmn_t[j], w1, junk, mn, dq1, dq2)
        for i in range(p1):
            d = vmx[i] - vmn[i]
            if d > best:
                best = d
    return best
