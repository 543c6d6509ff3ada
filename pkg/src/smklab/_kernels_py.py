"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

The Poisson sweep repeats the compiled arithmetic operation for operation.
The oscillation kernels lean on ``scipy.ndimage`` rank filters; max and min
are exact, so the results agree with the compiled deque version exactly.
"""

import numpy as np
from scipy.ndimage import maximum_filter, maximum_filter1d, minimum_filter, minimum_filter1d


def poisson_sweep(lam, mode, p_mode, half_eps, cap):
    tail_lo = 0.0
    p = p_mode
    k = mode
    down = []
    tail = 0.0
    while k > 0:
        tail = p * (k / lam) / (1.0 - (k - 1) / lam)
        if tail < half_eps:
            break
        p = p * k / lam
        k -= 1
        down.append(p)
    if k > 0:
        tail_lo = tail
    k_lo = k

    ok = True
    p = p_mode
    k = mode
    up = []
    while True:
        tail = p * (lam / (k + 1)) / (1.0 - lam / (k + 2))
        if tail < half_eps:
            break
        if k >= cap:
            ok = False
            break
        k += 1
        p = p * lam / k
        up.append(p)
    down.reverse()
    out = np.array(down + [p_mode] + up, dtype=np.float64)
    return k_lo, out, tail_lo, tail, ok


def oscillation_1d(values, w):
    n = values.shape[0]
    if w >= n - 1:
        return float(values.max() - values.min())
    size = w + 1
    hi = maximum_filter1d(values, size, mode="nearest")
    lo = minimum_filter1d(values, size, mode="nearest")
    return float(np.max(hi - lo))


def oscillation_2d(values, w1, w2):
    n1, n2 = values.shape
    size = (min(w1, n1 - 1) + 1, min(w2, n2 - 1) + 1)
    hi = maximum_filter(values, size=size, mode="nearest")
    lo = minimum_filter(values, size=size, mode="nearest")
    return float(np.max(hi - lo))
