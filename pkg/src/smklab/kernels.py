"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
twin takes over.  ``use_backend`` switches explicitly (tests and the
benchmark exercise both).
"""

import math

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

_BACKENDS = {"python": _kernels_py}
if _kernels_c is not None:
    _BACKENDS["compiled"] = _kernels_c

BACKEND = "compiled" if _kernels_c is not None else "python"
_impl = _BACKENDS[BACKEND]


def available_backends():
    return sorted(_BACKENDS)


def use_backend(name):
    """Switch the active backend; returns the previous backend name."""
    global BACKEND, _impl
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    previous = BACKEND
    BACKEND, _impl = name, _BACKENDS[name]
    return previous


_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_error(k):
    """``log(k!) - log(sqrt(2 pi k) (k/e)**k)`` for integer ``k >= 1``."""
    if k <= 15:
        return math.lgamma(k + 1.0) - (k + 0.5) * math.log(k) + k - _LOG_SQRT_2PI
    k2 = 1.0 / (k * k)
    return (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - k2 / 1188) * k2) * k2) * k2) / k


def _deviance(k, lam):
    """``k log(k/lam) + lam - k`` without cancellation when ``k`` is near ``lam``."""
    if abs(k - lam) < 0.1 * (k + lam):
        v = (k - lam) / (k + lam)
        s = (k - lam) * v
        ej = 2.0 * k * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return k * math.log(k / lam) + lam - k


def poisson_pmf(k, lam):
    """Poisson mass at integer ``k``, accurate to a few ulp near the mode."""
    if k == 0:
        return math.exp(-lam)
    return math.exp(-_stirling_error(k) - _deviance(k, lam)) / math.sqrt(2.0 * math.pi * k)


def poisson_window(lam, eps, cap):
    """Poisson(lam) masses on a window whose excluded mass is below ``eps``.

    Returns ``(k_lo, weights, tail_bound, ok)``.  The window is grown
    outward from the mode; ``tail_bound`` is a rigorous geometric bound on
    the mass outside it.  ``ok`` is False if ``cap`` stopped the upward
    sweep first.
    """
    if lam == 0.0:
        return 0, np.ones(1), 0.0, True
    mode = int(math.floor(lam))
    p_mode = poisson_pmf(mode, lam)
    k_lo, weights, tail_lo, tail_hi, ok = _impl.poisson_sweep(
        float(lam), mode, p_mode, 0.5 * eps, int(cap))
    return k_lo, weights, tail_lo + tail_hi, bool(ok)


def oscillation_1d(values, w):
    return _impl.oscillation_1d(np.ascontiguousarray(values, dtype=np.float64), int(w))


def oscillation_2d(values, w1, w2):
    return _impl.oscillation_2d(np.ascontiguousarray(values, dtype=np.float64), int(w1), int(w2))
