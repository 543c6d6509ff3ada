"""Cancellation-free pieces of the operator's base-``a`` scaling.

With ``t = log(a)/n`` the operators only ever need ``a**(1/n) - 1 =
expm1(t)`` and the ratio ``t / expm1(t)``; both lose all precision if
formed naively once ``n`` is large.
"""

import math

# 1/k! for k = 2..19: series of expm1(t) - t
_EXPM1X_COEF = [1.0 / math.factorial(k) for k in range(2, 20)]


def expm1x(t):
    """``exp(t) - 1 - t`` without cancellation near zero."""
    t = float(t)
    if abs(t) >= 0.5:
        return math.expm1(t) - t
    s = 0.0
    for c in reversed(_EXPM1X_COEF):
        s = s * t + c
    return s * t * t


def root_step(a, n):
    """``a**(1/n) - 1``."""
    return math.expm1(math.log(a) / n)


def scale_ratio(a, n):
    """``log(a) / (n * (a**(1/n) - 1))``; tends to 1 as ``n`` grows."""
    t = math.log(a) / n
    return t / math.expm1(t)


def scale_defect(a, n):
    """``scale_ratio(a, n) - 1`` computed without subtracting nearby numbers."""
    t = math.log(a) / n
    return -expm1x(t) / math.expm1(t)

