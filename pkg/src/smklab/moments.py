"""Closed-form moments of the operators.

Every expression is written with ``q = log(a) / (a**(1/m) - 1)``; the
denominator is formed as ``expm1(log(a)/m)``.  All functions accept a scalar
or an ndarray for the evaluation point.

Two closed forms in common circulation do not match the series they claim
to describe.  The corrected forms are used throughout; the printed
versions are kept in ``*_as_printed`` helpers so tables can show the
discrepancy next to the brute-force value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import BivariateParams, OperatorParams


@dataclass(frozen=True)
class MomentVector:
    """``S(e_i; x)`` for ``i = 0..3``."""

    m0: object
    m1: object
    m2: object
    m3: object


@dataclass(frozen=True)
class CentralMomentVector:
    """``S((u - x)**i; x)`` for ``i = 1..4``."""

    c1: object
    c2: object
    c3: object
    c4: object


@dataclass(frozen=True)
class BivariateMomentTable:
    y00: object
    y11: object
    y22: object
    y33: object
    cx1: object
    cy1: object
    cx2: object
    cy2: object


@dataclass(frozen=True)
class RateQuantity:
    """Second central moment used as the scale in the rate theorems."""

    delta: object

    def __float__(self):
        return float(self.delta)


def _asx(x):
    x = np.asarray(x, dtype=np.float64) if not isinstance(x, (int, float)) else float(x)
    if np.any(np.asarray(x) < 0):
        raise ValueError("moments are defined for x >= 0")
    return x


def raw_moments(params: OperatorParams, x) -> MomentVector:
    n, q = params.n, params.rate
    x = _asx(x)
    xq = x * q
    m0 = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    m1 = 1 / (2 * n) + xq / n
    m2 = 1 / (3 * n**2) + 2 * xq / n**2 + xq**2 / n**2
    m3 = 1 / (4 * n**3) + 3.5 * xq / n**3 + 4.5 * xq**2 / n**3 + xq**3 / n**3
    return MomentVector(m0, m1, m2, m3)


def _c3_leading(n, q, x):
    return (-(-1 + 4 * n * x - 6 * n**2 * x**2 + 4 * n**3 * x**3) / (4 * n**3)
            + x * (7 - 12 * n * x + 6 * n**2 * x**2) * q / (2 * n**3)
            - 3 * x**2 * (-3 + 2 * n * x) * q**2 / (2 * n**3))


def central_moments(params: OperatorParams, x) -> CentralMomentVector:
    n, q = params.n, params.rate
    x = _asx(x)
    c1 = -(-1 + 2 * n * x) / (2 * n) + x * q / n
    c2 = ((1 - 3 * n * x + 3 * n**2 * x**2) / (3 * n**2)
          - 2 * (-1 + n * x) * x * q / n**2
          + x**2 * q**2 / n**2)
    # cubic term is x^3 q^3 / n^3; see central_moment3_as_printed
    c3 = _c3_leading(n, q, x) + (x * q)**3 / n**3
    c4 = ((1 - 5 * n * x + 10 * n**2 * x**2 - 10 * n**3 * x**3 + 5 * n**4 * x**4)
          - 10 * x * (-3 + 7 * n * x - 6 * n**2 * x**2 + 2 * n**3 * x**3) * q
          + 15 * x**2 * (5 - 6 * n * x + 2 * n**2 * x**2) * q**2
          - 20 * x**3 * (-2 + n * x) * q**3
          + 5 * x**4 * q**4) / (5 * n**4)
    return CentralMomentVector(c1, c2, c3, c4)


def central_moment3_as_printed(params: OperatorParams, x):
    """Third central moment in its commonly quoted, incorrect form.

    Its last term reads ``-4 x^3 (log a)^3 / (2 (a^(1/n) - 1)^2 n^3)``; the
    series gives ``+x^3 (log a)^3 / ((a^(1/n) - 1)^3 n^3)``.
    """
    n, q = params.n, params.rate
    x = _asx(x)
    return _c3_leading(n, q, x) - 2 * x**3 * q**2 * math.log(params.a) / n**3


def delta(params: OperatorParams, x) -> RateQuantity:
    """``S((u - x)**2; x)``, the scale in the modulus and Lipschitz bounds."""
    return RateQuantity(central_moments(params, x).c2)


def _axis_factor(q, c, order):
    if order == 1:
        return 1 + 2 * c * q
    if order == 2:
        return 1 + 6 * c * q + 3 * (c * q)**2
    return 1 + 14 * c * q + 18 * (c * q)**2 + 4 * (c * q)**3


def bivariate_moments(params: BivariateParams, x, y) -> BivariateMomentTable:
    m, q = params.m, params.axis.rate
    x, y = _asx(x), _asx(y)
    y00 = np.ones_like(x * y) if isinstance(x * y, np.ndarray) else 1.0
    y11 = _axis_factor(q, x, 1) * _axis_factor(q, y, 1) / (4 * m**2)
    y22 = _axis_factor(q, x, 2) * _axis_factor(q, y, 2) / (9 * m**4)
    y33 = _axis_factor(q, x, 3) * _axis_factor(q, y, 3) / (16 * m**6)
    cx = central_moments(params.axis, x)
    cy = central_moments(params.axis, y)
    return BivariateMomentTable(y00, y11, y22, y33, cx.c1, cy.c1, cx.c2, cy.c2)


def bivariate_e11_as_printed(params: BivariateParams, x, y):
    """``Y(uv; x, y)`` with the printed denominator ``4 (a^(1/m) - 1) m^2``.

    The product of the per-axis first moments needs ``(a^(1/m) - 1)^2``.
    """
    m, q = params.m, params.axis.rate
    x, y = _asx(x), _asx(y)
    b = math.expm1(math.log(params.a) / m)
    return b * _axis_factor(q, x, 1) * _axis_factor(q, y, 1) / (4 * m**2)
