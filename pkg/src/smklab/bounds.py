"""Moduli of continuity on grids and pointwise certificates for the error bounds.

A certificate compares the actual error ``|L(f; x) - f(x)|`` of a truncated
operator value with the bound a rate theorem guarantees:

    modulus_univariate    2 * omega(f; sqrt(delta(x)))
    lipschitz_univariate  M * delta(x)**(alpha/2)
    modulus_bivariate     4 * omega(f; sqrt(delta(x)), sqrt(delta(y)))
    lipschitz_bivariate   M * delta(x)**(alpha1/2) * delta(y)**(alpha2/2)

Grid moduli underestimate the true supremum, so modulus certificates carry
a slack equal to the grid error (rigorous when ``f`` has a Lipschitz hint,
estimated from one-step oscillation otherwise).  The truncated tail adds
``tail_mass * |f(x)|``.  The raw margin is always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DegenerateGrid, LipschitzHintViolated, NonFiniteFunction
from .kernels import oscillation_1d, oscillation_2d
from .moments import delta
from .operators import (
    DEFAULT_QUADRATURE,
    DEFAULT_TRUNCATION,
    BivariateFunction,
    BivariateParams,
    OperatorParams,
    ScalarFunction,
    apply_bivariate_detailed,
    apply_bivariate_many,
    apply_detailed,
    apply_many,
)

# floating-point allowance, relative to the magnitude of f
_ROUNDING = 1e-13
# bivariate grids are capped at this many nodes per axis
MAX_AXIS_NODES = 2049


@dataclass(frozen=True)
class ModulusEstimate:
    """Grid value of a modulus of continuity.

    ``grid_error`` bounds ``true - value``; it is rigorous when
    ``grid_error_rigorous`` (a Lipschitz hint was available) and a
    one-step-oscillation estimate otherwise.
    """

    delta_arg: object
    value: float
    h: float
    domain: tuple
    grid_error: float
    grid_error_rigorous: bool


@dataclass(frozen=True)
class BoundCertificate:
    point: tuple
    actual_error: float
    bound_value: float
    margin: float
    bound_kind: str
    slack: float
    passed: bool
    operator_value: float
    f_value: float
    note: str = ""


def _node_count(T, h):
    if not (T > 0 and h > 0):
        raise ValueError("domain end and grid step must be > 0")
    count = int(math.ceil(T / h - 1e-9)) + 1
    if count < 2:
        raise DegenerateGrid(f"grid on [0, {T}] with step {h} has fewer than 2 nodes")
    return count


def _window(delta_arg, h):
    if delta_arg <= 0:
        raise ValueError("delta must be > 0")
    if h > delta_arg:
        raise ValueError(f"grid step {h} exceeds delta {delta_arg}")
    return int(math.floor(delta_arg / h + 1e-9))


@lru_cache(maxsize=16)
def _samples_1d(f, count, h):
    u = np.arange(count) * h
    vals = f(u)
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmin(np.isfinite(vals)))
        raise NonFiniteFunction(f"{f.name} returned {vals[bad]} at grid node {u[bad]:.17g}")
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=4)
def _samples_2d(f, count1, count2, h):
    u = np.arange(count1) * h
    v = np.arange(count2) * h
    vals = f(u[:, None], v[None, :])
    if not np.all(np.isfinite(vals)):
        i, j = np.argwhere(~np.isfinite(vals))[0]
        raise NonFiniteFunction(f"{f.name} returned {vals[i, j]} at grid node ({u[i]:.17g}, {v[j]:.17g})")
    vals.setflags(write=False)
    return vals


def modulus(f: ScalarFunction, delta_arg: float, T: float, h: float) -> ModulusEstimate:
    """``sup |f(u) - f(x)|`` over grid nodes ``0, h, 2h, ... >= T`` with ``|u - x| <= delta``."""
    count = _node_count(T, h)
    w = _window(delta_arg, h)
    vals = _samples_1d(f, count, float(h))
    value = oscillation_1d(vals, w)
    if f.lipschitz_hint is not None:
        M, alpha = f.lipschitz_hint
        err, rigorous = 2.0 * M * h**alpha, True
    else:
        err, rigorous = 2.0 * oscillation_1d(vals, 1), False
    return ModulusEstimate(delta_arg, value, h, (0.0, T), err, rigorous)


def modulus_bivariate(f: BivariateFunction, delta1: float, delta2: float, box, h: float) -> ModulusEstimate:
    """Grid version of ``sup |f(u,v) - f(x,y)|`` over ``|u-x| <= delta1, |v-y| <= delta2``.

    ``box`` is ``(T1, T2)``, the rectangle ``[0, T1] x [0, T2]``.
    """
    T1, T2 = box
    c1, c2 = _node_count(T1, h), _node_count(T2, h)
    w1, w2 = _window(delta1, h), _window(delta2, h)
    vals = _samples_2d(f, c1, c2, float(h))
    value = oscillation_2d(vals, w1, w2)
    err = 2.0 * oscillation_2d(vals, 1, 1)
    return ModulusEstimate((delta1, delta2), value, h, ((0.0, T1), (0.0, T2)), err, False)


def _monotone_note(f, T, h):
    vals = _samples_1d(f, _node_count(T, h), float(h))
    if np.any(np.diff(vals) < 0):
        return "f is not non-decreasing on the grid; bound certified without that hypothesis"
    return ""


def certify_modulus_bound(params: OperatorParams, f: ScalarFunction, x: float,
                          trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                          T: Optional[float] = None, h: Optional[float] = None,
                          bound_scale: float = 1.0) -> BoundCertificate:
    """Check ``|S(f; x) - f(x)| <= 2 omega(f; sqrt(delta(x)))`` at one point.

    ``T`` defaults to the truncation endpoint, ``h`` to ``sqrt(delta)/100``.
    ``bound_scale`` multiplies the bound; values below one are a negative
    control only.
    """
    ev = apply_detailed(params, f, x, trunc, quad)
    return _modulus_certificate(params, f, x, ev, T, h, bound_scale)


def _modulus_certificate(params, f, x, ev, T, h, bound_scale):
    fx = float(f(x))
    actual = abs(ev.value - fx)
    scale = math.sqrt(float(delta(params, x)))
    T = max(ev.endpoint, x) if T is None else T
    if x > T:
        raise ValueError(f"point {x} lies outside [0, {T}]")
    h = scale / 100 if h is None else h
    est = modulus(f, scale, T, h)
    bound = 2.0 * est.value * bound_scale
    slack = 2.0 * est.grid_error + ev.tail_mass * abs(fx) + _ROUNDING * max(1.0, abs(fx))
    margin = bound - actual
    return BoundCertificate((x,), actual, bound, margin, "modulus_univariate", slack,
                            margin >= -slack, ev.value, fx, _monotone_note(f, T, h))


def certify_modulus_many(params, f, xs, trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                         T=None, h=None, bound_scale=1.0) -> list:
    evs = apply_many(params, f, xs, trunc, quad)
    return [_modulus_certificate(params, f, float(x), ev, T, h, bound_scale) for x, ev in zip(xs, evs)]


def verify_lipschitz(f: ScalarFunction, M: float, alpha: float, T: float, anchor: Optional[float] = None,
                     nodes: int = 401, anchor_nodes: int = 4001) -> None:
    """Raise ``LipschitzHintViolated`` if ``|f(u)-f(x)| <= M|u-x|**alpha`` fails on a grid of ``[0, T]``.

    All node pairs of a coarse grid are checked, plus every node of a fine
    grid against ``anchor``.
    """
    u = np.linspace(0.0, T, nodes)
    fu = f(u)
    lhs = np.abs(fu[:, None] - fu[None, :])
    rhs = M * np.abs(u[:, None] - u[None, :]) ** alpha
    _raise_if_violated(lhs, rhs, u[:, None], u[None, :], fu)
    if anchor is not None:
        v = np.linspace(0.0, T, anchor_nodes)
        fv = f(v)
        fa = float(f(anchor))
        lhs = np.abs(fv - fa)
        rhs = M * np.abs(v - anchor) ** alpha
        _raise_if_violated(lhs, rhs, v, np.full_like(v, anchor), fv)


def _raise_if_violated(lhs, rhs, p, q, fvals):
    tol = 1e-12 * rhs + 1e-14 * max(1.0, float(np.max(np.abs(fvals))))
    bad = lhs > rhs + tol
    if np.any(bad):
        idx = tuple(np.argwhere(bad)[0])
        pp, qq = np.broadcast_arrays(p, q)
        witness = (pp[idx], qq[idx], float(lhs[idx]), float(rhs[idx]))
        raise LipschitzHintViolated(
            f"|f(u) - f(x)| = {witness[2]:.6g} > {witness[3]:.6g} at u={witness[0]!r}, x={witness[1]!r}",
            witness)


def certify_lipschitz_bound(params: OperatorParams, f: ScalarFunction, x: float,
                            trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                            bound_scale: float = 1.0) -> BoundCertificate:
    """Check ``|S(f; x) - f(x)| <= M delta(x)**(alpha/2)`` using ``f.lipschitz_hint``.

    The hint is verified on the truncation range first; the bound itself is
    analytic, so only the tail term enters the slack.
    """
    if f.lipschitz_hint is None:
        raise ValueError("certify_lipschitz_bound needs f.lipschitz_hint = (M, alpha)")
    M, alpha = f.lipschitz_hint
    if not (0.0 < alpha <= 1.0) or M < 0:
        raise ValueError("Lipschitz hint needs M >= 0 and alpha in (0, 1]")
    ev = apply_detailed(params, f, x, trunc, quad)
    verify_lipschitz(f, M, alpha, max(ev.endpoint, x), anchor=x)
    fx = float(f(x))
    actual = abs(ev.value - fx)
    bound = M * float(delta(params, x)) ** (alpha / 2) * bound_scale
    slack = ev.tail_mass * abs(fx) + _ROUNDING * max(1.0, abs(fx))
    margin = bound - actual
    return BoundCertificate((x,), actual, bound, margin, "lipschitz_univariate", slack,
                            margin >= -slack, ev.value, fx)


def certify_bivariate_bound(params: BivariateParams, f: BivariateFunction, x: float, y: float,
                            trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                            box=None, h: Optional[float] = None,
                            bound_scale: float = 1.0) -> BoundCertificate:
    """Check ``|Y(f; x, y) - f(x, y)| <= 4 omega(f; sqrt(delta(x)), sqrt(delta(y)))``.

    ``box`` defaults to the truncation endpoints and ``h`` to the smaller
    root-delta over 20, coarsened so no axis exceeds ``MAX_AXIS_NODES``.
    """
    ev = apply_bivariate_detailed(params, f, x, y, trunc, quad)
    return _bivariate_certificate(params, f, x, y, ev, box, h, bound_scale)


def _bivariate_certificate(params, f, x, y, ev, box, h, bound_scale):
    fxy = float(f(x, y))
    actual = abs(ev.value - fxy)
    s1 = math.sqrt(float(delta(params.axis, x)))
    s2 = math.sqrt(float(delta(params.axis, y)))
    if box is None:
        box = (max(ev.endpoints[0], x), max(ev.endpoints[1], y))
    if x > box[0] or y > box[1]:
        raise ValueError(f"point ({x}, {y}) lies outside the box {box}")
    if h is None:
        h = max(min(s1, s2) / 20, max(box) / (MAX_AXIS_NODES - 1))
    est = modulus_bivariate(f, s1, s2, box, h)
    bound = 4.0 * est.value * bound_scale
    slack = 4.0 * est.grid_error + ev.tail_mass * abs(fxy) + _ROUNDING * max(1.0, abs(fxy))
    margin = bound - actual
    return BoundCertificate((x, y), actual, bound, margin, "modulus_bivariate", slack,
                            margin >= -slack, ev.value, fxy)


def certify_bivariate_many(params, f, points, trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                           box=None, h=None, bound_scale=1.0) -> list:
    evs = apply_bivariate_many(params, f, points, trunc, quad)
    return [_bivariate_certificate(params, f, float(x), float(y), ev, box, h, bound_scale)
            for (x, y), ev in zip(points, evs)]


def verify_mixed_lipschitz(f: BivariateFunction, M, alpha1, alpha2, box, anchor, nodes: int = 201) -> None:
    """Check ``|f(u,v) - f(x,y)| <= M |u-x|**alpha1 |v-y|**alpha2`` against the anchor ``(x, y)``.

    Taken over all pairs, this mixed condition forces ``f`` to be constant,
    so the check is anchored at the evaluation point, which is all the rate
    argument uses.
    """
    x, y = anchor
    u = np.linspace(0.0, box[0], nodes)[:, None]
    v = np.linspace(0.0, box[1], nodes)[None, :]
    fuv = f(u, v)
    fa = float(f(x, y))
    lhs = np.abs(fuv - fa)
    rhs = M * np.abs(u - x) ** alpha1 * np.abs(v - y) ** alpha2
    tol = 1e-12 * rhs + 1e-14 * max(1.0, float(np.max(np.abs(fuv))))
    bad = lhs > rhs + tol
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        witness = ((float(u[i, 0]), float(v[0, j])), (x, y), float(lhs[i, j]), float(rhs[i, j]))
        raise LipschitzHintViolated(
            f"|f(u,v) - f(x,y)| = {witness[2]:.6g} > {witness[3]:.6g} at (u,v)={witness[0]}, (x,y)={witness[1]}",
            witness)


def certify_bivariate_lipschitz(params: BivariateParams, f: BivariateFunction, x: float, y: float,
                                trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE,
                                bound_scale: float = 1.0) -> BoundCertificate:
    """Check ``|Y(f; x, y) - f(x, y)| <= M delta(x)**(alpha1/2) delta(y)**(alpha2/2)``."""
    if f.lipschitz_hint is None:
        raise ValueError("certify_bivariate_lipschitz needs f.lipschitz_hint = (M, alpha1, alpha2)")
    M, a1, a2 = f.lipschitz_hint
    ev = apply_bivariate_detailed(params, f, x, y, trunc, quad)
    box = (max(ev.endpoints[0], x), max(ev.endpoints[1], y))
    verify_mixed_lipschitz(f, M, a1, a2, box, (x, y))
    fxy = float(f(x, y))
    actual = abs(ev.value - fxy)
    dx = float(delta(params.axis, x))
    dy = float(delta(params.axis, y))
    bound = M * dx ** (a1 / 2) * dy ** (a2 / 2) * bound_scale
    slack = ev.tail_mass * abs(fxy) + _ROUNDING * max(1.0, abs(fxy))
    margin = bound - actual
    return BoundCertificate((x, y), actual, bound, margin, "lipschitz_bivariate", slack,
                            margin >= -slack, ev.value, fxy)
