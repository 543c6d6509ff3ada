"""Summation-integral operators on the half-line.

``apply`` evaluates the base-``a`` Szász-Mirakjan-Kantorovich variant

    S(f; x) = n * sum_k s_k(x) * integral_{k/n}^{(k+1)/n} f(u) du,

whose weights ``s_k(x)`` are Poisson masses with mean
``x * log(a) / (a**(1/n) - 1)``.  ``apply_kantorovich`` is the classical
operator (Poisson mean ``n * x``) and ``apply_bivariate`` the tensor
product with a common degree on both axes.

Series are truncated to a window around the Poisson mode that leaves out
less than ``TruncationPolicy.tail_mass_epsilon`` of the weight mass; each
cell integral uses Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import NonFiniteFunction, SmkError, TruncationFailure
from .kernels import poisson_window
from .special import root_step

BoundHint = Union[float, Callable[[float], float], None]


@dataclass(frozen=True)
class OperatorParams:
    """Degree ``n >= 1`` and base ``a > 1``."""

    n: int
    a: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"degree n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.a) and self.a > 1.0):
            raise ValueError(f"base a must be a finite real > 1, got {self.a!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", float(self.a))

    @property
    def rate(self) -> float:
        """Poisson mean per unit ``x``: ``log(a) / (a**(1/n) - 1)``."""
        return math.log(self.a) / root_step(self.a, self.n)


@dataclass(frozen=True)
class BivariateParams:
    """Common degree ``m`` of both axes and base ``a > 1``."""

    m: int
    a: float

    def __post_init__(self):
        axis = OperatorParams(self.m, self.a)
        object.__setattr__(self, "m", axis.n)
        object.__setattr__(self, "a", axis.a)

    @property
    def axis(self) -> OperatorParams:
        return OperatorParams(self.m, self.a)


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    """A real function on ``[0, inf)`` with optional analytic metadata.

    ``func`` receives an ndarray when ``vectorized`` (the default) and a
    float otherwise.  ``bound_hint`` is ``sup |f|`` on ``[0, T]``, either a
    constant or a callable of ``T``; ``lipschitz_hint`` is ``(M, alpha)``
    with ``|f(u) - f(x)| <= M |u - x|**alpha``.  Hints are verified by the
    code that relies on them, never assumed.
    """

    func: Callable
    name: str = "f"
    bound_hint: BoundHint = None
    lipschitz_hint: Optional[tuple] = None
    vectorized: bool = True

    def __call__(self, u):
        u = np.asarray(u, dtype=np.float64)
        if self.vectorized:
            out = np.asarray(self.func(u), dtype=np.float64)
            if out.shape != u.shape:
                out = np.broadcast_to(out, u.shape).copy()
        else:
            out = np.vectorize(self.func, otypes=[np.float64])(u)
        return out

    def bound(self, T: float) -> Optional[float]:
        if self.bound_hint is None:
            return None
        if callable(self.bound_hint):
            return float(self.bound_hint(T))
        return float(self.bound_hint)


@dataclass(frozen=True, eq=False)
class BivariateFunction:
    """A real function of ``(u, v)``; ``func`` must broadcast over arrays.

    ``lipschitz_hint`` is ``(M, alpha1, alpha2)`` for the mixed condition
    ``|f(u, v) - f(x, y)| <= M |u - x|**alpha1 |v - y|**alpha2``.
    """

    func: Callable
    name: str = "f"
    bound_hint: BoundHint = None
    lipschitz_hint: Optional[tuple] = None

    def __call__(self, u, v):
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        out = np.asarray(self.func(u, v), dtype=np.float64)
        shape = np.broadcast_shapes(u.shape, v.shape)
        if out.shape != shape:
            out = np.broadcast_to(out, shape).copy()
        return out

    def bound(self, T: float) -> Optional[float]:
        if self.bound_hint is None:
            return None
        if callable(self.bound_hint):
            return float(self.bound_hint(T))
        return float(self.bound_hint)


@dataclass(frozen=True)
class TruncationPolicy:
    """Tail tolerance and absolute cutoff for the Poisson series.

    ``hard_k_cap=None`` means ``10 * ceil(lambda) + 200`` for each mean.
    """

    tail_mass_epsilon: float = 1e-12
    hard_k_cap: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < self.tail_mass_epsilon < 1.0):
            raise ValueError("tail_mass_epsilon must lie in (0, 1)")
        if self.hard_k_cap is not None and self.hard_k_cap < 1:
            raise ValueError("hard_k_cap must be >= 1")

    def cap_for(self, lam: float) -> int:
        if self.hard_k_cap is not None:
            return int(self.hard_k_cap)
        return 10 * math.ceil(lam) + 200


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre with ``points_per_cell`` nodes on each cell."""

    points_per_cell: int = 5

    def __post_init__(self):
        if int(self.points_per_cell) != self.points_per_cell or self.points_per_cell < 1:
            raise ValueError("points_per_cell must be a positive integer")

    def unit_rule(self):
        """Nodes and weights on ``[0, 1]``; the weights sum to one."""
        return _unit_gauss_legendre(int(self.points_per_cell))


@lru_cache(maxsize=None)
def _unit_gauss_legendre(p):
    x, w = np.polynomial.legendre.leggauss(p)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


DEFAULT_TRUNCATION = TruncationPolicy()
DEFAULT_QUADRATURE = QuadratureRule()


@dataclass(frozen=True)
class PoissonWindow:
    """Masses ``weights[i] = P(K = k_lo + i)`` for ``K ~ Poisson(lam)``."""

    lam: float
    k_lo: int
    weights: np.ndarray
    tail_mass: float

    @property
    def k_hi(self) -> int:
        return self.k_lo + len(self.weights) - 1

    @property
    def mass(self) -> float:
        return math.fsum(self.weights)


def truncated_window(lam: float, trunc: TruncationPolicy = DEFAULT_TRUNCATION) -> PoissonWindow:
    if not (lam >= 0.0 and math.isfinite(lam)):
        raise ValueError(f"Poisson mean must be finite and >= 0, got {lam!r}")
    cap = trunc.cap_for(lam)
    k_lo, weights, tail, ok = poisson_window(lam, trunc.tail_mass_epsilon, cap)
    if not ok:
        raise TruncationFailure(
            f"hard_k_cap={cap} reached with tail mass bound {tail:.3e} "
            f">= {trunc.tail_mass_epsilon:.3e} (lambda={lam:.6g})")
    return PoissonWindow(lam, k_lo, weights, tail)


@dataclass(frozen=True)
class Evaluation:
    """One truncated operator value with its bookkeeping.

    ``error_budget`` is ``tail_mass * sup|f|`` on the truncation range when
    the function carries a bound hint, else None.
    """

    value: float
    k_lo: int
    k_hi: int
    tail_mass: float
    mass: float
    endpoint: float
    error_budget: Optional[float]


def mean_parameter(params: OperatorParams, x):
    """Poisson mean ``x * log(a) / (a**(1/n) - 1)`` of the weights at ``x``."""
    _check_point(x)
    return x * params.rate


def weight(params: OperatorParams, k: int, x: float) -> float:
    """Single weight ``s_{n,k}(x)``, evaluated in log space."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    lam = mean_parameter(params, x)
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    value = math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))
    if not math.isfinite(value):
        raise SmkError(f"non-finite weight at k={k}, x={x}")
    return value


def _check_point(x):
    if np.any(np.asarray(x) < 0) or not np.all(np.isfinite(x)):
        raise ValueError(f"evaluation point must be finite and >= 0, got {x!r}")


def _raise_nonfinite(vals, *coords, name="f"):
    bad = np.argwhere(~np.isfinite(vals))[0]
    where = ", ".join(f"{c[tuple(bad)]:.17g}" for c in coords)
    raise NonFiniteFunction(f"{name} returned {vals[tuple(bad)]} at node ({where})")


def _cell_averages(f: ScalarFunction, n: int, k_start: int, k_stop: int, quad: QuadratureRule):
    """Mean of ``f`` over each cell ``[k/n, (k+1)/n]`` for ``k_start <= k <= k_stop``."""
    t, w = quad.unit_rule()
    ks = np.arange(k_start, k_stop + 1, dtype=np.float64)
    nodes = (ks[:, None] + t[None, :]) / n
    vals = f(nodes)
    if not np.all(np.isfinite(vals)):
        _raise_nonfinite(vals, nodes, name=f.name)
    return (vals * w).sum(axis=1)


def _series_many(rate, n, f, xs, trunc, quad):
    xs = [float(x) for x in xs]
    _check_point(xs)
    windows = [truncated_window(x * rate, trunc) for x in xs]
    k0 = min(win.k_lo for win in windows)
    k1 = max(win.k_hi for win in windows)
    averages = _cell_averages(f, n, k0, k1, quad)
    out = []
    for win in windows:
        seg = averages[win.k_lo - k0: win.k_hi - k0 + 1]
        value = math.fsum(win.weights * seg)
        endpoint = (win.k_hi + 1) / n
        bound = f.bound(endpoint)
        budget = None if bound is None else win.tail_mass * bound
        out.append(Evaluation(value, win.k_lo, win.k_hi, win.tail_mass, win.mass, endpoint, budget))
    return out


def apply_many(params: OperatorParams, f: ScalarFunction, xs: Sequence[float],
               trunc: TruncationPolicy = DEFAULT_TRUNCATION,
               quad: QuadratureRule = DEFAULT_QUADRATURE) -> list:
    """``apply_detailed`` at every point of ``xs``, sampling ``f`` once."""
    return _series_many(params.rate, params.n, f, xs, trunc, quad)


def apply_detailed(params, f, x, trunc=DEFAULT_TRUNCATION, quad=DEFAULT_QUADRATURE) -> Evaluation:
    return apply_many(params, f, [x], trunc, quad)[0]


def apply(params: OperatorParams, f: ScalarFunction, x: float,
          trunc: TruncationPolicy = DEFAULT_TRUNCATION,
          quad: QuadratureRule = DEFAULT_QUADRATURE) -> float:
    """Truncated value of the base-``a`` operator of degree ``n`` at ``x``."""
    return apply_detailed(params, f, x, trunc, quad).value


def kantorovich_many(n: int, f: ScalarFunction, xs: Sequence[float],
                     trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                     quad: QuadratureRule = DEFAULT_QUADRATURE) -> list:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"degree n must be a positive integer, got {n!r}")
    return _series_many(float(n), int(n), f, xs, trunc, quad)


def apply_kantorovich(n: int, f: ScalarFunction, x: float,
                      trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                      quad: QuadratureRule = DEFAULT_QUADRATURE) -> float:
    """Classical Szász-Mirakjan-Kantorovich operator ``K_n(f; x)``."""
    return kantorovich_many(n, f, [x], trunc, quad)[0].value


@dataclass(frozen=True)
class BivariateEvaluation:
    value: float
    window_x: tuple
    window_y: tuple
    tail_mass: float
    mass: float
    endpoints: tuple
    error_budget: Optional[float]


# cells per block when sampling f on the product grid
_ROW_BLOCK = 32


def apply_bivariate_many(params: BivariateParams, f: BivariateFunction, points,
                         trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                         quad: QuadratureRule = DEFAULT_QUADRATURE) -> list:
    """Tensor-product operator at each ``(x, y)`` in ``points``.

    ``f`` is sampled once on the union of all cells the points need.
    """
    points = [(float(x), float(y)) for x, y in points]
    _check_point([c for pt in points for c in pt])
    rate, m = params.axis.rate, params.m
    cache = {}

    def window(c):
        if c not in cache:
            cache[c] = truncated_window(c * rate, trunc)
        return cache[c]

    pairs = [(window(x), window(y)) for x, y in points]
    kx0 = min(wx.k_lo for wx, _ in pairs)
    kx1 = max(wx.k_hi for wx, _ in pairs)
    ky0 = min(wy.k_lo for _, wy in pairs)
    ky1 = max(wy.k_hi for _, wy in pairs)

    t, w = quad.unit_rule()
    p = len(t)
    ky = np.arange(ky0, ky1 + 1, dtype=np.float64)
    v_nodes = ((ky[:, None] + t[None, :]) / m).ravel()
    averages = np.empty((kx1 - kx0 + 1, ky1 - ky0 + 1))
    for start in range(kx0, kx1 + 1, _ROW_BLOCK):
        stop = min(start + _ROW_BLOCK, kx1 + 1)
        kx = np.arange(start, stop, dtype=np.float64)
        u_nodes = ((kx[:, None] + t[None, :]) / m).ravel()
        vals = f(u_nodes[:, None], v_nodes[None, :])
        if not np.all(np.isfinite(vals)):
            uu, vv = np.broadcast_arrays(u_nodes[:, None], v_nodes[None, :])
            _raise_nonfinite(vals, uu, vv, name=f.name)
        blocks = vals.reshape(stop - start, p, ky1 - ky0 + 1, p)
        averages[start - kx0: stop - kx0] = np.einsum("ipjq,p,q->ij", blocks, w, w)

    out = []
    for wx, wy in pairs:
        seg = averages[wx.k_lo - kx0: wx.k_hi - kx0 + 1, wy.k_lo - ky0: wy.k_hi - ky0 + 1]
        inner = (seg * wy.weights).sum(axis=1)
        value = math.fsum(wx.weights * inner)
        endpoints = ((wx.k_hi + 1) / m, (wy.k_hi + 1) / m)
        tail = wx.tail_mass + wy.tail_mass
        bound = f.bound(max(endpoints))
        out.append(BivariateEvaluation(
            value, (wx.k_lo, wx.k_hi), (wy.k_lo, wy.k_hi), tail, wx.mass * wy.mass,
            endpoints, None if bound is None else tail * bound))
    return out


def apply_bivariate_detailed(params, f, x, y, trunc=DEFAULT_TRUNCATION,
                             quad=DEFAULT_QUADRATURE) -> BivariateEvaluation:
    return apply_bivariate_many(params, f, [(x, y)], trunc, quad)[0]


def apply_bivariate(params: BivariateParams, f: BivariateFunction, x: float, y: float,
                    trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                    quad: QuadratureRule = DEFAULT_QUADRATURE) -> float:
    """Bivariate operator with product weights ``s_k1(x) * s_k2(y)``."""
    return apply_bivariate_detailed(params, f, x, y, trunc, quad).value


def truncation_endpoint(params: OperatorParams, x: float, trunc: TruncationPolicy = DEFAULT_TRUNCATION) -> float:
    """Right end ``(k_hi + 1) / n`` of the cells the truncated series at ``x`` touches."""
    _check_point(x)
    win = truncated_window(x * params.rate, trunc)
    return (win.k_hi + 1) / params.n
