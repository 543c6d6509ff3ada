"""Finite-horizon evidence for statistical convergence.

Sequences and membership predicates are vectorized callables: they receive
an int64 array of indices ``1..N`` and return values (or booleans) of the
same shape.  Counts are exact integers; densities are ``count / N``.
A verdict is only ever evidence at the horizons examined, never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .moments import raw_moments
from .operators import OperatorParams
from .special import scale_defect

DEFAULT_EPSILONS = (1.0, 0.1, 0.01)
DEFAULT_HORIZONS = (10**3, 10**4, 10**5, 10**6)
VERDICT_THRESHOLD = 0.01


@dataclass(frozen=True)
class DensityReport:
    """Exceedance count at horizon ``N`` plus a trace at smaller horizons.

    ``trace`` holds ``(N_i, count_i)`` pairs in increasing ``N_i``; the last
    entry is ``(N, exceedance_count)``.
    """

    horizon: int
    exceedance_count: int
    epsilon: Optional[float] = None
    trace: tuple = ()

    @property
    def density(self) -> float:
        return self.exceedance_count / self.horizon

    @property
    def exact_density(self) -> Fraction:
        return Fraction(self.exceedance_count, self.horizon)

    def densities(self):
        return [(n, c / n) for n, c in self.trace]


@dataclass(frozen=True)
class StatLimitVerdict:
    candidate_limit: float
    reports: tuple
    threshold: float
    verdict: str


@dataclass(frozen=True)
class DegreeEstimate:
    """Exceedance counts rescaled by ``N**(1 - beta)``, one trace per epsilon.

    ``scaled_traces[eps]`` is a list of ``(N, count / N**(1 - beta))``.
    """

    beta: float
    scaled_traces: dict
    decaying: dict = field(default_factory=dict)


@dataclass(frozen=True)
class KorovkinDeviationRow:
    """Sup-norm (or weighted-norm) deviations of ``S(e_i)`` from ``e_i``.

    In weighted mode ``tail_e1``/``tail_e2`` bound the weighted deviation
    beyond the truncated grid end ``x_max``.
    """

    n: int
    a: float
    dev_e0: float
    dev_e1: float
    dev_e2: float
    weighted: bool = False
    tail_e1: Optional[float] = None
    tail_e2: Optional[float] = None


def _indices(N):
    if N < 1:
        raise ValueError("horizon must be >= 1")
    return np.arange(1, N + 1, dtype=np.int64)


def _counts_at(mask, horizons):
    cum = np.cumsum(mask, dtype=np.int64)
    return [(int(h), int(cum[h - 1])) for h in horizons]


def halving_horizons(N):
    """``ceil(N / 2**j)`` for ``j = 0, 1, ...`` down to 1, ascending."""
    hs = set()
    j = 0
    while True:
        h = -(-N // (1 << j))
        hs.add(h)
        if h == 1:
            break
        j += 1
    return sorted(hs)


def natural_density(membership: Callable, N: int) -> DensityReport:
    """Count of ``{k <= N : membership(k)}`` with a trace at ``ceil(N/2**j)``."""
    mask = np.asarray(membership(_indices(N)), dtype=bool)
    trace = _counts_at(mask, halving_horizons(N))
    return DensityReport(N, trace[-1][1], None, tuple(trace))


def _exceedance_mask(sequence, p, eps, N):
    if eps <= 0:
        raise ValueError("epsilon must be > 0")
    values = np.asarray(sequence(_indices(N)), dtype=np.float64)
    return np.abs(values - p) >= eps


def _horizons(N, horizons):
    hs = sorted({int(h) for h in (horizons or DEFAULT_HORIZONS) if h <= N} | {int(N)})
    return hs


def exceedance_report(sequence, p, eps, N, horizons=None) -> DensityReport:
    mask = _exceedance_mask(sequence, p, eps, N)
    trace = _counts_at(mask, _horizons(N, horizons))
    return DensityReport(N, trace[-1][1], eps, tuple(trace))


def stat_limit_check(sequence: Callable, p: float, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                     N: int = 10**6, horizons=None,
                     threshold: float = VERDICT_THRESHOLD) -> StatLimitVerdict:
    """Exceedance densities of ``|x_k - p| >= eps`` for every ``eps``.

    The verdict is ``consistent`` when, for every epsilon, the density at the
    largest horizon is at most the density at the smallest one and at most
    ``threshold``.
    """
    reports = tuple(exceedance_report(sequence, p, eps, N, horizons) for eps in epsilons)
    ok = True
    for rep in reports:
        dens = rep.densities()
        first, last = dens[0][1], dens[-1][1]
        if last > first or last > threshold:
            ok = False
    return StatLimitVerdict(p, reports, threshold, "consistent" if ok else "inconsistent")


def stat_degree_check(sequence: Callable, p: float, beta: float,
                      epsilons: Sequence[float] = DEFAULT_EPSILONS, N: int = 10**6,
                      horizons=None) -> DegreeEstimate:
    if not (0.0 < beta < 1.0):
        raise ValueError("beta must lie in (0, 1)")
    traces, decaying = {}, {}
    for eps in epsilons:
        rep = exceedance_report(sequence, p, eps, N, horizons)
        scaled = [(h, c / h ** (1.0 - beta)) for h, c in rep.trace]
        traces[eps] = scaled
        decaying[eps] = all(b[1] < a[1] or b[1] == 0.0 for a, b in zip(scaled, scaled[1:]))
    return DegreeEstimate(beta, traces, decaying)


# built-in sequences, indexed from 1


def counterexample_sequence(n):
    """``sqrt(n)`` on perfect squares, 0 elsewhere: unbounded yet statistically null."""
    n = np.asarray(n, dtype=np.int64)
    r = np.sqrt(n.astype(np.float64)).astype(np.int64)
    # isqrt correction for rounding near large squares
    r = np.where(r * r > n, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= n, r + 1, r)
    out = np.where(r * r == n, r.astype(np.float64), 0.0)
    return out if out.ndim else float(out)


def is_square(n):
    return counterexample_sequence(n) != 0


def is_even(n):
    return np.asarray(n) % 2 == 0


def inverse_sequence(n):
    return 1.0 / np.asarray(n, dtype=np.float64)


def alternating_sequence(n):
    return np.where(np.asarray(n) % 2 == 0, 1.0, -1.0)


def korovkin_deviations(params_list: Sequence[OperatorParams], l: float = 1.0,
                        grid_step: float = 1e-3, weighted: bool = False,
                        x_max: float = 100.0) -> list:
    """Deviation rows ``sup |S(e_i; x) - x**i|`` from the closed-form moments.

    Plain mode takes the sup over a grid on ``[0, l]``.  Weighted mode divides
    by ``1 + x**2`` and takes the sup over ``[0, x_max]``; the tail bounds for
    ``x > x_max`` are reported alongside.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be > 0")
    end = x_max if weighted else l
    if end <= 0:
        raise ValueError("interval end must be > 0")
    count = int(math.floor(end / grid_step + 1e-9)) + 1
    xs = np.arange(count) * grid_step
    if xs[-1] < end:
        xs = np.append(xs, end)
    rows = []
    for params in params_list:
        mom = raw_moments(params, xs)
        d0 = np.abs(mom.m0 - 1.0)
        d1 = np.abs(mom.m1 - xs)
        d2 = np.abs(mom.m2 - xs**2)
        if not weighted:
            rows.append(KorovkinDeviationRow(params.n, params.a, float(d0.max()),
                                             float(d1.max()), float(d2.max())))
            continue
        w = 1.0 + xs**2
        n, q = params.n, params.rate
        X = end
        defect = scale_defect(params.a, n)
        tail1 = 1 / (2 * n * (1 + X**2)) + abs(defect) * X / (1 + X**2)
        tail2 = (1 / (3 * n**2 * (1 + X**2)) + 2 * q / n**2 * X / (1 + X**2)
                 + abs(defect * (defect + 2.0)))
        rows.append(KorovkinDeviationRow(params.n, params.a, float((d0 / w).max()),
                                         float((d1 / w).max()), float((d2 / w).max()),
                                         True, tail1, tail2))
    return rows


def korovkin_sequence(order: int, a: float, l: float = 1.0):
    """``n -> sup_{0 <= x <= l} |S(e_order; x) - x**order|`` as a vectorized sequence.

    The closed-form deviation is linear in ``x`` for ``order = 1`` and
    concave quadratic for ``order = 2``, so the sup is attained at an end of
    ``[0, l]`` or at the vertex and is exact.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if not (a > 1.0) or l <= 0:
        raise ValueError("need a > 1 and l > 0")
    log_a = math.log(a)

    def seq(n):
        n = np.asarray(n, dtype=np.float64)
        q = log_a / np.expm1(log_a / n)
        if order == 1:
            c0, c1 = 1 / (2 * n), q / n - 1.0
            return np.maximum(np.abs(c0), np.abs(c0 + c1 * l))
        c0, c1, c2 = 1 / (3 * n**2), 2 * q / n**2, (q / n) ** 2 - 1.0
        dev = lambda x: np.abs(c0 + c1 * x + c2 * x * x)
        vertex = np.clip(-c1 / (2 * c2), 0.0, l)
        return np.maximum(np.maximum(dev(0.0), dev(l)), dev(vertex))

    return seq
