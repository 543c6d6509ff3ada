"""Built-in test functions.

Entries flagged ``figure`` are the six univariate functions behind the
convergence and comparison tables.  ``lipschitz(T)`` returns a
Lipschitz pair valid on ``[0, T]``; for the cubics the constant grows with
``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .operators import BivariateFunction, ScalarFunction


@dataclass(frozen=True)
class FunctionCatalogEntry:
    id: str
    arity: int
    func: Callable
    label: str
    figure: bool = False
    bound: Optional[Callable] = None       # T -> sup |f| on [0, T]
    lipschitz: Optional[Callable] = None   # T -> (M, alpha) on [0, T]

    def scalar(self, T: Optional[float] = None) -> ScalarFunction:
        """The entry as a ``ScalarFunction``; with ``T`` it carries the Lipschitz hint for ``[0, T]``."""
        if self.arity != 1:
            raise ValueError(f"{self.id} is bivariate")
        hint = None if (T is None or self.lipschitz is None) else self.lipschitz(T)
        return ScalarFunction(self.func, self.id, self.bound, hint)

    def bivariate(self) -> BivariateFunction:
        if self.arity != 2:
            raise ValueError(f"{self.id} is univariate")
        hint = self.lipschitz(None) if self.lipschitz is not None else None
        return BivariateFunction(self.func, self.id, self.bound, hint)


def _const(value):
    return lambda T: value


def _cubic_roots(u):
    return (u - 0.5) * (u - 1 / 3) * (u - 0.25)


def _cubic_roots_lip(T):
    # f'(u) = 3u^2 - (13/6)u + 3/8; |f'| is maximal at an endpoint or the vertex
    fp = lambda u: 3 * u * u - 13 / 6 * u + 3 / 8
    cands = [abs(fp(0.0)), abs(fp(T))]
    if T >= 13 / 36:
        cands.append(abs(fp(13 / 36)))
    return (max(cands), 1.0)


def _cubic_roots_bound(T):
    us = np.linspace(0.0, T, 2001)
    return float(max(np.max(np.abs(_cubic_roots(us))) + 3 * max(1.0, T) ** 2 * T / 2000, abs(_cubic_roots(T))))


def _default_2d(u, v):
    return (1 + u) * np.exp(-v) * np.sin(u + v)


CATALOG = {
    e.id: e for e in [
        FunctionCatalogEntry("exp_neg2x", 1, lambda u: np.exp(-2 * u), "exp(-2x)", True,
                             _const(1.0), _const((2.0, 1.0))),
        FunctionCatalogEntry("identity", 1, lambda u: u, "x", True,
                             lambda T: T, _const((1.0, 1.0))),
        FunctionCatalogEntry("shifted_cubic", 1, _cubic_roots, "(x-1/2)(x-1/3)(x-1/4)", True,
                             _cubic_roots_bound, _cubic_roots_lip),
        FunctionCatalogEntry("cube", 1, lambda u: u**3, "x^3", True,
                             lambda T: T**3, lambda T: (3.0 * T * T, 1.0)),
        FunctionCatalogEntry("reciprocal", 1, lambda u: 1 / (1 + u), "1/(1+x)", True,
                             _const(1.0), _const((1.0, 1.0))),
        FunctionCatalogEntry("cos_pi", 1, lambda u: np.cos(np.pi * u), "cos(pi x)", True,
                             _const(1.0), _const((math.pi, 1.0))),
        FunctionCatalogEntry("one", 1, lambda u: np.ones_like(u), "1", False,
                             _const(1.0), _const((0.0, 1.0))),
        FunctionCatalogEntry("abs_half", 1, lambda u: np.abs(u - 0.5), "|x-1/2|", False,
                             lambda T: max(0.5, T - 0.5), _const((1.0, 1.0))),
        FunctionCatalogEntry("default2d", 2, _default_2d, "(1+x) exp(-y) sin(x+y)", False,
                             lambda T: 1 + T),
        FunctionCatalogEntry("one2d", 2, lambda u, v: np.ones(np.broadcast_shapes(np.shape(u), np.shape(v))),
                             "1", False, _const(1.0), lambda T: (0.0, 1.0, 1.0)),
        FunctionCatalogEntry("uv", 2, lambda u, v: u * v, "x y", False, lambda T: T * T),
        FunctionCatalogEntry("sep_exp", 2, lambda u, v: np.exp(-u) * np.exp(-v), "exp(-x) exp(-y)", False,
                             _const(1.0)),
    ]
}

UNIVARIATE = [e.id for e in CATALOG.values() if e.arity == 1]
FIGURE_UNIVARIATE = [e.id for e in CATALOG.values() if e.arity == 1 and e.figure]
BIVARIATE = [e.id for e in CATALOG.values() if e.arity == 2]


def get(fn_id: str) -> FunctionCatalogEntry:
    try:
        return CATALOG[fn_id]
    except KeyError:
        raise KeyError(f"unknown function id {fn_id!r}; choose from {sorted(CATALOG)}") from None
