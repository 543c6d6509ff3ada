"""Command-line front end: every command prints one table.

    smklab --command eval --fn exp_neg2x --n 5 --n 10 --grid 0:2:0.05

Exit codes: 0 success, 2 bad configuration, 3 numerical failure,
4 certificate failure under ``--strict``.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import catalog
from .bounds import (
    certify_bivariate_many,
    certify_lipschitz_bound,
    certify_modulus_many,
)
from .errors import SmkError
from .moments import (
    bivariate_e11_as_printed,
    bivariate_moments,
    central_moment3_as_printed,
    central_moments,
    raw_moments,
)
from .operators import (
    BivariateFunction,
    BivariateParams,
    OperatorParams,
    QuadratureRule,
    ScalarFunction,
    TruncationPolicy,
    apply_bivariate_many,
    apply_many,
    kantorovich_many,
    truncation_endpoint,
)
from .statistical import (
    DEFAULT_EPSILONS,
    DEFAULT_HORIZONS,
    alternating_sequence,
    counterexample_sequence,
    inverse_sequence,
    is_even,
    is_square,
    korovkin_deviations,
    korovkin_sequence,
    natural_density,
    stat_degree_check,
    stat_limit_check,
)
from .tables import Table

COMMANDS = ("eval", "compare", "moments", "korovkin", "density", "certify", "bivariate")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CERTIFICATE = 0, 2, 3, 4

# per-command defaults: function id, degrees, grid
_DEFAULTS = {
    "eval": ("exp_neg2x", [5, 10], "0:1:0.05"),
    "compare": ("cube", [10], "0:1:0.05"),
    "moments": (None, [5], "0:1:0.25"),
    "korovkin": (None, [10, 100, 1000, 10000], None),
    "density": ("squares", [], None),
    "certify": ("exp_neg2x", [5, 10, 20, 100], "0:1:0.05"),
    "bivariate": ("default2d", [], "0:1:0.1"),
}
_DEFAULT_M = [5, 10, 20]
_DEFAULT_A = 1.5
_DEFAULT_A_BIVARIATE = 3.0
# tighter default tail for the moment oracle; u**4 is unbounded
_MOMENT_TAIL_EPS = 1e-20

# sequences for the density command: (kind, callable-or-factory, default limit)
_MEMBERSHIP = {"squares": is_square, "evens": is_even}
_SEQUENCES = {
    "inverse": inverse_sequence,
    "alternating": alternating_sequence,
    "counterexample": counterexample_sequence,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    step: float

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"grid must be start:stop:step, got {text!r}") from None
        if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
            raise ConfigError("grid entries must be finite")
        if start < 0:
            raise ConfigError("grid start must be >= 0")
        if step <= 0:
            raise ConfigError("grid step must be > 0")
        if stop < start:
            raise ConfigError("grid stop must be >= start")
        return cls(start, stop, step)

    def points(self) -> list:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + i * self.step for i in range(count)]

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smklab", description="Tables for base-a Szasz-Mirakjan-Kantorovich operators.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--fn", help="function id from the catalog, or a sequence id for density")
    p.add_argument("--n", type=int, action="append", help="degree; repeatable")
    p.add_argument("--a", type=float, help="base a > 1 (default 1.5, or 3 for bivariate)")
    p.add_argument("--m", type=int, action="append", help="bivariate degree; repeatable")
    p.add_argument("--grid", help="start:stop:step")
    p.add_argument("--tail-eps", type=float, help="tail mass tolerance (default 1e-12)")
    p.add_argument("--quad-points", type=int, default=5, help="Gauss-Legendre nodes per cell")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--weighted", action="store_true", help="korovkin: weighted norm with 1 + x^2")
    p.add_argument("--epsilon", type=float, action="append", help="density: exceedance threshold; repeatable")
    p.add_argument("--horizon", type=int, action="append", help="density: horizon; repeatable")
    p.add_argument("--beta", type=float, help="density: degree exponent in (0, 1)")
    p.add_argument("--p", type=float, default=0.0, help="density: candidate limit")
    p.add_argument("--strict", action="store_true", help="certify: exit 4 on any failure")
    p.add_argument("--bound", choices=("modulus", "lipschitz"), default="modulus", help="certify: which bound")
    p.add_argument("--bound-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.add_argument("--l", type=float, default=1.0, help="korovkin: interval end")
    p.add_argument("--x-max", type=float, default=100.0, help="korovkin: weighted grid end")
    return p


def _policy(args, default_eps=1e-12):
    eps = default_eps if args.tail_eps is None else args.tail_eps
    try:
        return TruncationPolicy(eps), QuadratureRule(args.quad_points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _entry(fn_id, arity):
    try:
        entry = catalog.get(fn_id)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    if entry.arity != arity:
        raise ConfigError(f"{fn_id} has arity {entry.arity}; this command needs arity {arity}")
    return entry


def _params(ns, a):
    try:
        return [OperatorParams(n, a) for n in ns]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _base_meta(args, fn_id, a, trunc, quad, grid):
    meta = {"command": args.command}
    if fn_id is not None:
        meta["fn"] = fn_id
        if fn_id in catalog.CATALOG:
            meta["f"] = catalog.CATALOG[fn_id].label
    if a is not None:
        meta["a"] = repr(a)
    if grid is not None:
        meta["grid"] = str(grid)
    if trunc is not None:
        meta["tail_eps"] = repr(trunc.tail_mass_epsilon)
        meta["quad_points"] = quad.points_per_cell
    return meta


def _settings(args):
    default_fn, default_n, default_grid = _DEFAULTS[args.command]
    fn_id = args.fn or default_fn
    ns = args.n or default_n
    grid = Grid.parse(args.grid or default_grid) if (args.grid or default_grid) else None
    return fn_id, ns, grid


def cmd_eval(args) -> Table:
    fn_id, ns, grid = _settings(args)
    a = _DEFAULT_A if args.a is None else args.a
    trunc, quad = _policy(args)
    f = _entry(fn_id, 1).scalar()
    params = _params(ns, a)
    xs = grid.points()
    fx = f(np.array(xs))
    table = Table(["x", "f"] + [f"S[n={p.n}]" for p in params],
                  meta=_base_meta(args, fn_id, a, trunc, quad, grid))
    table.meta["n"] = " ".join(str(p.n) for p in params)
    columns = [[ev.value for ev in apply_many(p, f, xs, trunc, quad)] for p in params]
    for p, col in zip(params, columns):
        table.meta[f"max_abs_err[n={p.n}]"] = "%.16e" % max(abs(v - w) for v, w in zip(col, fx))
    for i, x in enumerate(xs):
        table.add(x, float(fx[i]), *(col[i] for col in columns))
    return table


def cmd_compare(args) -> Table:
    fn_id, ns, grid = _settings(args)
    a = _DEFAULT_A if args.a is None else args.a
    trunc, quad = _policy(args)
    f = _entry(fn_id, 1).scalar()
    params = _params(ns, a)
    xs = grid.points()
    fx = [float(v) for v in f(np.array(xs))]
    cols = ["x", "f"]
    blocks = []
    for p in params:
        s = [ev.value for ev in apply_many(p, f, xs, trunc, quad)]
        k = [ev.value for ev in kantorovich_many(p.n, f, xs, trunc, quad)]
        es = [abs(v - w) for v, w in zip(s, fx)]
        ek = [abs(v - w) for v, w in zip(k, fx)]
        blocks.append((s, k, es, ek))
        cols += [f"S[n={p.n}]", f"K[n={p.n}]", f"errS[n={p.n}]", f"errK[n={p.n}]"]
    table = Table(cols, meta=_base_meta(args, fn_id, a, trunc, quad, grid))
    table.meta["n"] = " ".join(str(p.n) for p in params)
    for i, x in enumerate(xs):
        row = [x, fx[i]]
        for s, k, es, ek in blocks:
            row += [s[i], k[i], es[i], ek[i]]
        table.add(*row)
    summary = ["max_abs_err", ""]
    for _, _, es, ek in blocks:
        summary += ["", "", max(es), max(ek)]
    table.add(*summary)
    return table


def _rel(closed, brute):
    scale = max(abs(closed), abs(brute))
    return 0.0 if scale == 0.0 else abs(closed - brute) / scale


def _power(center, k):
    return ScalarFunction(lambda u: (u - center) ** k, f"(u-{center!r})^{k}")


def cmd_moments(args) -> Table:
    _, ns, grid = _settings(args)
    a = _DEFAULT_A if args.a is None else args.a
    trunc, quad = _policy(args, _MOMENT_TAIL_EPS)
    table = Table(["degree", "x", "y", "quantity", "closed_form", "brute_force", "rel_diff"],
                  meta=_base_meta(args, None, a, trunc, quad, grid))
    xs = grid.points()
    if args.m:
        for bp in [BivariateParams(m, a) for m in args.m]:
            _bivariate_moment_rows(table, bp, xs, trunc, quad)
        table.meta["m"] = " ".join(str(m) for m in args.m)
        return table
    table.meta["n"] = " ".join(str(n) for n in ns)
    for p in _params(ns, a):
        for x in xs:
            raw = raw_moments(p, x)
            cen = central_moments(p, x)
            rows = [(f"m{i}", getattr(raw, f"m{i}"), _power(0.0, i)) for i in range(4)]
            rows += [(f"c{i}", getattr(cen, f"c{i}"), _power(x, i)) for i in range(1, 5)]
            rows.append(("c3_as_printed", central_moment3_as_printed(p, x), _power(x, 3)))
            for name, closed, g in rows:
                brute = apply_many(p, g, [x], trunc, quad)[0].value
                table.add(p.n, x, "", name, float(closed), brute, _rel(float(closed), brute))
    return table


def _bivariate_moment_rows(table, bp, xs, trunc, quad):
    funcs = {
        "y00": lambda u, v: np.ones(np.broadcast_shapes(u.shape, v.shape)),
        "y11": lambda u, v: u * v,
        "y22": lambda u, v: (u * v) ** 2,
        "y33": lambda u, v: (u * v) ** 3,
    }
    points = [(x, y) for x in xs for y in xs]
    values = {name: apply_bivariate_many(bp, BivariateFunction(g, name), points, trunc, quad)
              for name, g in funcs.items()}
    for idx, (x, y) in enumerate(points):
        tab = bivariate_moments(bp, x, y)
        for name in funcs:
            closed = float(getattr(tab, name))
            brute = values[name][idx].value
            table.add(bp.m, x, y, name, closed, brute, _rel(closed, brute))
        closed = float(bivariate_e11_as_printed(bp, x, y))
        brute = values["y11"][idx].value
        table.add(bp.m, x, y, "y11_as_printed", closed, brute, _rel(closed, brute))


def cmd_korovkin(args) -> Table:
    _, ns, _ = _settings(args)
    a = _DEFAULT_A if args.a is None else args.a
    try:
        rows = korovkin_deviations(_params(ns, a), l=args.l, weighted=args.weighted, x_max=args.x_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cols = ["n", "a", "dev_e0", "dev_e1", "dev_e2"]
    if args.weighted:
        cols += ["tail_e1", "tail_e2"]
    meta = _base_meta(args, None, a, None, None, None)
    meta["norm"] = "weighted 1+x^2" if args.weighted else "sup"
    meta["interval"] = f"[0, {args.x_max!r}]" if args.weighted else f"[0, {args.l!r}]"
    table = Table(cols, meta=meta)
    for r in rows:
        vals = [r.n, r.a, r.dev_e0, r.dev_e1, r.dev_e2]
        if args.weighted:
            vals += [r.tail_e1, r.tail_e2]
        table.add(*vals)
    return table


def _sequence(fn_id, a, l):
    if fn_id in _SEQUENCES:
        return _SEQUENCES[fn_id]
    if fn_id in ("dev_e1", "dev_e2"):
        return korovkin_sequence(int(fn_id[-1]), a, l)
    raise ConfigError(f"unknown sequence {fn_id!r}; choose from "
                      f"{sorted(_MEMBERSHIP) + sorted(_SEQUENCES) + ['dev_e1', 'dev_e2']}")


def cmd_density(args) -> Table:
    fn_id, _, _ = _settings(args)
    horizons = sorted(set(args.horizon or DEFAULT_HORIZONS))
    if horizons[0] < 1:
        raise ConfigError("horizons must be >= 1")
    N = horizons[-1]
    meta = _base_meta(args, fn_id, None, None, None, None)
    meta["horizon"] = N
    if fn_id in _MEMBERSHIP:
        rep = natural_density(_MEMBERSHIP[fn_id], N)
        table = Table(["N", "count", "density"], meta=meta)
        for h, c in rep.trace:
            table.add(h, c, c / h)
        return table
    a = _DEFAULT_A if args.a is None else args.a
    seq = _sequence(fn_id, a, args.l)
    if fn_id.startswith("dev_"):
        meta["a"] = repr(a)
    epsilons = args.epsilon or list(DEFAULT_EPSILONS)
    meta["p"] = repr(args.p)
    try:
        verdict = stat_limit_check(seq, args.p, epsilons, N, horizons)
        degree = None if args.beta is None else stat_degree_check(seq, args.p, args.beta, epsilons, N, horizons)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    meta["verdict"] = verdict.verdict
    meta["threshold"] = repr(verdict.threshold)
    cols = ["epsilon", "N", "count", "density"]
    if degree is not None:
        meta["beta"] = repr(args.beta)
        meta["decaying"] = " ".join(f"{e!r}:{str(degree.decaying[e]).lower()}" for e in epsilons)
        cols.append("scaled")
    table = Table(cols, meta=meta)
    for rep in verdict.reports:
        scaled = dict(degree.scaled_traces[rep.epsilon]) if degree is not None else None
        for h, c in rep.trace:
            row = [rep.epsilon, h, c, c / h]
            if scaled is not None:
                row.append(scaled[h])
            table.add(*row)
    return table


def cmd_certify(args):
    fn_id, ns, grid = _settings(args)
    trunc, quad = _policy(args)
    entry = catalog.get(fn_id) if fn_id in catalog.CATALOG else _entry(fn_id, 1)
    xs = grid.points()
    if entry.arity == 2:
        a = _DEFAULT_A_BIVARIATE if args.a is None else args.a
        ms = args.m or [5, 10]
        table = Table(["m", "x", "y", "actual_error", "bound", "margin", "slack", "passed", "note"],
                      meta=_base_meta(args, fn_id, a, trunc, quad, grid))
        table.meta["m"] = " ".join(str(m) for m in ms)
        table.meta["bound"] = "modulus"
        f = entry.bivariate()
        points = [(x, y) for x in xs for y in xs]
        for m in ms:
            try:
                bp = BivariateParams(m, a)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            certs = certify_bivariate_many(bp, f, points, trunc, quad, bound_scale=args.bound_scale)
            for c in certs:
                table.add(m, c.point[0], c.point[1], c.actual_error, c.bound_value, c.margin, c.slack,
                          c.passed, c.note)
    else:
        a = _DEFAULT_A if args.a is None else args.a
        table = Table(["n", "x", "actual_error", "bound", "margin", "slack", "passed", "note"],
                      meta=_base_meta(args, fn_id, a, trunc, quad, grid))
        table.meta["n"] = " ".join(str(n) for n in ns)
        table.meta["bound"] = args.bound
        for p in _params(ns, a):
            if args.bound == "modulus":
                certs = certify_modulus_many(p, entry.scalar(), xs, trunc, quad, bound_scale=args.bound_scale)
            else:
                if entry.lipschitz is None:
                    raise ConfigError(f"{fn_id} has no Lipschitz hint")
                f = entry.scalar(truncation_endpoint(p, max(xs), trunc))
                certs = [certify_lipschitz_bound(p, f, x, trunc, quad, args.bound_scale) for x in xs]
            for c in certs:
                table.add(p.n, c.point[0], c.actual_error, c.bound_value, c.margin, c.slack, c.passed, c.note)
    passed = sum(1 for v in table.column("passed") if v)
    table.meta["passed"] = passed
    table.meta["failed"] = len(table.rows) - passed
    if args.bound_scale != 1.0:
        table.meta["bound_scale"] = repr(args.bound_scale)
    return table


def cmd_bivariate(args) -> Table:
    fn_id, _, grid = _settings(args)
    a = _DEFAULT_A_BIVARIATE if args.a is None else args.a
    ms = args.m or _DEFAULT_M
    trunc, quad = _policy(args)
    f = _entry(fn_id, 2).bivariate()
    try:
        params = [BivariateParams(m, a) for m in ms]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    xs = grid.points()
    points = [(x, y) for x in xs for y in xs]
    fxy = [float(f(x, y)) for x, y in points]
    table = Table(["x", "y", "f"] + [f"Y[m={bp.m}]" for bp in params],
                  meta=_base_meta(args, fn_id, a, trunc, quad, grid))
    table.meta["m"] = " ".join(str(m) for m in ms)
    columns = [[ev.value for ev in apply_bivariate_many(bp, f, points, trunc, quad)] for bp in params]
    for bp, col in zip(params, columns):
        table.meta[f"max_abs_err[m={bp.m}]"] = "%.16e" % max(abs(v - w) for v, w in zip(col, fxy))
    for i, (x, y) in enumerate(points):
        table.add(x, y, fxy[i], *(col[i] for col in columns))
    return table


_HANDLERS = {
    "eval": cmd_eval,
    "compare": cmd_compare,
    "moments": cmd_moments,
    "korovkin": cmd_korovkin,
    "density": cmd_density,
    "certify": cmd_certify,
    "bivariate": cmd_bivariate,
}


def run(argv=None) -> tuple:
    """Parse ``argv`` and build the table; returns ``(table, args)``."""
    args = build_parser().parse_args(argv)
    return _HANDLERS[args.command](args), args


def main(argv: Optional[list] = None) -> int:
    try:
        table, args = run(argv)
    except SystemExit as exc:  # argparse
        return EXIT_CONFIG if exc.code else EXIT_OK
    except (ConfigError, ValueError) as exc:
        print(f"smklab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SmkError as exc:
        print(f"smklab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = table.render(args.format)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.strict and args.command == "certify" and table.meta["failed"]:
        print(f"smklab: {table.meta['failed']} certificate(s) failed", file=sys.stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
