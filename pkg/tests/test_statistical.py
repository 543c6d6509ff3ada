import math
from fractions import Fraction

import numpy as np
import pytest

from smklab.moments import raw_moments
from smklab.operators import OperatorParams, ScalarFunction, apply_many
from smklab.statistical import (
    alternating_sequence,
    counterexample_sequence,
    exceedance_report,
    halving_horizons,
    inverse_sequence,
    is_even,
    is_square,
    korovkin_deviations,
    korovkin_sequence,
    natural_density,
    stat_degree_check,
    stat_limit_check,
)


class TestDensity:
    def test_evens(self):
        assert natural_density(is_even, 1000).density == 0.5

    @pytest.mark.parametrize("N", [100, 10**4, 10**6, 999_999])
    def test_squares_exact(self, N):
        rep = natural_density(is_square, N)
        assert rep.exceedance_count == math.isqrt(N)
        assert rep.exact_density == Fraction(math.isqrt(N), N)
        for h, c in rep.trace:
            assert c == math.isqrt(h)

    def test_halving_horizons(self):
        assert halving_horizons(10) == [1, 2, 3, 5, 10]
        assert halving_horizons(1) == [1]

    def test_counts_reproducible(self):
        a = natural_density(is_square, 12345)
        b = natural_density(is_square, 12345)
        assert a == b

    def test_bad_horizon(self):
        with pytest.raises(ValueError):
            natural_density(is_even, 0)


class TestStatLimit:
    def test_inverse_sequence_count(self):
        # |1/k| >= 0.01 holds for k = 1..100 inclusive
        rep = exceedance_report(inverse_sequence, 0.0, 0.01, 10**4)
        assert rep.exceedance_count == 100
        verdict = stat_limit_check(inverse_sequence, 0.0, [0.01], 10**4)
        assert verdict.verdict == "consistent"

    def test_alternating_inconsistent(self):
        v = stat_limit_check(alternating_sequence, 0.0, [0.5], 5000)
        assert v.reports[0].density == 1.0
        assert v.verdict == "inconsistent"

    def test_counterexample(self):
        v = stat_limit_check(counterexample_sequence, 0.0, [1.0, 0.5, 0.01], 10**6)
        assert v.verdict == "consistent"
        for rep in v.reports:
            for h, c in rep.trace:
                assert c == math.isqrt(h)

    def test_counterexample_unbounded(self):
        n = np.arange(1, 10**6 + 1)
        vals = counterexample_sequence(n)
        assert vals.max() == 1000.0
        big = np.array([(10**9 + 7) ** 2, (10**9 + 7) ** 2 - 1], dtype=np.int64)
        assert list(counterexample_sequence(big)) == [10**9 + 7.0, 0.0]

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            exceedance_report(inverse_sequence, 0.0, 0.0, 10)


class TestDegree:
    def test_squares_scaled_traces(self):
        low = stat_degree_check(counterexample_sequence, 0.0, 0.49, [0.5])
        high = stat_degree_check(counterexample_sequence, 0.0, 0.51, [0.5])
        assert low.decaying[0.5]
        assert not high.decaying[0.5]
        assert high.scaled_traces[0.5][-1][1] > 1.0

    def test_beta_range(self):
        with pytest.raises(ValueError):
            stat_degree_check(inverse_sequence, 0.0, 1.0)


class TestKorovkin:
    def test_rows_match_operator(self):
        e = [ScalarFunction(lambda u, k=k: u**k) for k in range(3)]
        xs = np.linspace(0, 1, 101)
        for n in (10, 100):
            p = OperatorParams(n, 1.5)
            row = korovkin_deviations([p], grid_step=0.01)[0]
            devs = [max(abs(ev.value - x**k) for ev, x in zip(apply_many(p, e[k], xs), xs)) for k in range(3)]
            assert devs[0] <= 1e-11
            assert row.dev_e1 == pytest.approx(devs[1], abs=1e-8)
            assert row.dev_e2 == pytest.approx(devs[2], abs=1e-8)

    def test_weighted_rows(self):
        row = korovkin_deviations([OperatorParams(10, 1.5)], weighted=True)[0]
        assert row.weighted and row.dev_e0 == 0.0
        assert 0 < row.tail_e1 < row.dev_e1
        xs = np.linspace(100, 10**4, 2000)
        mom = raw_moments(OperatorParams(10, 1.5), xs)
        assert np.max(np.abs(mom.m1 - xs) / (1 + xs**2)) <= row.tail_e1
        assert np.max(np.abs(mom.m2 - xs**2) / (1 + xs**2)) <= row.tail_e2

    @pytest.mark.parametrize("order", [1, 2])
    def test_sequence_matches_rows(self, order):
        seq = korovkin_sequence(order, 1.5)
        for n in (3, 10, 1000):
            row = korovkin_deviations([OperatorParams(n, 1.5)], grid_step=1e-4)[0]
            assert seq(n) == pytest.approx(getattr(row, f"dev_e{order}"), rel=1e-8)

    def test_scaling_with_degree(self):
        r10, r4 = korovkin_deviations([OperatorParams(10, 1.5), OperatorParams(10**4, 1.5)])
        assert r10.dev_e1 / r4.dev_e1 > 100 and r10.dev_e2 / r4.dev_e2 > 100
