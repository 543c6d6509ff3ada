import itertools
import math

import mpmath
import numpy as np
import pytest

from smklab import kernels
from smklab._kernels_py import oscillation_1d as py_osc1, oscillation_2d as py_osc2

LAMBDAS = [1e-9, 0.3, 1.0, 4.8, 17.5, 250.0, 1e4, 1e5, 1e6]


@pytest.mark.parametrize("lam", [0.5, 7.3, 250.0, 1e4, 1e6])
def test_pmf_near_mode_matches_mpmath(lam):
    mpmath.mp.dps = 40
    for k in (int(lam) - 3, int(lam), int(lam) + 5):
        if k < 0:
            continue
        exact = mpmath.exp(-lam + k * mpmath.log(lam) - mpmath.loggamma(k + 1))
        assert kernels.poisson_pmf(k, lam) == pytest.approx(float(exact), rel=5e-15)


@pytest.mark.parametrize("lam", LAMBDAS)
@pytest.mark.parametrize("eps", [1e-8, 1e-12, 1e-15])
def test_window_mass_deficit_within_tail_bound(backend, lam, eps):
    k_lo, w, tail, ok = kernels.poisson_window(lam, eps, 10**8)
    assert ok
    assert tail < eps
    deficit = 1.0 - math.fsum(w)
    # rounding of the masses themselves contributes a few ulp per unit mass
    assert deficit <= tail + 1e-14
    assert deficit >= -1e-14


def test_window_at_zero_mean_is_a_point_mass():
    assert kernels.poisson_window(0.0, 1e-12, 10) == (0, pytest.approx(np.ones(1)), 0.0, True)


def test_cap_reports_failure():
    _, _, tail, ok = kernels.poisson_window(50.0, 1e-12, 55)
    assert not ok and tail >= 0.5e-12


@pytest.mark.skipif(len(kernels.available_backends()) < 2, reason="compiled extension not built")
@pytest.mark.parametrize("lam", LAMBDAS)
def test_backends_bit_identical_weights(lam):
    results = {}
    for name in kernels.available_backends():
        prev = kernels.use_backend(name)
        try:
            results[name] = kernels.poisson_window(lam, 1e-12, 10**8)
        finally:
            kernels.use_backend(prev)
    a, b = results.values()
    assert a[0] == b[0] and a[2] == b[2] and a[3] == b[3]
    assert np.array_equal(a[1], b[1])


def _brute_osc1(v, w):
    return max(abs(v[i] - v[j]) for i, j in itertools.product(range(len(v)), repeat=2) if abs(i - j) <= w)


def _brute_osc2(v, w1, w2):
    n1, n2 = v.shape
    best = 0.0
    for i, j in itertools.product(range(n1), range(n2)):
        block = v[max(0, i - w1): i + w1 + 1, max(0, j - w2): j + w2 + 1]
        best = max(best, float(np.max(np.abs(block - v[i, j]))))
    return best


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("w", [0, 1, 3, 10, 40])
def test_oscillation_1d_matches_pairwise(backend, seed, w):
    v = np.random.default_rng(seed).standard_normal(37)
    assert kernels.oscillation_1d(v, w) == _brute_osc1(v, w)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("w1,w2", [(0, 0), (1, 2), (3, 0), (20, 20)])
def test_oscillation_2d_matches_pairwise(backend, seed, w1, w2):
    v = np.random.default_rng(seed).standard_normal((13, 11))
    assert kernels.oscillation_2d(v, w1, w2) == _brute_osc2(v, w1, w2)


def test_oscillation_backends_agree_on_large_input():
    v = np.cumsum(np.random.default_rng(1).standard_normal(5000))
    m = np.cumsum(np.random.default_rng(2).standard_normal((120, 90)), axis=0)
    assert kernels.oscillation_1d(v, 57) == py_osc1(v, 57)
    assert kernels.oscillation_2d(m, 7, 4) == py_osc2(m, 7, 4)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
