import itertools
import math

import numpy as np
import pytest

from smklab import catalog
from smklab.bounds import (
    certify_bivariate_bound,
    certify_bivariate_lipschitz,
    certify_lipschitz_bound,
    certify_modulus_bound,
    certify_modulus_many,
    modulus,
    modulus_bivariate,
    verify_lipschitz,
    verify_mixed_lipschitz,
)
from smklab.errors import DegenerateGrid, LipschitzHintViolated
from smklab.operators import BivariateFunction, BivariateParams, OperatorParams, ScalarFunction, truncation_endpoint

COS = catalog.get("cos_pi").scalar()


class TestModulus:
    @pytest.mark.parametrize("d", [0.05, 0.1, 0.25, 0.5])
    def test_cosine_closed_form(self, d):
        # sup over [0,1] of |cos(pi u) - cos(pi x)|, |u - x| <= d, is 2 sin(pi d / 2)
        est = modulus(COS, d, 1.0, d / 50)
        assert est.value == pytest.approx(2 * math.sin(math.pi * d / 2), rel=1e-12)

    def test_identity(self):
        est = modulus(catalog.get("identity").scalar(), 0.3, 1.0, 0.1)
        assert est.value == pytest.approx(0.3, rel=1e-15)

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_pairwise_search(self, seed):
        c = np.random.default_rng(seed).standard_normal(4)
        f = ScalarFunction(lambda u: c[0] * np.sin(3 * u + c[1]) + c[2] * u * u + c[3] * np.abs(u - 0.4))
        T, h, d = 1.5, 0.03, 0.2
        u = np.arange(int(round(T / h)) + 1) * h
        fu = f(u)
        brute = max(abs(fu[i] - fu[j]) for i, j in itertools.product(range(len(u)), repeat=2)
                    if abs(u[i] - u[j]) <= d + 1e-12)
        assert modulus(f, d, T, h).value == pytest.approx(brute, rel=1e-15)

    def test_grid_error_rigorous_with_hint(self):
        f = catalog.get("cos_pi").scalar(1.0)
        est = modulus(f, 0.2, 1.0, 0.01)
        assert est.grid_error_rigorous and est.grid_error == pytest.approx(2 * math.pi * 0.01)
        true = 2 * math.sin(math.pi * 0.1)
        assert est.value <= true <= est.value + est.grid_error

    def test_bivariate_matches_pairwise(self):
        f = BivariateFunction(lambda u, v: np.sin(2 * u + v) * np.exp(-u * v))
        h, d1, d2 = 0.1, 0.2, 0.3
        u = np.arange(11) * h
        vals = f(u[:, None], u[None, :])
        brute = 0.0
        for i, j, k, l in itertools.product(range(11), repeat=4):
            if abs(i - k) <= 2 and abs(j - l) <= 3:
                brute = max(brute, abs(vals[i, j] - vals[k, l]))
        assert modulus_bivariate(f, d1, d2, (1.0, 1.0), h).value == pytest.approx(brute, rel=1e-15)

    def test_errors(self):
        with pytest.raises(ValueError, match="exceeds"):
            modulus(COS, 0.01, 1.0, 0.1)
        with pytest.raises(DegenerateGrid):
            modulus(COS, 2.0, 1e-12, 1.0)
        with pytest.raises(ValueError):
            modulus(COS, 0.1, 0.0, 0.01)


class TestCertificates:
    @pytest.mark.parametrize("fid", catalog.UNIVARIATE)
    @pytest.mark.parametrize("n,a", [(5, 1.5), (20, 3.0)])
    def test_catalog_passes(self, fid, n, a):
        p = OperatorParams(n, a)
        xs = np.linspace(0, 1, 11)
        assert all(c.passed for c in certify_modulus_many(p, catalog.get(fid).scalar(), xs))
        f = catalog.get(fid).scalar(truncation_endpoint(p, 1.0))
        assert all(certify_lipschitz_bound(p, f, x).passed for x in xs)

    def test_single_matches_many(self):
        p = OperatorParams(10, 1.5)
        f = catalog.get("exp_neg2x").scalar()
        assert certify_modulus_bound(p, f, 0.35) == certify_modulus_many(p, f, [0.35])[0]

    def test_halved_lipschitz_bound_fails_somewhere(self):
        p = OperatorParams(10, 1.5)
        f = catalog.get("identity").scalar(truncation_endpoint(p, 1.0))
        certs = [certify_lipschitz_bound(p, f, x, bound_scale=0.5) for x in np.linspace(0, 1, 21)]
        assert any(not c.passed for c in certs)

    def test_note_flags_non_monotone(self):
        p = OperatorParams(5, 1.5)
        assert certify_modulus_bound(p, COS, 0.5).note
        assert not certify_modulus_bound(p, catalog.get("identity").scalar(), 0.5).note

    def test_lipschitz_requires_hint(self):
        with pytest.raises(ValueError):
            certify_lipschitz_bound(OperatorParams(5, 1.5), ScalarFunction(np.sin), 0.5)

    def test_wrong_hint_rejected_with_witness(self):
        f = ScalarFunction(lambda u: u**3, "cube", lipschitz_hint=(3.0, 1.0))
        with pytest.raises(LipschitzHintViolated) as info:
            certify_lipschitz_bound(OperatorParams(5, 1.5), f, 0.9)
        u, x, lhs, rhs = info.value.witness
        assert lhs > rhs

    def test_verify_lipschitz_holder(self):
        sq = ScalarFunction(lambda u: np.sqrt(u))
        verify_lipschitz(sq, 1.0, 0.5, 4.0, anchor=1.0)
        with pytest.raises(LipschitzHintViolated):
            verify_lipschitz(sq, 1.0, 1.0, 4.0)


class TestBivariateCertificates:
    def test_default_function(self):
        f = catalog.get("default2d").bivariate()
        for x, y in [(0.0, 0.0), (0.5, 0.2), (1.0, 1.0)]:
            c = certify_bivariate_bound(BivariateParams(5, 3.0), f, x, y)
            assert c.passed and c.bound_kind == "modulus_bivariate"

    def test_constant_lipschitz(self):
        c = certify_bivariate_lipschitz(BivariateParams(5, 3.0), catalog.get("one2d").bivariate(), 0.3, 0.4)
        assert c.passed

    def test_mixed_condition_rejects_nonconstant(self):
        # along u = x the right side vanishes, so any dependence on v breaks it
        with pytest.raises(LipschitzHintViolated):
            verify_mixed_lipschitz(catalog.get("uv").bivariate(), 10.0, 1.0, 1.0, (1.0, 1.0), (0.5, 0.5))
        prod = BivariateFunction(lambda u, v: (u - 0.5) * (v - 0.25))
        verify_mixed_lipschitz(prod, 1.0, 1.0, 1.0, (1.0, 1.0), (0.5, 0.25))
