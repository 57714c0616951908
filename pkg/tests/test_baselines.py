import math

import numpy as np
import pytest

from logndiv.baselines import (MatchedLognormal, fenton_wilkinson_cdf,
                               fenton_wilkinson_match, sum_moments)
from logndiv.errors import DomainError
from logndiv.oracles import sum2_cdf_quadrature


class TestMatch:
    def test_single_branch_identity(self):
        m = fenton_wilkinson_match(1, 0.0, 0.3, 0.7)
        assert m.mu_m == pytest.approx(0.3, abs=1e-14)
        assert m.sigma_m == pytest.approx(0.7, rel=1e-14)

    def test_fully_correlated_sum(self):
        # rho = 1 means S = L * exp(G): the match must be exact.
        L, mu, sg = 4, 0.2, 0.6
        m = fenton_wilkinson_match(L, 1.0, mu, sg)
        assert m.sigma_m == pytest.approx(sg, rel=1e-12)
        assert m.mu_m == pytest.approx(mu + math.log(L), rel=1e-12)

    def test_matched_moments_equal_analytic(self):
        for L, rho in ((2, 0.0), (3, 0.4), (5, 0.9)):
            mean, var = sum_moments(L, rho, 0.1, 0.8)
            m = fenton_wilkinson_match(L, rho, 0.1, 0.8)
            mean_m = math.exp(m.mu_m + 0.5 * m.sigma_m ** 2)
            var_m = math.exp(2 * m.mu_m + m.sigma_m ** 2) * (math.exp(m.sigma_m ** 2) - 1)
            assert mean_m == pytest.approx(mean, rel=1e-12)
            assert var_m == pytest.approx(var, rel=1e-12)

    def test_moments_against_mc(self):
        L, rho, mu, s2 = 2, 0.0, 0.0, 0.3
        mean, var = sum_moments(L, rho, mu, math.sqrt(s2))
        rng = np.random.default_rng(123)
        n = 10**7
        draws = np.exp(rng.normal(mu, math.sqrt(s2), size=(n, L))).sum(axis=1)
        se_mean = draws.std() / math.sqrt(n)
        assert abs(draws.mean() - mean) < 3 * se_mean
        v = draws.var()
        se_var = math.sqrt(max(np.mean((draws - draws.mean()) ** 4) - v * v, 0.0) / n)
        assert abs(v - var) < 3 * se_var

    def test_validation(self):
        with pytest.raises(DomainError):
            fenton_wilkinson_match(0, 0.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            fenton_wilkinson_match(2, 1.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            MatchedLognormal(mu_m=0.0, sigma_m=0.0)


class TestCdf:
    def test_limits_and_monotonicity(self):
        assert fenton_wilkinson_cdf(2, 0.0, 0.0, 0.5, 1e9) == pytest.approx(1.0, abs=1e-12)
        ys = np.geomspace(0.01, 100.0, 60)
        vals = [fenton_wilkinson_cdf(3, 0.2, 0.0, 0.8, float(y)) for y in ys]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_accurate_near_the_mean(self):
        # Moment matching is good in the bulk: within 0.05 absolute of the
        # quadrature oracle around E[S].
        sg = math.sqrt(0.3)
        mean, _ = sum_moments(2, 0.0, 0.0, sg)
        for y in (0.7 * mean, mean, 1.4 * mean):
            fw = fenton_wilkinson_cdf(2, 0.0, 0.0, sg, y)
            exact = sum2_cdf_quadrature(0.0, sg, 0.0, y)
            assert abs(fw - exact) < 0.05

    def test_left_tail_error_grows_into_the_tail(self):
        # The known failure mode: the matched lognormal cannot track the
        # left tail; its log-domain error keeps growing as y shrinks.
        sg = math.sqrt(0.3)
        errs = []
        for y in (0.5, 0.3, 0.2, 0.1):
            fw = fenton_wilkinson_cdf(2, 0.0, 0.0, sg, y)
            exact = sum2_cdf_quadrature(0.0, sg, 0.0, y)
            errs.append(abs(math.log10(fw) - math.log10(exact)))
        assert all(b > a for a, b in zip(errs, errs[1:]))
        assert errs[-1] > 0.5

    def test_domain(self):
        with pytest.raises(DomainError):
            fenton_wilkinson_cdf(2, 0.0, 0.0, 0.5, 0.0)
