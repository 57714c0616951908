import math

import pytest

from logndiv.asymptotics import OutageQuery
from logndiv.channel import ChannelSpec, derive_params
from logndiv.errors import DomainError
from logndiv.montecarlo import (SimConfig, SimEstimate, point_seed, simulate_outage,
                                simulate_outage_multi, sweep)
from logndiv.oracles import sc_outage_exact_indep
from logndiv.schemes import SchemeKind

ALL = [SchemeKind.SC, SchemeKind.EGC, SchemeKind.MRC]

def indep_params(sigma=0.8, L=2, mu=0.0):
    return derive_params(ChannelSpec(L=L, rho=0.0, sigma_G=sigma, mu_G=mu))

class TestSimConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            SimConfig(samples=100, seed=1)
        with pytest.raises(DomainError):
            SimConfig(samples=2000, seed=1, batch_size=4000)
        with pytest.raises(DomainError):
            SimConfig(samples=2000, seed=1, batch_size=0)

class TestSimulateOutage:
    def test_deterministic(self):
        p = derive_params(ChannelSpec(L=2, rho=0.5, sigma_G=0.8, Er=10.0))
        q = OutageQuery(0.1, 10.0)
        cfg = SimConfig(samples=50_000, seed=7, batch_size=9_000)
        a = simulate_outage(p, SchemeKind.SC, q, cfg)
        b = simulate_outage(p, SchemeKind.SC, q, cfg)
        assert a == b

    def test_single_branch_schemes_coincide(self):
        p = indep_params(L=1)
        q = OutageQuery(0.1, 5.0)
        cfg = SimConfig(samples=20_000, seed=3)
        est = simulate_outage_multi(p, ALL, q, cfg)
        assert est[SchemeKind.SC] == est[SchemeKind.EGC] == est[SchemeKind.MRC]

    def test_quarter_point(self):
        # Independent dual-branch SC at Er = gamma * exp(2 sigma^2): the exact
        # outage is Q(0)^2 = 1/4.
        sg, gamma = 0.8, 0.1
        er = gamma * math.exp(2 * sg * sg)
        p = indep_params(sigma=sg).with_er(er)
        est = simulate_outage(p, SchemeKind.SC, OutageQuery(gamma, er),
                              SimConfig(samples=100_000, seed=5))
        assert abs(est.p_hat - 0.25) < 3 * est.stderr

    def test_pathwise_ordering(self):
        # MRC SNR dominates both EGC's and SC's draw by draw, so its hit
        # count cannot exceed theirs on a common stream; EGC vs SC is only a
        # statistical ordering.
        p = derive_params(ChannelSpec(L=3, rho=0.3, sigma_G=0.9, Er=3.0))
        q = OutageQuery(0.1, 3.0)
        for seed in (1, 2, 3, 4, 5):
            est = simulate_outage_multi(p, ALL, q, SimConfig(samples=30_000, seed=seed))
            assert est[SchemeKind.MRC].hits <= est[SchemeKind.EGC].hits
            assert est[SchemeKind.MRC].hits <= est[SchemeKind.SC].hits

    def test_statistical_ordering_egc_below_sc(self):
        p = derive_params(ChannelSpec(L=3, rho=0.3, sigma_G=0.9, Er=10.0))
        q = OutageQuery(0.1, 10.0)
        est = simulate_outage_multi(p, ALL, q, SimConfig(samples=200_000, seed=11))
        assert est[SchemeKind.EGC].p_hat < est[SchemeKind.SC].p_hat

    def test_matches_exact_closed_form(self):
        sg, gamma = 0.8, 0.1
        er = 8.0
        p = indep_params(sigma=sg).with_er(er)
        exact = sc_outage_exact_indep(2, 0.5 * math.log(er) - sg * sg, sg, gamma)
        est = simulate_outage(p, SchemeKind.SC, OutageQuery(gamma, er),
                              SimConfig(samples=10**6, seed=13))
        assert abs(est.p_hat - exact) < 3 * est.stderr

    def test_resolution_exhausted_flag(self):
        p = indep_params().with_er(1e8)
        est = simulate_outage(p, SchemeKind.MRC, OutageQuery(0.1, 1e8),
                              SimConfig(samples=2_000, seed=1))
        assert est.hits == 0 and est.resolution_exhausted
        assert est.p_upper_95 == pytest.approx(3.0 / 2000)

    def test_clopper_pearson_attached_for_rare_hits(self):
        # Tune Er so a handful of hits land in 20k trials.
        sg, gamma = 0.8, 0.1
        er = gamma * math.exp(2 * (2.0 * sg + sg * sg))
        p = indep_params(sigma=sg).with_er(er)
        est = simulate_outage(p, SchemeKind.SC, OutageQuery(gamma, er),
                              SimConfig(samples=20_000, seed=2))
        assert 0 < est.hits < 30
        lo, hi = est.ci95
        assert 0.0 <= lo < est.p_hat < hi < 1.0

    def test_stderr_consistency(self):
        est = SimEstimate(p_hat=0.25, stderr=math.sqrt(0.25 * 0.75 / 1000), n=1000, hits=250)
        assert est.stderr == pytest.approx(math.sqrt(est.p_hat * (1 - est.p_hat) / est.n))

class TestSweep:
    def test_monotone_trend_up_to_noise(self):
        p = derive_params(ChannelSpec(L=2, rho=0.5, sigma_G=0.8, Er=1.0))
        grid = [10 ** (db / 10) for db in (0, 5, 10, 15)]
        c = sweep(p, SchemeKind.SC, 0.1, grid, SimConfig(samples=100_000, seed=21))
        pts = c.points
        for a, b in zip(pts, pts[1:]):
            assert b.outage <= a.outage + 3 * ((a.stderr or 0) + (b.stderr or 0))

    def test_bit_identical_curves_across_runs(self):
        p = derive_params(ChannelSpec(L=2, rho=0.1, sigma_G=0.8, Er=1.0))
        grid = [1.0, 10.0, 100.0]
        cfg = SimConfig(samples=20_000, seed=9, batch_size=6_000)
        c1 = sweep(p, SchemeKind.EGC, 0.1, grid, cfg)
        c2 = sweep(p, SchemeKind.EGC, 0.1, grid, cfg)
        assert c1 == c2

    def test_exhausted_points_annotated(self):
        p = derive_params(ChannelSpec(L=2, rho=0.1, sigma_G=0.8, Er=1.0))
        c = sweep(p, SchemeKind.MRC, 0.1, [1e8], SimConfig(samples=2_000, seed=1))
        assert "resolution_exhausted" in c.points[0].note
        assert "p_upper_95" in c.points[0].note

    def test_correlation_ordering_at_moderate_snr(self):
        # Stronger correlation hurts: simulated SC outage increases with rho
        # at a fixed moderate power (dual-branch family, common threshold).
        er = 10.0 ** 1.0
        estimates = []
        for rho in (0.1, 0.5, 0.9):
            p = derive_params(ChannelSpec(L=2, rho=rho, sigma_G=0.8, Er=er))
            est = simulate_outage(p, SchemeKind.SC, OutageQuery(0.1, er),
                                  SimConfig(samples=200_000, seed=14))
            estimates.append(est)
        for lo, hi in zip(estimates, estimates[1:]):
            assert hi.p_hat > lo.p_hat + 3 * (lo.stderr + hi.stderr)

    def test_point_seeds_differ(self):
        assert point_seed(1, 0) != point_seed(1, 1)
        assert point_seed(1, 0) == point_seed(1, 0)
        assert point_seed(1, 0) != point_seed(2, 0)
