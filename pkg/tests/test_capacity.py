import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nfbeam.capacity import (
    ArraySpec,
    ScenarioConfig,
    UEDistribution,
    correlation_matrix,
    mrt_precoder,
    pairwise_correlation,
    place_ues,
    rates_from_correlation,
    run_scenario,
    sum_rate,
    trial_rng,
    user_rate,
)
from nfbeam.channel import Position, channel_vector, steering_matrix
from nfbeam.errors import ConfigError, DegenerateError
from nfbeam.gain import angle_gain, uca_range_gain_closed

BROADSIDE = math.pi / 2


def _cfg(**kw):
    base = dict(array=ArraySpec("uca", n=256), k=10, trials=3, seed=11, snr_db=(0, 10, 20))
    base.update(kw)
    return ScenarioConfig(**base)


class TestCorrelation:
    def test_self_and_symmetry(self, uca256):
        a = channel_vector(uca256, Position(3.0, 1.0, 0.2))
        b = channel_vector(uca256, Position(4.0, 0.7, -1.0))
        assert pairwise_correlation(a, a) == pytest.approx(1.0)
        assert pairwise_correlation(a, b) == pytest.approx(pairwise_correlation(b, a))
        assert 0 <= pairwise_correlation(a, b) <= 1

    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            pairwise_correlation(np.ones(4), np.ones(5))

    def test_uca_angle_domain(self, uca256):
        for dphi in (0.01, 0.05, 0.1, 0.4):
            p, q = Position(1e4, BROADSIDE, dphi), Position(1e4, BROADSIDE, 0.0)
            got = pairwise_correlation(channel_vector(uca256, p), channel_vector(uca256, q))
            assert got == pytest.approx(angle_gain(uca256, p, q), abs=0.02)

    def test_uca_range_domain(self, uca256):
        for r in (1.0, 3.0, 12.0, 35.0):
            h_f = channel_vector(uca256, Position(6.1, BROADSIDE, 0.5))
            h_r = channel_vector(uca256, Position(r, BROADSIDE, 0.5))
            closed = uca_range_gain_closed(uca256, 6.1, BROADSIDE, r)
            assert pairwise_correlation(h_f, h_r) == pytest.approx(closed, abs=0.05)

    def test_matrix_matches_pairs(self, ula256):
        ps = [Position(r, BROADSIDE, a) for r, a in [(2, 0.1), (5, -0.3), (9, 0.8)]]
        H = steering_matrix(ula256, ps)
        G = correlation_matrix(H)
        for i in range(3):
            for j in range(3):
                assert G[i, j] == pytest.approx(pairwise_correlation(H[i], H[j]), abs=1e-12)


class TestPrecoder:
    def test_properties(self, uca256):
        h_k = channel_vector(uca256, Position(2.0, 1.0, 0.0))
        h_j = channel_vector(uca256, Position(5.0, 0.4, 2.0))
        w_k, w_j = mrt_precoder(h_k), mrt_precoder(h_j)
        n = uca256.n
        assert np.linalg.norm(w_k) == pytest.approx(1.0, abs=1e-12)
        assert abs(w_k @ h_k.entries) ** 2 == pytest.approx(n)
        g = pairwise_correlation(h_k, h_j)
        assert abs(w_j @ h_k.entries) ** 2 == pytest.approx(n * g * g)

    def test_zero(self):
        with pytest.raises(DegenerateError):
            mrt_precoder(np.zeros(8))


class TestUserRate:
    def test_single_user(self, uca256):
        h = channel_vector(uca256, Position(2.0))
        assert user_rate(0, [h], 10.0) == pytest.approx(math.log2(1 + 10 * 256))

    def test_colocated(self, uca256):
        h = channel_vector(uca256, Position(2.0, 0.5, 0.5))
        gn = 3.0 * 256
        assert user_rate(1, [h, h], 3.0) == pytest.approx(math.log2(1 + gn / (1 + gn)))

    def test_orthogonal(self):
        n = 16
        idx = np.arange(n)
        h0, h1 = np.exp(2j * np.pi * idx * 0 / n), np.exp(2j * np.pi * idx * 3 / n)
        for k in (0, 1):
            assert user_rate(k, [h0, h1], 2.0) == pytest.approx(math.log2(1 + 2.0 * n))

    def test_vectorized_agrees(self, ula256):
        ps = [Position(r, BROADSIDE, a) for r, a in [(2, 0.1), (2.2, 0.12), (9, 0.8), (30, -1.0)]]
        hs = [channel_vector(ula256, p) for p in ps]
        total = sum(user_rate(k, hs, 5.0) for k in range(4))
        assert sum_rate(hs, 5.0) == pytest.approx(total, rel=1e-12)

    def test_preconditions(self, uca256):
        h = channel_vector(uca256, Position(2.0))
        with pytest.raises(ConfigError):
            user_rate(0, [h], 0.0)
        with pytest.raises(IndexError):
            user_rate(1, [h], 1.0)


def _random_channels(seed, k, g):
    rng = np.random.default_rng(seed)
    ps = [Position(r, t, p) for r, t, p in zip(rng.uniform(g.min_nf, 6, k),
                                               rng.uniform(-1.5, 1.5, k), rng.uniform(-3, 3, k))]
    return steering_matrix(g, ps)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 12))
def test_rate_invariants(seed, k):
    from nfbeam.geometry import CarrierConfig, make_uca

    g = make_uca(64, CarrierConfig.from_ghz(28))
    H = _random_channels(seed, k, g)
    base = rates_from_correlation(correlation_matrix(H), 4.0, g.n)
    # global phase rotation of one user
    H2 = H.copy()
    H2[0] *= np.exp(1.234j)
    np.testing.assert_allclose(rates_from_correlation(correlation_matrix(H2), 4.0, g.n), base, rtol=1e-12)
    # monotone in SNR
    sums = [rates_from_correlation(correlation_matrix(H), s, g.n).sum() for s in (0.1, 1, 10, 100)]
    assert all(b >= a - 1e-12 for a, b in zip(sums, sums[1:]))
    # dropping a UE never hurts the rest
    fewer = rates_from_correlation(correlation_matrix(H[1:]), 4.0, g.n)
    assert np.all(fewer >= base[1:] - 1e-12)


class TestPlacement:
    def test_deterministic(self):
        cfg = _cfg()
        a = place_ues(cfg, trial_rng(cfg.seed, 4))
        b = place_ues(cfg, trial_rng(cfg.seed, 4))
        assert a == b
        assert a != place_ues(cfg, trial_rng(cfg.seed, 5))

    def test_ranges_within_window(self, uca256):
        cfg = _cfg(k=500)
        ps = place_ues(cfg, trial_rng(1, 0))
        hi = cfg.upper_range(uca256)
        assert all(uca256.min_nf <= p.r <= hi for p in ps)
        assert hi == pytest.approx(math.pi * uca256.rayleigh / 19.2)

    def test_uniform2d_mean(self):
        ps = place_ues(_cfg(k=100_000), trial_rng(3, 0))
        assert abs(np.mean([p.theta for p in ps])) < 0.02

    def test_distributions(self):
        az = place_ues(_cfg(distribution="azimuth-only", k=200), trial_rng(0, 0))
        assert all(p.theta == BROADSIDE for p in az)
        el = place_ues(_cfg(distribution="elevation-only", k=200), trial_rng(0, 0))
        assert all(p.phi == 0.0 for p in el)
        bs = place_ues(_cfg(array=ArraySpec("ula", n=256), distribution="boresight-ula", k=200),
                       trial_rng(0, 0))
        assert all(abs(p.phi) <= BROADSIDE and p.theta == BROADSIDE for p in bs)

    def test_bound_inside_reactive(self, uca256):
        with pytest.raises(ConfigError, match="reactive"):
            place_ues(_cfg(range_bound=0.5 * uca256.min_nf), trial_rng(0, 0))


class TestScenario:
    def test_single_user_exact(self):
        res = run_scenario(_cfg(k=1, snr_db=(10,), trials=5))
        assert res.mean[0] == pytest.approx(math.log2(1 + 10 * 256), rel=1e-12)
        assert res.std[0] == pytest.approx(0, abs=1e-12)

    def test_reproducible(self):
        a, b = run_scenario(_cfg()), run_scenario(_cfg())
        assert np.array_equal(a.samples, b.samples)
        assert not np.array_equal(a.samples, run_scenario(_cfg(seed=12)).samples)

    def test_trial_streams_independent_of_count(self):
        a = run_scenario(_cfg(trials=2)).samples
        b = run_scenario(_cfg(trials=4)).samples
        assert np.array_equal(a, b[:2])

    def test_csv(self):
        res = run_scenario(_cfg())
        lines = res.to_csv().splitlines()
        assert lines[0] == "snr_db,mean_sumrate,std_sumrate,trials"
        assert len(lines) == 4 and lines[1].endswith(",3")
        assert np.all(res.ci_halfwidth >= 0)

    def test_fixed_aperture_geometry(self):
        g = ArraySpec("uca", aperture_m=1.36).build()
        assert g.n == 798


class TestConfig:
    def test_round_trip(self):
        cfg = _cfg(range_bound=4.5)
        assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg

    def test_json_schema_shape(self):
        d = {"array": {"kind": "ula", "n": None, "aperture_m": 1.36, "fc_ghz": 28,
                       "spacing": "half-wavelength"},
             "k": 50, "distribution": "boresight-ula", "range_bound": "ebrd",
             "snr_db": [0, 5], "trials": 4, "seed": 1}
        cfg = ScenarioConfig.from_dict(d)
        assert cfg.distribution is UEDistribution.BORESIGHT_ULA
        assert cfg.array.build().n == 254

    @pytest.mark.parametrize("bad", [
        {"array": {"kind": "uca", "n": 16, "aperture_m": 1.0}},
        {"array": {"kind": "uca"}},
        {"array": {"kind": "uca", "n": 16}, "k": 0},
        {"array": {"kind": "uca", "n": 16}, "trials": 0},
        {"array": {"kind": "uca", "n": 16}, "snr_db": []},
        {"array": {"kind": "uca", "n": 16}, "distribution": "circle"},
        {"array": {"kind": "uca", "n": 16}, "range_bound": "far"},
        {"array": {"kind": "uca", "n": 16}, "bogus": 1},
        {"array": {"kind": "uca", "n": 16, "spacing": "lambda"}},
        {"k": 3},
    ])
    def test_rejects(self, bad):
        with pytest.raises((ConfigError, ValueError)):
            ScenarioConfig.from_dict(bad)
