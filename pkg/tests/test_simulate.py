import math

import numpy as np
import pytest
from scipy import stats

from ppqkd.channels import ChannelScenario, decode_table, expected_test_error
from ppqkd.errors import ResourceLimitError
from ppqkd.keyrate import ProtocolParams, expected_vacuum_fraction, keyrate_ideal
from ppqkd.simulate import SimConfig, end_to_end, exact_round_distribution, run_protocol


def config(d=2, N=2 * 10**5, Q=0.0, mode="dependent", mu=0.0, seed=0, **kw):
    params = ProtocolParams(d=d, N=N, m=N // 2, epsilon=1e-36)
    scenario = ChannelScenario(Q=Q, mode=mode, mu=mu)
    return SimConfig(params=params, scenario=scenario, seed=seed, **kw)


def three_sigma(p, trials):
    return 3.0 * math.sqrt(max(p * (1.0 - p), 1e-12) / trials)


class TestRunProtocol:
    def test_noiseless_is_error_free(self):
        for seed in (0, 1, 12345):
            result = run_protocol(config(seed=seed))
            assert result.empirical_test_error == 0.0
            assert result.empirical_decode_error == 0.0
            assert result.empirical_vac_fraction == 0.0

    def test_determinism(self):
        a = run_protocol(config(Q=0.1, mu=0.05, seed=99))
        b = run_protocol(config(Q=0.1, mu=0.05, seed=99))
        assert a == b
        assert repr(a) == repr(b)

    def test_seed_changes_tallies(self):
        a = run_protocol(config(Q=0.1, seed=1))
        b = run_protocol(config(Q=0.1, seed=2))
        assert a.counts != b.counts

    def test_test_error_within_three_sigma(self):
        cfg = config(d=2, Q=0.1, seed=42)
        result = run_protocol(cfg)
        expected = expected_test_error(cfg.scenario, 2)
        assert abs(result.empirical_test_error - expected) <= three_sigma(expected, 10**5)

    def test_vacuum_fraction_within_three_sigma(self):
        cfg = config(Q=0.0, mu=0.1, seed=7)
        result = run_protocol(cfg)
        expected = expected_vacuum_fraction(0.1)
        assert abs(result.empirical_vac_fraction - expected) <= three_sigma(expected, 10**5)

    def test_lossy_test_error_matches_per_party_model(self):
        # Each party's test symbol is lost independently with probability mu,
        # so the vacuum-aware error rate is 1-(1-mu)^2 + (1-mu)^2 * Q(1-1/d).
        mu, Q, d = 0.1, 0.1, 2
        cfg = config(d=d, Q=Q, mu=mu, seed=11)
        result = run_protocol(cfg)
        survive = (1.0 - mu) ** 2
        expected = (1.0 - survive) + survive * Q * (1.0 - 1.0 / d)
        assert abs(result.empirical_test_error - expected) <= three_sigma(expected, 10**5)

    def test_tallies_sum_to_round_counts(self):
        result = run_protocol(config(Q=0.1, mu=0.05, seed=3))
        assert sum(sum(row) for row in result.counts.test_joint) == result.counts.test_rounds
        assert sum(result.counts.decode_shift) == result.counts.key_rounds
        assert sum(result.counts.bob_digits) == result.counts.key_rounds

    def test_observation_consistent_with_tallies(self):
        result = run_protocol(config(Q=0.1, mu=0.05, seed=3))
        obs = result.observation
        assert obs.vac_decode_count == result.counts.decode_shift[-1]
        assert obs.n_kept == result.counts.key_rounds - obs.vac_decode_count

    def test_round_cap_enforced(self):
        params = ProtocolParams(d=2, N=10**9, m=10**8, epsilon=1e-36)
        cfg = SimConfig(params=params, scenario=ChannelScenario(Q=0.1), seed=0)
        with pytest.raises(ResourceLimitError):
            run_protocol(cfg)

    def test_rounds_override_extrapolates(self):
        params = ProtocolParams(d=2, N=10**12, m=5 * 10**11, epsilon=1e-36)
        cfg = SimConfig(
            params=params,
            scenario=ChannelScenario(Q=0.1, mu=0.1),
            seed=5,
            rounds_override=10**5,
        )
        result = run_protocol(cfg)
        assert result.counts.test_rounds + result.counts.key_rounds == 10**5
        obs = result.observation
        assert obs.vac_decode_count == round(result.empirical_vac_fraction * params.n)
        assert obs.n_kept == params.n - obs.vac_decode_count


class TestExactRoundDistribution:
    def test_reference_decode_row(self):
        dist = exact_round_distribution(ChannelScenario(Q=0.1, mode="dependent"), 2)
        assert dist.decode_given_key[0][0] == pytest.approx(0.95, abs=1e-12)
        assert dist.decode_given_key[0][1] == pytest.approx(0.05, abs=1e-12)
        assert dist.decode_given_key[0][2] == pytest.approx(0.0, abs=1e-12)

    def test_noiseless_identity_decode(self):
        dist = exact_round_distribution(ChannelScenario(Q=0.0), 3)
        for k in range(3):
            for i in range(3):
                assert dist.decode_given_key[k][i] == pytest.approx(
                    1.0 if i == k else 0.0, abs=1e-12
                )

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_test_round_disagreement(self, d):
        scenario = ChannelScenario(Q=0.1)
        dist = exact_round_distribution(scenario, d)
        joint = np.array(dist.test_joint)
        disagree = joint.sum() - np.trace(joint)
        assert disagree == pytest.approx(expected_test_error(scenario, d), abs=1e-12)

    @pytest.mark.parametrize("mode", ["dependent", "independent"])
    def test_rows_are_shift_covariant(self, mode):
        d = 4
        dist = exact_round_distribution(ChannelScenario(Q=0.1, mode=mode), d)
        base = dist.decode_given_key[0]
        for k in range(d):
            row = dist.decode_given_key[k]
            for s in range(d):
                assert row[(k + s) % d] == pytest.approx(base[s], abs=1e-12)
        # vacuum column identical across rows
        assert len({round(r[d], 15) for r in dist.decode_given_key}) == 1

    def test_inefficient_detector_row(self):
        dist = exact_round_distribution(ChannelScenario(Q=0.0, eta=0.8), 2)
        assert dist.decode_given_key[0][0] == pytest.approx(0.8, abs=1e-12)
        assert dist.decode_given_key[0][2] == pytest.approx(0.2, abs=1e-12)

    def test_dimension_guard(self):
        with pytest.raises(ResourceLimitError):
            exact_round_distribution(ChannelScenario(Q=0.1), 7)


class TestSamplerMatchesExactDistributions:
    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("Q", [0.0, 0.1])
    @pytest.mark.parametrize("mode", ["dependent", "independent"])
    def test_chi_square_goodness_of_fit(self, d, Q, mode):
        N = 2 * 10**6  # 1e6 test rounds + 1e6 key rounds
        cfg = config(d=d, N=N, Q=Q, mode=mode, seed=2024)
        result = run_protocol(cfg)
        dist = exact_round_distribution(cfg.scenario, d)

        joint = np.array(result.counts.test_joint)[:d, :d].ravel()
        probs = np.array(dist.test_joint).ravel()
        assert _chi_square_p(joint, probs) > 0.001

        shifts = np.array(result.counts.decode_shift[:d])
        shift_probs = np.array([dist.decode_given_key[0][s] for s in range(d)])
        assert _chi_square_p(shifts, shift_probs) > 0.001

    def test_bob_digits_uniform(self):
        result = run_protocol(config(d=4, N=2 * 10**6, Q=0.1, seed=77))
        counts = np.array(result.counts.bob_digits)
        assert _chi_square_p(counts, np.full(4, 0.25)) > 0.001


def _chi_square_p(counts, probs):
    total = counts.sum()
    support = probs > 1e-12  # matrix evaluation leaves +/-1e-18 dust on zeros
    assert counts[~support].sum() == 0  # impossible cells never sampled
    if support.sum() < 2:
        return 1.0  # deterministic outcome, nothing to fit
    expected = probs[support] * total
    # renormalize over the support in case of round-off
    expected *= counts[support].sum() / expected.sum()
    return stats.chisquare(counts[support], expected).pvalue


class TestEndToEnd:
    def test_noiseless_matches_ideal_keyrate(self):
        cfg = config(N=10**6, Q=0.0, seed=13)
        params = cfg.params
        report = end_to_end(cfg)
        reference = keyrate_ideal(params, run_protocol(cfg).observation)
        assert report == reference
        assert report.ell_bits > 0

    def test_deterministic_given_seed(self):
        cfg = config(N=10**6, Q=0.1, seed=4)
        assert end_to_end(cfg) == end_to_end(cfg)

    def test_monte_carlo_rate_near_analytic(self):
        N = 4 * 10**6
        params = ProtocolParams(d=2, N=N, m=N // 2, epsilon=1e-36)
        scenario = ChannelScenario(Q=0.1, mode="dependent")
        cfg = SimConfig(params=params, scenario=scenario, seed=123)
        from ppqkd.keyrate import expected_observation

        simulated = end_to_end(cfg)
        analytic = keyrate_ideal(params, expected_observation(params, scenario))
        assert abs(simulated.rate_per_signal - analytic.rate_per_signal) < 0.01
