"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
per-criterion lines as they pass).
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from ppqkd.certify import (
    build_ideal_instance,
    min_entropy_dual_bound,
    pgm_guess_probability,
    verify_operator_dominance,
)
from ppqkd.channels import (
    ChannelScenario,
    build_decode_povm,
    decode_table,
    expected_test_error,
    return_state,
)
from ppqkd.cli import main as cli_main
from ppqkd.entropy import ball_volume_bound_check, entropy_dary
from ppqkd.keyrate import (
    ProtocolParams,
    asymptotic_rate,
    expected_observation,
    failure_epsilon,
    keyrate_ideal,
    keyrate_lossy,
    loss_tolerance,
    min_signals_for_positive_key,
    noise_tolerance,
    privacy_epsilon,
)
from ppqkd.sampling import exhaustive_failure_probability, failure_bound
from ppqkd.simulate import SimConfig, run_protocol

GOLDEN_DIR = Path(__file__).parent / "golden" / "figures"

# (n, d, env_dim, delta_obs, delta): small instances with
# delta_obs + delta <= (d-1)/d so the entropy cap applies.
INSTANCE_CONFIGS = (
    (1, 2, 1, 0.0, 0.5),
    (2, 2, 1, 0.0, 0.5),
    (2, 2, 2, 0.0, 0.5),
    (3, 2, 1, 0.0, 0.34),
    (3, 2, 2, 0.0, 0.5),
    (3, 2, 2, 1 / 3, 1 / 6),
    (1, 3, 1, 0.0, 2 / 3),
    (2, 3, 1, 0.0, 1 / 3),
    (2, 3, 2, 1 / 3, 1 / 3),
    (3, 3, 1, 0.0, 1 / 3),
    (3, 3, 2, 1 / 3, 1 / 3),
)


def passed(number, message):
    print(f"criterion {number:2d}: {message}: PASS")


def test_criterion_01_noise_tolerance():
    start = time.perf_counter()
    shannon = noise_tolerance(2, "dependent", ec_factor=1.0)
    assert abs(shannon - 0.1100) <= 0.0005
    practical = noise_tolerance(2, "dependent", ec_factor=1.2)
    assert practical < 0.11
    assert abs(practical - 0.0955) <= 0.0010
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    passed(1, f"noise tolerance 0.1100 / {practical:.4f} in {elapsed:.2f}s")


def test_criterion_02_dimension_monotonicity():
    start = time.perf_counter()
    for mode in ("dependent", "independent"):
        rates = [asymptotic_rate(d, ChannelScenario(Q=0.1, mode=mode), 1.2) for d in (2, 4, 8)]
        assert rates[0] > 0
        assert rates[2] > rates[1] > rates[0]
        thresholds = [
            min_signals_for_positive_key(d, ChannelScenario(Q=0.1, mode=mode), epsilon=1e-36)
            for d in (2, 4, 8)
        ]
        assert thresholds[0] > thresholds[1] > thresholds[2]
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    passed(2, f"rates and thresholds monotone in d, {elapsed:.2f}s")


def test_criterion_03_parallel_copy_dominance():
    start = time.perf_counter()
    scenario = ChannelScenario(Q=0.1, mode="dependent")

    def ell(d, N):
        params = ProtocolParams(d=d, N=N, m=N // 2, epsilon=1e-36)
        return keyrate_ideal(params, expected_observation(params, scenario)).ell_bits

    lo, hi = math.log(10**4), math.log(10**12)
    for i in range(33):
        N = int(round(math.exp(lo + (hi - lo) * i / 32)))
        assert ell(4, N) >= 2 * ell(2, N)
    threshold_high = min_signals_for_positive_key(4, scenario, epsilon=1e-36)
    threshold_low = min_signals_for_positive_key(2, scenario, epsilon=1e-36)
    assert threshold_high <= threshold_low
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    passed(3, f"d=4 beats two d=2 copies on [1e4,1e12], {elapsed:.2f}s")


def test_criterion_04_security_parameter_bookkeeping():
    epsilon = 1e-36
    params = ProtocolParams(d=2, N=2 * 10**6, m=10**6, epsilon=epsilon)
    report = keyrate_ideal(params, expected_observation(params, ChannelScenario(Q=0.05)))
    assert report.eps_fail == failure_epsilon(epsilon)
    assert report.eps_fail == pytest.approx(2e-12, rel=1e-9)
    assert report.eps_pa == privacy_epsilon(epsilon)
    assert report.eps_pa == pytest.approx(4e-12 + 9e-36, rel=1e-9)
    assert abs(report.security_cost_bits - 72 * math.log2(10)) < 1e-6
    assert report.security_cost_bits == pytest.approx(239.2, abs=0.05)
    passed(4, "epsilon bookkeeping exact, security cost 239.18 bits")


def test_criterion_05_channel_statistics_fidelity():
    start = time.perf_counter()
    for seed, (d, Q) in enumerate(((2, 0.05), (2, 0.1), (4, 0.05), (4, 0.1))):
        m = 10**5
        params = ProtocolParams(d=d, N=2 * m, m=m, epsilon=1e-36)
        scenario = ChannelScenario(Q=Q, mode="dependent")
        result = run_protocol(SimConfig(params=params, scenario=scenario, seed=1000 + seed))
        p = expected_test_error(scenario, d)
        sigma = math.sqrt(p * (1 - p) / m)
        assert abs(result.empirical_test_error - p) <= 3 * sigma

    for d in (2, 3, 4):
        for Q in (0.0, 0.1):
            for mode in ("dependent", "independent"):
                scenario = ChannelScenario(Q=Q, mode=mode)
                table = decode_table(scenario, d)
                povm = build_decode_povm(d, 1.0)
                for k in range(d):
                    rho = return_state(d, k, scenario)
                    for i in range(d):
                        want = table.p_correct if i == k else table.p_wrong_each
                        got = float(np.trace(povm[i] @ rho).real)
                        assert abs(got - want) <= 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    passed(5, f"Monte Carlo within 3 sigma, POVM matches tables to 1e-12, {elapsed:.2f}s")


def test_criterion_06_sampling_bound_validation():
    start = time.perf_counter()
    worst = exhaustive_failure_probability(6, 3, 2, 0.6)
    bound = failure_bound(0.6, 3, 3)
    assert worst == pytest.approx(0.4, abs=1e-12)
    assert bound == pytest.approx(0.8897, abs=1e-4)
    assert worst <= bound
    for N in range(2, 9):
        for m in range(1, N // 2 + 1):
            for d in (2, 3):
                for tenths in range(11):
                    delta = tenths / 10
                    exact = exhaustive_failure_probability(N, m, d, delta)
                    assert exact <= min(1.0, failure_bound(delta, m, N - m)) + 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    passed(6, f"exhaustive failure grid below the tail bound, {elapsed:.2f}s")


def test_criterion_07_operator_dominance_certification():
    start = time.perf_counter()
    for i in range(100):
        n, d, env_dim, delta_obs, delta = INSTANCE_CONFIGS[i % len(INSTANCE_CONFIGS)]
        inst = build_ideal_instance(n, d, delta_obs, delta, env_dim, seed=7 + i)
        report = verify_operator_dominance(inst)
        assert report.min_eigenvalue >= -1e-9
        ens = inst.ensemble()
        dual = min_entropy_dual_bound(ens, inst.canonical_witness())
        expected = n * math.log2(d) - math.log2(inst.shell_size)
        assert abs(dual - expected) <= 1e-9
        assert dual <= -math.log2(pgm_guess_probability(ens)) + 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    passed(7, f"100 instances: dominance, dual bound, PGM sandwich, {elapsed:.2f}s")


def test_criterion_08_ball_bound_chain():
    for d in (2, 3, 4, 5):
        top = (d - 1) / d
        grid = [i * 0.1 for i in range(10) if i * 0.1 < top] + [top]
        for n in range(1, 11):
            for rho in grid:
                assert ball_volume_bound_check(n, d, rho)
    for i, (n, d, env_dim, delta_obs, delta) in enumerate(INSTANCE_CONFIGS):
        inst = build_ideal_instance(n, d, delta_obs, delta, env_dim, seed=100 + i)
        cap_bits = n * entropy_dary(d, min(delta_obs + delta, (d - 1) / d)) * math.log2(d)
        assert math.log2(inst.shell_size) <= cap_bits + 1e-9
    passed(8, "exact counts never exceed the d^(n*H_d) cap")


def test_criterion_09_lossy_consistency():
    start = time.perf_counter()
    gaps = []
    for N in (10**8, 10**12, 10**16, 10**20):
        params = ProtocolParams(d=2, N=N, m=N // 2, epsilon=1e-36)
        from ppqkd.keyrate import Observation

        obs = Observation.noiseless(params.n)
        gap = abs(
            keyrate_lossy(params, obs).rate_per_signal
            - keyrate_ideal(params, obs).rate_per_signal
        )
        gaps.append(gap)
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-8

    mu_stars = [loss_tolerance(d, "dependent", 0.05) for d in (2, 4, 8)]
    assert mu_stars[0] < 0.25
    assert mu_stars[0] <= mu_stars[1] <= mu_stars[2]
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    passed(9, f"lossy converges to ideal; mu* = {mu_stars[0]:.3f} < 0.25, rising with d")


def test_criterion_10_figure_determinism(tmp_path):
    runs = [tmp_path / "run_a", tmp_path / "run_b"]
    for out_dir in runs:
        for which in (2, 3, 5, 6):
            code = cli_main(["figures", "--which", str(which), "--out-dir", str(out_dir)])
            assert code == 0
    names = sorted(p.name for p in runs[0].iterdir())
    assert names == sorted(p.name for p in runs[1].iterdir())
    for name in names:
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()

    golden_names = sorted(p.name for p in GOLDEN_DIR.iterdir())
    assert golden_names == names
    for name in names:
        assert (runs[0] / name).read_bytes() == (GOLDEN_DIR / name).read_bytes(), name
    passed(10, f"{len(names)} figure files byte-identical across runs and vs golden")
