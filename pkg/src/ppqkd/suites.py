"""Named verification suites run by the command-line ``verify`` command.

Each suite re-derives a family of claims numerically (exhaustive counting,
matrix evaluation, eigendecomposition, Monte Carlo) and reports one
pass/fail line per check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import (
    DOMINANCE_EIG_TOL,
    build_ideal_instance,
    lemma1_empirical_check,
    min_entropy_dual_bound,
    pgm_guess_probability,
    search_scaled_counterexample,
    verify_operator_dominance,
)
from .channels import (
    ChannelScenario,
    build_decode_povm,
    build_protocol_state,
    decode_table,
    expected_test_error,
    forward_state,
    return_state,
    zbasis_joint_distribution,
)
from .entropy import ball_volume_bound_check, entropy_dary
from .sampling import delta_for, exhaustive_failure_probability, failure_bound

SUITES = ("sampling", "dominance", "povm", "lemma1", "ballbound", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def suite_sampling() -> list[CheckResult]:
    results = []

    worst = exhaustive_failure_probability(6, 3, 2, 0.6)
    bound = failure_bound(0.6, 3, 3)
    results.append(
        CheckResult(
            "worst case N=6 m=3 delta=0.6",
            abs(worst - 0.4) < 1e-12 and worst <= bound,
            f"exact {worst:.6g} <= bound {bound:.6g}",
        )
    )

    violations = 0
    checked = 0
    for N in range(2, 9):
        for m in range(1, N // 2 + 1):
            n = N - m
            for d in (2, 3):
                for tenths in range(0, 11):
                    delta = tenths / 10
                    exact = exhaustive_failure_probability(N, m, d, delta)
                    cap = min(1.0, failure_bound(delta, m, n))
                    checked += 1
                    if exact > cap + 1e-12:
                        violations += 1
    results.append(
        CheckResult(
            "exhaustive failure <= tail bound on full grid",
            violations == 0,
            f"{checked} grid points, {violations} violations",
        )
    )

    ok = True
    for epsilon, m, n in ((1e-36, 10**6, 10**6), (1e-6, 100, 300), (0.1, 5, 9)):
        round_trip = failure_bound(delta_for(epsilon, m, n), m, n)
        if abs(round_trip - epsilon**2) > 1e-9 * epsilon**2:
            ok = False
    results.append(CheckResult("delta_for inverts the failure bound", ok))
    return results


# (n, d, env_dim, delta_obs, delta) with delta_obs + delta <= (d-1)/d so the
# shell-size cap via the entropy bound stays in range.
_INSTANCE_CONFIGS = (
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


def suite_dominance(trials: int = 100, seed: int = 7) -> list[CheckResult]:
    results = []
    worst_eig = math.inf
    worst_dual_gap = 0.0
    pgm_ok = True
    chain_ok = True
    for i in range(trials):
        n, d, env_dim, delta_obs, delta = _INSTANCE_CONFIGS[i % len(_INSTANCE_CONFIGS)]
        inst = build_ideal_instance(n, d, delta_obs, delta, env_dim, seed + i)
        report = verify_operator_dominance(inst)
        worst_eig = min(worst_eig, report.min_eigenvalue)

        ens = inst.ensemble()
        dual = min_entropy_dual_bound(ens, inst.canonical_witness())
        expected = n * math.log2(d) - math.log2(inst.shell_size)
        worst_dual_gap = max(worst_dual_gap, abs(dual - expected))

        pgm_cap = -math.log2(pgm_guess_probability(ens))
        if dual > pgm_cap + 1e-9:
            pgm_ok = False

        cap_bits = n * entropy_dary(d, min(delta_obs + delta, (d - 1) / d)) * math.log2(d)
        if math.log2(inst.shell_size) > cap_bits + 1e-9:
            chain_ok = False

    results.append(
        CheckResult(
            f"|J|*chi dominates every key block ({trials} instances)",
            worst_eig >= -DOMINANCE_EIG_TOL,
            f"min eigenvalue {worst_eig:.3e} >= -{DOMINANCE_EIG_TOL}",
        )
    )
    results.append(
        CheckResult(
            "dual witness bound equals n*log2(d) - log2|J|",
            worst_dual_gap <= 1e-9,
            f"max deviation {worst_dual_gap:.3e}",
        )
    )
    results.append(CheckResult("dual bound never exceeds the PGM cap", pgm_ok))
    results.append(CheckResult("shell size within the entropy-bound cap", chain_ok))

    found = search_scaled_counterexample()
    results.append(
        CheckResult(
            "shrinking the |J| constant breaks dominance",
            found is not None,
            f"counterexample seed {found}",
        )
    )
    return results


def suite_povm() -> list[CheckResult]:
    results = []

    completeness_ok = True
    psd_ok = True
    for d in (2, 3, 4):
        for eta in (0.5, 0.8, 1.0):
            povm = build_decode_povm(d, eta)
            total = sum(povm)
            if not np.allclose(total, np.eye(d * d), atol=1e-12):
                completeness_ok = False
            for element in povm:
                if not np.allclose(element, element.conj().T, atol=1e-12):
                    psd_ok = False
                elif float(np.linalg.eigvalsh(element).min()) < -1e-12:
                    psd_ok = False
    results.append(CheckResult("decode POVM sums to identity", completeness_ok))
    results.append(CheckResult("decode POVM elements Hermitian PSD", psd_ok))

    ortho_ok = True
    for d in (2, 3, 4, 5):
        states = [build_protocol_state(d, k) for k in range(d)]
        for j, sj in enumerate(states):
            for k, sk in enumerate(states):
                overlap = float(np.trace(sj @ sk).real)
                if abs(overlap - (1.0 if j == k else 0.0)) > 1e-12:
                    ortho_ok = False
    results.append(CheckResult("phase-encoded states are orthonormal", ortho_ok))

    table_gap = 0.0
    for d in (2, 3, 4):
        for Q in (0.0, 0.05, 0.1):
            for mode in ("dependent", "independent"):
                scenario = ChannelScenario(Q=Q, mode=mode)
                table = decode_table(scenario, d)
                povm = build_decode_povm(d, 1.0)
                for k in range(d):
                    rho = return_state(d, k, scenario)
                    for i in range(d):
                        prob = float(np.trace(povm[i] @ rho).real)
                        want = table.p_correct if i == k else table.p_wrong_each
                        table_gap = max(table_gap, abs(prob - want))
    results.append(
        CheckResult(
            "POVM decode probabilities match closed-form tables",
            table_gap <= 1e-12,
            f"max gap {table_gap:.3e}",
        )
    )

    test_gap = 0.0
    for d in (2, 3, 4):
        for Q in (0.0, 0.05, 0.1):
            scenario = ChannelScenario(Q=Q)
            probs = zbasis_joint_distribution(forward_state(d, Q), d)
            disagree = float(probs.sum() - np.trace(probs))
            test_gap = max(test_gap, abs(disagree - expected_test_error(scenario, d)))
    results.append(
        CheckResult(
            "test-round disagreement matches Q*(1-1/d)",
            test_gap <= 1e-12,
            f"max gap {test_gap:.3e}",
        )
    )
    return results


def suite_lemma1(trials: int = 200, seed: int = 7) -> list[CheckResult]:
    results = []
    for eps, dim in ((0.0, 4), (1e-3, 4), (1e-2, 6), (1e-2, 8)):
        report = lemma1_empirical_check(eps, dim, trials, seed)
        results.append(
            CheckResult(
                f"outcome-wise closeness eps={eps} dim={dim}",
                report.passed,
                f"worst outcome mass {report.worst_violation_mass:.4g} "
                f"<= {report.mass_bound:.4g}",
            )
        )
    return results


def suite_ballbound() -> list[CheckResult]:
    failures = 0
    checked = 0
    for d in (2, 3, 4, 5):
        top = (d - 1) / d
        grid = [i * 0.1 for i in range(10) if i * 0.1 < top] + [top]
        for n in range(1, 11):
            for rho in grid:
                checked += 1
                if not ball_volume_bound_check(n, d, rho):
                    failures += 1
    return [
        CheckResult(
            "exact ball volumes within d^(n*H_d) cap",
            failures == 0,
            f"{checked} grid points, {failures} failures",
        )
    ]


def run_suite(name: str, trials: int = 100, seed: int = 7) -> list[CheckResult]:
    if name == "sampling":
        return suite_sampling()
    if name == "dominance":
        return suite_dominance(trials, seed)
    if name == "povm":
        return suite_povm()
    if name == "lemma1":
        return suite_lemma1(max(trials, 1), seed)
    if name == "ballbound":
        return suite_ballbound()
    if name == "all":
        out = []
        for sub in ("sampling", "dominance", "povm", "lemma1", "ballbound"):
            out.extend(run_suite(sub, trials, seed))
        return out
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
