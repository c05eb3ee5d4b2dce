"""Seeded Monte Carlo simulation of the protocol's observable statistics.

The simulator samples per-round outcome distributions rather than N-fold
state vectors: for maximally entangled inputs under depolarization the
per-round statistics are exactly the categorical distributions computed by
the channel module, so desk-scale runs up to 10^8 rounds stay cheap while
remaining faithful.  The density-matrix path (:func:`exact_round_distribution`)
exists purely as a cross-check oracle for the sampler.

Randomness comes from a counter-based generator keyed on the master seed,
so identical configurations reproduce byte-identical results regardless of
chunking or scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelScenario, build_decode_povm, decode_table, forward_state, return_state, zbasis_joint_distribution
from .errors import ResourceLimitError
from .keyrate import (
    KeyRateReport,
    Observation,
    ProtocolParams,
    expected_vacuum_fraction,
    keyrate_ideal,
    keyrate_lossy,
)

_MAX_SIMULATED_ROUNDS = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class SimConfig:
    """Protocol and channel parameters plus the master seed.

    ``rounds_override`` runs the sampler on that many rounds (same test
    fraction) and extrapolates the empirical fractions to the full N of
    ``params`` — the escape hatch for parameter sets too large to simulate
    round by round.
    """

    params: ProtocolParams
    scenario: ChannelScenario
    seed: int = 0
    rounds_override: int | None = None

    def __post_init__(self) -> None:
        if self.rounds_override is not None and self.rounds_override < 2:
            raise ValueError("rounds_override must be >= 2")


@dataclass(frozen=True)
class SimCounts:
    """Integer tallies; tuples so results compare and hash deterministically.

    ``test_joint`` is a (d+1) x (d+1) table over both parties' test outcomes
    (vacuum last); ``decode_shift`` counts the decoded-minus-encoded digit
    shift (0 = correct) with the vacuum in the last slot; ``bob_digits``
    counts the encoder's uniformly chosen digits.
    """

    test_rounds: int
    key_rounds: int
    test_joint: tuple[tuple[int, ...], ...]
    decode_shift: tuple[int, ...]
    bob_digits: tuple[int, ...]


@dataclass(frozen=True)
class SimResult:
    observation: Observation
    empirical_test_error: float
    empirical_decode_error: float
    empirical_vac_fraction: float
    counts: SimCounts


def _chunks(total: int) -> list[int]:
    sizes = [_CHUNK] * (total // _CHUNK)
    if total % _CHUNK:
        sizes.append(total % _CHUNK)
    return sizes


def run_protocol(config: SimConfig) -> SimResult:
    """Sample all test and key rounds and tally the observable statistics.

    Test rounds: with probability 1-Q both parties see the same uniform
    digit, otherwise an independent uniform pair; with loss each party's
    symbol is independently replaced by a vacuum with probability mu.
    Key rounds: the encoded digit is uniform, the decode shift follows the
    mode's decode table, and the decode is replaced by a vacuum (discarded
    round) with probability mu + (1-mu)*mu since loss can strike on either
    pass.
    """
    params, scenario = config.params, config.scenario
    d = params.d
    if config.rounds_override is not None:
        total = config.rounds_override
        m_sim = min(max(1, round(total * params.m / params.N)), total - 1)
    else:
        total = params.N
        m_sim = params.m
    if total > _MAX_SIMULATED_ROUNDS:
        raise ResourceLimitError(
            f"refusing to simulate {total} rounds (> {_MAX_SIMULATED_ROUNDS}); "
            "set rounds_override to sample a smaller proxy run"
        )
    n_sim = total - m_sim
    mu = scenario.mu
    rng = np.random.Generator(np.random.Philox(key=config.seed))

    joint = np.zeros((d + 1) * (d + 1), dtype=np.int64)
    for c in _chunks(m_sim):
        a = rng.integers(0, d, size=c)
        b_depol = rng.integers(0, d, size=c)
        depol = rng.random(c) < scenario.Q
        b = np.where(depol, b_depol, a)
        if mu > 0.0:
            a = np.where(rng.random(c) < mu, d, a)
            b = np.where(rng.random(c) < mu, d, b)
        joint += np.bincount(a * (d + 1) + b, minlength=(d + 1) * (d + 1))
    joint = joint.reshape(d + 1, d + 1)

    table = decode_table(scenario, d)
    vac_prob = expected_vacuum_fraction(mu) if mu > 0.0 else 0.0
    shifts = np.zeros(d + 1, dtype=np.int64)
    bob = np.zeros(d, dtype=np.int64)
    for c in _chunks(n_sim):
        digits = rng.integers(0, d, size=c)
        bob += np.bincount(digits, minlength=d)
        wrong = rng.random(c) < table.error_rate
        shift = np.where(wrong, rng.integers(1, d, size=c), 0)
        if mu > 0.0:
            shift = np.where(rng.random(c) < vac_prob, d, shift)
        shifts += np.bincount(shift, minlength=d + 1)

    agree = int(sum(joint[i, i] for i in range(d)))
    test_errors = m_sim - agree  # mismatch, or a vacuum on either side
    v_sim = int(shifts[d])
    kept_sim = n_sim - v_sim
    decode_errors = int(shifts[1:d].sum())

    empirical_test_error = test_errors / m_sim
    empirical_decode_error = decode_errors / kept_sim if kept_sim else 0.0
    empirical_vac_fraction = v_sim / n_sim

    if config.rounds_override is None:
        v = v_sim
    else:
        v = round(empirical_vac_fraction * params.n)
    observation = Observation(
        test_error=empirical_test_error,
        raw_key_error=empirical_decode_error,
        vac_decode_count=v,
        n_kept=params.n - v,
    )
    counts = SimCounts(
        test_rounds=m_sim,
        key_rounds=n_sim,
        test_joint=tuple(tuple(int(x) for x in row) for row in joint),
        decode_shift=tuple(int(x) for x in shifts),
        bob_digits=tuple(int(x) for x in bob),
    )
    return SimResult(
        observation=observation,
        empirical_test_error=empirical_test_error,
        empirical_decode_error=empirical_decode_error,
        empirical_vac_fraction=empirical_vac_fraction,
        counts=counts,
    )


@dataclass(frozen=True)
class RoundDistribution:
    """Exact per-round outcome distributions from density matrices and POVMs.

    ``test_joint``: (d, d) probabilities of both parties' test digits.
    ``decode_given_key``: for each encoded digit k, the d+1 probabilities of
    the decoded digit (vacuum last, probability 1 - eta).
    """

    test_joint: tuple[tuple[float, ...], ...]
    decode_given_key: tuple[tuple[float, ...], ...]


_MAX_EXACT_D = 6


def exact_round_distribution(scenario: ChannelScenario, d: int) -> RoundDistribution:
    """Per-round distributions computed by explicit matrix evaluation.

    Validates the sampler's categorical distributions: the test table comes
    from measuring the forward-depolarized pair in the computational basis,
    the decode rows from the Bell POVM (with the scenario's eta) applied to
    the mode's return states.
    """
    if d > _MAX_EXACT_D:
        raise ResourceLimitError(f"exact distributions limited to d <= {_MAX_EXACT_D}, got {d}")
    rho_forward = forward_state(d, scenario.Q)
    test = zbasis_joint_distribution(rho_forward, d)
    povm = build_decode_povm(d, scenario.eta)
    rows = []
    for k in range(d):
        rho_k = return_state(d, k, scenario)
        rows.append(tuple(float(np.trace(element @ rho_k).real) for element in povm))
    return RoundDistribution(
        test_joint=tuple(tuple(float(p) for p in row) for row in test),
        decode_given_key=tuple(rows),
    )


def end_to_end(config: SimConfig) -> KeyRateReport:
    """Simulate a full run and evaluate the key length on its statistics."""
    result = run_protocol(config)
    if config.scenario.mu > 0.0:
        return keyrate_lossy(config.params, result.observation)
    return keyrate_ideal(config.params, result.observation)
