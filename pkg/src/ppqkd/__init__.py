"""Finite-key analysis toolkit for a high-dimensional two-way QKD protocol.

Secret-key lengths for ideal and lossy devices, depolarization channel
models, a seeded Monte Carlo protocol simulator, and small-instance
numerical certification of the min-entropy machinery behind the bounds.
"""

from .channels import (
    ChannelScenario,
    DecodeTable,
    conditional_entropy_bits,
    conditional_entropy_from_error,
    decode_table,
    expected_test_error,
    leak_ec_bits,
    raw_key_error,
)
from .entropy import (
    ball_volume_bound_check,
    binary_entropy,
    entropy_dary,
    hamming_ball_volume,
)
from .errors import CertificationError, NoRootError, ResourceLimitError
from .keyrate import (
    KeyRateReport,
    Observation,
    ParallelComparison,
    ProtocolParams,
    asymptotic_rate,
    compare_parallel,
    expected_observation,
    expected_vacuum_fraction,
    keyrate_ideal,
    keyrate_lossy,
    loss_tolerance,
    min_signals_for_positive_key,
    noise_tolerance,
)
from .sampling import (
    SamplingParams,
    delta_for,
    exhaustive_failure_probability,
    failure_bound,
    good_word_test,
)
from .simulate import SimConfig, SimResult, end_to_end, exact_round_distribution, run_protocol
from .words import (
    Word,
    hamming_distance,
    loss_aware_distance,
    relative_hamming_weight,
    vacuum_symbol,
)

__all__ = [
    "CertificationError",
    "ChannelScenario",
    "DecodeTable",
    "KeyRateReport",
    "NoRootError",
    "Observation",
    "ParallelComparison",
    "ProtocolParams",
    "ResourceLimitError",
    "SamplingParams",
    "SimConfig",
    "SimResult",
    "Word",
    "asymptotic_rate",
    "ball_volume_bound_check",
    "binary_entropy",
    "compare_parallel",
    "conditional_entropy_bits",
    "conditional_entropy_from_error",
    "decode_table",
    "delta_for",
    "end_to_end",
    "entropy_dary",
    "exact_round_distribution",
    "exhaustive_failure_probability",
    "expected_observation",
    "expected_test_error",
    "expected_vacuum_fraction",
    "failure_bound",
    "good_word_test",
    "hamming_ball_volume",
    "hamming_distance",
    "keyrate_ideal",
    "keyrate_lossy",
    "leak_ec_bits",
    "loss_aware_distance",
    "loss_tolerance",
    "min_signals_for_positive_key",
    "noise_tolerance",
    "raw_key_error",
    "relative_hamming_weight",
    "run_protocol",
    "vacuum_symbol",
]

__version__ = "0.1.0"
