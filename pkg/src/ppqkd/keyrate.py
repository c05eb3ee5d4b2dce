"""Finite-key secret-key length for ideal and lossy devices.

The extractable key length is

    ell = (entropy bound) - leak_EC - [log2 C(N, m)] - 2*log2(1/epsilon)

where the entropy bound is n*log2(d)*(1 - H_d(observed + delta)) with ideal
devices and (n-v)*log2(d) - n*H_{d+1}(observed + delta)*log2(d+1) with lossy
devices (v decode vacuums, vacuum counted as an error in the observed test
statistic).  All report fields are in bits; the identity 1/log_d(2) =
log2(d) removes any mixed-base ambiguity, and "2 log(1/epsilon)" is read in
base 2 like every other bit count.

Entropy arguments are clamped at the d-ary entropy maximum (d-1)/d
(respectively d/(d+1)): past that point the entropy function turns over and
would spuriously inflate the rate, so clamping yields the conservative
zero-rate reading.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .channels import (
    ChannelScenario,
    conditional_entropy_from_error,
    expected_test_error,
    leak_ec_bits,
    normalize_mode,
    raw_key_error,
)
from .entropy import entropy_dary, log2_binomial
from .errors import NoRootError
from .sampling import delta_for


@dataclass(frozen=True)
class ProtocolParams:
    """Signal dimension d, total signals N, test size m, security parameter
    epsilon, whether to charge the log2 C(N, m) subset-selection cost, and
    the error-correction inefficiency factor.
    """

    d: int
    N: int
    m: int
    epsilon: float
    subset_cost: bool = False
    ec_factor: float = 1.2

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < 1:
            raise ValueError(f"n = N - m must be >= 1, got {self.n}")
        if self.m > self.n:
            raise ValueError(f"need m <= n, got m={self.m}, n={self.n}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.ec_factor < 1.0:
            raise ValueError(f"ec_factor must be >= 1, got {self.ec_factor}")

    @property
    def n(self) -> int:
        return self.N - self.m


@dataclass(frozen=True)
class Observation:
    """Protocol statistics fed to the key-length formulas.

    ``test_error`` is the (vacuum-aware, when lossy) test-round mismatch
    rate; ``raw_key_error`` the decode error rate among kept rounds;
    ``vac_decode_count`` the number of discarded decode vacuums; ``n_kept``
    the kept round count (must equal n - vac_decode_count).
    """

    test_error: float
    raw_key_error: float = 0.0
    vac_decode_count: int = 0
    n_kept: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.test_error <= 1.0:
            raise ValueError(f"test_error must lie in [0, 1], got {self.test_error}")
        if not 0.0 <= self.raw_key_error <= 1.0:
            raise ValueError(f"raw_key_error must lie in [0, 1], got {self.raw_key_error}")
        if self.vac_decode_count < 0:
            raise ValueError(f"vac_decode_count must be >= 0, got {self.vac_decode_count}")

    @classmethod
    def noiseless(cls, n: int) -> "Observation":
        return cls(test_error=0.0, raw_key_error=0.0, vac_decode_count=0, n_kept=n)


@dataclass(frozen=True)
class KeyRateReport:
    """All budget terms of one key-length evaluation, in bits."""

    delta: float
    entropy_bound_bits: float
    leak_bits: float
    subset_cost_bits: float
    security_cost_bits: float
    ell_bits: int
    rate_per_signal: float
    smooth_eps: float
    eps_pa: float
    eps_fail: float
    aborted: bool


def smooth_epsilon(epsilon: float) -> float:
    """Smoothing parameter 4*eps + 2*eps^(1/3) of the certified min-entropy."""
    return 4.0 * epsilon + 2.0 * epsilon ** (1.0 / 3.0)


def privacy_epsilon(epsilon: float) -> float:
    """Distance from an ideal key after privacy amplification: 9*eps + 4*eps^(1/3)."""
    return 9.0 * epsilon + 4.0 * epsilon ** (1.0 / 3.0)


def failure_epsilon(epsilon: float) -> float:
    """Probability 2*eps^(1/3) that the min-entropy certificate fails."""
    return 2.0 * epsilon ** (1.0 / 3.0)


def expected_vacuum_fraction(mu: float) -> float:
    """Expected decode-vacuum fraction when loss can strike on either pass:
    mu + (1 - mu) * mu.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu must lie in [0, 1), got {mu}")
    return mu + (1.0 - mu) * mu


def _validate_observation(params: ProtocolParams, obs: Observation, lossy: bool) -> int:
    v = obs.vac_decode_count
    if lossy:
        if v > params.n:
            raise ValueError(f"vac_decode_count {v} exceeds n = {params.n}")
    elif v != 0:
        raise ValueError("ideal-device key rate requires vacuum-free statistics")
    expected_kept = params.n - v
    if obs.n_kept is not None and obs.n_kept != expected_kept:
        raise ValueError(f"n_kept {obs.n_kept} inconsistent with n - v = {expected_kept}")
    return expected_kept


def _finish_report(
    params: ProtocolParams,
    delta: float,
    entropy_bound: float,
    leak: float,
) -> KeyRateReport:
    subset = log2_binomial(params.N, params.m) if params.subset_cost else 0.0
    security = -2.0 * math.log2(params.epsilon)
    raw = entropy_bound - leak - subset - security
    ell = max(0, math.floor(raw))
    eps = params.epsilon
    return KeyRateReport(
        delta=delta,
        entropy_bound_bits=entropy_bound,
        leak_bits=leak,
        subset_cost_bits=subset,
        security_cost_bits=security,
        ell_bits=ell,
        rate_per_signal=ell / params.N,
        smooth_eps=smooth_epsilon(eps),
        eps_pa=privacy_epsilon(eps),
        eps_fail=failure_epsilon(eps),
        aborted=ell == 0,
    )


def keyrate_ideal(params: ProtocolParams, obs: Observation) -> KeyRateReport:
    """Key length with ideal devices (vacuum-free statistics)."""
    _validate_observation(params, obs, lossy=False)
    d, n = params.d, params.n
    delta = delta_for(params.epsilon, params.m, n)
    arg = min(obs.test_error + delta, (d - 1) / d)
    entropy_bound = n * math.log2(d) * (1.0 - entropy_dary(d, arg))
    hab = conditional_entropy_from_error(d, obs.raw_key_error)
    leak = leak_ec_bits(n, hab, params.ec_factor)
    return _finish_report(params, delta, entropy_bound, leak)


def keyrate_lossy(params: ProtocolParams, obs: Observation) -> KeyRateReport:
    """Key length with lossy/inefficient devices.

    The test statistic is the vacuum-counts-as-error mismatch rate over the
    d+1-letter alphabet; v decode vacuums are discarded, and the leakage is
    charged on the n - v kept rounds only.
    """
    n_kept = _validate_observation(params, obs, lossy=True)
    d, n = params.d, params.n
    delta = delta_for(params.epsilon, params.m, n)
    arg = min(obs.test_error + delta, d / (d + 1))
    bound = n_kept * math.log2(d) - n * entropy_dary(d + 1, arg) * math.log2(d + 1)
    entropy_bound = max(0.0, bound)
    hab = conditional_entropy_from_error(d, obs.raw_key_error)
    leak = leak_ec_bits(n_kept, hab, params.ec_factor)
    return _finish_report(params, delta, entropy_bound, leak)


def expected_observation(
    params: ProtocolParams,
    scenario: ChannelScenario,
    lossy: bool | None = None,
) -> Observation:
    """Observation a run is expected to produce under the channel model."""
    if lossy is None:
        lossy = scenario.mu > 0.0
    e_raw = raw_key_error(scenario, params.d)
    if not lossy:
        if scenario.mu != 0.0:
            raise ValueError("ideal-device expectations require mu = 0")
        return Observation(
            test_error=expected_test_error(scenario, params.d),
            raw_key_error=e_raw,
            vac_decode_count=0,
            n_kept=params.n,
        )
    v = round(expected_vacuum_fraction(scenario.mu) * params.n)
    return Observation(
        test_error=expected_test_error(scenario, params.d),
        raw_key_error=e_raw,
        vac_decode_count=v,
        n_kept=params.n - v,
    )


def asymptotic_rate(
    d: int,
    scenario: ChannelScenario,
    ec_factor: float = 1.2,
    lossy: bool | None = None,
) -> float:
    """Bits per signal in the limit of vanishing tolerance and test fraction.

    Ideal:  log2(d) * (1 - H_d(e_test)) - ec * H(A|B)
    Lossy:  (1-v/n)*log2(d) - H_{d+1}(e_test~)*log2(d+1) - ec*(1-v/n)*H(A|B)

    The value is signed (negative above tolerance); key lengths clamp at 0,
    root finders need the sign.
    """
    if lossy is None:
        lossy = scenario.mu > 0.0
    hab = conditional_entropy_from_error(d, raw_key_error(scenario, d))
    e_test = expected_test_error(scenario, d)
    if not lossy:
        arg = min(e_test, (d - 1) / d)
        return math.log2(d) * (1.0 - entropy_dary(d, arg)) - ec_factor * hab
    kept = 1.0 - expected_vacuum_fraction(scenario.mu)
    arg = min(e_test, d / (d + 1))
    return (
        kept * math.log2(d)
        - entropy_dary(d + 1, arg) * math.log2(d + 1)
        - ec_factor * kept * hab
    )


def matching_test_error(d: int, mode: str, e: float) -> float:
    """Test-round error matching a given raw-key (decode) error rate.

    The decode table is inverted per mode to recover Q and hence the matching
    test-round error; dependent channels make the two rates coincide.
    """
    if normalize_mode(mode) == "dependent":
        return e
    depol_total = min(1.0, e * d / (d - 1))  # 1 - (1-Q)^2
    Q = 1.0 - math.sqrt(1.0 - depol_total)
    return Q * (1.0 - 1.0 / d)


def _rate_at_raw_error(d: int, mode: str, ec_factor: float, lossy: bool, e: float) -> float:
    """Asymptotic rate as a function of the raw-key (decode) error rate."""
    e_test = matching_test_error(d, mode, e)
    hab = conditional_entropy_from_error(d, e)
    if not lossy:
        arg = min(e_test, (d - 1) / d)
        return math.log2(d) * (1.0 - entropy_dary(d, arg)) - ec_factor * hab
    arg = min(e_test, d / (d + 1))
    return math.log2(d) - entropy_dary(d + 1, arg) * math.log2(d + 1) - ec_factor * hab


def _bisect_decreasing(rate, lo: float, hi: float, tol: float = 1e-6) -> float:
    """Root of a decreasing function, bracketing on a scan grid first."""
    grid = [lo + (hi - lo) * i / 64 for i in range(65)]
    values = [rate(g) for g in grid]
    for left, right, f_left, f_right in zip(grid, grid[1:], values, values[1:]):
        if f_left > 0.0 >= f_right:
            lo, hi = left, right
            break
    else:
        raise NoRootError(f"no sign change in [{grid[0]}, {grid[-1]}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rate(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def noise_tolerance(d: int, mode: str, ec_factor: float = 1.2, lossy: bool = False) -> float:
    """Raw-key error rate at which the asymptotic rate crosses zero."""
    mode = normalize_mode(mode)
    top = (d - 1) / d

    def rate(e: float) -> float:
        return _rate_at_raw_error(d, mode, ec_factor, lossy, e)

    return _bisect_decreasing(rate, 0.0, top)


def loss_tolerance(d: int, mode: str, Q: float, ec_factor: float = 1.2) -> float:
    """Vacuum probability mu at which the lossy asymptotic rate crosses zero."""
    mode = normalize_mode(mode)

    def rate(mu: float) -> float:
        scenario = ChannelScenario(Q=Q, mode=mode, mu=mu)
        return asymptotic_rate(d, scenario, ec_factor, lossy=True)

    return _bisect_decreasing(rate, 0.0, 1.0 - 1e-9)


_THRESHOLD_CAP = 10**15


def min_signals_for_positive_key(
    d: int,
    scenario: ChannelScenario,
    epsilon: float = 1e-36,
    ec_factor: float = 1.2,
    subset_cost: bool = False,
    lossy: bool | None = None,
) -> int:
    """Smallest N (with m = N//2) achieving a positive key length.

    The key length is non-decreasing in N at a fixed test fraction, so a
    doubling scan followed by integer bisection is exact.
    """
    if lossy is None:
        lossy = scenario.mu > 0.0
    compute = keyrate_lossy if lossy else keyrate_ideal

    def ell(N: int) -> int:
        params = ProtocolParams(
            d=d, N=N, m=N // 2, epsilon=epsilon,
            subset_cost=subset_cost, ec_factor=ec_factor,
        )
        obs = expected_observation(params, scenario, lossy)
        return compute(params, obs).ell_bits

    hi = 4
    while ell(hi) == 0:
        hi *= 2
        if hi > _THRESHOLD_CAP:
            raise NoRootError(f"no positive key length up to N = {_THRESHOLD_CAP}")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ell(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ParallelComparison:
    """One high-dimensional run against several low-dimensional runs, each
    over the same number of signals.
    """

    d_high: int
    d_low: int
    copies: int
    ell_high: int
    ell_low_each: int
    ell_low_total: int
    threshold_high: int
    threshold_low: int


def compare_parallel(
    d_high: int,
    copies: int,
    d_low: int,
    params: ProtocolParams,
    scenario: ChannelScenario,
) -> ParallelComparison:
    """Compare one d_high run with ``copies`` parallel d_low runs.

    Requires d_high = d_low**copies so both sides carry the same number of
    raw digits per signal.  Thresholds are the minimal N with positive key.
    """
    if d_low**copies != d_high:
        raise ValueError(f"need d_high = d_low**copies, got {d_high} != {d_low}**{copies}")
    if params.d != d_high:
        raise ValueError(f"params.d = {params.d} must equal d_high = {d_high}")
    lossy = scenario.mu > 0.0
    compute = keyrate_lossy if lossy else keyrate_ideal
    params_low = dataclasses.replace(params, d=d_low)
    report_high = compute(params, expected_observation(params, scenario, lossy))
    report_low = compute(params_low, expected_observation(params_low, scenario, lossy))
    return ParallelComparison(
        d_high=d_high,
        d_low=d_low,
        copies=copies,
        ell_high=report_high.ell_bits,
        ell_low_each=report_low.ell_bits,
        ell_low_total=copies * report_low.ell_bits,
        threshold_high=min_signals_for_positive_key(
            d_high, scenario, params.epsilon, params.ec_factor, params.subset_cost
        ),
        threshold_low=min_signals_for_positive_key(
            d_low, scenario, params.epsilon, params.ec_factor, params.subset_cost
        ),
    )
