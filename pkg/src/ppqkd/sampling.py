"""Classical subset-sampling strategy: tolerance calibration and failure bounds.

The strategy observes a uniformly random size-m subset of an N = m + n
position pair of words and guesses that the mismatch rate on the unobserved
part is within delta of the observed mismatch rate.  This module provides

* the hypergeometric-style tail bound on the strategy's failure probability,
* the inverse calibration delta(epsilon, m, n) making the bound equal
  epsilon**2,
* membership testing for the "good word" set of a fixed subset, and
* an exhaustive tiny-instance oracle computing the exact worst-case failure
  probability, used to validate the tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ResourceLimitError
from .words import Word, hamming_distance


def delta_for(epsilon: float, m: int, n: int) -> float:
    """Tolerance such that the sampling failure bound equals epsilon**2.

    delta = sqrt((m+n+2) * ln(2/eps^2) / (m*(m+n))).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be >= 1, got m={m}, n={n}")
    # ln(2/eps^2) written as ln2 - 2*ln(eps) so tiny eps cannot underflow.
    log_term = math.log(2.0) - 2.0 * math.log(epsilon)
    return math.sqrt((m + n + 2) * log_term / (m * (m + n)))


def failure_bound(delta: float, m: int, n: int) -> float:
    """Tail bound 2*exp(-delta^2 * m*(n+m) / (m+n+2)) on the worst-case
    failure probability of the subset-sampling strategy.

    Returned verbatim: values >= 1 are vacuous (see :func:`is_vacuous_bound`)
    and are deliberately not clamped.
    """
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if not 1 <= m <= n:
        raise ValueError(f"bound requires 1 <= m <= n, got m={m}, n={n}")
    return 2.0 * math.exp(-delta * delta * m * (n + m) / (m + n + 2.0))


def is_vacuous_bound(value: float) -> bool:
    """A failure bound >= 1 carries no information."""
    return value >= 1.0


def good_word_test(x: Word, y: Word, test_indices: Iterable[int], delta: float) -> bool:
    """True iff the observed-part and unobserved-part mismatch rates of
    (x, y) are within delta of each other for the given 0-based subset.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    t = sorted(set(test_indices))
    if not t:
        raise ValueError("test subset is empty")
    if t[0] < 0 or t[-1] >= len(x):
        raise ValueError(f"test indices {t} out of range 0..{len(x) - 1}")
    if len(t) == len(x):
        raise ValueError("test subset covers the whole word; nothing to estimate")
    observed = hamming_distance(x.take(t), y.take(t))
    target = hamming_distance(x.drop(t), y.drop(t))
    # Fraction vs float comparison is exact, so the closed interval is honored.
    return abs(observed - target) <= delta


@dataclass(frozen=True)
class SamplingParams:
    """Test size m, key size n, security parameter epsilon, and tolerance delta."""

    m: int
    n: int
    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.delta <= 0.0:
            raise ValueError(f"delta must be > 0, got {self.delta}")

    @classmethod
    def calibrated(cls, epsilon: float, m: int, n: int) -> "SamplingParams":
        """Parameters with delta chosen so the failure bound equals epsilon**2."""
        return cls(m=m, n=n, epsilon=epsilon, delta=delta_for(epsilon, m, n))

    @property
    def total(self) -> int:
        return self.m + self.n

    def failure_bound(self) -> float:
        return failure_bound(self.delta, self.m, self.n)


_EXHAUSTIVE_MAX_N = 8
_EXHAUSTIVE_MAX_D = 3


def exhaustive_failure_probability(N: int, m: int, d: int, delta: float) -> float:
    """Exact worst-case failure probability of the strategy on words of
    length N over d letters with a uniform size-m test subset.

    Whether a fixed word pair fails for a subset depends only on how the
    subset intersects the pair's mismatch positions, and the uniform subset
    distribution is exchangeable, so the maximum over all word pairs reduces
    to a maximum over the mismatch count D with exact hypergeometric subset
    counting.  Every D in 0..N is realizable for any d >= 2.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if N > _EXHAUSTIVE_MAX_N or d > _EXHAUSTIVE_MAX_D:
        raise ResourceLimitError(
            f"exhaustive oracle limited to N <= {_EXHAUSTIVE_MAX_N}, "
            f"d <= {_EXHAUSTIVE_MAX_D}; got N={N}, d={d}"
        )
    if not 1 <= m < N:
        raise ValueError(f"need 1 <= m < N, got m={m}, N={N}")
    n = N - m
    tol = Fraction(delta)
    total = math.comb(N, m)
    worst = Fraction(0)
    for mismatches in range(N + 1):
        failing = 0
        k_lo = max(0, m - (N - mismatches))
        k_hi = min(m, mismatches)
        for k in range(k_lo, k_hi + 1):
            gap = abs(Fraction(k, m) - Fraction(mismatches - k, n))
            if gap > tol:
                failing += math.comb(mismatches, k) * math.comb(N - mismatches, m - k)
        worst = max(worst, Fraction(failing, total))
    return float(worst)
