"""Entropy functions and exact Hamming-ball combinatorics.

Everything here is scalar math shared by the sampling bounds and the
key-length formulas: the d-ary entropy function, exact (big-integer)
Hamming ball volumes, and the classical ball-volume bound used to cap
the size of a distance shell around a word.
"""

from __future__ import annotations

import math
from fractions import Fraction


def entropy_dary(d: int, x: float) -> float:
    """d-ary entropy  x*log_d(d-1) - x*log_d(x) - (1-x)*log_d(1-x).

    Uses the 0*log(0) = 0 convention at both endpoints.  Equals the binary
    Shannon entropy for d=2 and peaks at 1 when x = (d-1)/d.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument must lie in [0, 1], got {x}")
    ld = math.log(d)
    s = 0.0
    if x > 0.0:
        s += x * math.log(d - 1) / ld - x * math.log(x) / ld
    if x < 1.0:
        s -= (1.0 - x) * math.log(1.0 - x) / ld
    return s


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits."""
    return entropy_dary(2, p)


def hamming_ball_volume(n: int, d: int, radius_count: int) -> int:
    """Exact number of words of length n over d letters within ``radius_count``
    mismatches of a fixed center: sum_{j<=r} C(n,j) * (d-1)^j.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not 0 <= radius_count <= n:
        raise ValueError(f"radius {radius_count} outside 0..{n}")
    return sum(math.comb(n, j) * (d - 1) ** j for j in range(radius_count + 1))


def ball_volume_bound_check(n: int, d: int, rho: float) -> bool:
    """True iff the exact ball volume at radius floor(rho*n) is at most
    d**(n*H_d(rho)).  Compared in the log domain; valid for rho <= (d-1)/d.
    """
    if not 0.0 <= rho <= (d - 1) / d:
        raise ValueError(f"rho must lie in [0, (d-1)/d], got {rho}")
    # Exact floor of rho*n for the given float rho, immune to product round-off.
    radius = math.floor(Fraction(rho) * n)
    volume = hamming_ball_volume(n, d, radius)
    rhs_log2 = n * entropy_dary(d, rho) * math.log2(d)
    return math.log2(volume) <= rhs_log2 + 1e-9


def log2_binomial(n: int, k: int) -> float:
    """log2 of C(n, k) via log-gamma; exact enough for bit bookkeeping at any n."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / math.log(2)
