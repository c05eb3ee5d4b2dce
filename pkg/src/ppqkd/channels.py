"""Depolarization channel models, protocol states, decode POVMs, and leakage.

Two channel uses are modeled.  On the forward pass a maximally entangled
qudit pair is depolarized and both halves are measured in the computational
basis (test rounds).  On the round trip the receiver phase-encodes a digit
and the returned pair is measured in the generalized Bell basis (key
rounds).  "Dependent" channels keep a single overall (1-Q) survival weight
for the round trip; "independent" channels compose two depolarizations and
so survive with weight (1-Q)^2.

Closed-form decode tables are provided alongside explicit density-matrix /
POVM constructions so that each can check the other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

MODES = ("dependent", "independent")

_MODE_ALIASES = {
    "dependent": "dependent",
    "dep": "dependent",
    "independent": "independent",
    "indep": "independent",
    "ind": "independent",
}


def normalize_mode(mode: str) -> str:
    """Canonical channel-mode name from a user-facing alias."""
    try:
        return _MODE_ALIASES[mode.lower()]
    except KeyError:
        raise ValueError(f"unknown channel mode {mode!r}; expected one of {MODES}") from None


@dataclass(frozen=True)
class ChannelScenario:
    """Depolarization rate Q, channel mode, vacuum probability mu, and the
    simulation-only detector efficiency eta (never read by analysis paths).
    """

    Q: float
    mode: str = "dependent"
    mu: float = 0.0
    eta: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        if not 0.0 <= self.Q < 1.0:
            raise ValueError(f"Q must lie in [0, 1), got {self.Q}")
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {self.mu}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class DecodeTable:
    """Conditional distribution of the decoded digit given the encoded digit:
    probability ``p_correct`` on the diagonal and ``p_wrong_each`` on each of
    the d-1 off-diagonal digits.
    """

    d: int
    p_correct: float
    p_wrong_each: float

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if self.p_correct < 0.0 or self.p_wrong_each < 0.0:
            raise ValueError("decode probabilities must be non-negative")
        total = self.p_correct + (self.d - 1) * self.p_wrong_each
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"decode probabilities sum to {total}, not 1")

    @property
    def error_rate(self) -> float:
        """Total probability of decoding any wrong digit."""
        return (self.d - 1) * self.p_wrong_each


def expected_test_error(scenario: ChannelScenario, d: int) -> float:
    """Expected test-round mismatch rate: mu + (1-mu) * Q * (1 - 1/d).

    At mu = 0 this is the plain depolarization disagreement probability;
    with loss it is the vacuum-counts-as-error statistic.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    depol = scenario.Q * (1.0 - 1.0 / d)
    return scenario.mu + (1.0 - scenario.mu) * depol


def decode_table(scenario: ChannelScenario, d: int) -> DecodeTable:
    """Closed-form decode distribution for the given channel mode."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    Q = scenario.Q
    if scenario.mode == "dependent":
        x = (1.0 - Q) + Q / d
        y = Q / d
    else:
        survive = (1.0 - Q) ** 2
        x = survive + (1.0 - survive) / d
        y = (1.0 - survive) / d
    return DecodeTable(d=d, p_correct=x, p_wrong_each=y)


def raw_key_error(scenario: ChannelScenario, d: int) -> float:
    """Probability that the decoded digit differs from the encoded one."""
    return decode_table(scenario, d).error_rate


def conditional_entropy_bits(table: DecodeTable) -> float:
    """H(decoded | encoded) in bits:  -x*log2(x) - (d-1)*y*log2(y)."""
    x, y = table.p_correct, table.p_wrong_each
    s = 0.0
    if x > 0.0:
        s -= x * math.log2(x)
    if y > 0.0:
        s -= (table.d - 1) * y * math.log2(y)
    return s


def conditional_entropy_from_error(d: int, error_rate: float) -> float:
    """H(decoded | encoded) in bits for a symmetric channel with the given
    total error probability spread evenly over the d-1 wrong digits.
    """
    if not 0.0 <= error_rate <= 1.0:
        raise ValueError(f"error rate must lie in [0, 1], got {error_rate}")
    table = DecodeTable(d=d, p_correct=1.0 - error_rate, p_wrong_each=error_rate / (d - 1))
    return conditional_entropy_bits(table)


def leak_ec_bits(n_kept: int, hab_bits: float, factor: float) -> float:
    """Error-correction leakage model: factor * n_kept * H(A|B) bits."""
    if n_kept < 0:
        raise ValueError(f"n_kept must be >= 0, got {n_kept}")
    if factor < 1.0:
        raise ValueError(f"leakage factor must be >= 1, got {factor}")
    if hab_bits < 0.0:
        raise ValueError(f"hab_bits must be >= 0, got {hab_bits}")
    return factor * n_kept * hab_bits


# --- explicit states and measurements -------------------------------------


def build_protocol_state(d: int, k: int | None = None) -> np.ndarray:
    """Density matrix of the maximally entangled pair, optionally with the
    digit ``k`` phase-encoded on the second half:
    |psi_k> = (1/sqrt d) * sum_a exp(2 pi i k a / d) |a, a>.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if k is not None and not 0 <= k < d:
        raise ValueError(f"digit {k} outside 0..{d - 1}")
    psi = np.zeros(d * d, dtype=complex)
    for a in range(d):
        phase = 1.0 if k is None else cmath.exp(2j * math.pi * k * a / d)
        psi[a * d + a] = phase / math.sqrt(d)
    return np.outer(psi, psi.conj())


def bell_vector(d: int, k: int, a: int) -> np.ndarray:
    """Normalized generalized Bell vector
    (1/sqrt d) * sum_j exp(2 pi i k j / d) |j, j+a mod d>.
    """
    v = np.zeros(d * d, dtype=complex)
    for j in range(d):
        v[j * d + (j + a) % d] = cmath.exp(2j * math.pi * k * j / d) / math.sqrt(d)
    return v


def build_decode_povm(d: int, eta: float = 1.0) -> list[np.ndarray]:
    """Decode POVM {L_0, ..., L_{d-1}, L_vac} on the d^2-dimensional pair.

    L_k = eta * sum_a |B_{k,a}><B_{k,a}| over normalized Bell vectors, and
    L_vac = I - sum_k L_k = (1-eta) * I.  With the 1/sqrt(d) normalization
    the d^2 Bell vectors form an orthonormal basis, so the elements are PSD
    and sum to the identity for every eta in (0, 1].
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    elements = []
    acc = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        op = np.zeros((d * d, d * d), dtype=complex)
        for a in range(d):
            b = bell_vector(d, k, a)
            op += np.outer(b, b.conj())
        op *= eta
        elements.append(op)
        acc += op
    elements.append(np.eye(d * d, dtype=complex) - acc)
    return elements


def depolarize_joint(rho: np.ndarray, Q: float) -> np.ndarray:
    """Full-dimension depolarization  rho -> (1-Q) rho + Q/dim * I."""
    dim = rho.shape[0]
    return (1.0 - Q) * rho + (Q / dim) * np.eye(dim, dtype=complex)


def forward_state(d: int, Q: float) -> np.ndarray:
    """Entangled pair after the forward depolarization channel."""
    return depolarize_joint(build_protocol_state(d), Q)


def return_state(d: int, k: int, scenario: ChannelScenario) -> np.ndarray:
    """Joint state arriving back at the decoder after digit ``k`` was encoded.

    Dependent mode keeps a single (1-Q) survival weight; independent mode
    composes the forward and reverse channels for a (1-Q)^2 weight.
    """
    psi_k = build_protocol_state(d, k)
    if scenario.mode == "dependent":
        return depolarize_joint(psi_k, scenario.Q)
    survive = (1.0 - scenario.Q) ** 2
    return depolarize_joint(psi_k, 1.0 - survive)


def zbasis_joint_distribution(rho: np.ndarray, d: int) -> np.ndarray:
    """(d, d) table of computational-basis outcome probabilities P(a, b)."""
    probs = np.real(np.diag(rho)).reshape(d, d)
    return probs
