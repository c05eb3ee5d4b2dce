"""Small-instance numerical certification of the security proof's core.

These oracles materialize, at desk scale, the objects the min-entropy
argument reasons about: a superposition over a shell of words around a
center (amplitudes beta, non-orthogonal environment vectors), its per-key
phase-encoded pure states sigma_k, and the dephased mixture chi.  They then
certify numerically that

* |J| * chi dominates every sigma_k block (the Cauchy-Schwarz step),
* the canonical dual witness (|J|/d^n) * chi certifies the min-entropy
  lower bound n*log2(d) - log2|J|,
* the pretty-good-measurement guessing probability never contradicts any
  dual lower bound, and
* classically post-processed epsilon-close states stay outcome-wise close
  except on an outcome set of small probability.

Environment vectors are deliberately random (not orthogonal): the operator
dominance makes no orthogonality assumption, and non-orthogonal families
are the stress test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CertificationError, ResourceLimitError
from .words import Word, hamming_distance

# 100x the accumulated round-off expected from double-precision
# eigendecompositions at the guarded dimensions (<= 256).
DOMINANCE_EIG_TOL = 1e-9
WITNESS_EIG_TOL = 1e-10

_MAX_INSTANCE_DIM = 256


# --- density-matrix helpers ------------------------------------------------


def validate_density_matrix(rho: np.ndarray, eig_tol: float = 1e-10) -> None:
    """Raise ValueError unless rho is Hermitian (1e-12), unit-trace (1e-12),
    and PSD up to -eig_tol."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        raise ValueError("matrix is not Hermitian to 1e-12")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-12:
        raise ValueError(f"trace is {trace}, not 1 to 1e-12")
    low = float(np.linalg.eigvalsh(rho).min())
    if low < -eig_tol:
        raise ValueError(f"minimum eigenvalue {low} below -{eig_tol}")


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state from a complex Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    # Fix the QR phase ambiguity so the draw is a deterministic function of rng.
    return q * (np.diag(r) / np.abs(np.diag(r)))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) * trace norm of a - b for Hermitian a, b."""
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())


@dataclass(frozen=True, eq=False)
class CqEnsemble:
    """Classical labels with probabilities and per-label density matrices."""

    labels: tuple
    probs: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if not len(self.labels) == len(self.probs) == len(self.states):
            raise ValueError("labels, probs, states must have equal lengths")
        if any(p < 0.0 for p in self.probs):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")
        dims = {s.shape for s in self.states}
        if len(dims) != 1:
            raise ValueError(f"states have mixed shapes: {dims}")

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def validate_states(self) -> None:
        for label, state in zip(self.labels, self.states):
            try:
                validate_density_matrix(state)
            except ValueError as exc:
                raise ValueError(f"state for label {label!r}: {exc}") from exc

    def average_state(self) -> np.ndarray:
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for p, state in zip(self.probs, self.states):
            acc += p * state
        return acc


# --- ideal-instance construction -------------------------------------------


def phase_dot(b: Sequence[int], k: Sequence[int], d: int) -> int:
    """Integer dot product of two digit strings, mapping the vacuum sentinel
    d to the digit 0 (phase encodings leave a vacuum untouched)."""
    return sum((0 if bi == d else bi) * ki for bi, ki in zip(b, k))


def _word_index(symbols: Sequence[int], d: int) -> int:
    idx = 0
    for s in symbols:
        idx = idx * d + s
    return idx


@dataclass(frozen=True, eq=False)
class IdealStateInstance:
    """A concrete shell-supported superposition with all derived operators.

    ``words`` is the shell J = {b : |distance(center, b) - delta_obs| <=
    delta}; ``betas`` its unit-norm amplitudes; ``env_vectors`` one unit
    (not necessarily orthogonal) environment vector per word.  For each key
    k the block ``sigma_blocks[index(k)]`` is the pure state obtained by
    phase-encoding k, and ``chi`` is the dephased mixture over J shared by
    all key blocks.
    """

    n: int
    d: int
    delta_obs: float
    delta: float
    env_dim: int
    seed: int
    center: Word
    words: tuple[Word, ...]
    betas: np.ndarray
    env_vectors: np.ndarray
    chi: np.ndarray
    sigma_blocks: tuple[np.ndarray, ...]

    @property
    def shell_size(self) -> int:
        return len(self.words)

    def keys(self) -> list[tuple[int, ...]]:
        return [k for k in itertools.product(range(self.d), repeat=self.n)]

    def canonical_witness(self) -> np.ndarray:
        """(|J| / d^n) * chi, the dual witness certifying the entropy bound."""
        return (self.shell_size / self.d**self.n) * self.chi

    def ensemble(self) -> CqEnsemble:
        """The per-key blocks as a uniform classical-quantum ensemble."""
        count = self.d**self.n
        return CqEnsemble(
            labels=tuple(self.keys()),
            probs=tuple(1.0 / count for _ in range(count)),
            states=self.sigma_blocks,
        )


def build_ideal_instance(
    n: int,
    d: int,
    delta_obs: float,
    delta: float,
    env_dim: int = 1,
    seed: int = 0,
) -> IdealStateInstance:
    """Enumerate the shell exactly and draw random amplitudes/environments."""
    if n < 1 or d < 2 or env_dim < 1:
        raise ValueError(f"need n >= 1, d >= 2, env_dim >= 1; got {n}, {d}, {env_dim}")
    dim = d**n * env_dim
    if dim > _MAX_INSTANCE_DIM:
        raise ResourceLimitError(f"instance dimension {dim} exceeds {_MAX_INSTANCE_DIM}")
    rng = np.random.default_rng(seed)
    center = Word(tuple(int(s) for s in rng.integers(0, d, size=n)), d)
    obs, tol = Fraction(delta_obs), Fraction(delta)
    shell = [
        Word(sym, d)
        for sym in itertools.product(range(d), repeat=n)
        if abs(hamming_distance(center, Word(sym, d)) - obs) <= tol
    ]
    if not shell:
        raise ValueError(
            f"empty shell: no word at distance {delta_obs} +/- {delta} from the center"
        )
    betas = rng.normal(size=len(shell)) + 1j * rng.normal(size=len(shell))
    betas /= np.linalg.norm(betas)
    env = np.vstack([random_unit_vector(env_dim, rng) for _ in shell])

    basis = np.zeros((len(shell), dim), dtype=complex)
    for row, (word, e) in enumerate(zip(shell, env)):
        offset = _word_index(word.symbols, d) * env_dim
        basis[row, offset : offset + env_dim] = e

    chi = np.zeros((dim, dim), dtype=complex)
    for beta, row in zip(betas, basis):
        chi += abs(beta) ** 2 * np.outer(row, row.conj())

    blocks = []
    for key in itertools.product(range(d), repeat=n):
        phases = np.array(
            [np.exp(2j * math.pi * phase_dot(w.symbols, key, d) / d) for w in shell]
        )
        vec = (betas * phases) @ basis
        blocks.append(np.outer(vec, vec.conj()))

    return IdealStateInstance(
        n=n,
        d=d,
        delta_obs=delta_obs,
        delta=delta,
        env_dim=env_dim,
        seed=seed,
        center=center,
        words=tuple(shell),
        betas=betas,
        env_vectors=env,
        chi=chi,
        sigma_blocks=tuple(blocks),
    )


# --- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    min_eigenvalue: float
    worst_key: tuple[int, ...]
    tolerance: float
    passed: bool


def verify_operator_dominance(
    inst: IdealStateInstance, tol: float = DOMINANCE_EIG_TOL
) -> DominanceReport:
    """Check |J| * chi - sigma_k >= 0 for every key block by eigendecomposition."""
    scaled = inst.shell_size * inst.chi
    worst = math.inf
    worst_key: tuple[int, ...] = ()
    for key, block in zip(inst.keys(), inst.sigma_blocks):
        low = float(np.linalg.eigvalsh(scaled - block).min())
        if low < worst:
            worst, worst_key = low, key
    return DominanceReport(
        min_eigenvalue=worst, worst_key=worst_key, tolerance=tol, passed=worst >= -tol
    )


def min_entropy_dual_bound(
    ens: CqEnsemble, witness: np.ndarray, tol: float = WITNESS_EIG_TOL
) -> float:
    """Certified min-entropy lower bound from a feasible dual witness.

    A PSD operator Y with Y >= p_k * rho_k for every label caps the optimal
    guessing probability at tr(Y), hence min-entropy >= -log2 tr(Y).  Raises
    :class:`CertificationError` naming the first violating label.
    """
    witness = np.asarray(witness)
    if not np.allclose(witness, witness.conj().T, atol=1e-12):
        raise ValueError("witness must be Hermitian")
    if float(np.linalg.eigvalsh(witness).min()) < -tol:
        raise ValueError("witness must be PSD")
    for label, p, rho in zip(ens.labels, ens.probs, ens.states):
        low = float(np.linalg.eigvalsh(witness - p * rho).min())
        if low < -tol:
            raise CertificationError(
                f"witness infeasible for label {label!r}: min eigenvalue {low}"
            )
    return -math.log2(float(np.trace(witness).real))


def pgm_guess_probability(ens: CqEnsemble) -> float:
    """Guessing probability of the pretty good measurement.

    With S the ensemble average, the PGM element for label k is
    S^{-1/2} p_k rho_k S^{-1/2} (pseudo-inverse on the support), giving
    p = sum_k p_k tr(S^{-1/2} p_k rho_k S^{-1/2} rho_k).  It lower-bounds
    the optimal guessing probability, so -log2(p) upper-bounds every dual
    witness's min-entropy certificate.
    """
    avg = ens.average_state()
    vals, vecs = np.linalg.eigh(avg)
    cutoff = float(vals.max()) * 1e-12
    inv_sqrt_vals = np.where(vals > cutoff, 1.0 / np.sqrt(np.where(vals > cutoff, vals, 1.0)), 0.0)
    inv_sqrt = (vecs * inv_sqrt_vals) @ vecs.conj().T
    total = 0.0
    for p, rho in zip(ens.probs, ens.states):
        element = inv_sqrt @ (p * rho) @ inv_sqrt
        total += p * float(np.trace(element @ rho).real)
    return total


def search_scaled_counterexample(
    n: int = 2,
    d: int = 2,
    delta_obs: float = 0.0,
    delta: float = 0.5,
    env_dim: int = 1,
    shrink: float = 0.5,
    seeds: Sequence[int] = range(50),
) -> int | None:
    """Seed of an instance where (|J| - shrink) * chi fails to dominate some
    key block, or None.  Documents that the |J| constant has no uniform slack.
    """
    for seed in seeds:
        inst = build_ideal_instance(n, d, delta_obs, delta, env_dim, seed)
        if inst.shell_size < 2:
            continue
        scaled = (inst.shell_size - shrink) * inst.chi
        for block in inst.sigma_blocks:
            if float(np.linalg.eigvalsh(scaled - block).min()) < -1e-6:
                return seed
    return None


# --- classical post-processing closeness ------------------------------------


def measured_conditionals(
    rho: np.ndarray, unitary: np.ndarray, outcome_dim: int
) -> tuple[list[float], list[np.ndarray]]:
    """Outcome probabilities and conditional states after rotating by
    ``unitary`` and measuring the first ``outcome_dim``-sized factor."""
    dim = rho.shape[0]
    if dim % outcome_dim:
        raise ValueError(f"outcome_dim {outcome_dim} must divide dim {dim}")
    rest = dim // outcome_dim
    rotated = unitary @ rho @ unitary.conj().T
    blocks = rotated.reshape(outcome_dim, rest, outcome_dim, rest)
    probs, states = [], []
    for x in range(outcome_dim):
        block = blocks[x, :, x, :]
        p = float(np.trace(block).real)
        probs.append(p)
        states.append(block / p if p > 1e-15 else np.zeros_like(block))
    return probs, states


@dataclass(frozen=True)
class Lemma1Report:
    trials: int
    worst_violation_mass: float
    mean_violation_mass: float
    distance_threshold: float
    mass_bound: float
    passed: bool


def lemma1_empirical_check(
    eps: float,
    dim: int,
    trials: int,
    seed: int = 0,
    outcome_dim: int = 2,
) -> Lemma1Report:
    """Empirically check outcome-wise closeness of post-processed states.

    Each trial draws rho and sigma = (1-eps)*rho + eps*tau (trace distance
    at most eps by construction, no rejection loop needed), pushes both
    through a random measure-first-subsystem map, and weighs the outcomes x
    whose conditional states are farther apart than eps^(1/3) + 2*eps.  That
    outcome mass must never exceed 2*eps^(1/3).
    """
    if not 0.0 <= eps <= 0.1:
        raise ValueError(f"eps must lie in [0, 0.1], got {eps}")
    if not 2 <= dim <= 8:
        raise ValueError(f"dim must lie in 2..8, got {dim}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    threshold = eps ** (1.0 / 3.0) + 2.0 * eps
    bound = 2.0 * eps ** (1.0 / 3.0)
    worst = 0.0
    total = 0.0
    for _ in range(trials):
        rho = random_density_matrix(dim, rng)
        tau = random_density_matrix(dim, rng)
        sigma = (1.0 - eps) * rho + eps * tau
        unitary = random_unitary(dim, rng)
        probs_r, conds_r = measured_conditionals(rho, unitary, outcome_dim)
        _, conds_s = measured_conditionals(sigma, unitary, outcome_dim)
        mass = 0.0
        for p, cr, cs in zip(probs_r, conds_r, conds_s):
            if p <= 1e-15:
                continue
            if trace_distance(cr, cs) > threshold:
                mass += p
        worst = max(worst, mass)
        total += mass
    return Lemma1Report(
        trials=trials,
        worst_violation_mass=worst,
        mean_violation_mass=total / trials,
        distance_threshold=threshold,
        mass_bound=bound,
        passed=worst <= bound,
    )
