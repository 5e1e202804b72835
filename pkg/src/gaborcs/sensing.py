"""Measurement model: randomly subsampled identity plus Gaussian noise.

An operator is K distinct rows of the L x L identity; applying it picks the
sampled entries in index order, the adjoint scatters them back. The rows are
orthonormal, so A A^T = I_K and the operator norm is exactly 1 — properties
the solver exploits for exact projection onto the measurement ball.

Everything is seeded and reconstructible: an operator is a pure function of
(L, K, seed), and seeds may be sequences of integers so that experiment
sweeps can key independent streams by (master_seed, K, repetition).
The pipeline is real-valued end to end; complex inputs are rejected here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimensions, DimensionMismatch

Seed = int | tuple[int, ...]


def seeded_rng(seed: Seed) -> np.random.Generator:
    entropy = list(seed) if isinstance(seed, tuple) else seed
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _require_real(x: np.ndarray, what: str) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        raise ValueError(f"{what} must be real-valued (pipeline is real)")
    return np.asarray(x, dtype=np.float64)


@dataclass(frozen=True)
class MeasurementOperator:
    """K-row subsampled identity with its stored index set."""

    L: int
    K: int
    indices: np.ndarray
    seed: Seed

    def __post_init__(self):
        if not 1 <= self.K <= self.L:
            raise BadDimensions(f"need 1 <= K <= L, got K={self.K}, L={self.L}")
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.shape != (self.K,):
            raise BadDimensions(f"indices shape {idx.shape} != ({self.K},)")
        if np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= self.L:
            raise BadDimensions("indices must be distinct, sorted, in [0, L)")
        object.__setattr__(self, "indices", idx)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = _require_real(x, "signal")
        if x.shape != (self.L,):
            raise DimensionMismatch(f"signal shape {x.shape} != ({self.L},)")
        return x[self.indices]

    def adjoint_apply(self, y: np.ndarray) -> np.ndarray:
        y = _require_real(y, "measurements")
        if y.shape != (self.K,):
            raise DimensionMismatch(f"measurement shape {y.shape} != ({self.K},)")
        out = np.zeros(self.L)
        out[self.indices] = y
        return out

    def as_matrix(self) -> np.ndarray:
        A = np.zeros((self.K, self.L))
        A[np.arange(self.K), self.indices] = 1.0
        return A


@dataclass(frozen=True)
class NoiseModel:
    """I.i.d. zero-mean Gaussian noise of a given standard deviation."""

    sigma: float
    seed: Seed = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def sample_operator(L: int, K: int, seed: Seed = 0) -> MeasurementOperator:
    """Draw K distinct sample positions uniformly; deterministic per seed."""
    if not 1 <= K <= L:
        raise BadDimensions(f"need 1 <= K <= L, got K={K}, L={L}")
    rng = seeded_rng(seed)
    indices = np.sort(rng.choice(L, size=K, replace=False))
    return MeasurementOperator(L, K, indices, seed)


def apply(A: MeasurementOperator, x: np.ndarray) -> np.ndarray:
    return A.apply(x)


def adjoint_apply(A: MeasurementOperator, y: np.ndarray) -> np.ndarray:
    return A.adjoint_apply(y)


def corrupt(y: np.ndarray, noise: NoiseModel,
            eta_rule: str = "expected") -> tuple[np.ndarray, float]:
    """Add Gaussian noise; return the noisy vector and a constraint radius.

    eta_rule "expected" returns sigma * sqrt(K), the expected-noise-norm
    surrogate used throughout the experiments; "exact" returns the realized
    ||e||_2 (an oracle quantity, for ablations only).
    """
    y = _require_real(y, "measurements")
    if eta_rule not in ("expected", "exact"):
        raise ValueError(f"eta_rule must be 'expected' or 'exact', got {eta_rule!r}")
    e = noise.sigma * seeded_rng(noise.seed).standard_normal(y.size)
    eta = noise.sigma * np.sqrt(y.size) if eta_rule == "expected" \
        else float(np.linalg.norm(e))
    return y + e, float(eta)
