"""Spark certification for small frames and witness search for larger ones.

The spark of a set of vectors is the size of its smallest linearly dependent
subset; a frame of P vectors in C^L is full spark when that size is L + 1
(equivalently, every L of its vectors form a basis). Exact computation is a
combinatorial enumeration and is only attempted at desk scale; beyond the
guard, randomized subset sampling can certify an upper bound (a witness) but
a failed search proves nothing and is reported as inconclusive.

Linear dependence is decided numerically: a subset is dependent when the
smallest singular value of its row matrix is at most `rank_tolerance` times
the largest. Spark is discontinuous, so this explicit convention is part of
every report and every witness re-verification.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import TooLarge
from .gabor import AnalysisOperator, frame_rows

DEFAULT_RANK_TOLERANCE = 1e-9

_EXHAUSTIVE_GUARD = 1_000_000


@dataclass(frozen=True)
class SparkReport:
    """Outcome of a spark computation or witness search."""

    frame_size: int
    dimension: int
    spark: int | None                 # exact value; None when not certified
    upper_bound: int | None           # from a witness (spark <= upper_bound)
    witness: tuple[int, ...] | None   # row indices of a dependent subset
    exhaustive: bool
    rank_tolerance: float

    @property
    def is_full_spark(self) -> bool | None:
        if self.spark is not None:
            return self.spark == self.dimension + 1
        if self.upper_bound is not None and self.upper_bound <= self.dimension:
            return False
        return None

    def to_text(self) -> str:
        lines = [
            f"frame size     : {self.frame_size}",
            f"dimension      : {self.dimension}",
        ]
        if self.spark is not None:
            lines.append(f"spark          : {self.spark} (exact)")
        elif self.upper_bound is not None:
            lines.append(f"spark          : <= {self.upper_bound} (witness found)")
        else:
            lines.append("spark          : unknown (search inconclusive)")
        if self.witness is not None:
            lines.append(f"witness rows   : {list(self.witness)}")
        lines.append(f"exhaustive     : {self.exhaustive}")
        lines.append(f"rank tolerance : {self.rank_tolerance}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "frame_size": self.frame_size,
                "dimension": self.dimension,
                "spark": self.spark,
                "upper_bound": self.upper_bound,
                "witness": list(self.witness) if self.witness is not None else None,
                "exhaustive": self.exhaustive,
                "rank_tolerance": self.rank_tolerance,
            },
            indent=2,
        )


def subset_is_dependent(rows: np.ndarray, rank_tolerance: float) -> bool:
    """Numerical-rank test: smallest singular value <= tol * largest."""
    s = np.linalg.svd(np.atleast_2d(rows), compute_uv=False)
    return bool(s[-1] <= rank_tolerance * s[0])


def spark_exhaustive(frame: np.ndarray,
                     rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> SparkReport:
    """Exact spark of a P x L frame by subset enumeration in increasing size.

    Guarded: refuses when binomial(P, min(L, P)) exceeds 10**6. A frame with
    a zero row is caught at subset size 1 (spark 1). When no subset of size
    <= min(L, P) is dependent, the spark is min(L, P) + 1 by the full-spark
    convention.
    """
    frame = np.atleast_2d(np.asarray(frame))
    P, L = frame.shape
    k_max = min(L, P)
    if comb(P, k_max) > _EXHAUSTIVE_GUARD:
        raise TooLarge(
            f"C({P},{k_max}) = {comb(P, k_max)} subsets exceeds the "
            f"exhaustive guard {_EXHAUSTIVE_GUARD}"
        )
    for k in range(1, k_max + 1):
        for subset in combinations(range(P), k):
            if subset_is_dependent(frame[list(subset)], rank_tolerance):
                return SparkReport(
                    frame_size=P, dimension=L, spark=k, upper_bound=k,
                    witness=subset, exhaustive=True,
                    rank_tolerance=rank_tolerance,
                )
    return SparkReport(
        frame_size=P, dimension=L, spark=k_max + 1, upper_bound=None,
        witness=None, exhaustive=True, rank_tolerance=rank_tolerance,
    )


def deficiency_witness_search(frame, trials: int, subset_size: int,
                              seed: int = 0,
                              rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
                              ) -> SparkReport:
    """Randomized search for a dependent subset of the given size.

    `frame` may be a P x L array or an AnalysisOperator (rows generated on
    demand, so huge frames are never materialized). A hit certifies
    spark <= subset_size; no hit is inconclusive, never a negative result.
    """
    if isinstance(frame, AnalysisOperator):
        P = frame.n_rows
        L = frame.params.L
        fetch = lambda idx: frame_rows(frame, idx)
    else:
        frame = np.atleast_2d(np.asarray(frame))
        P, L = frame.shape
        fetch = lambda idx: frame[idx]
    if not 1 <= subset_size <= min(L, P):
        raise ValueError(
            f"subset_size must be in [1, {min(L, P)}], got {subset_size}"
        )
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        idx = np.sort(rng.choice(P, size=subset_size, replace=False))
        if subset_is_dependent(fetch(idx), rank_tolerance):
            return SparkReport(
                frame_size=P, dimension=L, spark=None,
                upper_bound=subset_size, witness=tuple(int(i) for i in idx),
                exhaustive=False, rank_tolerance=rank_tolerance,
            )
    return SparkReport(
        frame_size=P, dimension=L, spark=None, upper_bound=None,
        witness=None, exhaustive=False, rank_tolerance=rank_tolerance,
    )
