"""Finite Gabor systems on Z_L: windows, analysis transform, adjoint.

Conventions (the repo's definition of record):

* Lattice: time step ``a`` and frequency step ``b`` must divide ``L``;
  ``N = L/a`` time shifts, ``M = L/b`` modulations, ``P = M*N`` frame
  elements. The system is frame-capable only when ``a*b < L``.
* Analysis coefficients of a signal ``x``::

      c[m, n] = sum_l x[l] * conj(g[(l - n*a) % L]) * exp(-2j*pi*m*b*l/L)

  with ``m in [0, M)``, ``n in [0, N)``. All index arithmetic is cyclic.
* Window families (all unit Euclidean norm):
  gaussian  periodized self-dual bell  ``sum_k exp(-pi*(l + k*L)**2 / L)``,
  hann      ``0.5 - 0.5*cos(2*pi*l/L)``,
  hamming   ``0.54 - 0.46*cos(2*pi*l/L)``.
* Positive-frequency mode keeps rows ``m = 0 .. floor(M/2)``. Rows with a
  discarded mirror row ``M - m`` carry weight ``sqrt(2)`` so that for real
  signals under real windows the coefficient energy equals the full
  transform's. The adjoint is the exact adjoint of this weighted submatrix,
  so the adjoint identity holds for every (complex) input.
* Flattened row order is n-major: ``flat = n * M_rows + m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, TooLarge

WINDOW_KINDS = ("gaussian", "hann", "hamming", "star", "custom")

# rolled windows are cached on the operator below this entry count;
# beyond it, transforms run in fixed-size row blocks
_ROLL_CACHE_MAX_ENTRIES = 4_000_000
_BLOCK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class GaborParams:
    """The lattice triple (L, a, b) with derived shift counts."""

    L: int
    a: int
    b: int

    def __post_init__(self):
        if self.L < 2 or self.a < 1 or self.b < 1:
            raise ValueError(f"need L >= 2 and a, b >= 1, got {self}")
        if self.L % self.a != 0:
            raise ValueError(f"a = {self.a} does not divide L = {self.L}")
        if self.L % self.b != 0:
            raise ValueError(f"b = {self.b} does not divide L = {self.L}")

    @property
    def N(self) -> int:
        return self.L // self.a

    @property
    def M(self) -> int:
        return self.L // self.b

    @property
    def P(self) -> int:
        return self.M * self.N

    @property
    def is_frame_capable(self) -> bool:
        return self.a * self.b < self.L


@dataclass(frozen=True)
class WindowVector:
    """A length-L window with its family tag; nonzero Euclidean norm."""

    samples: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}")
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("window must be a 1-d vector of length >= 2")
        if not np.linalg.norm(samples) > 0:
            raise ValueError("window must have nonzero norm")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class GaborCoefficients:
    """Analysis coefficients: M_rows x N complex matrix plus its context."""

    values: np.ndarray
    params: GaborParams
    positive_frequency_mode: bool = False

    def __post_init__(self):
        expected = (kept_rows(self.params.M, self.positive_frequency_mode),
                    self.params.N)
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != expected:
            raise DimensionMismatch(
                f"coefficient shape {values.shape} != expected {expected}"
            )
        object.__setattr__(self, "values", values)

    def flattened(self) -> np.ndarray:
        """n-major flat vector: index n * M_rows + m."""
        return self.values.T.reshape(-1)


def kept_rows(M: int, positive_frequency_mode: bool) -> int:
    return M // 2 + 1 if positive_frequency_mode else M


def _row_weights(M: int) -> np.ndarray:
    """Positive-frequency row weights: 1 for self-mirrored rows, sqrt(2) else."""
    m = np.arange(M // 2 + 1)
    w = np.full(m.size, np.sqrt(2.0))
    w[0] = 1.0
    if M % 2 == 0:
        w[-1] = 1.0
    return w


def make_window(kind: str, L: int) -> WindowVector:
    """Build a unit-norm periodic window of the named family."""
    if L < 2:
        raise ValueError(f"window length must be >= 2, got {L}")
    l = np.arange(L)
    if kind == "gaussian":
        # periodized bell; terms beyond |k| = 3 are below double precision
        g = np.zeros(L)
        for k in range(-3, 4):
            g += np.exp(-np.pi * (l + k * L) ** 2 / L)
    elif kind == "hann":
        g = 0.5 - 0.5 * np.cos(2 * np.pi * l / L)
    elif kind == "hamming":
        g = 0.54 - 0.46 * np.cos(2 * np.pi * l / L)
    else:
        raise ValueError(f"make_window builds gaussian/hann/hamming, not {kind!r}")
    g = g / np.linalg.norm(g)
    return WindowVector(g.astype(np.complex128), kind)


@dataclass(frozen=True)
class AnalysisOperator:
    """The Gabor analysis map for a fixed window and lattice.

    Immutable after construction; `dgt` / `dgt_adjoint` are reentrant, so one
    operator may be shared freely across threads.
    """

    window: WindowVector
    params: GaborParams
    positive_frequency_mode: bool = False
    _rolled: np.ndarray | None = field(default=None, repr=False, compare=False)
    _norm_sq: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.window) != self.params.L:
            raise DimensionMismatch(
                f"window length {len(self.window)} != L = {self.params.L}"
            )
        if self.params.N * self.params.L <= _ROLL_CACHE_MAX_ENTRIES:
            object.__setattr__(self, "_rolled", self._shift_block(0, self.params.N))

    @property
    def n_rows(self) -> int:
        """Total coefficient count = rows of the operator as a matrix."""
        return kept_rows(self.params.M, self.positive_frequency_mode) * self.params.N

    def _shift_block(self, n0: int, n1: int) -> np.ndarray:
        """Rows n0..n1-1 of the shifted-window table g[(l - n*a) % L]."""
        if self._rolled is not None:
            return self._rolled[n0:n1]
        p = self.params
        shifts = (np.arange(p.L)[None, :]
                  - np.arange(n0, n1)[:, None] * p.a) % p.L
        return self.window.samples[shifts]

    def _block_size(self) -> int:
        if self._rolled is not None:
            return self.params.N
        return max(1, _BLOCK_ENTRIES // self.params.L)


def dgt(op: AnalysisOperator, x: np.ndarray) -> GaborCoefficients:
    """Analysis transform of `x`; see the module docstring for the formula."""
    return GaborCoefficients(
        dgt_values(op, x), op.params, op.positive_frequency_mode
    )


def dgt_values(op: AnalysisOperator, x: np.ndarray) -> np.ndarray:
    """Raw coefficient matrix (M_rows x N) without the wrapper object."""
    p = op.params
    x = np.asarray(x)
    if x.shape != (p.L,):
        raise DimensionMismatch(f"signal shape {x.shape} != ({p.L},)")
    out = np.empty((p.N, p.M), dtype=np.complex128)
    step = op._block_size()
    for n0 in range(0, p.N, step):
        n1 = min(n0 + step, p.N)
        work = op._shift_block(n0, n1).conj() * x[None, :]
        out[n0:n1] = np.fft.fft(work, axis=1)[:, :: p.b]
    full = out.T
    if not op.positive_frequency_mode:
        return full
    keep = kept_rows(p.M, True)
    return full[:keep, :] * _row_weights(p.M)[:, None]


def dgt_adjoint(op: AnalysisOperator, c) -> np.ndarray:
    """Exact conjugate-transpose action: <dgt(x), c> == <x, dgt_adjoint(c)>."""
    values = c.values if isinstance(c, GaborCoefficients) else np.asarray(c)
    p = op.params
    keep = kept_rows(p.M, op.positive_frequency_mode)
    if values.shape != (keep, p.N):
        raise DimensionMismatch(
            f"coefficient shape {values.shape} != ({keep}, {p.N})"
        )
    if op.positive_frequency_mode:
        full = np.zeros((p.M, p.N), dtype=np.complex128)
        full[:keep, :] = values * _row_weights(p.M)[:, None]
    else:
        full = np.asarray(values, dtype=np.complex128)
    acc = np.zeros(p.L, dtype=np.complex128)
    step = op._block_size()
    for n0 in range(0, p.N, step):
        n1 = min(n0 + step, p.N)
        spread = np.zeros((n1 - n0, p.L), dtype=np.complex128)
        spread[:, :: p.b] = full[:, n0:n1].T
        synth = np.fft.ifft(spread, axis=1) * p.L
        acc += np.sum(synth * op._shift_block(n0, n1), axis=0)
    return acc


def frame_matrix(op: AnalysisOperator) -> np.ndarray:
    """Materialize the operator as an (n_rows x L) matrix.

    Rows are the conjugated (and, in positive-frequency mode, weighted) frame
    elements in n-major order, so ``frame_matrix(op) @ x`` equals the
    flattened `dgt` output. Guarded against large instantiations.
    """
    if op.n_rows * op.params.L > 10_000_000:
        raise TooLarge(
            f"frame matrix would hold {op.n_rows * op.params.L} entries"
        )
    return frame_rows(op, np.arange(op.n_rows))


def frame_rows(op: AnalysisOperator, flat_indices) -> np.ndarray:
    """Selected analysis-matrix rows, built directly from the window.

    Lets subset searches over huge frames avoid materializing all of
    `frame_matrix`. `flat_indices` follow the n-major order.
    """
    p = op.params
    keep = kept_rows(p.M, op.positive_frequency_mode)
    flat = np.asarray(flat_indices, dtype=int)
    if flat.ndim != 1:
        raise DimensionMismatch("flat_indices must be 1-d")
    if flat.size and (flat.min() < 0 or flat.max() >= keep * p.N):
        raise DimensionMismatch(f"row index out of range [0, {keep * p.N})")
    n = flat // keep
    m = flat % keep
    l = np.arange(p.L)
    g = op.window.samples
    rows = g[(l[None, :] - n[:, None] * p.a) % p.L].conj() * np.exp(
        -2j * np.pi * np.outer(m * p.b, l) / p.L
    )
    if op.positive_frequency_mode:
        rows *= _row_weights(p.M)[m][:, None]
    return rows
