"""Metaplectic unitaries over Z_L and star-window extraction.

A 2x2 matrix G = (alpha, beta; gamma, delta) over Z_L with det = 1 and
invertible beta corresponds to the L x L unitary

    U_G[u, v] = exp(i*theta)/sqrt(L) * tau**(beta_inv*(alpha*v**2 - 2*u*v + delta*u**2))

with tau = -exp(i*pi/L) and the exponent reduced mod 2L (tau has order 2L;
for odd L it already has order L, which removes the beta_inv branch
ambiguity). The matrix (0, -1; 1, -1) has order 3 in SL(2, Z_L), so its
unitary satisfies U**3 = c*I for a unit scalar c; the *star window* is a
unit-norm eigenvector of that unitary, extracted via the order-3 spectral
projector (1/3)(I + conj(lam)*U + conj(lam)**2*U**2) applied to a seeded
random vector. Power iteration is useless here: every eigenvalue of a
unitary matrix has modulus 1.

Matrix-free application uses the exact chirp-DFT-chirp factorization

    (U_G x)[u] = s * tau**(binv*delta*u**2) * FFT(tau**(binv*alpha*v**2) * x)[(binv*u) % L]

(s = exp(i*theta)/sqrt(L)), valid because tau**(-2*binv*u*v) equals the DFT
kernel exp(-2j*pi*binv*u*v/L). This makes one application O(L log L), so
star windows are cheap even at L in the tens of thousands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigensolveFailed, NotAdmissible, TooLarge
from .gabor import WindowVector
from .modring import Residue, is_admissible_length, mod_inverse

_DENSE_MAX_L = 2000
_RESIDUAL_TOL = 1e-8
_PROJECTION_MIN_NORM = 1e-6
_MAX_RESTARTS = 3


@dataclass(frozen=True)
class SymplecticMatrix:
    """Element of SL(2, Z_L); determinant congruent to 1 is enforced."""

    alpha: Residue
    beta: Residue
    gamma: Residue
    delta: Residue

    def __post_init__(self):
        mods = {r.modulus for r in (self.alpha, self.beta, self.gamma, self.delta)}
        if len(mods) != 1:
            raise ValueError(f"mixed moduli {mods}")
        det = (self.alpha.value * self.delta.value
               - self.beta.value * self.gamma.value) % self.modulus
        if det != 1:
            raise ValueError(f"determinant {det} != 1 (mod {self.modulus})")

    @property
    def modulus(self) -> int:
        return self.alpha.modulus


@dataclass(frozen=True)
class MetaplecticOperator:
    """Dense L x L unitary for a symplectic matrix, with its phase."""

    entries: np.ndarray
    theta: float
    source: SymplecticMatrix


@dataclass(frozen=True)
class StarWindow:
    """Certified unit-norm eigenvector of the order-3 unitary."""

    vector: WindowVector
    eigenvalue: complex
    residual: float


def zauner_matrix(L: int) -> SymplecticMatrix:
    """The order-3 symplectic matrix (0, L-1; 1, L-1) over Z_L."""
    if L < 3:
        raise ValueError(f"need L >= 3, got {L}")
    return SymplecticMatrix(
        Residue(0, L), Residue(L - 1, L), Residue(1, L), Residue(L - 1, L)
    )


def _tau_powers(L: int) -> np.ndarray:
    """tau**k for k = 0..2L-1 with exact integer phase reduction."""
    k = np.arange(2 * L, dtype=np.int64)
    return np.exp(1j * np.pi * ((k * (L + 1)) % (2 * L)) / L)


def _chirp(coef: int, L: int) -> np.ndarray:
    """tau**((coef * n**2) mod 2L) for n = 0..L-1."""
    n = np.arange(L, dtype=np.int64)
    expo = (coef % (2 * L)) * ((n * n) % (2 * L)) % (2 * L)
    return _tau_powers(L)[expo]


def metaplectic(G: SymplecticMatrix, theta: float = 0.0) -> MetaplecticOperator:
    """Materialize U_G densely (guarded to L <= 2000); entries all 1/sqrt(L)."""
    L = G.modulus
    if L > _DENSE_MAX_L:
        raise TooLarge(
            f"dense metaplectic matrix limited to L <= {_DENSE_MAX_L}, got {L}"
        )
    binv = mod_inverse(G.beta).value
    u = np.arange(L, dtype=np.int64)
    v = np.arange(L, dtype=np.int64)
    quad = (G.alpha.value * v * v)[None, :] - 2 * np.outer(u, v) \
        + (G.delta.value * u * u)[:, None]
    expo = (binv * (quad % (2 * L))) % (2 * L)
    entries = np.exp(1j * theta) / np.sqrt(L) * _tau_powers(L)[expo]
    return MetaplecticOperator(entries, theta, G)


def metaplectic_apply(G: SymplecticMatrix, x: np.ndarray,
                      theta: float = 0.0) -> np.ndarray:
    """Apply U_G to a vector in O(L log L) via the chirp-DFT-chirp split."""
    L = G.modulus
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (L,):
        raise ValueError(f"vector shape {x.shape} != ({L},)")
    binv = mod_inverse(G.beta).value
    pre = _chirp(binv * G.alpha.value, L)
    post = _chirp(binv * G.delta.value, L)
    spectrum = np.fft.fft(pre * x)
    perm = (binv * np.arange(L, dtype=np.int64)) % L
    return np.exp(1j * theta) / np.sqrt(L) * post * spectrum[perm]


def _unit_scalar_of_cube(G: SymplecticMatrix, theta: float) -> complex:
    """c with U_G**3 = c*I, read off column 0 of the cubed operator."""
    L = G.modulus
    e0 = np.zeros(L, dtype=np.complex128)
    e0[0] = 1.0
    col = metaplectic_apply(
        G, metaplectic_apply(G, metaplectic_apply(G, e0, theta), theta), theta
    )
    c = col[0]
    return c / abs(c)


def star_window(L: int, theta: float = 0.0, seed: int = 0) -> StarWindow:
    """Deterministic certified eigenvector of the order-3 unitary at size L.

    Requires a paper-admissible L (odd, divisible by 3). The three candidate
    eigenvalues are the cube roots of c; projections of a seeded random start
    vector are tried in a fixed branch order and the first one that meets the
    residual certificate is returned. Dense eigendecomposition is the
    fallback for small L.
    """
    ok, _ = is_admissible_length(L, "paper")
    if not ok:
        raise NotAdmissible(
            f"L = {L} is not admissible (needs odd L divisible by 3)"
        )
    G = zauner_matrix(L)
    c = _unit_scalar_of_cube(G, theta)
    lams = [
        np.exp(1j * (np.angle(c) + 2 * np.pi * j) / 3) for j in range(3)
    ]
    rng = np.random.default_rng(seed)
    for _ in range(_MAX_RESTARTS):
        start = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        start /= np.linalg.norm(start)
        u1 = metaplectic_apply(G, start, theta)
        u2 = metaplectic_apply(G, u1, theta)
        for lam in lams:
            w = (start + np.conj(lam) * u1 + np.conj(lam) ** 2 * u2) / 3.0
            norm = np.linalg.norm(w)
            if norm <= _PROJECTION_MIN_NORM:
                continue
            g = w / norm
            ug = metaplectic_apply(G, g, theta)
            rayleigh = np.vdot(g, ug)
            rayleigh /= abs(rayleigh)
            residual = float(np.linalg.norm(ug - rayleigh * g))
            if residual <= _RESIDUAL_TOL:
                return StarWindow(
                    WindowVector(g, "star"), complex(rayleigh), residual
                )
    if L <= _DENSE_MAX_L:
        op = metaplectic(G, theta)
        eigvals, eigvecs = np.linalg.eig(op.entries)
        for idx in range(L):
            g = eigvecs[:, idx] / np.linalg.norm(eigvecs[:, idx])
            lam = eigvals[idx] / abs(eigvals[idx])
            residual = float(np.linalg.norm(op.entries @ g - lam * g))
            if residual <= _RESIDUAL_TOL:
                return StarWindow(WindowVector(g, "star"), complex(lam), residual)
    raise EigensolveFailed(
        f"no eigenvector met residual {_RESIDUAL_TOL} at L = {L}"
    )
