"""Exact arithmetic in the residue ring Z_L.

Ambient dimensions in this package must satisfy number-theoretic side
conditions (odd, divisible by 3, optionally square-free), and the metaplectic
construction needs modular inverses. Everything here is exact integer math;
all dimensions in scope are far below 10**6, so trial division suffices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoAdmissibleLength, NotInvertible

ADMISSIBILITY_MODES = ("strict", "paper")


@dataclass(frozen=True)
class Residue:
    """An element of Z_L, stored as its canonical representative."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition, primes strictly increasing."""

    prime_powers: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.prime_powers:
            out *= p**e
        return out

    @property
    def is_square_free(self) -> bool:
        return all(e == 1 for _, e in self.prime_powers)

    def __str__(self) -> str:
        return " * ".join(
            str(p) if e == 1 else f"{p}^{e}" for p, e in self.prime_powers
        )


def mod_inverse(x: Residue) -> Residue:
    """Multiplicative inverse in Z_L; raises NotInvertible when gcd(x, L) != 1."""
    g = math.gcd(x.value, x.modulus)
    if g != 1:
        raise NotInvertible(
            f"{x.value} is not invertible mod {x.modulus} (gcd = {g})"
        )
    return Residue(pow(x.value, -1, x.modulus), x.modulus)


def factorize(n: int) -> Factorization:
    """Exact prime-power factorization by trial division (n >= 2)."""
    if n < 2:
        raise ValueError(f"factorize requires n >= 2, got {n}")
    factors = []
    rest = n
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(tuple(factors))


def is_admissible_length(n: int, mode: str = "paper") -> tuple[bool, Factorization]:
    """Whether n works as an ambient dimension for the star-window construction.

    strict: n odd, divisible by 3 and square-free. paper: square-freeness is
    waived (several published parameter sets use non-square-free lengths such
    as 45 = 3^2 * 5). Returns the verdict together with the factorization.
    """
    if mode not in ADMISSIBILITY_MODES:
        raise ValueError(f"mode must be one of {ADMISSIBILITY_MODES}, got {mode!r}")
    if n < 3:
        raise ValueError(f"admissibility is defined for n >= 3, got {n}")
    fac = factorize(n)
    ok = n % 2 == 1 and n % 3 == 0
    if mode == "strict":
        ok = ok and fac.is_square_free
    return ok, fac


def largest_admissible_at_most(n: int, mode: str = "paper") -> int:
    """Largest admissible L <= n; used to trim signals to a usable dimension."""
    if n < 3:
        raise NoAdmissibleLength(f"no admissible length at or below {n}")
    for candidate in range(n, 2, -1):
        ok, _ = is_admissible_length(candidate, mode)
        if ok:
            return candidate
    raise NoAdmissibleLength(f"no admissible length at or below {n}")
