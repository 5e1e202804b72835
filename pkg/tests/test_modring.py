import math

import pytest

from gaborcs.errors import NoAdmissibleLength, NotInvertible
from gaborcs.modring import (Factorization, Residue, factorize,
                             is_admissible_length,
                             largest_admissible_at_most, mod_inverse)


def test_mod_inverse_minus_one():
    assert mod_inverse(Residue(32, 33)).value == 32


def test_mod_inverse_extended_euclid_value():
    # 5 * 20 = 100 = 3*33 + 1
    inv = mod_inverse(Residue(5, 33))
    assert inv.value == 20
    assert (5 * inv.value) % 33 == 1


def test_mod_inverse_not_invertible():
    with pytest.raises(NotInvertible):
        mod_inverse(Residue(3, 33))


def test_mod_inverse_involution():
    for L in (7, 33, 45, 101):
        for v in range(1, L):
            if math.gcd(v, L) != 1:
                continue
            x = Residue(v, L)
            assert mod_inverse(mod_inverse(x)) == x


def test_residue_canonicalizes_and_validates():
    assert Residue(-1, 33).value == 32
    with pytest.raises(ValueError):
        Residue(0, 0)


def test_factorize_small():
    assert factorize(33).prime_powers == ((3, 1), (11, 1))
    assert factorize(45).prime_powers == ((3, 2), (5, 1))


def test_factorize_20349():
    fac = factorize(20349)
    assert fac.prime_powers == ((3, 2), (7, 1), (17, 1), (19, 1))
    assert not fac.is_square_free


def test_factorize_reassembles():
    for n in list(range(2, 200)) + [20349, 22935, 24633]:
        assert factorize(n).n == n


def test_factorize_rejects_small():
    with pytest.raises(ValueError):
        factorize(1)


def test_factorization_str():
    assert str(factorize(45)) == "3^2 * 5"
    assert str(factorize(33)) == "3 * 11"


def test_admissible_strict_33():
    ok, fac = is_admissible_length(33, "strict")
    assert ok and fac.prime_powers == ((3, 1), (11, 1))


def test_admissible_45_mode_split():
    ok_strict, _ = is_admissible_length(45, "strict")
    ok_paper, _ = is_admissible_length(45, "paper")
    assert not ok_strict and ok_paper


def test_admissible_even_rejected():
    for mode in ("strict", "paper"):
        ok, _ = is_admissible_length(6, mode)
        assert not ok


def test_strict_subset_of_paper():
    for n in range(3, 1000):
        s, _ = is_admissible_length(n, "strict")
        p, _ = is_admissible_length(n, "paper")
        if s:
            assert p


def test_admissible_validations():
    with pytest.raises(ValueError):
        is_admissible_length(33, "bogus")
    with pytest.raises(ValueError):
        is_admissible_length(2)


def test_largest_admissible_scan():
    assert largest_admissible_at_most(34, "strict") == 33
    assert largest_admissible_at_most(33, "strict") == 33


def test_largest_admissible_22938():
    # independent scan oracle over the candidate range
    want = max(n for n in range(3, 22939)
               if n % 2 == 1 and n % 3 == 0)
    assert want == 22935
    assert largest_admissible_at_most(22938, "paper") == want
    assert factorize(want).prime_powers == ((3, 1), (5, 1), (11, 1), (139, 1))


def test_largest_admissible_too_small():
    with pytest.raises(NoAdmissibleLength):
        largest_admissible_at_most(2)


def test_factorization_is_value_object():
    assert Factorization(((3, 1), (11, 1))).n == 33
