import cmath

import numpy as np
import pytest

from gaborcs.csvio import load_window_csv, save_window_csv
from gaborcs.errors import NotAdmissible, NotInvertible, TooLarge
from gaborcs.modring import Residue
from gaborcs.zauner import (MetaplecticOperator, SymplecticMatrix,
                            _unit_scalar_of_cube, metaplectic,
                            metaplectic_apply, star_window, zauner_matrix)


def test_zauner_matrix_entries():
    Z = zauner_matrix(33)
    assert (Z.alpha.value, Z.beta.value, Z.gamma.value, Z.delta.value) \
        == (0, 32, 1, 32)
    assert (0 * 32 - 32 * 1) % 33 == 1
    Z3 = zauner_matrix(3)
    assert (Z3.alpha.value, Z3.beta.value, Z3.gamma.value, Z3.delta.value) \
        == (0, 2, 1, 2)


def test_symplectic_determinant_enforced():
    with pytest.raises(ValueError):
        SymplecticMatrix(Residue(1, 7), Residue(0, 7),
                         Residue(0, 7), Residue(2, 7))


def test_metaplectic_entry_magnitudes():
    for L in (3, 15, 33):
        U = metaplectic(zauner_matrix(L)).entries
        np.testing.assert_allclose(np.abs(U), 1 / np.sqrt(L), atol=1e-13)


@pytest.mark.parametrize("L", [3, 15, 33])
def test_metaplectic_unitary(L):
    U = metaplectic(zauner_matrix(L)).entries
    assert np.max(np.abs(U.conj().T @ U - np.eye(L))) <= 1e-10


def test_metaplectic_zauner_L3_corner_entry():
    # u = v = 0 annihilates the quadratic form: entry is 1/sqrt(3)
    U = metaplectic(zauner_matrix(3), theta=0.0).entries
    assert U[0, 0] == pytest.approx(1 / np.sqrt(3), abs=1e-14)


def test_metaplectic_random_symplectic_unitary():
    # sample a few non-Zauner symplectic matrices with invertible beta
    rng = np.random.default_rng(7)
    for L in (9, 15, 25):
        count = 0
        while count < 5:
            al, be, ga = (int(rng.integers(0, L)) for _ in range(3))
            if np.gcd(be, L) != 1:
                continue
            # solve al*de - be*ga = 1 for de when al invertible
            if np.gcd(al, L) != 1:
                continue
            de = (pow(al, -1, L) * (1 + be * ga)) % L
            G = SymplecticMatrix(Residue(al, L), Residue(be, L),
                                 Residue(ga, L), Residue(de, L))
            U = metaplectic(G).entries
            assert np.max(np.abs(U.conj().T @ U - np.eye(L))) <= 1e-10
            count += 1


def test_metaplectic_not_invertible_beta():
    G = SymplecticMatrix(Residue(1, 9), Residue(3, 9),
                         Residue(1, 9), Residue(4, 9))
    with pytest.raises(NotInvertible):
        metaplectic(G)


def test_metaplectic_dense_guard():
    with pytest.raises(TooLarge):
        metaplectic(zauner_matrix(2001))


@pytest.mark.parametrize("L", [9, 15, 33, 45])
def test_matrix_free_apply_matches_dense(L):
    G = zauner_matrix(L)
    U = metaplectic(G, theta=0.4).entries
    rng = np.random.default_rng(L)
    for _ in range(5):
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        np.testing.assert_allclose(metaplectic_apply(G, x, theta=0.4),
                                   U @ x, atol=1e-12)


@pytest.mark.parametrize("L", [3, 15, 33])
def test_cube_is_scalar_identity(L):
    U = metaplectic(zauner_matrix(L)).entries
    U3 = U @ U @ U
    c = U3[0, 0]
    assert abs(abs(c) - 1.0) <= 1e-10
    assert np.max(np.abs(U3 - c * np.eye(L))) <= 1e-8
    assert abs(_unit_scalar_of_cube(zauner_matrix(L), 0.0) - c / abs(c)) <= 1e-12


def test_exponent_reduction_matches_big_integers():
    # tau**e is insensitive to reduction of e mod 2L
    L = 15
    G = zauner_matrix(L)
    binv = pow(G.beta.value, -1, L)
    tau = -cmath.exp(1j * cmath.pi / L)
    U = metaplectic(G).entries
    rng = np.random.default_rng(0)
    for _ in range(50):
        u = int(rng.integers(0, L))
        v = int(rng.integers(0, L))
        e_exact = binv * (G.alpha.value * v * v - 2 * u * v
                          + G.delta.value * u * u)
        direct = tau ** e_exact / np.sqrt(L)
        assert abs(direct - U[u, v]) <= 1e-10


def test_star_window_certificate(star33):
    assert star33.residual <= 1e-8
    assert np.linalg.norm(star33.vector.samples) == pytest.approx(1.0, abs=1e-12)
    assert abs(abs(star33.eigenvalue) - 1.0) <= 1e-12
    assert star33.vector.kind == "star"


def test_star_window_eigen_equation(star33):
    G = zauner_matrix(33)
    g = star33.vector.samples
    out = metaplectic_apply(G, g)
    assert np.linalg.norm(out - star33.eigenvalue * g) <= 1e-8


def test_star_eigenvalue_cubes_to_unit_scalar(star33):
    c = _unit_scalar_of_cube(zauner_matrix(33), 0.0)
    assert abs(star33.eigenvalue ** 3 - c) <= 1e-10


def test_star_window_deterministic():
    a = star_window(33, seed=3)
    b = star_window(33, seed=3)
    assert np.array_equal(a.vector.samples, b.vector.samples)
    assert a.eigenvalue == b.eigenvalue


def test_star_window_seed_changes_vector():
    a = star_window(33, seed=0)
    b = star_window(33, seed=1)
    assert not np.array_equal(a.vector.samples, b.vector.samples)


def test_star_window_rejects_inadmissible():
    with pytest.raises(NotAdmissible):
        star_window(10)
    with pytest.raises(NotAdmissible):
        star_window(35)


def test_star_window_matrix_free_large():
    sw = star_window(3465)  # 3465 = 3^2 * 5 * 7 * 11, above the dense guard
    assert sw.residual <= 1e-8


def test_star_window_theta_flag():
    sw = star_window(33, theta=0.7)
    assert sw.residual <= 1e-8
    G = zauner_matrix(33)
    out = metaplectic_apply(G, sw.vector.samples, theta=0.7)
    assert np.linalg.norm(out - sw.eigenvalue * sw.vector.samples) <= 1e-8


def test_star_window_csv_round_trip(tmp_path):
    sw = star_window(15)
    path = tmp_path / "star15.csv"
    save_window_csv(path, sw.vector)
    loaded = load_window_csv(path, "star")
    assert np.array_equal(loaded.samples, sw.vector.samples)


def test_metaplectic_operator_dataclass():
    G = zauner_matrix(3)
    op = metaplectic(G, theta=0.2)
    assert isinstance(op, MetaplecticOperator)
    assert op.theta == 0.2
    assert op.source is G
