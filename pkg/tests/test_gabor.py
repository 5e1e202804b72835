import numpy as np
import pytest

import gaborcs.gabor as gabor_mod
from gaborcs.csvio import load_window_csv, save_window_csv
from gaborcs.errors import DimensionMismatch, TooLarge
from gaborcs.gabor import (AnalysisOperator, GaborCoefficients, GaborParams,
                           WindowVector, dgt, dgt_adjoint, dgt_values,
                           frame_matrix, frame_rows, kept_rows, make_window)

from conftest import window_of
from oracles import dgt_naive, dgt_naive_positive

PARAM_SETS = [(15, 1, 5), (33, 1, 11), (45, 1, 9)]
KINDS = ("gaussian", "hann", "hamming", "star")


def test_params_derived_counts():
    p = GaborParams(33, 1, 11)
    assert (p.N, p.M, p.P) == (33, 3, 99)
    assert GaborParams(45, 1, 9).P == 225
    assert p.is_frame_capable


def test_params_validation():
    with pytest.raises(ValueError):
        GaborParams(33, 2, 11)
    with pytest.raises(ValueError):
        GaborParams(33, 1, 10)
    with pytest.raises(ValueError):
        GaborParams(1, 1, 1)


def test_hann_window_values():
    w = make_window("hann", 4)
    expected = np.array([0.0, 0.5, 1.0, 0.5]) / np.sqrt(1.5)
    np.testing.assert_allclose(w.samples.real, expected, atol=1e-15)
    assert np.all(w.samples.imag == 0)


def test_gaussian_symmetric_mod_L():
    for L in (8, 33, 45):
        g = make_window("gaussian", L).samples
        for l in range(1, L):
            assert g[l] == pytest.approx(g[L - l], abs=1e-15)


def test_windows_unit_norm():
    for kind in ("gaussian", "hann", "hamming"):
        for L in (4, 15, 33, 45):
            w = make_window(kind, L)
            assert np.linalg.norm(w.samples) == pytest.approx(1.0, abs=1e-12)


def test_make_window_rejects():
    with pytest.raises(ValueError):
        make_window("hann", 1)
    with pytest.raises(ValueError):
        make_window("star", 33)


def test_window_vector_validation():
    with pytest.raises(ValueError):
        WindowVector(np.zeros(8), "custom")
    with pytest.raises(ValueError):
        WindowVector(np.ones(8), "nope")


def test_dgt_basis_vector_input():
    # x = e0: only l = 0 survives, c[m,n] = conj(g(-n a mod L)) for every m
    L, a, b = 15, 1, 5
    g = make_window("hamming", L)
    op = AnalysisOperator(g, GaborParams(L, a, b))
    x = np.zeros(L, dtype=complex)
    x[0] = 1.0
    c = dgt_values(op, x)
    for n in range(op.params.N):
        expected = np.conj(g.samples[(-n * a) % L])
        np.testing.assert_allclose(c[:, n], expected, atol=1e-12)


def test_dgt_basis_window():
    # g = e0, a = b = 1: window selects l = n, c[m,n] = x_n e^{-2i pi m n/L}
    L = 9
    g = np.zeros(L)
    g[0] = 1.0
    op = AnalysisOperator(WindowVector(g, "custom"), GaborParams(L, 1, 1))
    rng = np.random.default_rng(5)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    c = dgt_values(op, x)
    m, n = np.meshgrid(np.arange(L), np.arange(L), indexing="ij")
    expected = x[n] * np.exp(-2j * np.pi * m * n / L)
    np.testing.assert_allclose(c, expected, atol=1e-12)


@pytest.mark.parametrize("L,a,b", PARAM_SETS)
@pytest.mark.parametrize("kind", KINDS)
def test_fast_matches_naive(L, a, b, kind, rng):
    w = window_of(kind, L)
    op = AnalysisOperator(w, GaborParams(L, a, b))
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    fast = dgt_values(op, x)
    naive = dgt_naive(x, w.samples, a, b)
    assert np.linalg.norm(fast - naive) <= 1e-10 * np.linalg.norm(naive)


@pytest.mark.parametrize("L,a,b", PARAM_SETS)
@pytest.mark.parametrize("positive", [False, True])
def test_adjoint_identity_random_pairs(L, a, b, positive, rng):
    w = window_of("hann", L)
    op = AnalysisOperator(w, GaborParams(L, a, b),
                          positive_frequency_mode=positive)
    shape = (kept_rows(op.params.M, positive), op.params.N)
    for _ in range(100):
        x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        lhs = np.vdot(c, dgt_values(op, x))
        rhs = np.vdot(dgt_adjoint(op, c), x)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_adjoint_zero_and_single_coefficient():
    L, a, b = 15, 1, 5
    w = window_of("gaussian", L)
    op = AnalysisOperator(w, GaborParams(L, a, b))
    zero = np.zeros((op.params.M, op.params.N), dtype=complex)
    assert np.all(dgt_adjoint(op, zero) == 0)
    m0, n0 = 2, 4
    c = zero.copy()
    c[m0, n0] = 1.0
    out = dgt_adjoint(op, c)
    l = np.arange(L)
    expected = w.samples[(l - n0 * a) % L] * np.exp(2j * np.pi * m0 * b * l / L)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_dgt_linearity(rng):
    op = AnalysisOperator(window_of("hamming", 33), GaborParams(33, 1, 11))
    x = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    z = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    al, be = 1.7 - 0.3j, -0.4 + 2.2j
    lhs = dgt_values(op, al * x + be * z)
    rhs = al * dgt_values(op, x) + be * dgt_values(op, z)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_frame_matrix_small_and_consistency(rng, star33):
    op3 = AnalysisOperator(window_of("gaussian", 3), GaborParams(3, 1, 1))
    F3 = frame_matrix(op3)
    assert F3.shape == (9, 3)
    e0 = np.zeros(3, dtype=complex)
    e0[0] = 1.0
    np.testing.assert_allclose(F3 @ e0, dgt(op3, e0).flattened(), atol=1e-12)

    op = AnalysisOperator(star33.vector, GaborParams(33, 1, 11))
    F = frame_matrix(op)
    assert F.shape == (99, 33)
    x = rng.standard_normal(33) + 1j * rng.standard_normal(33)
    flat = dgt(op, x).flattened()
    assert np.linalg.norm(F @ x - flat) <= 1e-10 * np.linalg.norm(flat)


def test_frame_matrix_row_norms():
    # modulations and cyclic shifts are isometries: every row has ||g||_2
    op = AnalysisOperator(window_of("hann", 15), GaborParams(15, 3, 5))
    norms = np.linalg.norm(frame_matrix(op), axis=1)
    np.testing.assert_allclose(norms, 1.0, atol=1e-12)


def test_frame_matrix_guard():
    big = AnalysisOperator(make_window("hann", 3465), GaborParams(3465, 1, 1))
    with pytest.raises(TooLarge):
        frame_matrix(big)


def test_frame_rows_match_frame_matrix(rng):
    op = AnalysisOperator(window_of("star", 15), GaborParams(15, 1, 5),
                          positive_frequency_mode=True)
    F = frame_rows(op, np.arange(op.n_rows))
    x = rng.standard_normal(15)
    flat = dgt(op, x).flattened()
    assert np.linalg.norm(F @ x - flat) <= 1e-10 * np.linalg.norm(flat)
    subset = np.array([0, 3, 17, op.n_rows - 1])
    np.testing.assert_allclose(frame_rows(op, subset), F[subset], atol=1e-13)


def test_conjugate_symmetry_real_window_real_signal(rng):
    L, a, b = 33, 1, 11
    op = AnalysisOperator(make_window("gaussian", L), GaborParams(L, a, b))
    x = rng.standard_normal(L)
    c = dgt_values(op, x)
    M = op.params.M
    for m in range(1, M):
        np.testing.assert_allclose(c[M - m, :], np.conj(c[m, :]), atol=1e-12)


@pytest.mark.parametrize("L,a,b", PARAM_SETS)
def test_positive_mode_matches_weighted_naive(L, a, b, rng):
    w = window_of("hamming", L)
    op = AnalysisOperator(w, GaborParams(L, a, b),
                          positive_frequency_mode=True)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    got = dgt_values(op, x)
    want = dgt_naive_positive(x, w.samples, a, b)
    assert got.shape[0] == (L // b) // 2 + 1
    assert np.linalg.norm(got - want) <= 1e-10 * np.linalg.norm(want)


def test_positive_mode_kept_rows_odd_M():
    # M odd keeps (M+1)/2 rows
    op = AnalysisOperator(make_window("hann", 33), GaborParams(33, 1, 11),
                          positive_frequency_mode=True)
    assert dgt_values(op, np.ones(33)).shape == (2, 33)


def test_positive_mode_energy_preserved_for_real_input(rng):
    # sqrt(2) weights keep coefficient energy of real signals under real windows
    L, a, b = 45, 1, 9
    x = rng.standard_normal(L)
    full = dgt_values(AnalysisOperator(make_window("hann", L),
                                       GaborParams(L, a, b)), x)
    pos = dgt_values(AnalysisOperator(make_window("hann", L),
                                      GaborParams(L, a, b),
                                      positive_frequency_mode=True), x)
    assert np.linalg.norm(pos) == pytest.approx(np.linalg.norm(full), rel=1e-12)


def test_dimension_mismatch_errors():
    op = AnalysisOperator(make_window("hann", 15), GaborParams(15, 1, 5))
    with pytest.raises(DimensionMismatch):
        dgt_values(op, np.ones(14))
    with pytest.raises(DimensionMismatch):
        dgt_adjoint(op, np.ones((2, 15)))
    with pytest.raises(DimensionMismatch):
        AnalysisOperator(make_window("hann", 14), GaborParams(15, 1, 5))


def test_coefficients_wrapper_flattening():
    op = AnalysisOperator(make_window("hann", 15), GaborParams(15, 3, 5))
    x = np.arange(15.0)
    c = dgt(op, x)
    assert isinstance(c, GaborCoefficients)
    flat = c.flattened()
    # n-major: entry n*M_rows + m
    assert flat[1 * 3 + 2] == c.values[2, 1]


def test_blocked_path_matches_cached(monkeypatch, rng):
    w = make_window("gaussian", 45)
    p = GaborParams(45, 1, 9)
    cached = AnalysisOperator(w, p)
    monkeypatch.setattr(gabor_mod, "_ROLL_CACHE_MAX_ENTRIES", 1)
    monkeypatch.setattr(gabor_mod, "_BLOCK_ENTRIES", 100)
    blocked = AnalysisOperator(w, p)
    assert blocked._rolled is None
    x = rng.standard_normal(45) + 1j * rng.standard_normal(45)
    np.testing.assert_allclose(dgt_values(blocked, x), dgt_values(cached, x),
                               atol=1e-12)
    c = rng.standard_normal((5, 45)) + 1j * rng.standard_normal((5, 45))
    np.testing.assert_allclose(dgt_adjoint(blocked, c),
                               dgt_adjoint(cached, c), atol=1e-12)


def test_window_csv_round_trip(tmp_path, star33):
    path = tmp_path / "g.csv"
    save_window_csv(path, star33.vector)
    loaded = load_window_csv(path, "star")
    assert np.array_equal(loaded.samples, star33.vector.samples)
    assert loaded.kind == "star"
