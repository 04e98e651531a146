import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sfmkit.phase import (ArcPartition, arc_moment, block_psd, c_matrix, check_c_matrix,
                          coherent_vector, find_negative_probability, phase_sfm, probabilities,
                          probability_diagnostics, probe_states)

from oracles import quadrature_moment

NON_PSD_C = np.array([[1, 2], [2, 1]], dtype=complex)


# partitions

def test_uniform_partition_covers_circle():
    p = ArcPartition.uniform(5, 0.3)
    assert p.n_arcs == 5
    assert p.breakpoints[-1] - p.breakpoints[0] == pytest.approx(2 * np.pi, abs=1e-15)


@pytest.mark.parametrize("bp", [[0, 1, 1, 2 * np.pi], [0, 3.0], [0.0]])
def test_invalid_partitions(bp):
    with pytest.raises(ValueError):
        ArcPartition(np.array(bp, dtype=float))


def test_locate():
    p = ArcPartition.uniform(4, -np.pi / 4)
    assert p.locate(0.0) == 0
    assert p.locate(np.pi / 2) == 1
    assert p.locate(-np.pi / 2) == 3


# arc_moment

def test_arc_moment_diagonal_half_circle():
    assert arc_moment(3, 3, 0.0, np.pi) == pytest.approx(0.5)


def test_arc_moment_against_quadrature():
    q = quadrature_moment(1, 0.0, np.pi, points=10_000)
    assert abs(q - 1j / np.pi) < 1e-8
    assert abs(arc_moment(0, 1, 0.0, np.pi) - q) < 1e-8


@pytest.mark.parametrize("m, n", [(0, 1), (2, 0), (1, 5)])
def test_arc_moment_full_circle_vanishes(m, n):
    assert abs(arc_moment(m, n, 0.4, 0.4 + 2 * np.pi)) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7), st.floats(-3, 3), st.floats(0.01, 2 * np.pi))
def test_arc_moment_quadrature_property(m, n, a, length):
    q = quadrature_moment(n - m, a, a + length, points=20_000)
    assert abs(arc_moment(m, n, a, a + length) - q) < 1e-8


def test_arc_moment_invalid():
    with pytest.raises(ValueError):
        arc_moment(0, 1, 1.0, 1.0)
    with pytest.raises(ValueError):
        arc_moment(0, 1, 0.0, 7.0)


# c matrices

def test_c_presets():
    assert np.array_equal(c_matrix("identity", 3), np.eye(3))
    assert np.array_equal(c_matrix("all-ones", 2), np.ones((2, 2)))
    assert np.allclose(c_matrix("toeplitz", 3, 0.5), [[1, .5, .25], [.5, 1, .5], [.25, .5, 1]])
    with pytest.raises(ValueError):
        c_matrix("nonsense", 2)


def test_c_validation():
    with pytest.raises(ValueError):
        check_c_matrix(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        check_c_matrix(np.array([[2, 0], [0, 1]]))
    check_c_matrix(NON_PSD_C)  # positivity is not required


def test_block_psd_diagnostic():
    assert block_psd(c_matrix("all-ones", 4))[1]
    lam, ok = block_psd(NON_PSD_C)
    assert lam == pytest.approx(-1.0) and not ok
    c = np.eye(3, dtype=complex)
    c[1, 2] = c[2, 1] = 2
    assert block_psd(c, 2)[1] and not block_psd(c, 3)[1]


# phase_sfm

def test_phase_identity_c():
    p = ArcPartition(np.array([0.0, 1.0, 2 * np.pi]))
    E = phase_sfm(np.eye(3), p)
    for (a, b), f in zip(p.arcs(), E.forms):
        assert np.allclose(f, (b - a) / (2 * np.pi) * np.eye(3))


def test_phase_all_ones_halves():
    E = phase_sfm(c_matrix("all-ones", 2), ArcPartition.uniform(2))
    q = quadrature_moment(1, 0.0, np.pi, points=10_000)
    expected = np.array([[0.5, q], [np.conj(q), 0.5]])
    assert np.abs(E.forms[0] - expected).max() < 1e-8
    assert np.allclose(E.forms[0], [[0.5, 1j / np.pi], [-1j / np.pi, 0.5]], atol=1e-15)


@pytest.mark.parametrize("preset, r", [("identity", 0), ("all-ones", 0), ("toeplitz", 0.3), ("toeplitz", 2.0)])
def test_phase_whole_space_is_identity(preset, r):
    E = phase_sfm(c_matrix(preset, 8, r), ArcPartition.uniform(16))
    assert np.abs(E.value() - np.eye(8)).max() < 1e-14


def test_phase_sfm_symmetric_for_hermitian_c(rng):
    X = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    c = X + X.conj().T
    c = c - np.diag(np.diag(c)) + np.eye(5)
    E = phase_sfm(c, ArcPartition.uniform(7))
    assert E.is_symmetric(1e-14)


def test_refinement_consistency():
    c = c_matrix("toeplitz", 6, 0.8)
    coarse = ArcPartition.uniform(4, 0.2)
    fine = coarse.refine(3)
    Ec, Ef = phase_sfm(c, coarse), phase_sfm(c, fine)
    psi = coherent_vector(1.3 * np.exp(0.4j), 6)
    pc, pf = probabilities(Ec, psi), probabilities(Ef, psi)
    assert np.abs(pf.reshape(4, 3).sum(axis=1) - pc).max() < 1e-14
    assert np.abs(Ef.forms.reshape(4, 3, 6, 6).sum(axis=1) - Ec.forms).max() < 1e-14


def test_covariance_under_rotation():
    M, N = 8, 5
    c = c_matrix("toeplitz", N, 0.6)
    E = phase_sfm(c, ArcPartition.uniform(M))
    theta = 2 * np.pi / M
    U = np.diag(np.exp(1j * theta * np.arange(N)))
    for j in range(M):
        nxt = E.forms[(j + 1) % M]
        assert np.abs(U.conj().T @ E.forms[j] @ U - nxt).max() < 1e-14


# coherent states

def test_coherent_dimension_one():
    assert np.array_equal(coherent_vector(2.5 - 1j, 1), [1])


def test_coherent_z_one_truncated():
    v = np.array([1, 1, 1 / np.sqrt(2), 1 / np.sqrt(6)])
    assert np.allclose(coherent_vector(1.0, 4), v / np.linalg.norm(v), atol=1e-15)


def test_coherent_small_z_tends_to_vacuum():
    v = coherent_vector(1e-8, 6)
    assert abs(v[0] - 1) < 1e-15 and np.abs(v[1:]).max() < 1e-7


def test_coherent_zero_warns():
    with pytest.warns(UserWarning):
        v = coherent_vector(0, 3)
    assert np.array_equal(v, [1, 0, 0])


def test_coherent_matches_untruncated_series():
    z = 0.7 + 0.2j
    full = np.array([np.exp(-abs(z) ** 2 / 2) * z ** n / math.sqrt(math.factorial(n))
                     for n in range(30)])
    assert np.allclose(coherent_vector(z, 30), full, atol=1e-14)


# probabilities

def test_identity_c_is_uniform_on_number_states():
    p = ArcPartition(np.array([0.0, 1.0, 4.0, 2 * np.pi]))
    E = phase_sfm(np.eye(4), p)
    for n in range(4):
        vals = probabilities(E, np.eye(4)[n])
        assert np.allclose(vals, np.diff(p.breakpoints) / (2 * np.pi))


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 1.5j])
def test_canonical_phase_is_a_probability(z):
    E = phase_sfm(c_matrix("all-ones", 8), ArcPartition.uniform(16))
    vals = probabilities(E, coherent_vector(z, 8))
    d = probability_diagnostics(vals)
    assert d["max_imag"] < 1e-15
    assert d["min_real"] >= 0
    assert abs(d["total"] - 1) < 1e-10


def test_all_ones_peak_contains_angle_zero():
    p = ArcPartition.uniform(16, -np.pi / 16)
    E = phase_sfm(c_matrix("all-ones", 8), p)
    vals = probabilities(E, coherent_vector(2.0, 8)).real
    assert p.locate(0.0) == int(np.argmax(vals))


def test_non_psd_c_gives_negative_value():
    E = phase_sfm(NON_PSD_C, ArcPartition.uniform(4))
    value, j, state = find_negative_probability(E)
    assert value < 0
    assert probabilities(E, state)[j].real == pytest.approx(value)
    # totals are still one: E(Omega) = I
    assert probabilities(E, state).sum() == pytest.approx(1.0, abs=1e-14)


def test_psd_c_grid_search_finds_no_negative(rng):
    E = phase_sfm(c_matrix("toeplitz", 4, 0.5), ArcPartition.uniform(6))
    value, _, _ = find_negative_probability(E, probe_states(4, rng, n_random=50))
    assert value >= -1e-14


def test_probabilities_shape_mismatch():
    E = phase_sfm(np.eye(2), ArcPartition.uniform(2))
    with pytest.raises(ValueError):
        probabilities(E, np.ones(3))


def test_no_warning_for_nonzero_z():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        coherent_vector(0.1, 4)
