import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sfmkit.decomposition import (PositiveDecomposition, decompose, dk_vectors,
                                  split_symmetric_sfm, strictify, symmetric_pipeline,
                                  uniform_semispectral, verify_decomposition)
from sfmkit.linalg import SymmetryError
from sfmkit.measure import (AtomicSFM, DensityFamily, DiagonalScaling, compress, density,
                            evaluate, random_sfm, scaling_weights)

from oracles import jordan_by_lapack, random_subset

I = 1j


def single(form, label="a"):
    return AtomicSFM((label,), np.array([form], dtype=complex))


def max_dev(a: AtomicSFM, b) -> float:
    b = b.forms if isinstance(b, AtomicSFM) else b
    return float(np.abs(a.forms - b).max())


# dk_vectors

def test_dk_single_positive_scalar():
    T = DensityFamily(("a",), np.array([[[1.0]]], dtype=complex), np.array([2.0]))
    fam = dk_vectors(T, [2.0], DiagonalScaling.identity(1))
    assert len(fam.positive[0]) == 1 and len(fam.negative[0]) == 0
    assert np.linalg.norm(fam.positive[0][0]) == pytest.approx(np.sqrt(2))


def test_dk_diagonal_signed():
    T = DensityFamily(("a",), np.array([np.diag([3.0, -1.0])], dtype=complex), np.array([1.0]))
    fam = dk_vectors(T, [1.0], DiagonalScaling.identity(2))
    assert np.allclose(fam.positive[0], [[np.sqrt(3), 0]])
    assert np.allclose(fam.negative[0], [[0, 1]])


def test_dk_applies_inverse_scaling():
    T = DensityFamily(("a",), np.array([np.diag([0.8, 0.2])], dtype=complex), np.array([1.0]))
    D = DiagonalScaling(np.array([0.5, 0.25]))
    fam = dk_vectors(T, [1.0], D)
    norms = sorted(np.abs(fam.positive[0]).max(axis=1))
    assert np.allclose(norms, [np.sqrt(0.2) / 0.25, np.sqrt(0.8) / 0.5])


def test_dk_rejects_non_hermitian_density():
    T = DensityFamily(("a",), np.array([[[0, 1], [0, 0]]], dtype=complex), np.array([1.0]))
    with pytest.raises(SymmetryError):
        dk_vectors(T, [1.0], DiagonalScaling.identity(2))


def test_dk_reconstructs_symmetric_sfm(rng):
    E = random_sfm(rng, 5, 4, kind="symmetric", scale=2.0)
    D, _ = scaling_weights(E)
    F = compress(E, D)
    fam = dk_vectors(density(F), F.mu, D)
    R = fam.reconstruct()
    phi = rng.normal(size=5) + I * rng.normal(size=5)
    psi = rng.normal(size=5) + I * rng.normal(size=5)
    for _ in range(5):
        X = random_subset(rng, E.labels)
        assert evaluate(R, X, phi, psi) == pytest.approx(evaluate(E, X, phi, psi), abs=1e-10)


# split_symmetric_sfm

def test_split_positive_sfm_is_trivial(rng):
    E = random_sfm(rng, 4, 3, kind="positive")
    Ep, Em = split_symmetric_sfm(E)
    assert max_dev(Ep, E) < 1e-12
    assert np.array_equal(Em.forms, np.zeros_like(E.forms))


def test_split_diagonal_atom():
    E = single(np.diag([3.0, -1.0]))
    Ep, Em = split_symmetric_sfm(E, scaling=DiagonalScaling.identity(2))
    assert np.allclose(Ep.forms[0], np.diag([3, 0]))
    assert np.allclose(Em.forms[0], np.diag([0, 1]))
    # default scaling gives the same answer for a diagonal form
    Ep2, Em2 = split_symmetric_sfm(E)
    assert max_dev(Ep2, Ep) < 1e-14 and max_dev(Em2, Em) < 1e-14


def test_split_negated_positive(rng):
    E = random_sfm(rng, 3, 2, kind="positive")
    Ep, Em = split_symmetric_sfm(-E)
    assert np.array_equal(Ep.forms, np.zeros_like(E.forms))
    assert max_dev(Em, E) < 1e-12


def test_split_rejects_non_symmetric(rng):
    with pytest.raises(SymmetryError):
        split_symmetric_sfm(random_sfm(rng, 3, 2))


def test_split_parts_are_positive_and_reconstruct(rng):
    E = random_sfm(rng, 6, 4, kind="symmetric", scale=5.0)
    Ep, Em = split_symmetric_sfm(E)
    assert max_dev(Ep - Em, E) < 1e-11
    assert Ep.is_positive() and Em.is_positive()


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
def test_split_unique_given_scaling(N, M, seed, reverse):
    rng = np.random.default_rng(seed)
    E = random_sfm(rng, N, M, kind="symmetric")
    Ep, Em = split_symmetric_sfm(E)
    # alternative route: LAPACK spectral projectors on the density, summed in another order
    D, _ = scaling_weights(E)
    F = compress(E, D)
    T = density(F)
    dinv = 1.0 / D.weights
    for j in range(M):
        P, Q = jordan_by_lapack(T.forms[j], reverse=reverse)
        P = F.mu[j] * P * np.outer(dinv, dinv)
        Q = F.mu[j] * Q * np.outer(dinv, dinv)
        scale = 1.0 + np.abs(E.forms[j]).max()
        assert np.abs(Ep.forms[j] - P).max() <= 1e-9 * scale
        assert np.abs(Em.forms[j] - Q).max() <= 1e-9 * scale


def test_different_scaling_gives_different_split():
    f1 = np.array([[1.0, 2.0], [2.0, 1.0]])
    f2 = np.array([[0.5, 0.0], [0.0, -0.5]])
    E = AtomicSFM(("a", "b"), np.array([f1, f2], dtype=complex))
    Ep1, Em1 = split_symmetric_sfm(E, scaling=DiagonalScaling(np.array([1.0, 1.0])))
    Ep2, Em2 = split_symmetric_sfm(E, scaling=DiagonalScaling(np.array([1.0, 0.1])))
    assert max_dev(Ep1 - Em1, E) < 1e-12 and max_dev(Ep2 - Em2, E) < 1e-12
    assert max_dev(Ep1, Ep2) > 1e-3
    # and through the decomposition interface with two alpha sequences
    d1 = decompose(E, alpha=[0.5, 0.5])
    d2 = decompose(E, alpha=[0.5, 0.01])
    assert np.abs(d1.parts[0].forms - d2.parts[0].forms).max() > 1e-3


# decompose

def test_decompose_positive(rng):
    E = random_sfm(rng, 4, 3, kind="positive")
    dec = decompose(E)
    assert max_dev(dec.parts[0], E) < 1e-12
    for k in (1, 2, 3):
        assert np.abs(dec.parts[k].forms).max() <= 1e-10


def test_decompose_imaginary_positive(rng):
    P = random_sfm(rng, 3, 2, kind="positive")
    dec = decompose(1j * P)
    assert max_dev(dec.parts[1], P) < 1e-12
    for k in (0, 2, 3):
        assert np.abs(dec.parts[k].forms).max() <= 1e-10


def test_decompose_random_reconstruction(rng):
    E = random_sfm(rng, 4, 3, scale=3.0)
    dec = decompose(E)
    scale = 1 + np.abs(E.forms).max()
    assert max_dev(dec.reconstruct(), E) < 1e-9 * scale
    for p in dec.parts:
        assert p.is_positive()


def test_decompose_records_provenance(rng):
    E = random_sfm(rng, 3, 2)
    dec = decompose(E)
    assert len(dec.scalings) == 2
    assert dec.mu.shape == (2, 2)
    A = AtomicSFM(E.labels, 0.5 * (E.forms + np.conj(np.swapaxes(E.forms, 1, 2))))
    assert np.allclose(dec.scalings[0].weights, scaling_weights(A)[0].weights)


def test_decomposition_requires_four_parts(rng):
    E = random_sfm(rng, 2, 2, kind="positive")
    with pytest.raises(ValueError):
        PositiveDecomposition((E, E, E))


# verify_decomposition

def test_verify_passes_on_decompose(rng):
    E = random_sfm(rng, 5, 3)
    rep = verify_decomposition(E, decompose(E))
    assert rep.passed and rep.psd_ok and rep.reconstruction_ok
    assert rep.min_eigenvalues.shape == (4, 3)


def test_verify_detects_negated_part(rng):
    E = random_sfm(rng, 3, 2, kind="positive")
    dec = decompose(E)
    bad = PositiveDecomposition((-dec.parts[0], dec.parts[1], dec.parts[2], dec.parts[3]))
    rep = verify_decomposition(-E, bad)
    assert rep.reconstruction_ok
    assert not rep.psd_ok and not rep.passed


def test_verify_zero_sfm():
    E = AtomicSFM(("a", "b"), np.zeros((2, 3, 3)))
    dec = decompose(E)
    rep = verify_decomposition(E, dec)
    assert rep.passed
    for p in dec.parts:
        assert np.array_equal(p.forms, np.zeros((2, 3, 3)))
    assert rep.injectivity == 0.0


def test_injectivity_indicator_matches_basis_minimum(rng):
    E = random_sfm(rng, 4, 2)
    dec = decompose(E)
    rep = verify_decomposition(E, dec)
    direct = min(sum(evaluate(p, p.labels, e, e).real for p in dec.parts) for e in np.eye(4))
    assert rep.injectivity == pytest.approx(direct)


# strictify

def test_strictify_zero_uniform():
    labels = ("a", "b", "c")
    E = AtomicSFM.zeros(labels, 2)
    E0 = uniform_semispectral(labels, 2)
    dec = strictify(E, decompose(E), 1.0, E0)
    assert max_dev(dec.parts[0], E0) < 1e-14
    assert max_dev(dec.parts[2], E0) < 1e-14
    assert np.abs(dec.parts[1].forms).max() == 0
    assert np.abs(dec.parts[3].forms).max() == 0


@pytest.mark.parametrize("eps", [0.01, 0.1, 1.0])
def test_strictify_injectivity_and_reconstruction(rng, eps):
    E = random_sfm(rng, 4, 3)
    dec = strictify(E, decompose(E), eps)
    rep = verify_decomposition(E, dec)
    assert rep.passed
    assert rep.injectivity >= eps - 1e-9
    assert np.linalg.eigvalsh(dec.strictness()).min() >= eps - 1e-9


def test_strictify_validates_E0(rng):
    E = random_sfm(rng, 2, 2)
    notnorm = AtomicSFM(E.labels, np.array([np.eye(2), np.eye(2)], dtype=complex))
    with pytest.raises(ValueError):
        strictify(E, None, 0.1, notnorm)
    notpos = AtomicSFM(E.labels, np.array([np.diag([2.0, 0.5]), np.diag([-1.0, 0.5])], dtype=complex))
    with pytest.raises(ValueError):
        strictify(E, None, 0.1, notpos)
    with pytest.raises(ValueError):
        strictify(E, None, 0.0)


def test_symmetric_pipeline_trace_measure(rng):
    E = random_sfm(rng, 3, 3, kind="symmetric")
    s = symmetric_pipeline(E)
    assert s.trace.mu.sum() <= s.trace.delta + 1e-12
