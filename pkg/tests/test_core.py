import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_density, random_unitary
from qic.core import (
    DensityMatrix,
    StateVector,
    ValidationError,
    degeneracy_classes,
    density_from_mixture,
    purity,
    qubit_state,
    spectrum,
)

R2 = 1 / np.sqrt(2)


@pytest.mark.parametrize(
    "theta, phi, expected",
    [(0, 0, [1, 0]), (np.pi, 0, [0, 1]), (np.pi / 2, np.pi / 2, [R2, 1j * R2])],
)
def test_qubit_state(theta, phi, expected):
    np.testing.assert_allclose(qubit_state(theta, phi).amplitudes, expected, atol=1e-15)


def test_state_vector_rejects_unnormalized():
    with pytest.raises(ValidationError):
        StateVector([1, 1])
    with pytest.raises(ValidationError):
        StateVector([np.nan, 1])


@pytest.mark.parametrize(
    "weights, vecs, expected",
    [
        ([1], [[1, 0]], np.diag([1, 0])),
        ([0.5, 0.5], [[1, 0], [0, 1]], np.diag([0.5, 0.5])),
        ([0.5, 0.5], [[1, 0], [R2, R2]], [[0.75, 0.25], [0.25, 0.25]]),
    ],
)
def test_density_from_mixture(weights, vecs, expected):
    rho = density_from_mixture(weights, [StateVector(v) for v in vecs])
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)


@pytest.mark.parametrize(
    "weights, vecs",
    [
        ([1], [[1, 0], [0, 1]]),  # length mismatch
        ([0.5, 0.5], [[1, 0], [1, 0, 0]]),  # dimension mismatch
        ([0.6, 0.6], [[1, 0], [0, 1]]),  # weight sum
        ([1.5, -0.5], [[1, 0], [0, 1]]),  # negative weight
    ],
)
def test_density_from_mixture_errors(weights, vecs):
    with pytest.raises(ValidationError):
        density_from_mixture(weights, [StateVector(v) for v in vecs])


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix([[0.5, 0.1], [0.0, 0.5]])
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.2, -0.2]))


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.diag([0.7, 0.3]), [0.7, 0.3]),
        (np.eye(4) / 4, [0.25] * 4),
        ([[0.75, 0.25], [0.25, 0.25]], [(2 + np.sqrt(2)) / 4, (2 - np.sqrt(2)) / 4]),
    ],
)
def test_spectrum_examples(matrix, expected):
    np.testing.assert_allclose(spectrum(DensityMatrix(matrix)).eigenvalues, expected, atol=1e-14)


def test_spectrum_degenerate_basis_is_deterministic():
    rng = np.random.default_rng(3)
    u = random_unitary(4, rng)
    rho = DensityMatrix(u @ np.diag([0.4, 0.4, 0.1, 0.1]) @ u.conj().T)
    a = spectrum(rho)
    b = spectrum(DensityMatrix(rho.matrix.copy()))
    for va, vb in zip(a.eigenvectors, b.eigenvectors):
        np.testing.assert_array_equal(va.amplitudes, vb.amplitudes)
    vecs = np.stack([v.amplitudes for v in a.eigenvectors], axis=1)
    np.testing.assert_allclose(vecs.conj().T @ vecs, np.eye(4), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_spectrum_reconstruction(n, seed):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(random_density(n, rng, rank=int(rng.integers(1, n + 1))))
    spec = spectrum(rho)
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    assert abs(spec.eigenvalues.sum() - 1) < 1e-9
    assert np.max(np.abs(spec.reconstruct() - rho.matrix)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_orthonormal_mixture_recovers_weights(n, seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(n, rng)
    w = rng.dirichlet(np.ones(n))
    rho = density_from_mixture(w, [StateVector(u[:, i]) for i in range(n)])
    np.testing.assert_allclose(spectrum(rho).eigenvalues, np.sort(w)[::-1], atol=1e-9)
    assert abs(purity(rho) - np.sum(spectrum(rho).eigenvalues ** 2)) < 1e-9


@pytest.mark.parametrize(
    "vals, expected",
    [
        ([0.5, 0.5, 0, 0], [[0, 1], [2, 3]]),
        ([1, 0, 0, 0], [[0], [1, 2, 3]]),
        ([0.4, 0.4 + 1e-12, 0.2 - 1e-12], [[0, 1], [2]]),
    ],
)
def test_degeneracy_classes(vals, expected):
    assert degeneracy_classes(vals, 1e-9) == expected


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([0.0, 0.1, 0.25, 0.5, 1 / 3]), min_size=1, max_size=10))
def test_degeneracy_classes_partition(vals):
    groups = degeneracy_classes(vals, 1e-9)
    flat = sorted(i for g in groups for i in g)
    assert flat == list(range(len(vals)))
    for g in groups:
        assert len({vals[i] for i in g}) == 1


def test_degeneracy_classes_needs_positive_tol():
    with pytest.raises(ValueError):
        degeneracy_classes([1.0], 0)


def test_purity_examples():
    assert purity(density_from_mixture([1], [StateVector([0, 1])])) == pytest.approx(1, abs=1e-12)
    assert purity(DensityMatrix(np.eye(5) / 5)) == pytest.approx(0.2, abs=1e-12)
    assert purity(DensityMatrix(np.diag([0.7, 0.3]))) == pytest.approx(0.58, abs=1e-12)


def test_density_matrix_is_immutable():
    rho = DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1
