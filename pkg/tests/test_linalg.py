import numpy as np
import pytest

from catcode import linalg
from catcode.errors import DimensionMismatch, NonHermitian, NotPSD
from conftest import random_density, random_hermitian, random_pure, random_unitary


def test_identity_spectrum():
    w, _ = linalg.hermitian_eig(np.eye(2))
    assert np.allclose(w, [1, 1], atol=1e-15)


def test_diagonal_spectrum_and_basis():
    w, v = linalg.hermitian_eig(np.diag([2.0, 1.0]))
    assert np.allclose(w, [1, 2], atol=1e-15)
    assert np.allclose(np.abs(v), [[0, 1], [1, 0]], atol=1e-15)


def test_pauli_x_spectrum():
    w, _ = linalg.hermitian_eig(np.array([[0, 1], [1, 0]]))
    assert np.allclose(w, [-1, 1], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 8, 16, 41, 64])
def test_eigenvalues_match_lapack(rng, n):
    m = random_hermitian(rng, n)
    w, v = linalg.hermitian_eig(m)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(w - np.linalg.eigvalsh(m)).max() <= 1e-12
    assert np.abs(v @ np.diag(w) @ v.conj().T - m).max() <= 1e-10
    assert np.abs(v.conj().T @ v - np.eye(n)).max() <= 1e-10


def test_spectrum_stable_under_unitary_conjugation(rng):
    for _ in range(10):
        m = random_hermitian(rng, 6)
        u = random_unitary(rng, 6)
        w1, _ = linalg.hermitian_eig(m)
        w2, _ = linalg.hermitian_eig(u @ m @ u.conj().T)
        assert np.abs(w1 - w2).max() <= 1e-9


def test_batch_matches_single(rng):
    ms = np.stack([random_hermitian(rng, 4) for _ in range(7)])
    w, v = linalg.hermitian_eig_batch(ms)
    for k in range(7):
        assert np.abs(w[k] - linalg.hermitian_eig(ms[k]).eigenvalues).max() <= 1e-13


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        linalg.hermitian_eig(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("shape", [(2, 3), (0, 0), (65, 65), (2,)])
def test_rejects_bad_shapes(shape):
    with pytest.raises(DimensionMismatch):
        linalg.hermitian_eig(np.zeros(shape))


def test_psd_sqrt_trivial_cases():
    assert np.allclose(linalg.psd_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    assert np.allclose(linalg.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_psd_sqrt_squares_back(rng):
    for _ in range(20):
        m = random_density(rng, 4)
        r = linalg.psd_sqrt(m)
        assert np.abs(r @ r - m).max() <= 1e-9
        assert np.linalg.eigvalsh(r).min() >= -1e-12


def test_psd_sqrt_absorbs_roundoff_negatives():
    r = linalg.psd_sqrt(np.diag([1.0, -5e-11]))
    assert np.allclose(r, np.diag([1.0, 0.0]), atol=1e-15)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        linalg.psd_sqrt(np.diag([1.0, -1e-6]))


def test_fidelity_of_state_with_itself(rng):
    for n in (2, 4):
        rho = random_density(rng, n)
        assert abs(linalg.uhlmann_fidelity(rho, rho) - 1) <= 1e-9


def test_fidelity_of_orthogonal_pure_states():
    a = np.diag([1.0, 0.0])
    b = np.diag([0.0, 1.0])
    assert linalg.uhlmann_fidelity(a, b) == 0.0


def test_fidelity_of_pure_states_equals_overlap(rng):
    for _ in range(20):
        psi, phi = random_pure(rng, 3), random_pure(rng, 3)
        f = linalg.uhlmann_fidelity(np.outer(psi, psi.conj()), np.outer(phi, phi.conj()))
        assert abs(f - abs(np.vdot(psi, phi))) <= 1e-9


def test_fidelity_symmetric(rng):
    for _ in range(50):
        rho, sigma = random_density(rng, 2), random_density(rng, 2)
        assert abs(linalg.uhlmann_fidelity(rho, sigma) - linalg.uhlmann_fidelity(sigma, rho)) <= 1e-9


def test_fidelity_batch_matches_scalar(rng):
    rhos = np.stack([random_density(rng, 2) for _ in range(30)])
    sigmas = np.stack([random_density(rng, 2, rank=1) for _ in range(30)])
    f = linalg.uhlmann_fidelity_batch(rhos, sigmas)
    ref = [linalg.uhlmann_fidelity(r, s) for r, s in zip(rhos, sigmas)]
    assert np.abs(f - ref).max() <= 1e-12


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.uhlmann_fidelity(np.eye(2) / 2, np.eye(3) / 3)


def test_trace_distance_trivial_cases(rng):
    rho = random_density(rng, 3)
    assert linalg.trace_distance(rho, rho) <= 1e-15
    assert abs(linalg.trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) - 1) <= 1e-15


def test_trace_distance_to_admixed_orthogonal_state():
    psi = np.array([1.0, 1.0]) / np.sqrt(2)
    perp = np.array([1.0, -1.0]) / np.sqrt(2)
    rho = np.outer(psi, psi)
    for eps in (1e-3, 0.1, 0.4):
        sigma = (1 - eps) * rho + eps * np.outer(perp, perp)
        assert abs(linalg.trace_distance(rho, sigma) - eps) <= 1e-10


def test_fuchs_van_de_graaf_sandwich(rng):
    for n in (2, 4):
        for _ in range(25):
            rho, sigma = random_density(rng, n), random_density(rng, n)
            f = linalg.uhlmann_fidelity(rho, sigma)
            d = linalg.trace_distance(rho, sigma)
            assert 1 - f <= d + 1e-9
            assert d <= np.sqrt(1 - f * f) + 1e-9
