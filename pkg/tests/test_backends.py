import numpy as np
import pytest

from catcode import _jacobi_py, linalg
from catcode.errors import NoConvergence
from conftest import random_density, random_hermitian

BACKENDS = linalg.available_backends()
KERNELS = {"python": _jacobi_py.eigh_batch}
if "compiled" in BACKENDS:
    from catcode import _jacobi
    KERNELS["compiled"] = _jacobi.eigh_batch


def test_compiled_kernel_is_built():
    assert "compiled" in BACKENDS
    assert linalg.BACKEND == "compiled"


@pytest.mark.parametrize("name", sorted(KERNELS))
@pytest.mark.parametrize("n", [1, 2, 4, 9, 64])
def test_kernel_against_lapack(rng, name, n):
    a = np.stack([random_hermitian(rng, n) for _ in range(3)])
    w, v, sweeps = KERNELS[name](a, 1e-14, 100)
    assert 0 <= sweeps <= 100
    for k in range(3):
        assert np.abs(w[k] - np.linalg.eigvalsh(a[k])).max() <= 1e-12
        assert np.abs(v[k] @ np.diag(w[k]) @ v[k].conj().T - a[k]).max() <= 1e-10


@pytest.mark.parametrize("name", sorted(KERNELS))
def test_kernel_reports_exhausted_budget(rng, name):
    with pytest.raises(NoConvergence):
        KERNELS[name](random_hermitian(rng, 8)[None], 1e-14, 1)


@pytest.mark.skipif("compiled" not in KERNELS, reason="extension not built")
def test_backends_agree(rng):
    a = np.stack([random_hermitian(rng, 6) for _ in range(50)])
    w_py, _, _ = KERNELS["python"](a, 1e-14, 100)
    w_c, _, _ = KERNELS["compiled"](a, 1e-14, 100)
    assert np.abs(w_py - w_c).max() <= 1e-13


@pytest.mark.skipif("compiled" not in KERNELS, reason="extension not built")
def test_use_backend_switches_and_restores(rng):
    rho, sigma = random_density(rng, 4), random_density(rng, 4)
    ref = linalg.uhlmann_fidelity(rho, sigma)
    previous = linalg.use_backend("python")
    try:
        assert linalg.BACKEND == "python"
        assert abs(linalg.uhlmann_fidelity(rho, sigma) - ref) <= 1e-12
    finally:
        linalg.use_backend(previous)
    assert linalg.BACKEND == previous


def test_unknown_backend():
    with pytest.raises(ValueError):
        linalg.use_backend("fortran")
