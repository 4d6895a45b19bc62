"""Small dense Hermitian linear algebra on top of the Jacobi kernel.

The compiled kernel (``catcode._jacobi``) is used when it was built; the
numpy implementation in ``catcode._jacobi_py`` is the fallback.
:func:`use_backend` switches between them at runtime, which the
benchmark and the backend-equivalence tests rely on.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import _jacobi_py
from .errors import DimensionMismatch, NonHermitian, NotPSD

try:
    from . import _jacobi as _compiled
except ImportError:  # extension not built
    _compiled = None

HERMITIAN_TOL = 1e-12
SWEEP_BUDGET = 100
OFF_TOL = 1e-14
MAX_DIM = 64
PSD_TOL = 1e-8
EPS = np.finfo(float).eps

_kernels = {"python": _jacobi_py.eigh_batch}
if _compiled is not None:
    _kernels["compiled"] = _compiled.eigh_batch

BACKEND = "compiled" if _compiled is not None else "python"
_eigh_batch = _kernels[BACKEND]


def available_backends():
    return sorted(_kernels)


def use_backend(name):
    """Select the Jacobi kernel ("compiled" or "python"); returns the previous name."""
    global BACKEND, _eigh_batch
    if name not in _kernels:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    previous, BACKEND = BACKEND, name
    _eigh_batch = _kernels[name]
    return previous


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    return m


def _check_hermitian(m):
    dev = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))))
    if dev > HERMITIAN_TOL:
        raise NonHermitian(f"max |M - M^H| = {dev:.3e} exceeds {HERMITIAN_TOL}")


def hermitian_eig(m) -> EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    m = _as_square(m)
    _check_hermitian(m)
    w, v, _ = _eigh_batch(m[None], OFF_TOL, SWEEP_BUDGET)
    return EigenDecomposition(w[0], v[0])


def hermitian_eig_batch(ms):
    """Stacked version of :func:`hermitian_eig` for an array of shape (k, n, n)."""
    ms = np.asarray(ms, dtype=np.complex128)
    if ms.ndim != 3 or ms.shape[1] != ms.shape[2]:
        raise DimensionMismatch(f"expected shape (k, n, n), got {ms.shape}")
    _check_hermitian(ms)
    w, v, _ = _eigh_batch(ms, OFF_TOL, SWEEP_BUDGET)
    return w, v


def _clamped(w, scale=None):
    """Clip round-off out of a PSD spectrum.

    Negatives down to -PSD_TOL are round-off from upstream channel maps.
    Eigenvalues within a few ulps of ``scale`` (default: the largest one)
    are unresolvable from zero and would otherwise leak ~1e-8 into square
    roots.
    """
    low = w.min()
    if low < -PSD_TOL:
        raise NotPSD(f"eigenvalue {low:.3e} below -{PSD_TOL}")
    n = w.shape[-1]
    if scale is None:
        scale = np.max(np.abs(w), axis=-1, keepdims=True)
    floor = 8.0 * n * EPS * np.asarray(scale)
    return np.where(w <= floor, 0.0, w)


def _sqrt_from(w, v):
    w = _clamped(w)
    return (v * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def psd_sqrt(m):
    """Principal square root of a Hermitian positive semidefinite matrix."""
    w, v = hermitian_eig(m)
    r = _sqrt_from(w, v)
    return (r + r.conj().T) / 2


def _check_pair(rho, sigma):
    rho = _as_square(rho)
    sigma = _as_square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    _check_hermitian(rho)
    _check_hermitian(sigma)
    return rho, sigma


def uhlmann_fidelity(rho, sigma):
    """Tr sqrt(sqrt(rho) sigma sqrt(rho)), clipped to [0, 1]."""
    rho, sigma = _check_pair(rho, sigma)
    s = psd_sqrt(rho)
    inner = s @ sigma @ s
    w, _ = hermitian_eig((inner + inner.conj().T) / 2)
    scale = np.abs(rho).max() * np.abs(sigma).max() * rho.shape[0]
    f = math.fsum(np.sqrt(_clamped(w, scale)))
    return min(max(f, 0.0), 1.0)


def uhlmann_fidelity_batch(rhos, sigmas):
    """Fidelities of matched stacks of density matrices, shape (k, n, n) each."""
    rhos = np.asarray(rhos, dtype=np.complex128)
    sigmas = np.asarray(sigmas, dtype=np.complex128)
    if rhos.shape != sigmas.shape:
        raise DimensionMismatch(f"shapes {rhos.shape} and {sigmas.shape} differ")
    w, v = hermitian_eig_batch(rhos)
    s = _sqrt_from(w, v)
    s = (s + np.conj(np.swapaxes(s, 1, 2))) / 2
    inner = s @ sigmas @ s
    inner = (inner + np.conj(np.swapaxes(inner, 1, 2))) / 2
    w, _ = hermitian_eig_batch(inner)
    n = rhos.shape[1]
    scale = (np.abs(rhos).max(axis=(1, 2)) * np.abs(sigmas).max(axis=(1, 2)) * n)[:, None]
    f = np.sqrt(_clamped(w, scale)).sum(axis=1)
    return np.clip(f, 0.0, 1.0)


def trace_distance(rho, sigma):
    """Half the trace norm of rho - sigma."""
    rho, sigma = _check_pair(rho, sigma)
    diff = rho - sigma
    w, _ = hermitian_eig((diff + diff.conj().T) / 2)
    return 0.5 * math.fsum(np.abs(w))
