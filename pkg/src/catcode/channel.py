"""Photon loss acting on coherent-state qubits.

Loss with transmissivity eta contracts every amplitude by sqrt(eta) and
multiplies each coherence between |-alpha> and |alpha> components by
<gamma|-gamma> = exp(-2 (1 - eta) |alpha|^2) = 1 - 2 p_e, which is the
same as a logical phase flip applied with probability p_e.  On coherent
coefficients that is an exact, linear statement; the frame density is
renormalized only to remove round-off.

The Fock-space Kraus oracle below is an independent route to the same
states and is what the analytic map is checked against.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .coherent import (LogicalQubit, OrthoFrame, QubitDensity, check_amplitude, density_from_coefficients,
                       ortho_frame)
from .errors import TruncationTooSmall

log = logging.getLogger(__name__)

TAIL_TOL = 1e-10
FOCK_DIM_MAX = 64


def check_eta(eta):
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta = {eta} outside (0, 1]")
    return eta


def flip_probability(alpha, eta):
    """p_e = (1 - exp(-2 (1 - eta) |alpha|^2)) / 2."""
    check_eta(eta)
    return -0.5 * math.expm1(-2.0 * (1.0 - eta) * abs(alpha) ** 2)


def damp_coefficients(coeff_matrix, alpha, eta):
    """Loss map on a coherent-coefficient operator at amplitude ``alpha``.

    The result lives on the kets at alpha*sqrt(eta).
    """
    kappa = 1.0 - 2.0 * flip_probability(alpha, eta)
    r = np.array(coeff_matrix, dtype=np.complex128)
    r[0, 1] *= kappa
    r[1, 0] *= kappa
    return r


def damp_qubit(q: LogicalQubit, eta) -> QubitDensity:
    c = q.coefficients()
    return _damp_pure(np.outer(c, c.conj()), q.alpha, eta)


def _damp_pure(coeff_matrix, alpha, eta):
    r = damp_coefficients(coeff_matrix, alpha, eta)
    return density_from_coefficients(ortho_frame(alpha * math.sqrt(eta)), r)


def damp_density(rho: QubitDensity, eta) -> QubitDensity:
    """Loss applied to an arbitrary (possibly mixed) qubit density."""
    return _damp_pure(rho.coefficient_matrix(), rho.frame.alpha, eta)


# ---------------------------------------------------------------- Fock oracle

@dataclass(frozen=True)
class FockState:
    n_max: int
    coeffs: np.ndarray


def default_n_max(alpha):
    a = abs(alpha)
    if a <= 2.5:
        return 40
    if a <= 3.5:
        return 63
    raise TruncationTooSmall(f"|alpha| = {a:g} > 3.5: Fock oracle disabled, use analytic forms")


def fock_coherent(alpha, n_max) -> FockState:
    """|alpha> = exp(-|alpha|^2 / 2) sum_n alpha^n / sqrt(n!) |n>, truncated at n_max."""
    check_amplitude(alpha)
    a = abs(alpha)
    if a * a + 6 * a + 10 > n_max:
        raise TruncationTooSmall(f"n_max = {n_max} too small for |alpha| = {a:g}")
    if n_max + 1 > FOCK_DIM_MAX:
        raise TruncationTooSmall(f"n_max = {n_max} exceeds {FOCK_DIM_MAX - 1}")
    n = np.arange(n_max + 1)
    if a == 0.0:
        coeffs = (n == 0).astype(np.complex128)
    else:
        mag = np.exp(-a * a / 2 + n * math.log(a) - 0.5 * gammaln(n + 1))
        coeffs = mag * np.exp(1j * n * np.angle(alpha))
    tail = float(np.sum(np.abs(coeffs[max(n_max - 4, 0):]) ** 2))
    if tail > TAIL_TOL:
        raise TruncationTooSmall(f"tail mass {tail:.2e} above {TAIL_TOL}")
    return FockState(n_max, coeffs)


def loss_kraus(n_max, eta):
    """Kraus operators E_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|."""
    check_eta(eta)
    dim = n_max + 1
    ops = []
    for k in range(dim if eta < 1.0 else 1):
        e = np.zeros((dim, dim))
        for n in range(k, dim):
            logw = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + (n - k) * math.log(eta)
            if k:
                logw += k * math.log1p(-eta)
            e[n - k, n] = math.exp(0.5 * logw)
        ops.append(e)
    return ops


def fock_damp_oracle(psi, eta):
    """Loss channel on a truncated Fock state (vector or density matrix)."""
    if isinstance(psi, FockState):
        psi = psi.coeffs
    psi = np.asarray(psi, dtype=np.complex128)
    rho = np.outer(psi, psi.conj()) if psi.ndim == 1 else psi
    dim = rho.shape[0]
    if dim > FOCK_DIM_MAX:
        raise TruncationTooSmall(f"dimension {dim} exceeds {FOCK_DIM_MAX}")
    out = np.zeros_like(rho)
    for e in loss_kraus(dim - 1, eta):
        out += e @ rho @ e.T
    return (out + out.conj().T) / 2


def fock_density(rho: QubitDensity, n_max):
    """Embed a frame density into the truncated Fock space."""
    alpha = rho.frame.alpha
    kets = np.stack([fock_coherent(-alpha, n_max).coeffs, fock_coherent(alpha, n_max).coeffs], axis=1)
    m = kets @ rho.coefficient_matrix() @ kets.conj().T
    return (m + m.conj().T) / 2


def fock_qubit_state(q: LogicalQubit, n_max):
    c = q.coefficients()
    return c[0] * fock_coherent(-q.alpha, n_max).coeffs + c[1] * fock_coherent(q.alpha, n_max).coeffs


# ---------------------------------------------------------------- two modes

SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)


@dataclass(frozen=True)
class TwoQubitDensity:
    """4x4 density in the basis (|uu>, |uv>, |vu>, |vv>); mode 2 at alpha*sqrt(eta)."""

    frames: tuple[OrthoFrame, OrthoFrame]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"two-qubit density must be 4x4, got {m.shape}")
        if abs(m.trace() - 1) > 1e-10:
            raise ValueError(f"trace {m.trace().real:.12g} != 1")
        object.__setattr__(self, "matrix", m)

    def reduced(self, keep):
        """Reduced density of mode ``keep`` (0 or 1)."""
        t = self.matrix.reshape(2, 2, 2, 2)
        m = np.einsum("ijkj->ik", t) if keep == 0 else np.einsum("ijil->jl", t)
        return QubitDensity(self.frames[keep], m)


def _entangled_coefficients(sign):
    # index 2*s1 + s2, s = 0 for -alpha and 1 for +alpha
    c = np.zeros(4, dtype=np.complex128)
    c[3] = 1.0
    c[0] = sign
    return c


def damp_entangled(alpha, eta, flip_prob_override=None, sign=-1) -> TwoQubitDensity:
    """Send mode 2 of |alpha,alpha> + sign |-alpha,-alpha> through loss.

    Without an override the mode-2 map is the physical loss channel.  With
    ``flip_prob_override=p`` mode 2 instead carries the decoded output of
    the repetition code: amplitude contracted to alpha*sqrt(eta), no other
    decoherence, and a residual logical flip (sigma_z in mode 2's frame)
    with probability p.
    """
    check_eta(eta)
    if not abs(alpha) > 0:
        raise ValueError("alpha must be nonzero")
    beta = alpha * math.sqrt(eta)
    f1, f2 = ortho_frame(alpha), ortho_frame(beta)
    t = np.kron(f1.transform, f2.transform)
    c = _entangled_coefficients(sign)
    if flip_prob_override is None:
        r = np.outer(c, c.conj())
        kappa = 1.0 - 2.0 * flip_probability(alpha, eta)
        s2 = np.array([0, 1, 0, 1])
        r = r * np.where(s2[:, None] != s2[None, :], kappa, 1.0)
        m = t @ r @ t.conj().T
    else:
        p = float(flip_prob_override)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"flip probability {p} outside [0, 1]")
        x = t @ c
        x /= np.linalg.norm(x)
        zx = np.kron(np.eye(2), SIGMA_Z) @ x
        m = (1 - p) * np.outer(x, x.conj()) + p * np.outer(zx, zx.conj())
    m = (m + m.conj().T) / 2
    return TwoQubitDensity((f1, f2), m / m.trace().real)
