"""Coherent-state alphabet and its orthonormal {u, v} frame.

Logical states are |0> = |-alpha>, |1> = |alpha>.  Everything downstream
works in one of two coordinate systems:

* coherent coefficients ``c = (c0, c1)`` on the non-orthogonal kets
  (|-alpha>, |alpha>); inner products need the Gram matrix;
* frame coordinates on the orthonormal pair (|u>, |v>), reached through
  ``OrthoFrame.transform``.

|u> is the even cat and the frame's Bloch +z axis; |v> is minus the odd cat.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQubit

MAX_AMPLITUDE = 10.0
NORM_FLOOR = 1e-12
TRACE_TOL = 1e-10


def check_amplitude(alpha):
    if abs(alpha) > MAX_AMPLITUDE:
        raise ValueError(f"|alpha| = {abs(alpha):g} exceeds {MAX_AMPLITUDE}")
    return alpha


def overlap(a, b):
    """<a|b> for coherent states |a>, |b>."""
    return cmath.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2 + a.conjugate() * b)


@dataclass(frozen=True)
class LogicalQubit:
    """(sqrt(w)|-alpha> + e^{i theta} sqrt(1-w)|alpha>) / sqrt(N(alpha)).

    ``theta`` is accepted on the full circle [0, 2 pi]: Bloch antipodes of
    states with theta in [0, pi] land in the other half.
    """

    alpha: complex
    w: float
    theta: float

    def __post_init__(self):
        check_amplitude(self.alpha)
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w = {self.w} outside [0, 1]")
        if not 0.0 <= self.theta <= 2 * math.pi:
            raise ValueError(f"theta = {self.theta} outside [0, 2 pi]")

    def coefficients(self):
        """Normalized coherent coefficients (c0, c1)."""
        norm = qubit_normalization(self)
        return np.array([math.sqrt(self.w),
                         cmath.exp(1j * self.theta) * math.sqrt(1.0 - self.w)]) / math.sqrt(norm)


def qubit_normalization(q: LogicalQubit) -> float:
    cross = 2 * math.cos(q.theta) * math.sqrt(q.w * (1 - q.w)) * math.exp(-2 * abs(q.alpha) ** 2)
    norm = 1.0 + cross
    if norm <= NORM_FLOOR:
        raise DegenerateQubit(f"N(alpha) = {norm:.3e} for w={q.w}, theta={q.theta}, alpha={q.alpha}")
    return norm


@dataclass(frozen=True)
class OrthoFrame:
    alpha: complex
    mu: float
    nu: float

    @property
    def transform(self):
        """Maps coherent coefficients (c0, c1) to (u, v) coordinates."""
        return np.array([[self.mu, self.mu], [-self.nu, self.nu]], dtype=np.complex128)

    @property
    def inverse_transform(self):
        if self.nu == 0.0:
            raise DegenerateQubit("alpha = 0: the two logical kets coincide")
        return np.array([[0.5 / self.mu, -0.5 / self.nu],
                         [0.5 / self.mu, 0.5 / self.nu]], dtype=np.complex128)

    @property
    def gram(self):
        e = math.exp(-2 * abs(self.alpha) ** 2)
        return np.array([[1.0, e], [e, 1.0]])


def ortho_frame(alpha) -> OrthoFrame:
    check_amplitude(alpha)
    x = 2 * abs(alpha) ** 2
    mu = math.sqrt((1 + math.exp(-x)) / 2)
    nu = math.sqrt(-math.expm1(-x) / 2)
    return OrthoFrame(alpha, mu, nu)


@dataclass(frozen=True)
class QubitDensity:
    """Density matrix in the ordered frame basis (|u>, |v>) at ``frame.alpha``."""

    frame: OrthoFrame
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"qubit density must be 2x2, got {m.shape}")
        if abs(m.trace() - 1) > TRACE_TOL:
            raise ValueError(f"trace {m.trace().real:.12g} != 1")
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if min(m[0, 0].real, m[1, 1].real) < -TRACE_TOL or np.linalg.det(m).real < -TRACE_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    def coefficient_matrix(self):
        """The operator as sum_ij R_ij |s_i alpha><s_j alpha| over the coherent kets."""
        t = self.frame.inverse_transform
        return t @ self.matrix @ t.conj().T

    def bloch_vector(self):
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])


def density_from_coefficients(frame: OrthoFrame, coeff_matrix) -> QubitDensity:
    """Frame density from a coherent-coefficient operator, renormalized to unit trace."""
    t = frame.transform
    m = t @ np.asarray(coeff_matrix) @ t.conj().T
    m = (m + m.conj().T) / 2
    return QubitDensity(frame, m / m.trace().real)


def frame_vector(q: LogicalQubit):
    """Normalized (u, v) coordinates of the qubit."""
    return ortho_frame(q.alpha).transform @ q.coefficients()


def qubit_to_density(q: LogicalQubit) -> QubitDensity:
    x = frame_vector(q)
    m = np.outer(x, x.conj())
    return QubitDensity(ortho_frame(q.alpha), m / m.trace().real)


def qubit_from_coefficients(alpha, c) -> LogicalQubit:
    """LogicalQubit for the ray c0|-alpha> + c1|alpha>, global phase dropped."""
    c = np.asarray(c, dtype=np.complex128)
    p0, p1 = abs(c[0]) ** 2, abs(c[1]) ** 2
    if p0 + p1 == 0.0:
        raise DegenerateQubit("zero coefficient vector")
    w = min(max(p0 / (p0 + p1), 0.0), 1.0)
    if p0 == 0.0 or p1 == 0.0:
        theta = 0.0
    else:
        theta = (cmath.phase(c[1]) - cmath.phase(c[0])) % (2 * math.pi)
    return LogicalQubit(alpha, w, theta)


def qubit_from_frame_vector(alpha, x) -> LogicalQubit:
    return qubit_from_coefficients(alpha, ortho_frame(alpha).inverse_transform @ np.asarray(x))


def bloch_of_vector(x):
    x = np.asarray(x, dtype=np.complex128)
    x = x / np.linalg.norm(x)
    cross = np.conj(x[0]) * x[1]
    return np.array([2 * cross.real, 2 * cross.imag, abs(x[0]) ** 2 - abs(x[1]) ** 2])


def vector_of_bloch(r):
    """Frame vector (cos(t/2), e^{i phi} sin(t/2)) for a unit Bloch vector."""
    x, y, z = r
    t = math.acos(min(max(z, -1.0), 1.0))
    phi = math.atan2(y, x)
    return np.array([math.cos(t / 2), cmath.exp(1j * phi) * math.sin(t / 2)])


def bloch_antipode(q: LogicalQubit) -> LogicalQubit:
    """The qubit whose frame Bloch vector is the negation of ``q``'s."""
    x = frame_vector(q)
    # (x_u, x_v) -> (-conj(x_v), conj(x_u)) negates the Bloch vector
    return qubit_from_frame_vector(q.alpha, np.array([-np.conj(x[1]), np.conj(x[0])]))
