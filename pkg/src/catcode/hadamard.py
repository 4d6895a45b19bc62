"""Coherent-state Hadamard gate.

On the orthonormal frame the gate is the fixed unitary
|u> -> (|u> - |v>)/sqrt(2), |v> -> -(|u> + |v>)/sqrt(2).  Read back in the
coherent alphabet it only approximates |0> -> |0> + |1>, |1> -> |0> - |1>:
a QND measurement in the cat basis turns the mismatch into a Bernoulli
flip, succeeding with p_ok = (mu + nu)^2 / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coherent import OrthoFrame, QubitDensity

_H = np.array([[1.0, -1.0], [-1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)


class GateMode(Enum):
    HERALDED = "heralded"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class HadamardStats:
    alpha: complex
    p_ok: float
    p_err: float


def hadamard_unitary_frame(frame: OrthoFrame | None = None):
    """The gate's matrix in (|u>, |v>) coordinates (independent of alpha)."""
    return _H.copy()


def hadamard_error(alpha):
    """p_err = (1 - sqrt(1 - exp(-4|alpha|^2))) / 2, computed without cancellation."""
    x = 4.0 * abs(alpha) ** 2
    e = math.exp(-x)
    root = math.sqrt(-math.expm1(-x))
    # 1 - sqrt(1 - e) = e / (1 + sqrt(1 - e))
    return 0.5 * e / (1.0 + root)


def hadamard_stats(alpha) -> HadamardStats:
    p_err = hadamard_error(alpha)
    return HadamardStats(alpha, 1.0 - p_err, p_err)


def apply_hadamard(density: QubitDensity, mode=GateMode.HERALDED):
    """Apply the gate; returns ``(output, herald_prob)``.

    Heralded: the ideal image, charged p_ok.  Deterministic: the ideal image
    mixed with its flipped copy, p_ok : p_err, at no charge.
    """
    mode = GateMode(mode)
    stats = hadamard_stats(density.frame.alpha)
    ideal = _H @ density.matrix @ _H.conj().T
    if mode is GateMode.HERALDED:
        return QubitDensity(density.frame, ideal), stats.p_ok
    mixed = stats.p_ok * ideal + stats.p_err * (SIGMA_Z @ ideal @ SIGMA_Z)
    return QubitDensity(density.frame, mixed), 1.0
