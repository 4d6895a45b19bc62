"""N-fold repetition code for coherent-state qubits.

Pipeline per channel use: beam-splitter fan-out |±alpha> -> |±alpha/sqrt(N)>^N,
a Hadamard on every mode, loss on every mode, a second Hadamard layer,
majority-vote correction and recombination.  Gate failures (QND
flip/no-flip) and loss-induced phase flips are independent Bernoulli
flips per mode, so they compose by XOR; the vote fails when more than
half the modes flipped.  An uncorrected vote swaps the two repetition
codewords, which after decoding is a logical bit flip |-beta> <-> |beta>,
i.e. sigma_z in the {u, v} frame at beta = alpha*sqrt(eta).

The code corrects flips but does not restore amplitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from .channel import check_eta, flip_probability
from .coherent import LogicalQubit, QubitDensity, density_from_coefficients, ortho_frame
from .hadamard import SIGMA_Z, hadamard_error


class Regime(Enum):
    POST_SELECTED = "PostSelected"
    OFFLINE_ENCODING = "OfflineEncoding"
    DETERMINISTIC = "Deterministic"

    @property
    def order(self):
        return list(Regime).index(self)


ENCODER_AT = ("input", "post_loss")


@dataclass(frozen=True)
class CodeConfig:
    """Repetition count and regime.

    ``encoder_at`` picks the amplitude at which encoder-gate errors are
    charged: alpha/sqrt(N) ("input", default) or alpha*sqrt(eta)/sqrt(N)
    ("post_loss"), for sensitivity studies.
    """

    n_reps: int
    regime: Regime
    encoder_at: str = "input"

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not (1 <= self.n_reps <= 99 and self.n_reps % 2 == 1):
            raise ValueError(f"n_reps = {self.n_reps}: need an odd integer in [1, 99]")
        if self.encoder_at not in ENCODER_AT:
            raise ValueError(f"encoder_at must be one of {ENCODER_AT}")


@dataclass(frozen=True)
class TransmissionResult:
    output: QubitDensity
    p_herald: float
    p_logical_flip: float
    p_success_channel: float


def per_mode_amplitude(alpha, n):
    if n < 1:
        raise ValueError("n must be positive")
    return alpha / math.sqrt(n)


def xor_combine(p1, p2):
    """Probability that exactly one of two independent flips happened."""
    return p1 * (1.0 - p2) + p2 * (1.0 - p1)


def per_mode_flip(alpha, eta, n, regime, encoder_at="input"):
    """(p_flip, p_herald_mode) for one mode of an n-fold code."""
    check_eta(eta)
    regime = Regime(regime)
    a = per_mode_amplitude(alpha, n)
    b = a * math.sqrt(eta)
    a_enc = a if encoder_at == "input" else b
    p_loss = flip_probability(a, eta)
    if regime is Regime.POST_SELECTED:
        return p_loss, (1.0 - hadamard_error(a_enc)) * (1.0 - hadamard_error(b))
    if regime is Regime.OFFLINE_ENCODING:
        return xor_combine(p_loss, hadamard_error(b)), 1.0
    return reduce(xor_combine, (hadamard_error(a_enc), p_loss, hadamard_error(b))), 1.0


def _binomial_terms(p, n, ks):
    q = 1.0 - p
    return [math.comb(n, k) * p ** k * q ** (n - k) for k in ks]


def code_success_probability(p_e, n):
    """sum_{k <= (n-1)/2} C(n, n-k) (1-p)^(n-k) p^k: at most (n-1)/2 flips."""
    if n % 2 != 1:
        raise ValueError("majority vote needs odd n")
    return math.fsum(_binomial_terms(p_e, n, range((n - 1) // 2 + 1)))


def majority_failure_probability(p, n):
    """Probability that more than half of n independent flips occur."""
    if n % 2 != 1:
        raise ValueError("majority vote needs odd n")
    return math.fsum(_binomial_terms(p, n, range((n + 1) // 2, n + 1)))


def logical_flip_prob(alpha, eta, config: CodeConfig):
    """(P_L, p_herald_total) for the configured code."""
    p, herald = per_mode_flip(alpha, eta, config.n_reps, config.regime, config.encoder_at)
    return majority_failure_probability(p, config.n_reps), herald ** config.n_reps


def decoded_density(coefficients, beta, p_flip):
    """Output frame density: the input ray at beta, flipped with probability p_flip."""
    frame = ortho_frame(beta)
    x = frame.transform @ np.asarray(coefficients)
    x = x / np.linalg.norm(x)
    rho = np.outer(x, x.conj())
    zr = SIGMA_Z @ rho @ SIGMA_Z
    return QubitDensity(frame, (1.0 - p_flip) * rho + p_flip * zr)


def decode_frames(x, alpha, eta, p_flip):
    """Vectorized :func:`decoded_density` for frame vectors at ``alpha``.

    ``x`` has shape (k, 2); returns output densities of shape (k, 2, 2).
    Contraction acts on the frame as diag(mu_b/mu_a, nu_b/nu_a).
    """
    fa, fb = ortho_frame(alpha), ortho_frame(alpha * math.sqrt(eta))
    y = np.asarray(x, dtype=np.complex128) * np.array([fb.mu / fa.mu, fb.nu / fa.nu])
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    rho = y[:, :, None] * y.conj()[:, None, :]
    zr = rho * np.array([[1.0, -1.0], [-1.0, 1.0]])
    return (1.0 - p_flip) * rho + p_flip * zr


def transmit(q: LogicalQubit, eta, config: CodeConfig) -> TransmissionResult:
    p_l, herald = logical_flip_prob(q.alpha, eta, config)
    out = decoded_density(q.coefficients(), q.alpha * math.sqrt(eta), p_l)
    return TransmissionResult(out, herald, p_l, 1.0 - p_l)


# ---------------------------------------------------------------- N = 3 oracle

def _bit(x, j):
    return (x >> (2 - j)) & 1


def _mix(r, op, p):
    return (1.0 - p) * r + p * (op @ r @ op.conj().T)


def exact_n3_oracle(q: LogicalQubit, eta, regime, encoder_at="input") -> QubitDensity:
    """Three-mode simulation on coherent coefficients over {|±alpha/sqrt(3)>}^3.

    Index x in 0..7 with bit j (mode j, most significant first) set for
    +amplitude.  Gates are the ideal |0> -> |0>+|1>, |1> -> |0>-|1> map on
    coefficients; failures are coefficient-level flips drawn per mode, loss
    is the exact coherence-damping (equivalently flip) map per mode, the
    vote maps every pattern to its majority codeword and the recombiner
    sends |∓b>^3 to |∓alpha sqrt(eta)>.  Normalization happens once, through
    the Gram matrix, at the end.
    """
    check_eta(eta)
    regime = Regime(regime)
    alpha = q.alpha
    if abs(alpha) > 3:
        raise ValueError("oracle covers |alpha| <= 3")
    a = alpha / math.sqrt(3)
    b = a * math.sqrt(eta)
    c = q.coefficients()
    psi = np.zeros(8, dtype=np.complex128)
    psi[0], psi[7] = c
    r = np.outer(psi, psi.conj())

    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    h3 = np.kron(np.kron(h, h), h)
    xs = np.arange(8)
    z = [np.diag([(-1.0) ** _bit(x, j) for x in xs]) for j in range(3)]
    flip = [np.eye(8)[[x ^ (1 << (2 - j)) for x in xs]] for j in range(3)]

    r = h3 @ r @ h3.T
    if regime is Regime.DETERMINISTIC:
        p_enc = hadamard_error(a if encoder_at == "input" else b)
        for j in range(3):
            r = _mix(r, z[j], p_enc)
    p_loss = flip_probability(a, eta)
    for j in range(3):
        r = _mix(r, z[j], p_loss)
    r = h3 @ r @ h3.T
    if regime is not Regime.POST_SELECTED:
        p_dec = hadamard_error(b)
        for j in range(3):
            r = _mix(r, flip[j], p_dec)

    vote = np.zeros((2, 8))
    for x in xs:
        vote[int(bin(x).count("1") >= 2), x] = 1.0
    r2 = vote @ r @ vote.T
    return density_from_coefficients(ortho_frame(alpha * math.sqrt(eta)), r2)
