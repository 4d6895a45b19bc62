"""Figures of merit for the decoded channel output and for a transmitted entangled pair."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .channel import TwoQubitDensity, damp_entangled
from .coherent import (LogicalQubit, QubitDensity, bloch_antipode, overlap, qubit_from_frame_vector,
                       vector_of_bloch)
from .errors import NotPSD
from .gvr import CodeConfig, decode_frames, logical_flip_prob, transmit

DEGENERATE_NORM = 1e-6
TIE_TOL = 1e-12
REFERENCES = ("original", "contracted")

# ---------------------------------------------------------------- fidelity


def state_fidelity_vs_input(q: LogicalQubit, out: QubitDensity, reference="original"):
    """sqrt(<Q|rho|Q>) with |Q> at alpha ("original") or at the output amplitude."""
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    beta = out.frame.alpha
    ref_alpha = q.alpha if reference == "original" else beta
    c = q.coefficients()
    if reference == "contracted":
        c = LogicalQubit(beta, q.w, q.theta).coefficients()
    r = out.coefficient_matrix()
    signs = (-1, 1)
    # g_i = <Q|s_i beta>
    g = np.array([sum(np.conj(c[k]) * overlap(signs[k] * ref_alpha, signs[i] * beta) for k in range(2))
                  for i in range(2)])
    val = (g @ r @ g.conj()).real
    return math.sqrt(min(max(val, 0.0), 1.0))


def _landscape(alpha, eta, p_flip, w, theta, reference):
    """Vectorized fidelity of the decoded output against the input, over (w, theta) arrays."""
    a2 = abs(alpha) ** 2
    b2 = a2 * eta
    ref2 = a2 if reference == "original" else b2
    cross = 2 * np.cos(theta) * np.sqrt(w * (1 - w))
    norm_ref = 1 + cross * math.exp(-2 * ref2)
    norm_out = 1 + cross * math.exp(-2 * b2)
    c0 = np.sqrt(w)
    c1 = np.exp(1j * theta) * np.sqrt(1 - w)
    # overlaps <s ref|t beta> for real-aligned amplitudes, s,t in {-,+}
    same = math.exp(-(ref2 + b2) / 2 + math.sqrt(ref2 * b2))
    diff = math.exp(-(ref2 + b2) / 2 - math.sqrt(ref2 * b2))
    # <Q|v> and <Q|X v> with v = c0|-b> + c1|b>, X v = c1|-b> + c0|b>
    qv = np.conj(c0) * (c0 * same + c1 * diff) + np.conj(c1) * (c0 * diff + c1 * same)
    qxv = np.conj(c0) * (c1 * same + c0 * diff) + np.conj(c1) * (c1 * diff + c0 * same)
    f2 = ((1 - p_flip) * np.abs(qv) ** 2 + p_flip * np.abs(qxv) ** 2) / (norm_ref * norm_out)
    return np.sqrt(np.clip(f2, 0.0, 1.0)), norm_ref


def worst_case_fidelity(alpha, eta, config: CodeConfig, grid=(41, 41), refine=True, reference="original"):
    """Minimum of the input/output fidelity over w in [0, 1], theta in [0, pi].

    Dense grid first, then an optional bounded Nelder-Mead polish from the
    best cell.  Returns ``(f, (w, theta))``.
    """
    n_w, n_t = grid
    if n_w < 41 or n_t < 41:
        raise ValueError("grid must be at least 41 x 41")
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    alpha = abs(alpha)  # the landscape depends on |alpha| only
    p_flip, _ = logical_flip_prob(alpha, eta, config)
    ws = np.linspace(0.0, 1.0, n_w)
    ts = np.linspace(0.0, math.pi, n_t)
    wg, tg = np.meshgrid(ws, ts, indexing="ij")
    f, norm = _landscape(alpha, eta, p_flip, wg, tg, reference)
    f = np.where(norm > DEGENERATE_NORM, f, np.inf)
    flat = f.ravel()
    best = flat.min()
    i = int(np.flatnonzero(flat <= best + TIE_TOL)[0])  # w-major order: lexicographic tie-break
    w0, t0 = float(wg.flat[i]), float(tg.flat[i])
    if not refine:
        return float(best), (w0, t0)

    def objective(x):
        val, n = _landscape(alpha, eta, p_flip, np.clip(x[0], 0, 1), np.clip(x[1], 0, math.pi), reference)
        return float(val) if n > DEGENERATE_NORM else 2.0

    res = minimize(objective, [w0, t0], method="Nelder-Mead", bounds=[(0.0, 1.0), (0.0, math.pi)],
                   options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000})
    if res.fun < best - TIE_TOL:
        return float(res.fun), (float(np.clip(res.x[0], 0, 1)), float(np.clip(res.x[1], 0, math.pi)))
    return float(best), (w0, t0)


# ---------------------------------------------------------------- codeword overlap

@dataclass(frozen=True)
class QuadratureSpec:
    n_nodes: int = 400
    scheme: str = "spiral"

    def __post_init__(self):
        if self.n_nodes < 16:
            raise ValueError("need at least 16 quadrature nodes")
        if self.scheme not in ("spiral", "grid"):
            raise ValueError("scheme must be 'spiral' or 'grid'")


def bloch_nodes(quad: QuadratureSpec):
    """Unit vectors and weights for uniform averages over the sphere."""
    k = quad.n_nodes
    if quad.scheme == "spiral":
        i = np.arange(k)
        z = 1 - (2 * i + 1) / k
        phi = i * math.pi * (3 - math.sqrt(5))
        weights = np.full(k, 1.0 / k)
    else:
        n_z = max(int(round(math.sqrt(k / 2))), 2)
        n_phi = k // n_z
        zs, wz = np.polynomial.legendre.leggauss(n_z)
        phis = 2 * math.pi * (np.arange(n_phi) + 0.5) / n_phi
        z = np.repeat(zs, n_phi)
        phi = np.tile(phis, n_z)
        weights = np.repeat(wz / 2, n_phi) / n_phi
    s = np.sqrt(1 - z * z)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1), weights


def _frame_vectors(r):
    t = np.arccos(np.clip(r[:, 2], -1.0, 1.0))
    phi = np.arctan2(r[:, 1], r[:, 0])
    return np.stack([np.cos(t / 2), np.exp(1j * phi) * np.sin(t / 2)], axis=1).astype(np.complex128)


def codeword_overlap(alpha, eta, config: CodeConfig, quad=QuadratureSpec()):
    """Average fidelity between decoded outputs of Bloch-antipodal inputs."""
    p_flip, _ = logical_flip_prob(alpha, eta, config)
    r, weights = bloch_nodes(quad)
    out = decode_frames(_frame_vectors(r), alpha, eta, p_flip)
    out_anti = decode_frames(_frame_vectors(-r), alpha, eta, p_flip)
    f = linalg.uhlmann_fidelity_batch(out, out_anti)
    return min(max(math.fsum(weights * f), 0.0), 1.0)


def codeword_overlap_pointwise(alpha, eta, config: CodeConfig, quad=QuadratureSpec()):
    """Scalar reference for :func:`codeword_overlap`, one LogicalQubit at a time."""
    r, weights = bloch_nodes(quad)
    terms = []
    for node, wt in zip(r, weights):
        q = qubit_from_frame_vector(alpha, vector_of_bloch(node))
        rho = transmit(q, eta, config).output.matrix
        sigma = transmit(bloch_antipode(q), eta, config).output.matrix
        terms.append(wt * linalg.uhlmann_fidelity(rho, sigma))
    return min(max(math.fsum(terms), 0.0), 1.0)


# ---------------------------------------------------------------- concurrence

_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _matrix(rho):
    return rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=np.complex128)


def concurrence_general(rho):
    """Wootters concurrence, via the spectrum of sqrt(rho) rho~ sqrt(rho)."""
    m = _matrix(rho)
    s = linalg.psd_sqrt(m)
    tilde = _SYSY @ m.conj() @ _SYSY
    inner = s @ tilde @ s
    w, _ = linalg.hermitian_eig((inner + inner.conj().T) / 2)
    roots = np.sort(np.sqrt(linalg._clamped(w, np.abs(m).max() ** 2 * 4)))[::-1]
    return max(0.0, roots[0] - roots[1] - roots[2] - roots[3])


def x_elements(rho):
    """(a, b, c, d, f, z) of an X-shaped 4x4 density."""
    m = _matrix(rho)
    return m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real, m[0, 3], m[1, 2]


def concurrence_x(a, b, c, d, f, z):
    """2 max(0, |z| - sqrt(ad), |f| - sqrt(bc)) for an X state."""
    if abs(a + b + c + d - 1) > 1e-10:
        raise NotPSD(f"diagonal sums to {a + b + c + d:.12g}, not 1")
    if min(a, b, c, d) < -1e-8 or abs(f) ** 2 > a * d + 1e-8 or abs(z) ** 2 > b * c + 1e-8:
        raise NotPSD("X matrix violates |f|^2 <= ad or |z|^2 <= bc")
    ad = math.sqrt(max(a * d, 0.0))
    bc = math.sqrt(max(b * c, 0.0))
    return 2 * max(0.0, abs(z) - ad, abs(f) - bc)


def entangled_merit(alpha, eta, config: CodeConfig, method="x"):
    """Concurrence after sending mode 2 of the entangled pair through the code."""
    p_flip, _ = logical_flip_prob(alpha, eta, config)
    rho = damp_entangled(alpha, eta, flip_prob_override=p_flip)
    if method == "general":
        return concurrence_general(rho)
    return concurrence_x(*x_elements(rho))


# ---------------------------------------------------------------- records

METRICS = ("p_herald", "f_worst", "f_codeword", "concurrence")


@dataclass(frozen=True)
class MeritRecord:
    alpha: float
    eta: float
    n_reps: int
    regime: str
    p_herald: float = math.nan
    f_worst: float = math.nan
    worst_input: tuple = field(default=(math.nan, math.nan))
    f_codeword: float = math.nan
    concurrence: float = math.nan


def compute_merits(alpha, eta, config: CodeConfig, metrics=("p_herald", "f_codeword", "concurrence"),
                   quad=QuadratureSpec(), grid=(41, 41)):
    unknown = set(metrics) - set(METRICS)
    if unknown:
        raise ValueError(f"unknown metrics {sorted(unknown)}")
    values = {}
    if "p_herald" in metrics:
        values["p_herald"] = logical_flip_prob(alpha, eta, config)[1]
    if "f_worst" in metrics:
        f, arg = worst_case_fidelity(alpha, eta, config, grid=grid)
        values["f_worst"] = f
        values["worst_input"] = arg
    if "f_codeword" in metrics:
        values["f_codeword"] = codeword_overlap(alpha, eta, config, quad)
    if "concurrence" in metrics:
        values["concurrence"] = entangled_merit(alpha, eta, config)
    return MeritRecord(alpha, eta, config.n_reps, config.regime.value, **values)
