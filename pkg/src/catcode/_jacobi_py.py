"""Pure numpy fallback for the cyclic Jacobi kernel.

Rotations are vectorized over the batch axis, so a stack of small matrices
costs one pass of numpy calls per (p, q) pair rather than one per matrix.
Mirrors ``_jacobi.pyx`` operation for operation.
"""
import numpy as np

from .errors import NoConvergence

# |a_pq| below this fraction of |a_pp| + |a_qq| is under rounding; zero it.
SKIP = 2.0 ** -60
TINY = 1e-300


def eigh_batch(a, tol=1e-14, max_sweeps=100):
    """Eigendecompose a stack of Hermitian matrices.

    Parameters
    ----------
    a : ndarray, shape (k, n, n)
        Complex Hermitian matrices. Not modified.

    Returns
    -------
    w : ndarray, shape (k, n)
        Ascending real eigenvalues.
    v : ndarray, shape (k, n, n)
        Orthonormal eigenvectors in the columns.
    sweeps : int
        Largest number of sweeps any matrix needed.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    k, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (k, n, n)).copy()
    idx = np.arange(n)
    if n == 1:
        return a[:, :, 0].real.copy(), v, 0

    upper = np.triu_indices(n, 1)
    done = np.zeros(k, dtype=bool)
    sweeps = 0
    while True:
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, upper[0], upper[1]]) ** 2, axis=1))
        done |= off <= tol
        if done.all():
            break
        if sweeps >= max_sweeps:
            raise NoConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off.max():.3e})")
        sweeps += 1
        rotated = np.zeros(k, dtype=bool)
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[:, p, q]
                absb = np.abs(b)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                negligible = (absb <= SKIP * (np.abs(app) + np.abs(aqq))) | (absb < TINY)
                act = ~negligible & ~done
                if not act.any():
                    a[negligible, p, q] = 0.0
                    a[negligible, q, p] = 0.0
                    continue
                rotated |= act
                safe = np.where(act, absb, 1.0)
                e = np.where(act, b / safe, 1.0)
                theta = (aqq - app) / (2.0 * safe)
                big = np.abs(theta) > 1e150
                t = np.where(
                    big, 0.5 / np.where(big, theta, 1.0),
                    np.sign(theta + (theta == 0)) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c = np.where(act, c, 1.0)
                s = np.where(act, s, 0.0)
                ce = np.conj(e)
                # columns: A <- A G, G = [[c, s], [-s conj(e), c conj(e)]]
                ap = a[:, :, p].copy()
                aq = a[:, :, q]
                a[:, :, p] = c[:, None] * ap - (s * ce)[:, None] * aq
                a[:, :, q] = s[:, None] * ap + (c * ce)[:, None] * aq
                # rows: A <- G^H A
                ap = a[:, p, :].copy()
                aq = a[:, q, :]
                a[:, p, :] = c[:, None] * ap - (s * e)[:, None] * aq
                a[:, q, :] = s[:, None] * ap + (c * e)[:, None] * aq
                vp = v[:, :, p].copy()
                vq = v[:, :, q]
                v[:, :, p] = c[:, None] * vp - (s * ce)[:, None] * vq
                v[:, :, q] = s[:, None] * vp + (c * ce)[:, None] * vq
                zero = act | negligible
                a[zero, p, q] = 0.0
                a[zero, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
        done |= ~rotated

    w = a[:, idx, idx].real
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v, sweeps
