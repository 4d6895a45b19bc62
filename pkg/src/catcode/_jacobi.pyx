# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernel for stacks of small complex Hermitian matrices.

Same rotation sequence and stopping rule as ``_jacobi_py.eigh_batch``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

from .errors import NoConvergence

cnp.import_array()

cdef double SKIP = 2.0 ** -60
cdef double TINY = 1e-300


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi_one(double complex[:, ::1] a, double complex[:, ::1] v,
                     double tol, int max_sweeps) noexcept nogil:
    """Diagonalize ``a`` in place, accumulating rotations in ``v``.

    Returns the sweep count, or -1 when the budget ran out.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, p, q
    cdef int sweeps = 0
    cdef bint rotated
    cdef double off, absb, app, aqq, theta, t, c, s
    cdef double complex b, e, ce, x, y
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += cabs2(a[p, q])
        off = sqrt(2.0 * off)
        if off <= tol:
            return sweeps
        if sweeps >= max_sweeps:
            return -1
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                absb = sqrt(cabs2(b))
                app = a[p, p].real
                aqq = a[q, q].real
                if absb <= SKIP * (fabs(app) + fabs(aqq)) or absb < TINY:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                rotated = True
                e = b / absb
                ce = e.conjugate()
                theta = (aqq - app) / (2.0 * absb)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    x = a[i, p]
                    y = a[i, q]
                    a[i, p] = c * x - s * ce * y
                    a[i, q] = s * x + c * ce * y
                for i in range(n):
                    x = a[p, i]
                    y = a[q, i]
                    a[p, i] = c * x - s * e * y
                    a[q, i] = s * x + c * e * y
                for i in range(n):
                    x = v[i, p]
                    y = v[i, q]
                    v[i, p] = c * x - s * ce * y
                    v[i, q] = s * x + c * ce * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        if not rotated:
            return sweeps


def eigh_batch(a, double tol=1e-14, int max_sweeps=100):
    """Eigendecompose a stack of Hermitian matrices, shape (k, n, n).

    Returns ascending eigenvalues (k, n), eigenvector columns (k, n, n) and
    the largest sweep count used.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t k = work.shape[0]
    cdef Py_ssize_t n = work.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] vecs = np.zeros((k, n, n), dtype=np.complex128)
    cdef double complex[:, :, ::1] aw = work
    cdef double complex[:, :, ::1] vw = vecs
    cdef Py_ssize_t m, i
    cdef int used, worst = 0
    for m in range(k):
        for i in range(n):
            vw[m, i, i] = 1.0
        with nogil:
            used = _jacobi_one(aw[m], vw[m], tol, max_sweeps)
        if used < 0:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        if used > worst:
            worst = used
    w = np.ascontiguousarray(np.diagonal(work, axis1=1, axis2=2).real)
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return w, vecs, worst
