# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: batched polynomial evaluation and subspace distances.

Signatures mirror :mod:`diophant._pykernels` exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, sqrt

cnp.import_array()


cdef inline void _powers(const double complex[:, :] pts, Py_ssize_t row,
                         Py_ssize_t nv, Py_ssize_t maxdeg,
                         double complex[:, :] pw) noexcept nogil:
    cdef Py_ssize_t i, e
    for i in range(nv):
        pw[i, 0] = 1.0
        for e in range(1, maxdeg + 1):
            pw[i, e] = pw[i, e - 1] * pts[row, i]


def poly_eval(cnp.int64_t[:, :] exps, double complex[:] coeffs,
              double complex[:, :] pts):
    cdef Py_ssize_t nt = exps.shape[0], nv = exps.shape[1], npts = pts.shape[0]
    cdef Py_ssize_t maxdeg = 0, r, t, i
    for t in range(nt):
        for i in range(nv):
            if exps[t, i] > maxdeg:
                maxdeg = exps[t, i]
    out = np.zeros(npts, dtype=np.complex128)
    cdef double complex[:] o = out
    pw_arr = np.empty((nv, maxdeg + 1), dtype=np.complex128)
    cdef double complex[:, :] pw = pw_arr
    cdef double complex acc, m
    with nogil:
        for r in range(npts):
            _powers(pts, r, nv, maxdeg, pw)
            acc = 0.0
            for t in range(nt):
                m = coeffs[t]
                for i in range(nv):
                    m = m * pw[i, exps[t, i]]
                acc = acc + m
            o[r] = acc
    return out


def poly_eval_grad(cnp.int64_t[:, :] exps, double complex[:] coeffs,
                   double complex[:, :] pts):
    cdef Py_ssize_t nt = exps.shape[0], nv = exps.shape[1], npts = pts.shape[0]
    cdef Py_ssize_t maxdeg = 0, r, t, i, j
    for t in range(nt):
        for i in range(nv):
            if exps[t, i] > maxdeg:
                maxdeg = exps[t, i]
    vals = np.zeros(npts, dtype=np.complex128)
    grads = np.zeros((npts, nv), dtype=np.complex128)
    cdef double complex[:] v = vals
    cdef double complex[:, :] g = grads
    pw_arr = np.empty((nv, maxdeg + 1), dtype=np.complex128)
    cdef double complex[:, :] pw = pw_arr
    cdef double complex acc, m, d
    with nogil:
        for r in range(npts):
            _powers(pts, r, nv, maxdeg, pw)
            acc = 0.0
            for t in range(nt):
                m = coeffs[t]
                for i in range(nv):
                    m = m * pw[i, exps[t, i]]
                acc = acc + m
                for j in range(nv):
                    if exps[t, j] == 0:
                        continue
                    d = coeffs[t] * exps[t, j]
                    for i in range(nv):
                        if i == j:
                            d = d * pw[i, exps[t, i] - 1]
                        else:
                            d = d * pw[i, exps[t, i]]
                    g[r, j] = g[r, j] + d
            v[r] = acc
    return vals, grads


def log_abs_sums(cnp.int64_t[:, :] exps, double complex[:] coeffs,
                 double complex[:, :] pts):
    """Return (sum log|f|, sum log|f|^2, zero count) over unit-norm rows."""
    cdef Py_ssize_t nt = exps.shape[0], nv = exps.shape[1], npts = pts.shape[0]
    cdef Py_ssize_t maxdeg = 0, r, t, i, zeros = 0
    for t in range(nt):
        for i in range(nv):
            if exps[t, i] > maxdeg:
                maxdeg = exps[t, i]
    pw_arr = np.empty((nv, maxdeg + 1), dtype=np.complex128)
    cdef double complex[:, :] pw = pw_arr
    cdef double complex acc, m
    cdef double s = 0.0, s2 = 0.0, a, la
    with nogil:
        for r in range(npts):
            _powers(pts, r, nv, maxdeg, pw)
            acc = 0.0
            for t in range(nt):
                m = coeffs[t]
                for i in range(nv):
                    m = m * pw[i, exps[t, i]]
                acc = acc + m
            a = sqrt(acc.real * acc.real + acc.imag * acc.imag)
            if a == 0.0:
                zeros += 1
                continue
            la = log(a)
            s += la
            s2 += la * la
    return s, s2, zeros


def min_subspace_distance(double complex[:, :, :] bases,
                          double complex[:, :] samples, double threshold):
    """Min over unit samples x of |x - Q Q^H x| for each orthonormal Q.

    Scanning a candidate stops as soon as a sample closer than
    ``threshold`` is seen; the returned value is then that sample's distance.
    """
    cdef Py_ssize_t nc = bases.shape[0], k = bases.shape[1], nv = bases.shape[2]
    cdef Py_ssize_t ns = samples.shape[0], c, s, a, i
    out = np.empty(nc, dtype=np.float64)
    cdef double[:] o = out
    coef_arr = np.empty(k, dtype=np.complex128)
    cdef double complex[:] coef = coef_arr
    cdef double best, proj2, norm2, d2, dist
    cdef double complex acc
    with nogil:
        for c in range(nc):
            best = 2.0
            for s in range(ns):
                proj2 = 0.0
                for a in range(k):
                    acc = 0.0
                    for i in range(nv):
                        acc = acc + bases[c, a, i].conjugate() * samples[s, i]
                    proj2 += acc.real * acc.real + acc.imag * acc.imag
                norm2 = 0.0
                for i in range(nv):
                    norm2 += samples[s, i].real * samples[s, i].real + samples[s, i].imag * samples[s, i].imag
                d2 = 1.0 - proj2 / norm2
                if d2 < 0.0:
                    d2 = 0.0
                dist = sqrt(d2)
                if dist < best:
                    best = dist
                    if best < threshold:
                        break
            o[c] = best
    return out
