# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels for the re-uploading circuit family.

Same contract as ``_fallback``: qubit 0 is the most significant bit, every
(parameter row, sample) pair is simulated independently.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange, parallel
from libc.math cimport cos, sin
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline void _rx(double* re, double* im, int n, int q, double theta) noexcept nogil:
    cdef int dim = 1 << n
    cdef int m = 1 << (n - 1 - q)
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef int i, j
    cdef double r0, i0, r1, i1
    for i in range(dim):
        if i & m:
            continue
        j = i | m
        r0 = re[i]; i0 = im[i]; r1 = re[j]; i1 = im[j]
        # a0' = c a0 - i s a1 ; a1' = c a1 - i s a0
        re[i] = c * r0 + s * i1
        im[i] = c * i0 - s * r1
        re[j] = c * r1 + s * i0
        im[j] = c * i1 - s * r0


cdef inline void _rz(double* re, double* im, int n, int q, double x) noexcept nogil:
    cdef int dim = 1 << n
    cdef int m = 1 << (n - 1 - q)
    cdef double c = cos(0.5 * x)
    cdef double s = sin(0.5 * x)
    cdef int i
    cdef double r, v
    for i in range(dim):
        r = re[i]; v = im[i]
        if i & m:
            # times e^{+ix/2}
            re[i] = c * r - s * v
            im[i] = c * v + s * r
        else:
            # times e^{-ix/2}
            re[i] = c * r + s * v
            im[i] = c * v - s * r


cdef inline void _cnot(double* re, double* im, int n, int ctrl, int tgt) noexcept nogil:
    cdef int dim = 1 << n
    cdef int cm = 1 << (n - 1 - ctrl)
    cdef int tm = 1 << (n - 1 - tgt)
    cdef int i, j
    cdef double t
    for i in range(dim):
        if (i & cm) and not (i & tm):
            j = i | tm
            t = re[i]; re[i] = re[j]; re[j] = t
            t = im[i]; im[i] = im[j]; im[j] = t


cdef void _simulate(double* re, double* im, int n, int n_reup, int n_var,
                    const int* assign, int n_feat,
                    const double* theta, const double* x) noexcept nogil:
    cdef int dim = 1 << n
    cdef int i, layer, q, f, k = 0
    for i in range(dim):
        re[i] = 0.0
        im[i] = 0.0
    re[0] = 1.0
    for layer in range(n_reup + n_var):
        for q in range(n):
            _rx(re, im, n, q, theta[k])
            k += 1
        if layer < n_reup:
            for f in range(n_feat):
                _rz(re, im, n, assign[f], x[f])
        if n > 1:
            for q in range(n - 1):
                _cnot(re, im, n, q, q + 1)
            _cnot(re, im, n, n - 1, 0)


def run_states(double[:, ::1] thetas, double[:, ::1] features, int n, int n_reup,
               int n_var, int[::1] assign, int num_threads=1):
    cdef Py_ssize_t r_count = thetas.shape[0]
    cdef Py_ssize_t b_count = features.shape[0]
    cdef int dim = 1 << n
    cdef int n_feat = assign.shape[0]
    out = np.empty((r_count, b_count, dim), dtype=np.complex128)
    cdef double[:, :, ::1] flat = out.view(np.float64).reshape(r_count, b_count, 2 * dim)
    cdef double* re
    cdef double* im
    cdef Py_ssize_t job, r, b
    cdef int i
    cdef const int* ap = &assign[0] if n_feat > 0 else NULL
    if r_count == 0 or b_count == 0:
        return out
    with nogil, parallel(num_threads=num_threads):
        re = <double*> malloc(2 * dim * sizeof(double))
        im = re + dim
        for job in prange(r_count * b_count, schedule='static'):
            r = job // b_count
            b = job % b_count
            _simulate(re, im, n, n_reup, n_var, ap, n_feat, &thetas[r, 0], &features[b, 0])
            for i in range(dim):
                flat[r, b, 2 * i] = re[i]
                flat[r, b, 2 * i + 1] = im[i]
        free(re)
    return out


def expect_z(double[:, ::1] thetas, double[:, ::1] features, int n, int n_reup,
             int n_var, int[::1] assign, int readout, int num_threads=1):
    cdef Py_ssize_t r_count = thetas.shape[0]
    cdef Py_ssize_t b_count = features.shape[0]
    cdef int dim = 1 << n
    cdef int n_feat = assign.shape[0]
    cdef int m = 1 << (n - 1 - readout)
    out = np.empty((r_count, b_count), dtype=np.float64)
    cdef double[:, ::1] res = out
    cdef double* re
    cdef double* im
    cdef Py_ssize_t job, r, b
    cdef int i
    cdef double acc, p
    cdef const int* ap = &assign[0] if n_feat > 0 else NULL
    if r_count == 0 or b_count == 0:
        return out
    with nogil, parallel(num_threads=num_threads):
        re = <double*> malloc(2 * dim * sizeof(double))
        im = re + dim
        for job in prange(r_count * b_count, schedule='static'):
            r = job // b_count
            b = job % b_count
            _simulate(re, im, n, n_reup, n_var, ap, n_feat, &thetas[r, 0], &features[b, 0])
            acc = 0.0
            for i in range(dim):
                p = re[i] * re[i] + im[i] * im[i]
                if i & m:
                    acc = acc - p
                else:
                    acc = acc + p
            res[r, b] = acc
        free(re)
    return out
