# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner-loop kernels: minor expansion of alternating forms and the
twisted Lax-flow stepper.  Contracts match homlie._core_py exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isfinite

cnp.import_array()


cdef double _det_destructive(double[:, ::1] a, Py_ssize_t k) noexcept nogil:
    """LU determinant with partial pivoting; destroys the scratch matrix."""
    cdef double d = 1.0
    cdef double piv, factor, tmp
    cdef Py_ssize_t i, j, r, prow
    for i in range(k):
        prow = i
        for r in range(i + 1, k):
            if fabs(a[r, i]) > fabs(a[prow, i]):
                prow = r
        if prow != i:
            for j in range(k):
                tmp = a[i, j]
                a[i, j] = a[prow, j]
                a[prow, j] = tmp
            d = -d
        piv = a[i, i]
        if piv == 0.0:
            return 0.0
        d *= piv
        for r in range(i + 1, k):
            factor = a[r, i] / piv
            if factor != 0.0:
                for j in range(i + 1, k):
                    a[r, j] -= factor * a[i, j]
    return d


def wedge_coefficients(const double[:, ::1] args, const cnp.intp_t[:, ::1] combos):
    cdef Py_ssize_t ncomb = combos.shape[0]
    cdef Py_ssize_t k = combos.shape[1]
    cdef Py_ssize_t c, i, j, row
    out_arr = np.empty(ncomb, dtype=np.float64)
    cdef double[::1] out = out_arr
    if k == 0:
        for c in range(ncomb):
            out[c] = 1.0
        return out_arr
    scratch_arr = np.empty((k, k), dtype=np.float64)
    cdef double[:, ::1] scratch = scratch_arr
    for c in range(ncomb):
        for i in range(k):
            row = combos[c, i]
            for j in range(k):
                scratch[i, j] = args[row, j]
        out[c] = _det_destructive(scratch, k)
    return out_arr


def assemble_coboundary(const double[:, :, ::1] bracket_table,
                        const double[:, ::1] twist_table,
                        const cnp.intp_t[:, ::1] combos_out,
                        const cnp.intp_t[:, ::1] combos_in):
    cdef Py_ssize_t nrows = combos_out.shape[0]
    cdef Py_ssize_t kp1 = combos_out.shape[1]
    cdef Py_ssize_t ncols = combos_in.shape[0]
    cdef Py_ssize_t k = combos_in.shape[1]
    cdef Py_ssize_t m = bracket_table.shape[0]
    cdef Py_ssize_t r, i, j, pos, t, c, u, v, col, a, b, g, row
    cdef double sign, acc
    if k + 1 != kp1:
        raise ValueError("combos_out must have one more column than combos_in")
    out_arr = np.zeros((nrows, ncols), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    if kp1 < 2 or nrows == 0:
        return out_arr
    argbuf_arr = np.empty((m, k), dtype=np.float64)
    scratch_arr = np.empty((k, k), dtype=np.float64)
    cdef double[:, ::1] argbuf = argbuf_arr
    cdef double[:, ::1] scratch = scratch_arr
    with nogil:
        for r in range(nrows):
            for i in range(kp1):
                for j in range(i + 1, kp1):
                    a = combos_out[r, i]
                    b = combos_out[r, j]
                    for t in range(m):
                        argbuf[t, 0] = bracket_table[a, b, t]
                    col = 1
                    for pos in range(kp1):
                        if pos == i or pos == j:
                            continue
                        g = combos_out[r, pos]
                        for t in range(m):
                            argbuf[t, col] = twist_table[g, t]
                        col += 1
                    sign = 1.0 if ((i + j) % 2 == 0) else -1.0
                    for c in range(ncols):
                        for u in range(k):
                            row = combos_in[c, u]
                            for v in range(k):
                                scratch[u, v] = argbuf[row, v]
                        acc = _det_destructive(scratch, k)
                        out[r, c] += sign * acc
    return out_arr


cdef void _matmul(const double[:, ::1] a, const double[:, ::1] b, double[:, ::1] c,
                  Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, kk
    cdef double aik
    for i in range(n):
        for j in range(n):
            c[i, j] = 0.0
        for kk in range(n):
            aik = a[i, kk]
            if aik != 0.0:
                for j in range(n):
                    c[i, j] += aik * b[kk, j]


cdef void _lax_rhs(const double[:, ::1] l_mat, const double[:, ::1] beta,
                   double[:, ::1] bmat, double[:, ::1] t1, double[:, ::1] t2,
                   double[:, ::1] t3, double[:, ::1] out,
                   Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    # B = strict upper minus strict lower triangle of L
    for i in range(n):
        for j in range(n):
            if j > i:
                bmat[i, j] = l_mat[i, j]
            elif j < i:
                bmat[i, j] = -l_mat[i, j]
            else:
                bmat[i, j] = 0.0
    # out = (beta B beta)(L beta) - (beta L beta)(B beta)
    _matmul(beta, bmat, t1, n)
    _matmul(t1, beta, t2, n)      # t2 = beta B beta
    _matmul(l_mat, beta, t3, n)   # t3 = L beta
    _matmul(t2, t3, out, n)
    _matmul(beta, l_mat, t1, n)
    _matmul(t1, beta, t2, n)      # t2 = beta L beta
    _matmul(bmat, beta, t3, n)    # t3 = B beta
    _matmul(t2, t3, t1, n)
    for i in range(n):
        for j in range(n):
            out[i, j] -= t1[i, j]


def rk4_flow(const double[:, ::1] l0, const double[:, ::1] beta, double dt, Py_ssize_t nsteps):
    cdef Py_ssize_t n = l0.shape[0]
    cdef Py_ssize_t step, i, j
    cdef double sixth = dt / 6.0
    cdef double half = 0.5 * dt
    cdef bint ok = True
    cdef Py_ssize_t done = 0
    l_arr = np.array(l0, dtype=np.float64)
    cdef double[:, ::1] l_mat = l_arr
    stage_arr = np.empty((n, n), dtype=np.float64)
    k1_arr = np.empty((n, n), dtype=np.float64)
    k2_arr = np.empty((n, n), dtype=np.float64)
    k3_arr = np.empty((n, n), dtype=np.float64)
    k4_arr = np.empty((n, n), dtype=np.float64)
    b_arr = np.empty((n, n), dtype=np.float64)
    t1_arr = np.empty((n, n), dtype=np.float64)
    t2_arr = np.empty((n, n), dtype=np.float64)
    t3_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] stage = stage_arr
    cdef double[:, ::1] k1 = k1_arr
    cdef double[:, ::1] k2 = k2_arr
    cdef double[:, ::1] k3 = k3_arr
    cdef double[:, ::1] k4 = k4_arr
    cdef double[:, ::1] bmat = b_arr
    cdef double[:, ::1] t1 = t1_arr
    cdef double[:, ::1] t2 = t2_arr
    cdef double[:, ::1] t3 = t3_arr
    cdef double v
    with nogil:
        for step in range(nsteps):
            _lax_rhs(l_mat, beta, bmat, t1, t2, t3, k1, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = l_mat[i, j] + half * k1[i, j]
            _lax_rhs(stage, beta, bmat, t1, t2, t3, k2, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = l_mat[i, j] + half * k2[i, j]
            _lax_rhs(stage, beta, bmat, t1, t2, t3, k3, n)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = l_mat[i, j] + dt * k3[i, j]
            _lax_rhs(stage, beta, bmat, t1, t2, t3, k4, n)
            for i in range(n):
                for j in range(n):
                    l_mat[i, j] = l_mat[i, j] + sixth * (
                        k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            ok = True
            for i in range(n):
                for j in range(i, n):
                    v = 0.5 * (l_mat[i, j] + l_mat[j, i])
                    l_mat[i, j] = v
                    l_mat[j, i] = v
                    if not isfinite(v):
                        ok = False
            done = step + 1
            if not ok:
                break
    if nsteps == 0:
        return l_arr, 0, True
    return l_arr, done, ok
