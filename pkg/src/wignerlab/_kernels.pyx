# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops; mirrors ``_kernels_py`` exactly."""
import numpy as np

from libc.math cimport sin, cos, INFINITY

BACKEND = "cython"


def lhv_margins(weights, trans):
    cdef double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64).reshape(-1, 8)
    cdef double[:, ::1] t = np.ascontiguousarray(trans, dtype=np.float64).reshape(-1, 4)
    cdef Py_ssize_t n = w.shape[0]
    if t.shape[0] != n:
        raise ValueError("weights and trans must have the same number of rows")
    out_arr = np.empty((n, 5), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r
    cdef int ia, ib, ic
    cdef double ab[2][2]
    cdef double cb[2][2]
    cdef double ac[2][2]
    cdef double x, a_pp, a_mp, b_pp, b_mp, lhs, rhs, a_in, b_in
    with nogil:
        for r in range(n):
            for ia in range(2):
                for ib in range(2):
                    ab[ia][ib] = 0.0
                    cb[ia][ib] = 0.0
                    ac[ia][ib] = 0.0
            for ia in range(2):
                for ib in range(2):
                    for ic in range(2):
                        x = w[r, 4 * ia + 2 * ib + ic]
                        ab[1 - ia][ib] += x
                        cb[1 - ic][ib] += x
                        ac[1 - ia][ic] += x
            out[r, 0] = ab[0][0] - (cb[0][0] + ac[0][0])
            out[r, 1] = ab[0][1] - (cb[0][1] + ac[0][0])
            out[r, 2] = ab[1][0] - (cb[0][0] + ac[1][0])
            out[r, 3] = ab[1][1] - (cb[0][1] + ac[1][0])
            a_pp = t[r, 0]
            a_mp = t[r, 1]
            b_pp = t[r, 2]
            b_mp = t[r, 3]
            lhs = (a_pp * b_pp * ab[0][0] + a_mp * b_pp * ab[1][0]
                   + a_pp * b_mp * ab[0][1] + a_mp * b_mp * ab[1][1])
            b_in = b_pp + b_mp
            a_in = a_pp + a_mp
            rhs = (a_pp * b_in * ac[0][0] + a_mp * b_in * ac[1][0]
                   + b_pp * a_in * cb[0][0] + b_mp * a_in * cb[0][1])
            out[r, 4] = lhs - rhs
    return out_arr


def spin_margins(theta_ba, theta_ca, theta_bc, omega_t):
    arrs = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64)
                                 for v in (theta_ba, theta_ca, theta_bc, omega_t)))
    shape = arrs[0].shape
    cdef double[::1] ba = np.ascontiguousarray(arrs[0]).ravel()
    cdef double[::1] ca = np.ascontiguousarray(arrs[1]).ravel()
    cdef double[::1] bc = np.ascontiguousarray(arrs[2]).ravel()
    cdef double[::1] wt = np.ascontiguousarray(arrs[3]).ravel()
    out_arr = np.empty(ba.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double l, s1, s2, s3
    with nogil:
        for i in range(ba.shape[0]):
            l = sin(0.5 * ba[i] + 2.0 * wt[i])
            s1 = sin(wt[i])
            s2 = sin(0.5 * ca[i])
            s3 = sin(0.5 * bc[i])
            out[i] = l * l - (2.0 * s1 * s1 + cos(2.0 * wt[i]) * (s2 * s2 + s3 * s3))
    return out_arr.reshape(shape)


def spin_grid_argmax(theta_ba, theta_ca, theta_bc, omega_t):
    cdef double[::1] ba = np.ascontiguousarray(theta_ba, dtype=np.float64).ravel()
    cdef double[::1] ca = np.ascontiguousarray(theta_ca, dtype=np.float64).ravel()
    cdef double[::1] bc = np.ascontiguousarray(theta_bc, dtype=np.float64).ravel()
    cdef double[::1] wt = np.ascontiguousarray(omega_t, dtype=np.float64).ravel()
    cdef Py_ssize_t nj = ca.shape[0], nk = bc.shape[0], nl = wt.shape[0]
    sca_arr = np.sin(0.5 * np.asarray(ca)) ** 2
    sbc_arr = np.sin(0.5 * np.asarray(bc)) ** 2
    sw_arr = 2.0 * np.sin(np.asarray(wt)) ** 2
    cw_arr = np.cos(2.0 * np.asarray(wt))
    # same expression as the fallback so both backends agree bitwise
    lhs_arr = np.sin(0.5 * np.asarray(ba)[:, None] + 2.0 * np.asarray(wt)[None, :]) ** 2
    cdef double[:, ::1] lhs_t = lhs_arr
    cdef double[::1] sca = sca_arr
    cdef double[::1] sbc = sbc_arr
    cdef double[::1] sw = sw_arr
    cdef double[::1] cw = cw_arr
    cdef Py_ssize_t i, j, k, l
    cdef Py_ssize_t bi = 0, bj = 0, bk = 0, bl = 0
    cdef double best = -INFINITY, m, s
    with nogil:
        for i in range(ba.shape[0]):
            for j in range(nj):
                for k in range(nk):
                    s = sca[j] + sbc[k]
                    for l in range(nl):
                        m = lhs_t[i, l] - (sw[l] + cw[l] * s)
                        if m > best:
                            best = m
                            bi = i
                            bj = j
                            bk = k
                            bl = l
    return best, (int(bi), int(bj), int(bk), int(bl))


def ratio_violation_count(double ratio, angles, double tol):
    cdef double[:, ::1] a = np.ascontiguousarray(angles, dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t i
    cdef long count = 0
    cdef double s0, s1, s2
    with nogil:
        for i in range(a.shape[0]):
            s0 = sin(0.5 * a[i, 0])
            s1 = sin(0.5 * a[i, 1])
            s2 = sin(0.5 * a[i, 2])
            if ratio * s0 * s0 - (s1 * s1 + s2 * s2) > tol:
                count += 1
    return int(count)
