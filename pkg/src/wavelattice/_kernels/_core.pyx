# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels. Mirrors _ref.py exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def box_counts(double[:, ::1] pts, double[:, ::1] lo, double[:, ::1] hi, double btol):
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1], nb = lo.shape[0]
    counts_arr = np.zeros(n, dtype=np.int32)
    flags_arr = np.zeros(n, dtype=np.uint8)
    cdef int[::1] counts = counts_arr
    cdef unsigned char[::1] flags = flags_arr
    cdef Py_ssize_t i, b, a
    cdef bint inside, near
    cdef double x, d_out, d_in, v
    for i in range(n):
        for b in range(nb):
            inside = True
            for a in range(d):
                x = pts[i, a]
                if not (lo[b, a] <= x and x < hi[b, a]):
                    inside = False
                    break
            if inside:
                counts[i] += 1
            if btol > 0.0:
                d_out = 0.0
                d_in = 1e300
                for a in range(d):
                    x = pts[i, a]
                    v = lo[b, a] - x
                    if x - hi[b, a] > v:
                        v = x - hi[b, a]
                    if v > d_out:
                        d_out = v
                    v = x - lo[b, a]
                    if hi[b, a] - x < v:
                        v = hi[b, a] - x
                    if v < d_in:
                        d_in = v
                if d_out <= btol and d_in <= btol:
                    flags[i] = 1
    return counts_arr, flags_arr


def orbit_box_counts(double[:, ::1] pts, double[:, :, ::1] mats,
                     double[:, ::1] lo, double[:, ::1] hi, double btol):
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1], nm = mats.shape[0], nb = lo.shape[0]
    counts_arr = np.zeros(n, dtype=np.int32)
    flags_arr = np.zeros(n, dtype=np.uint8)
    cdef int[::1] counts = counts_arr
    cdef unsigned char[::1] flags = flags_arr
    cdef double[::1] y = np.empty(d)
    cdef Py_ssize_t i, t, b, a, c
    cdef bint inside
    cdef double d_out, d_in, v, x
    for i in range(n):
        for t in range(nm):
            for a in range(d):
                v = 0.0
                for c in range(d):
                    v += mats[t, a, c] * pts[i, c]
                y[a] = v
            for b in range(nb):
                inside = True
                for a in range(d):
                    x = y[a]
                    if not (lo[b, a] <= x and x < hi[b, a]):
                        inside = False
                        break
                if inside:
                    counts[i] += 1
                if btol > 0.0:
                    d_out = 0.0
                    d_in = 1e300
                    for a in range(d):
                        x = y[a]
                        v = lo[b, a] - x
                        if x - hi[b, a] > v:
                            v = x - hi[b, a]
                        if v > d_out:
                            d_out = v
                        v = x - lo[b, a]
                        if hi[b, a] - x < v:
                            v = hi[b, a] - x
                        if v < d_in:
                            d_in = v
                    if d_out <= btol and d_in <= btol:
                        flags[i] = 1
    return counts_arr, flags_arr


def count_in_translated_box(double[:, ::1] probe_x, long long[::1] probe_j,
                            double[:, :, ::1] probe_T,
                            double[:, ::1] pt_x, long long[::1] pt_j,
                            double[::1] u_lo, double[::1] u_hi,
                            long long dj_lo, long long dj_hi):
    cdef Py_ssize_t p = probe_x.shape[0], n = pt_x.shape[0], d = probe_x.shape[1]
    out_arr = np.zeros(p, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t i, m, a, c
    cdef long long dj
    cdef double u
    cdef bint inside
    for i in range(p):
        for m in range(n):
            dj = pt_j[m] - probe_j[i]
            if dj < dj_lo or dj > dj_hi:
                continue
            inside = True
            for a in range(d):
                u = 0.0
                for c in range(d):
                    u += probe_T[i, a, c] * (pt_x[m, c] - probe_x[i, c])
                if not (u_lo[a] <= u and u < u_hi[a]):
                    inside = False
                    break
            if inside:
                out[i] += 1
    return out_arr


def count_inverse_membership(double[:, ::1] probe_x, long long[::1] probe_j,
                             double[:, ::1] pt_x, long long[::1] pt_j,
                             double[:, :, ::1] pt_T,
                             double[::1] u_lo, double[::1] u_hi,
                             long long dj_lo, long long dj_hi):
    cdef Py_ssize_t p = probe_x.shape[0], n = pt_x.shape[0], d = probe_x.shape[1]
    out_arr = np.zeros(p, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef Py_ssize_t i, m, a, c
    cdef long long dj
    cdef double u
    cdef bint inside
    for i in range(p):
        for m in range(n):
            dj = probe_j[i] - pt_j[m]
            if dj < dj_lo or dj > dj_hi:
                continue
            inside = True
            for a in range(d):
                u = 0.0
                for c in range(d):
                    u += pt_T[m, a, c] * (probe_x[i, c] - pt_x[m, c])
                if not (u_lo[a] <= u and u < u_hi[a]):
                    inside = False
                    break
            if inside:
                out[i] += 1
    return out_arr
