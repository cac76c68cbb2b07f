"""Vectorized numpy fallback for the counting kernels.

Same contracts as the compiled extension; arrays arrive validated and
C-contiguous from the package wrappers. Chunking keeps peak memory for
the quadratic counting paths near 32 MB.
"""

import numpy as np

_CHUNK_ELEMS = 4_000_000


def box_counts(pts, lo, hi, btol):
    n = pts.shape[0]
    counts = np.zeros(n, np.int32)
    flags = np.zeros(n, np.uint8)
    for b in range(lo.shape[0]):
        counts += np.all((pts >= lo[b]) & (pts < hi[b]), axis=1).astype(np.int32)
        if btol > 0.0:
            d_out = np.max(np.maximum(np.maximum(lo[b] - pts, pts - hi[b]), 0.0), axis=1)
            d_in = np.min(np.minimum(pts - lo[b], hi[b] - pts), axis=1)
            flags |= ((d_out <= btol) & (d_in <= btol)).astype(np.uint8)
    return counts, flags


def orbit_box_counts(pts, mats, lo, hi, btol):
    n = pts.shape[0]
    counts = np.zeros(n, np.int32)
    flags = np.zeros(n, np.uint8)
    for t in range(mats.shape[0]):
        c, f = box_counts(pts @ mats[t].T, lo, hi, btol)
        counts += c
        flags |= f
    return counts, flags


def count_in_translated_box(probe_x, probe_j, probe_T, pt_x, pt_j, u_lo, u_hi, dj_lo, dj_hi):
    p, n = probe_x.shape[0], pt_x.shape[0]
    out = np.zeros(p, np.int64)
    if n == 0:
        return out
    step = max(1, _CHUNK_ELEMS // max(1, n))
    for s in range(0, p, step):
        sl = slice(s, min(s + step, p))
        dj = pt_j[None, :] - probe_j[sl, None]
        sel = (dj >= dj_lo) & (dj <= dj_hi)
        diff = pt_x[None, :, :] - probe_x[sl, None, :]
        u = np.einsum("cab,cnb->cna", probe_T[sl], diff)
        ok = np.all((u >= u_lo) & (u < u_hi), axis=2) & sel
        out[sl] = ok.sum(axis=1)
    return out


def count_inverse_membership(probe_x, probe_j, pt_x, pt_j, pt_T, u_lo, u_hi, dj_lo, dj_hi):
    p, n = probe_x.shape[0], pt_x.shape[0]
    out = np.zeros(p, np.int64)
    if n == 0:
        return out
    step = max(1, _CHUNK_ELEMS // max(1, n))
    for s in range(0, p, step):
        sl = slice(s, min(s + step, p))
        dj = probe_j[sl, None] - pt_j[None, :]
        sel = (dj >= dj_lo) & (dj <= dj_hi)
        diff = probe_x[sl, None, :] - pt_x[None, :, :]
        u = np.einsum("nab,cnb->cna", pt_T, diff)
        ok = np.all((u >= u_lo) & (u < u_hi), axis=2) & sel
        out[sl] = ok.sum(axis=1)
    return out
