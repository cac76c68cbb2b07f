"""Counting kernels with a compiled core and a numpy fallback.

The compiled extension is preferred when importable; set
WAVELATTICE_DISABLE_EXT=1 to force the fallback. The wrappers below
normalize dtypes/contiguity so both backends see identical inputs.
"""

import os

import numpy as np

from . import _ref

if os.environ.get("WAVELATTICE_DISABLE_EXT"):
    _impl = _ref
    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _ref
        BACKEND = "fallback"


def _f64(a, ndim):
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim != ndim:
        raise ValueError(f"expected {ndim}-d array, got {out.ndim}-d")
    return out


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def box_counts(pts, lo, hi, btol=0.0, impl=None):
    """Per-point count of half-open boxes [lo, hi) containing it.

    Returns (counts int32[n], flags uint8[n]); flags mark points within
    btol of some box boundary (always zero when btol == 0).
    """
    pts = _f64(np.atleast_2d(pts), 2)
    lo = _f64(np.atleast_2d(lo), 2)
    hi = _f64(np.atleast_2d(hi), 2)
    return (impl or _impl).box_counts(pts, lo, hi, float(btol))


def orbit_box_counts(pts, mats, lo, hi, btol=0.0, impl=None):
    """Counts summed over the matrix orbit: sum_t #{boxes containing mats[t] @ pt}."""
    pts = _f64(np.atleast_2d(pts), 2)
    mats = _f64(mats, 3)
    lo = _f64(np.atleast_2d(lo), 2)
    hi = _f64(np.atleast_2d(hi), 2)
    return (impl or _impl).orbit_box_counts(pts, mats, lo, hi, float(btol))


def count_in_translated_box(probe_x, probe_j, probe_T, pt_x, pt_j, u_lo, u_hi,
                            dj_lo, dj_hi, impl=None):
    """Per probe g: #{points h : h in g.B} for the box B given in sheared coords.

    Membership test: dj_lo <= j_h - j_g <= dj_hi and
    probe_T[g] @ (x_h - x_g) in [u_lo, u_hi).
    """
    return (impl or _impl).count_in_translated_box(
        _f64(probe_x, 2), _i64(probe_j), _f64(probe_T, 3),
        _f64(pt_x, 2), _i64(pt_j),
        _f64(u_lo, 1), _f64(u_hi, 1), int(dj_lo), int(dj_hi))


def count_inverse_membership(probe_x, probe_j, pt_x, pt_j, pt_T, u_lo, u_hi,
                             dj_lo, dj_hi, impl=None):
    """Per probe g: #{points h : h^{-1} g in B}, i.e. membership in h.B read backwards.

    Membership test: dj_lo <= j_g - j_h <= dj_hi and
    pt_T[h] @ (x_g - x_h) in [u_lo, u_hi).
    """
    return (impl or _impl).count_inverse_membership(
        _f64(probe_x, 2), _i64(probe_j),
        _f64(pt_x, 2), _i64(pt_j), _f64(pt_T, 3),
        _f64(u_lo, 1), _f64(u_hi, 1), int(dj_lo), int(dj_hi))
