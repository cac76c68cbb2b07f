"""The affine group R^d x <A> and its quasi-lattice sampling sets.

Elements are pairs (x, j) acting by t -> A^j t + x, so the product is
(x, j)(y, m) = (x + A^j y, j + m). The sampling set collects the points
(A^j P k, j) for j in a scale range and k in an integer box. The
counting checks below (relative separation, separation/density against
a box S, unique factorization) are what make "quasi-lattice" a
verifiable property rather than a label.

Left Haar weight at scale j is |det A|^{-j}; the right weight is 1.
Boxes in the group are half-open in sheared coordinates: a GBox with
matrix M holds the elements (M u, A^m) for u in [u_lo, u_hi) and
m in [j_lo, j_hi]. The inverse of such a box is generally not of the
same shape, so GBox carries an `inverted` flag and membership in g*B^{-1}
is evaluated exactly as (h^{-1} g in B).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .config import DEFAULTS
from .errors import ResourceLimitError
from .linalg import DilationDescriptor, as_dilation


@dataclass(frozen=True)
class GroupElement:
    x: np.ndarray
    j: int

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "j", int(self.j))

    @property
    def dim(self) -> int:
        return self.x.shape[0]


def identity(dim: int) -> GroupElement:
    return GroupElement(np.zeros(dim), 0)


def multiply(g: GroupElement, h: GroupElement, A) -> GroupElement:
    """(x, j)(y, m) = (x + A^j y, j + m)."""
    A = as_dilation(A)
    return GroupElement(g.x + A.power(g.j) @ h.x, g.j + h.j)


def inverse(g: GroupElement, A) -> GroupElement:
    """(x, j)^{-1} = (-A^{-j} x, -j)."""
    A = as_dilation(A)
    return GroupElement(-(A.power(-g.j) @ g.x), -g.j)


def haar_weight(A, j: int, side: str = "left") -> float:
    """Scale weight of the Haar measure: |det A|^{-j} on the left, 1 on the right."""
    if side == "left":
        return float(abs(as_dilation(A).det)) ** (-j)
    if side == "right":
        return 1.0
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# ---------------------------------------------------------------------------
# boxes in the group


@dataclass(frozen=True)
class GBox:
    """Half-open box {(M u, A^m) : u in [u_lo, u_hi), m in [j_lo, j_hi]}."""

    u_lo: np.ndarray
    u_hi: np.ndarray
    j_lo: int
    j_hi: int
    matrix: np.ndarray | None = None
    inverted: bool = False

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.u_lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.u_hi, dtype=float))
        if lo.shape != hi.shape or np.any(hi <= lo):
            raise ValueError("box needs u_lo < u_hi componentwise")
        if self.j_hi < self.j_lo:
            raise ValueError("box needs j_lo <= j_hi")
        object.__setattr__(self, "u_lo", lo)
        object.__setattr__(self, "u_hi", hi)
        if self.matrix is not None:
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (lo.size, lo.size):
                raise ValueError("box matrix shape mismatch")
            object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.u_lo.shape[0]

    def inverse(self) -> "GBox":
        return replace(self, inverted=not self.inverted)

    def shear_matrix(self) -> np.ndarray:
        return np.eye(self.dim) if self.matrix is None else self.matrix

    def x_volume(self) -> float:
        vol = float(np.prod(self.u_hi - self.u_lo))
        return abs(float(np.linalg.det(self.shear_matrix()))) * vol

    def scale_count(self) -> int:
        return self.j_hi - self.j_lo + 1

    def left_haar_measure(self, A) -> float:
        """mu_G of the box (weight |det A|^{-m} per scale slice)."""
        A = as_dilation(A)
        if self.inverted:
            # mu_G(B^{-1}) equals the right measure of B
            return self.scale_count() * self.x_volume()
        dets = [abs(A.det) ** (-m) for m in range(self.j_lo, self.j_hi + 1)]
        return float(sum(dets)) * self.x_volume()

    def right_haar_measure(self, A) -> float:
        """rho_G of the box (weight 1 per scale slice)."""
        A = as_dilation(A)
        if self.inverted:
            dets = [abs(A.det) ** (-m) for m in range(self.j_lo, self.j_hi + 1)]
            return float(sum(dets)) * self.x_volume()
        return self.scale_count() * self.x_volume()

    def x_corners(self) -> np.ndarray:
        """Corners of the sheared x-part M [u_lo, u_hi], shape (2^d, d)."""
        m = self.shear_matrix()
        cs = np.array(list(itertools.product(*zip(self.u_lo, self.u_hi))))
        return cs @ m.T

    def to_json_dict(self) -> dict:
        return {
            "u_lo": self.u_lo.tolist(),
            "u_hi": self.u_hi.tolist(),
            "j_lo": self.j_lo,
            "j_hi": self.j_hi,
            "matrix": None if self.matrix is None else self.matrix.tolist(),
            "inverted": self.inverted,
        }


def complement_box(P) -> GBox:
    """The cell P [0,1)^d x {0} that the quasi-lattice translates tile."""
    P = as_dilation(P)
    d = P.dim
    return GBox(np.zeros(d), np.ones(d), 0, 0, matrix=P.matrix)


def contains(box: GBox, g: GroupElement, h: GroupElement, A) -> bool:
    """Is h a member of g * box? Reference implementation for small checks."""
    A = as_dilation(A)
    minv = np.linalg.inv(box.shear_matrix())
    if box.inverted:
        dj = g.j - h.j
        if not (box.j_lo <= dj <= box.j_hi):
            return False
        u = minv @ (A.power(-h.j) @ (g.x - h.x))
    else:
        dj = h.j - g.j
        if not (box.j_lo <= dj <= box.j_hi):
            return False
        u = minv @ (A.power(-g.j) @ (h.x - g.x))
    return bool(np.all((u >= box.u_lo) & (u < box.u_hi)))


# ---------------------------------------------------------------------------
# quasi-lattice windows


@dataclass(frozen=True)
class QuasiLatticeWindow:
    """Finite window {(A^j P k, j) : j in [j_lo, j_hi], k in the integer box}."""

    A: DilationDescriptor
    P: DilationDescriptor
    j_lo: int
    j_hi: int
    k_lo: np.ndarray  # (d,) ints, inclusive
    k_hi: np.ndarray  # (d,) ints, inclusive
    xs: np.ndarray = field(repr=False)  # (n, d)
    js: np.ndarray = field(repr=False)  # (n,)

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def size(self) -> int:
        return self.xs.shape[0]

    @property
    def points(self) -> list[GroupElement]:
        return [GroupElement(x, j) for x, j in zip(self.xs, self.js)]

    def to_json_dict(self, include_points: bool = False) -> dict:
        out = {
            "dilation": self.A.matrix.tolist(),
            "translation": self.P.matrix.tolist(),
            "j_range": [self.j_lo, self.j_hi],
            "k_box": [[int(a), int(b)] for a, b in zip(self.k_lo, self.k_hi)],
            "size": self.size,
        }
        if include_points:
            out["points"] = [
                {"x": x.tolist(), "j": int(j)} for x, j in zip(self.xs, self.js)
            ]
        return out


def _normalize_k_box(k_box, d):
    kb = np.asarray(k_box, dtype=int)
    if kb.ndim == 1:
        kb = np.tile(kb, (d, 1))
    if kb.shape != (d, 2) or np.any(kb[:, 1] < kb[:, 0]):
        raise ValueError("k_box must give per-axis inclusive (lo, hi) with lo <= hi")
    return kb[:, 0], kb[:, 1]


def generate_quasilattice(A, P, j_range, k_box,
                          max_points: int = DEFAULTS.max_window_points) -> QuasiLatticeWindow:
    """Enumerate the window deterministically: j ascending, k lexicographic."""
    A, P = as_dilation(A), as_dilation(P)
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    if j_hi < j_lo:
        raise ValueError("j_range must satisfy j_lo <= j_hi")
    k_lo, k_hi = _normalize_k_box(k_box, A.dim)
    n_k = int(np.prod(k_hi - k_lo + 1))
    n_total = (j_hi - j_lo + 1) * n_k
    if n_total > max_points:
        raise ResourceLimitError(
            f"window would hold {n_total} points, budget is {max_points}"
        )
    axes = [np.arange(lo, hi + 1) for lo, hi in zip(k_lo, k_hi)]
    K = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(n_k, A.dim)
    xs_blocks, js_blocks = [], []
    for j in range(j_lo, j_hi + 1):
        step = A.power(j) @ P.matrix
        xs_blocks.append(K @ step.T)
        js_blocks.append(np.full(n_k, j, dtype=np.int64))
    return QuasiLatticeWindow(
        A=A, P=P, j_lo=j_lo, j_hi=j_hi, k_lo=k_lo, k_hi=k_hi,
        xs=np.concatenate(xs_blocks, axis=0),
        js=np.concatenate(js_blocks, axis=0),
    )


# ---------------------------------------------------------------------------
# unique factorization g = lambda . (P t, 0)


def decompose(g: GroupElement, A, P) -> tuple[GroupElement, np.ndarray]:
    """Split g into a lattice point and a cell offset: g = lam * (P t, 0), t in [0,1)^d."""
    A, P = as_dilation(A), as_dilation(P)
    y = np.linalg.solve(P.matrix, A.power(-g.j) @ g.x)
    k = np.floor(y)
    t = y - k
    lam = GroupElement(A.power(g.j) @ (P.matrix @ k), g.j)
    return lam, t


def decompose_batch(xs, js, A, P):
    """Vectorized decompose: returns (lattice xs, ks, ts) aligned with inputs."""
    A, P = as_dilation(A), as_dilation(P)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    js = np.asarray(js, dtype=np.int64)
    pinv = np.linalg.inv(P.matrix)
    lam_xs = np.empty_like(xs)
    ks = np.empty_like(xs)
    ts = np.empty_like(xs)
    for j in np.unique(js):
        m = js == j
        y = xs[m] @ (pinv @ A.power(-int(j))).T
        k = np.floor(y)
        ks[m] = k
        ts[m] = y - k
        lam_xs[m] = k @ (A.power(int(j)) @ P.matrix).T
    return lam_xs, ks, ts


# ---------------------------------------------------------------------------
# counting checks


def _probe_arrays(probes, dim):
    if isinstance(probes, tuple) and len(probes) == 2:
        xs = np.atleast_2d(np.asarray(probes[0], dtype=float))
        js = np.asarray(probes[1], dtype=np.int64)
    else:
        probes = list(probes)
        if not probes:
            raise ValueError("at least one probe is required")
        xs = np.array([p.x for p in probes], dtype=float)
        js = np.array([p.j for p in probes], dtype=np.int64)
    if xs.shape[0] == 0:
        raise ValueError("at least one probe is required")
    if xs.shape[1] != dim:
        raise ValueError("probe dimension mismatch")
    return xs, js


def _unique_points(window):
    rows = np.column_stack([window.xs, window.js.astype(float)])
    _, idx = np.unique(rows, axis=0, return_index=True)
    return window.xs[np.sort(idx)], window.js[np.sort(idx)]


def _box_counts_per_probe(window, box: GBox, probe_xs, probe_js):
    """#(window points in g*box) for each probe g, via the counting kernels."""
    A = window.A
    xs, js = _unique_points(window)
    minv = np.linalg.inv(box.shear_matrix())
    if box.inverted:
        tr = np.stack([minv @ A.power(-int(j)) for j in js]) if len(js) else \
            np.zeros((0, window.dim, window.dim))
        return _kernels.count_inverse_membership(
            probe_xs, probe_js, xs, js, tr, box.u_lo, box.u_hi, box.j_lo, box.j_hi)
    tr = np.stack([minv @ A.power(-int(j)) for j in probe_js])
    return _kernels.count_in_translated_box(
        probe_xs, probe_js, tr, xs, js, box.u_lo, box.u_hi, box.j_lo, box.j_hi)


def rel_sep_count(window: QuasiLatticeWindow, Q: GBox, probes) -> int:
    """Largest #(window ∩ gQ) over the probes: a lower bound for the true sup."""
    probe_xs, probe_js = _probe_arrays(probes, window.dim)
    if window.size == 0:
        return 0
    counts = _box_counts_per_probe(window, Q, probe_xs, probe_js)
    return int(counts.max())


@dataclass(frozen=True)
class SeparationDensityResult:
    min_count: int
    max_count: int
    n_probes: int
    separated: bool  # every probed g*S holds at most one point
    dense: bool      # every probed g*S holds at least one point

    def to_json_dict(self) -> dict:
        return {
            "min_count": self.min_count,
            "max_count": self.max_count,
            "n_probes": self.n_probes,
            "separated": self.separated,
            "dense": self.dense,
        }


def _coverage_hull_ok(window, box: GBox, gx, gj) -> bool:
    """Would every lattice point of the infinite set land inside the window?

    Maps the x-hull of g*box at each relevant scale through P^{-1} A^{-j}
    and checks the integer candidates fall inside the window's k-box.
    """
    A, P = window.A, window.P
    pinv = np.linalg.inv(P.matrix)
    corners = box.x_corners()  # (2^d, d)
    if box.inverted:
        j_levels = range(gj - box.j_hi, gj - box.j_lo + 1)
    else:
        j_levels = range(gj + box.j_lo, gj + box.j_hi + 1)
    for j in j_levels:
        if not (window.j_lo <= j <= window.j_hi):
            return False
        if box.inverted:
            # lambda in g*B^{-1} means x_lambda in g.x - A^j M [u_lo, u_hi]
            xs = gx - corners @ A.power(int(j)).T
        else:
            xs = gx + corners @ A.power(int(gj)).T
        k_hull = xs @ (pinv @ A.power(-int(j))).T
        k_min = np.ceil(k_hull.min(axis=0) - 1e-9)
        k_max = np.floor(k_hull.max(axis=0) + 1e-9)
        if np.any(k_min < window.k_lo) or np.any(k_max > window.k_hi):
            return False
    return True


def separation_density_check(window: QuasiLatticeWindow, S: GBox, probes,
                             check_coverage: bool = True) -> SeparationDensityResult:
    """Min and max of #(window ∩ gS) over probes.

    With check_coverage on, probes whose set gS sticks out of the
    window's covered region raise: counts there would be artifacts of
    the truncation, not of the sampling set.
    """
    probe_xs, probe_js = _probe_arrays(probes, window.dim)
    if check_coverage:
        for i, (gx, gj) in enumerate(zip(probe_xs, probe_js)):
            if not _coverage_hull_ok(window, S, gx, int(gj)):
                raise ValueError(
                    f"probe {i} at scale {int(gj)} is not covered by the window; "
                    "shrink the probe region or enlarge j_range/k_box"
                )
    counts = _box_counts_per_probe(window, S, probe_xs, probe_js)
    return SeparationDensityResult(
        min_count=int(counts.min()),
        max_count=int(counts.max()),
        n_probes=int(len(probe_js)),
        separated=bool(counts.max() <= 1),
        dense=bool(counts.min() >= 1),
    )


def make_interior_probes(window: QuasiLatticeWindow, S: GBox, n: int, seed: int,
                         boundary_tol: float = DEFAULTS.probe_boundary_tol):
    """Seeded probes that are covered by the window and off the cell boundary.

    Rejection-samples (x, j) with x in the hull of the window's points and
    j in the feasible scale band. Probes whose cell coordinates sit within
    boundary_tol of the cell faces are discarded instead of adjudicated.
    """
    rng = np.random.default_rng(seed)
    A, P = window.A, window.P
    pinv = np.linalg.inv(P.matrix)
    if S.inverted:
        j_feas_lo, j_feas_hi = window.j_lo + S.j_hi, window.j_hi + S.j_lo
    else:
        j_feas_lo, j_feas_hi = window.j_lo - S.j_lo, window.j_hi - S.j_hi
    if j_feas_hi < j_feas_lo:
        raise ValueError("window scale range too narrow for this probe set")
    hulls = {}
    for j in range(window.j_lo, window.j_hi + 1):
        xs_j = window.xs[window.js == j]
        lo, hi = xs_j.min(axis=0), xs_j.max(axis=0)
        hulls[j] = ((lo + hi) / 2, (hi - lo) / 2)
    xs_out, js_out = [], []
    attempts = 0
    while len(js_out) < n:
        attempts += 1
        if attempts > 200 * n + 1000:
            raise ValueError("probe sampling failed; window too small for S")
        j = int(rng.integers(j_feas_lo, j_feas_hi + 1))
        mid, half = hulls[min(max(j, window.j_lo), window.j_hi)]
        x = mid + (2 * rng.random(window.dim) - 1) * half * 0.8
        frac = (pinv @ (A.power(-j) @ x)) % 1.0
        if np.any(frac < boundary_tol) or np.any(frac > 1 - boundary_tol):
            continue
        if not _coverage_hull_ok(window, S, x, j):
            continue
        xs_out.append(x)
        js_out.append(j)
    return np.array(xs_out), np.array(js_out, dtype=np.int64)


# ---------------------------------------------------------------------------
# covolume


def covolume_quasilattice(P) -> float:
    """Covolume of the quasi-lattice: the right-Haar measure of its cell, |det P|."""
    return float(abs(as_dilation(P).det))


def covolume_bounds(U: GBox, K: GBox, A) -> tuple[float, float]:
    """(mu_G(U), mu_G(K)): lower/upper covolume witnesses for a separated/covering pair."""
    return U.left_haar_measure(A), K.left_haar_measure(A)
