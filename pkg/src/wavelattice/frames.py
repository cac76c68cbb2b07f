"""Analysis coefficients, frame bounds, and the semi-continuous transform norm.

The discrete system pairs a grid function f against the atoms
pi(A^j P k, A^j) psi; the semi-continuous transform keeps translations on
the whole grid.  Every scale is handled by one FFT pass over the spectrum
of f multiplied with the conjugate dilated wavelet spectrum, so the
time-side and frequency-side energies agree to rounding.  That exact
duality is what plancherel_identity_check measures.

Everything lives on the torus [-L, L)^d.  Scales whose dilated spectrum
spills over the frequency-grid edge, or concentrates on fewer nodes than
the resolution floor, are flagged per scale; with strict_scales=True the
flags become a ScaleRangeError instead.  The default is permissive because
flagged scales contribute consistently to both sides of every identity
checked here; they are only inaccurate against the continuum.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .calderon import calderon_sum_on_grid
from .config import DEFAULTS, Defaults
from .errors import (ConfigError, NumericError, ResourceLimitError,
                     ScaleRangeError)
from .group import GBox, _normalize_k_box
from .linalg import DilationDescriptor, as_dilation
from .wavelets import FrequencyWavelet, GridSpec, IndicatorUnionWavelet


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function on the periodic grid [-L, L)^d."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).reshape(
            self.grid.samples)
        if not np.all(np.isfinite(v)):
            raise NumericError("grid function has non-finite samples")
        object.__setattr__(self, "values", v)

    @cached_property
    def norm_sq(self) -> float:
        """Squared L2 norm by the rectangle rule, spacing^d * sum |f|^2."""
        return self.grid.signal_energy(self.values)

    def spectrum(self) -> np.ndarray:
        return self.grid.to_frequency(self.values)

    @classmethod
    def from_spectrum(cls, grid: GridSpec, spectrum) -> "GridFunction":
        return cls(grid, grid.to_signal(spectrum))

    def scaled(self, c: complex) -> "GridFunction":
        return GridFunction(self.grid, self.values * c)


def random_bandlimited(grid: GridSpec, band, seed: int) -> GridFunction:
    """Unit-norm function with i.i.d. complex normal spectrum on an annulus.

    Frequency nodes with band[0] <= |xi|_2 <= band[1] get independent
    standard complex Gaussian coefficients from a generator seeded with
    `seed`; everything else is zero and the result is normalized.
    """
    lo, hi = float(band[0]), float(band[1])
    if not (0.0 <= lo <= hi):
        raise ConfigError(f"band must satisfy 0 <= lo <= hi, got {(lo, hi)}")
    pts = grid.frequency_grid()
    radii = np.linalg.norm(pts, axis=1)
    mask = (radii >= lo) & (radii <= hi)
    n_in = int(mask.sum())
    if n_in == 0:
        raise ConfigError(
            f"band {(lo, hi)} contains no grid frequencies; "
            f"spacing is {grid.freq_spacing.max():g}")
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(n_in) + 1j * rng.standard_normal(n_in)
    spec = np.zeros(pts.shape[0], dtype=np.complex128)
    spec[mask] = coef
    spec = spec.reshape(grid.samples)
    spec /= np.sqrt(grid.frequency_energy(spec))
    return GridFunction.from_spectrum(grid, spec)


def _j_range(j_range) -> tuple[int, int]:
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    if j_hi < j_lo:
        raise ConfigError(f"j_range must satisfy j_lo <= j_hi, got {j_range}")
    return j_lo, j_hi


def _scale_quality(mag: np.ndarray, defaults: Defaults) -> str | None:
    """Flag a dilated spectrum sampled on the grid: None means usable."""
    vmax = float(mag.max())
    if vmax == 0.0:
        return "empty"
    floor = defaults.scale_edge_rtol * vmax
    edge = 0.0
    for ax in range(mag.ndim):
        slab = np.take(mag, [0, mag.shape[ax] - 1], axis=ax)
        edge = max(edge, float(slab.max()))
    if edge > floor:
        return "aliasing"
    if int(np.count_nonzero(mag > floor)) < defaults.min_scale_samples:
        return "unresolved"
    return None


def _raise_if_strict(strict: bool, flags: dict):
    if strict and flags:
        listed = ", ".join(f"{j}: {flag}" for j, flag in sorted(flags.items()))
        raise ScaleRangeError(
            f"scales do not fit the grid ({listed}); "
            "shrink j_range or refine the grid")


def _check_dims(grid: GridSpec, wavelet: FrequencyWavelet,
                *mats: DilationDescriptor):
    dims = {m.dim for m in mats}
    dims.add(wavelet.dim)
    if dims != {grid.dim}:
        raise ConfigError(
            f"dimension mismatch: grid is {grid.dim}-d, "
            f"wavelet is {wavelet.dim}-d, matrices are "
            f"{sorted(m.dim for m in mats)}")


def _scale_transforms(wavelet: FrequencyWavelet, A: DilationDescriptor,
                      f: GridFunction, j_lo: int, j_hi: int,
                      defaults: Defaults):
    """Yield (j, transform slice on the grid, quality flag) per scale.

    The slice is C f(., A^j) = |det A|^{j/2} * F^{-1}[f_hat conj(psi_hat_j)]
    sampled on every grid node.
    """
    grid = f.grid
    F = f.spectrum()
    pts = grid.frequency_grid()
    det = abs(A.det)
    for j in range(j_lo, j_hi + 1):
        psi = np.asarray(wavelet.spectrum(pts @ A.power(j)),
                         dtype=np.complex128).reshape(grid.samples)
        flag = _scale_quality(np.abs(psi), defaults)
        w = grid.to_signal(F * np.conj(psi)) * det ** (j / 2)
        yield j, w, flag


def _k_points(k_box, dim: int, n_scales: int, defaults: Defaults) -> np.ndarray:
    """Integer translate indices in lexicographic order, budget-checked."""
    k_lo, k_hi = _normalize_k_box(k_box, dim)
    n_k = int(np.prod(k_hi - k_lo + 1))
    if n_k * n_scales > defaults.max_window_points:
        raise ResourceLimitError(
            f"coefficient set would hold {n_k * n_scales} entries, "
            f"budget is {defaults.max_window_points}")
    axes = [np.arange(lo, hi + 1) for lo, hi in zip(k_lo, k_hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _snap_to_nodes(x: np.ndarray, grid: GridSpec):
    """Nearest torus node per translate: flat index, snap offset in cells."""
    L = np.array(grid.half_width)
    r = (x + L) / grid.spacing
    r_round = np.round(r)
    offsets = np.max(np.abs(r - r_round), axis=1)
    idx = r_round.astype(np.int64) % np.array(grid.samples)
    flat = np.ravel_multi_index(tuple(idx.T), grid.samples)
    return flat, offsets


@dataclass(frozen=True)
class CoefficientTable:
    """Analysis coefficients in canonical order: j ascending, k lexicographic.

    offsets holds the snap distance of each translate to its grid node in
    cell units (<= 0.5 by construction).  duplicate marks entries whose
    translate aliased, on the torus, to an earlier k at the same scale;
    norm-type summaries skip them by default so no atom is counted twice.
    """

    js: np.ndarray
    ks: np.ndarray
    values: np.ndarray
    offsets: np.ndarray
    duplicate: np.ndarray
    scale_flags: dict

    def __len__(self) -> int:
        return int(self.values.size)

    def norm_sq(self, include_duplicates: bool = False) -> float:
        keep = slice(None) if include_duplicates else ~self.duplicate
        return float(np.sum(np.abs(self.values[keep]) ** 2))

    @property
    def max_offset(self) -> float:
        return float(self.offsets.max()) if len(self) else 0.0

    def to_csv(self, path):
        d = self.ks.shape[1]
        header = ",".join(["j"] + [f"k_{a}" for a in range(d)] + ["re", "im"])
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for j, k, v in zip(self.js, self.ks, self.values):
                cells = [str(int(j))] + [str(int(ki)) for ki in k]
                cells += [f"{v.real:.17g}", f"{v.imag:.17g}"]
                fh.write(",".join(cells) + "\n")


def analysis_coefficients(wavelet: FrequencyWavelet, dilation, translation,
                          f: GridFunction, j_range, k_box, *,
                          strict_scales: bool = False,
                          defaults: Defaults = DEFAULTS) -> CoefficientTable:
    """<f, pi(A^j P k, A^j) psi> over the window j_range x k_box.

    One inverse FFT per scale evaluates the transform slice on the whole
    grid; each translate A^j P k is then read off at its nearest node with
    the snap offset recorded.  Translates falling on the same torus node
    at one scale are marked duplicate past the first.
    """
    A = as_dilation(dilation)
    P = as_dilation(translation)
    grid = f.grid
    _check_dims(grid, wavelet, A, P)
    j_lo, j_hi = _j_range(j_range)
    ks = _k_points(k_box, grid.dim, j_hi - j_lo + 1, defaults)
    n_k = ks.shape[0]

    js_out, vals, offs, dups = [], [], [], []
    flags: dict[int, str] = {}
    for j, w, flag in _scale_transforms(wavelet, A, f, j_lo, j_hi, defaults):
        if flag:
            flags[j] = flag
        x = ks @ (A.power(j) @ P.matrix).T
        flat, off = _snap_to_nodes(x, grid)
        dup = np.ones(n_k, dtype=bool)
        _, first = np.unique(flat, return_index=True)
        dup[first] = False
        js_out.append(np.full(n_k, j, dtype=np.int64))
        vals.append(w.ravel()[flat])
        offs.append(off)
        dups.append(dup)
    _raise_if_strict(strict_scales, flags)
    return CoefficientTable(
        js=np.concatenate(js_out),
        ks=np.tile(ks, (j_hi - j_lo + 1, 1)),
        values=np.concatenate(vals),
        offsets=np.concatenate(offs),
        duplicate=np.concatenate(dups),
        scale_flags=flags,
    )


@dataclass(frozen=True)
class FrameBoundsResult:
    """Extremal frame-operator eigenvalues on a band-limited subspace.

    Restricted-subspace estimate: relative to the true frame bounds the
    lower value can only be optimistic (too large) and the upper value
    pessimistic (too small), since both extremize over a subspace only.
    defect is the largest column norm of S - I over unit basis vectors.
    """

    lower: float
    upper: float
    defect: float
    eigenvalues: np.ndarray
    n_vectors: int
    n_atoms: int
    n_edge_excluded: int
    max_offset: float
    scale_flags: dict
    note: str = "restricted-subspace estimate"

    def to_json_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "defect": self.defect,
            "n_vectors": self.n_vectors,
            "n_atoms": self.n_atoms,
            "n_edge_excluded": self.n_edge_excluded,
            "max_offset": self.max_offset,
            "scale_flags": {str(j): s for j, s in sorted(self.scale_flags.items())},
            "note": self.note,
        }


def frame_bounds_estimate(wavelet: FrequencyWavelet, dilation, translation,
                          grid: GridSpec, j_range, k_box, band, *,
                          half_space: bool = False, max_vectors: int = 4096,
                          strict_scales: bool = False,
                          defaults: Defaults = DEFAULTS) -> FrameBoundsResult:
    """Frame-operator spectrum on the span of frequency bins in a band.

    Test vectors are unit-norm single-bin spikes with |xi|_2 inside
    [band[0], band[1]].  For indicator wavelets, bins whose scale orbit
    lands on a box face are dropped: the reflection pairing such a bin
    carries has measure zero in the continuum but would register here as
    a spurious rank-one defect.  half_space=True additionally keeps only
    bins whose first nonzero coordinate is positive, which removes the
    +xi/-xi couplings any real-valued wavelet produces at bins where the
    translate phases degenerate.
    """
    A = as_dilation(dilation)
    P = as_dilation(translation)
    _check_dims(grid, wavelet, A, P)
    j_lo, j_hi = _j_range(j_range)
    lo, hi = float(band[0]), float(band[1])
    pts = grid.frequency_grid()
    radii = np.linalg.norm(pts, axis=1)
    sel = (radii >= lo) & (radii <= hi)
    if half_space:
        positive = np.zeros(pts.shape[0], dtype=bool)
        undecided = np.ones(pts.shape[0], dtype=bool)
        for ax in range(grid.dim):
            positive |= undecided & (pts[:, ax] > 0)
            undecided &= pts[:, ax] == 0
        sel &= positive
    sel_idx = np.nonzero(sel)[0]
    n_excluded = 0
    if isinstance(wavelet, IndicatorUnionWavelet) and sel_idx.size:
        on_edge = np.zeros(sel_idx.size, dtype=bool)
        for j in range(j_lo, j_hi + 1):
            _, near = wavelet.membership_counts(
                pts[sel_idx] @ A.power(j),
                boundary_tol=defaults.boundary_tol)
            on_edge |= near
        n_excluded = int(on_edge.sum())
        sel_idx = sel_idx[~on_edge]
    m_dim = sel_idx.size
    if m_dim == 0:
        raise ConfigError(
            f"test band {(lo, hi)} selects no usable grid frequencies")
    if m_dim > max_vectors:
        raise ResourceLimitError(
            f"test space has {m_dim} vectors, cap is {max_vectors}")
    xi = pts[sel_idx]

    n_scales = j_hi - j_lo + 1
    ks = _k_points(k_box, grid.dim, n_scales, defaults)
    L = np.array(grid.half_width)
    sqrt_dxi = np.sqrt(grid.freq_cell_volume)
    det = abs(A.det)

    rows = []
    n_atoms = 0
    max_off = 0.0
    flags: dict[int, str] = {}
    for j in range(j_lo, j_hi + 1):
        psi_full = np.asarray(wavelet.spectrum(pts @ A.power(j)))
        flag = _scale_quality(np.abs(psi_full).reshape(grid.samples), defaults)
        if flag:
            flags[j] = flag
        psi_bins = psi_full[sel_idx]
        x = ks @ (A.power(j) @ P.matrix).T
        flat, off = _snap_to_nodes(x, grid)
        uniq = np.unique(flat)
        nodes = (np.stack(np.unravel_index(uniq, grid.samples), axis=-1)
                 * grid.spacing - L)
        n_atoms += uniq.size
        if n_atoms * m_dim > defaults.max_window_points:
            raise ResourceLimitError(
                f"frame matrix would exceed {defaults.max_window_points} "
                "entries; shrink the window or the test band")
        max_off = max(max_off, float(off.max()))
        weight = sqrt_dxi * det ** (j / 2)
        phases = np.exp(2j * np.pi * (nodes @ xi.T))
        rows.append(weight * phases * np.conj(psi_bins)[None, :])
    _raise_if_strict(strict_scales, flags)

    synth = np.vstack(rows)
    op = synth.conj().T @ synth
    try:
        eigs = np.linalg.eigvalsh(op)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"frame-operator eigen-solve failed: {exc}")
    defect = float(np.linalg.norm(op - np.eye(m_dim), axis=0).max())
    return FrameBoundsResult(
        lower=float(eigs[0]),
        upper=float(eigs[-1]),
        defect=defect,
        eigenvalues=eigs,
        n_vectors=int(m_dim),
        n_atoms=int(n_atoms),
        n_edge_excluded=n_excluded,
        max_offset=max_off,
        scale_flags=flags,
    )


def transform_field(wavelet: FrequencyWavelet, dilation, f: GridFunction,
                    j_range, *, strict_scales: bool = False,
                    defaults: Defaults = DEFAULTS):
    """Transform slices C f(., A^j) on the full grid, one array per scale.

    Returns (field, flags) where field maps j to a complex array shaped
    like the grid and flags maps j to its quality flag if any.
    """
    A = as_dilation(dilation)
    _check_dims(f.grid, wavelet, A)
    j_lo, j_hi = _j_range(j_range)
    n_scales = j_hi - j_lo + 1
    if n_scales * int(np.prod(f.grid.samples)) > defaults.max_window_points:
        raise ResourceLimitError(
            f"field of {n_scales} scales on this grid exceeds the "
            f"{defaults.max_window_points}-sample budget")
    field: dict[int, np.ndarray] = {}
    flags: dict[int, str] = {}
    for j, w, flag in _scale_transforms(wavelet, A, f, j_lo, j_hi, defaults):
        field[j] = w
        if flag:
            flags[j] = flag
    _raise_if_strict(strict_scales, flags)
    return field, flags


def transform_scale_energies(wavelet: FrequencyWavelet, dilation,
                             f: GridFunction, j_range, *,
                             strict_scales: bool = False,
                             defaults: Defaults = DEFAULTS) -> np.ndarray:
    """Per-scale terms |det A|^{-j} spacing^d sum_x |C f(x, A^j)|^2."""
    A = as_dilation(dilation)
    _check_dims(f.grid, wavelet, A)
    j_lo, j_hi = _j_range(j_range)
    det = abs(A.det)
    out = np.empty(j_hi - j_lo + 1)
    flags: dict[int, str] = {}
    for j, w, flag in _scale_transforms(wavelet, A, f, j_lo, j_hi, defaults):
        out[j - j_lo] = det ** (-j) * f.grid.signal_energy(w)
        if flag:
            flags[j] = flag
    _raise_if_strict(strict_scales, flags)
    return out


def continuous_transform_norm(wavelet: FrequencyWavelet, dilation,
                              f: GridFunction, j_range, *,
                              strict_scales: bool = False,
                              defaults: Defaults = DEFAULTS) -> float:
    """Squared norm of the semi-continuous transform under left Haar weight."""
    return float(transform_scale_energies(
        wavelet, dilation, f, j_range,
        strict_scales=strict_scales, defaults=defaults).sum())


@dataclass(frozen=True)
class PlancherelCheck:
    """Agreement between the time-side and frequency-side transform norms."""

    time_side: float
    frequency_side: float
    ratio: float
    rtol: float
    passes: bool

    def to_json_dict(self) -> dict:
        return {
            "time_side": self.time_side,
            "frequency_side": self.frequency_side,
            "ratio": self.ratio,
            "rtol": self.rtol,
            "passes": bool(self.passes),
        }


def plancherel_identity_check(wavelet: FrequencyWavelet, dilation,
                              f: GridFunction, j_range, *,
                              rtol: float = 0.02,
                              strict_scales: bool = False,
                              defaults: Defaults = DEFAULTS) -> PlancherelCheck:
    """Transform norm against int |f_hat|^2 * (truncated Calderon sum).

    Both pipelines share j_range; the frequency side multiplies the power
    spectrum of f by the partial Calderon sum on every node.  The two are
    dual up to rounding, so the ratio isolates bookkeeping errors rather
    than discretization quality.
    """
    time_side = continuous_transform_norm(
        wavelet, dilation, f, j_range,
        strict_scales=strict_scales, defaults=defaults)
    grid = f.grid
    j_lo, j_hi = _j_range(j_range)
    calderon = calderon_sum_on_grid(wavelet, dilation, grid, (j_lo, j_hi))
    power = np.abs(f.spectrum()) ** 2
    frequency_side = grid.freq_cell_volume * float(np.sum(power * calderon))
    if frequency_side == 0.0:
        raise ConfigError(
            "frequency-side integral vanishes: the function is zero or its "
            "spectrum misses every dilated wavelet band in j_range")
    ratio = time_side / frequency_side
    return PlancherelCheck(
        time_side=time_side,
        frequency_side=frequency_side,
        ratio=ratio,
        rtol=rtol,
        passes=bool(abs(ratio - 1.0) <= rtol),
    )


@dataclass(frozen=True)
class CovolumeCheck:
    """Per-function transform-norm ratios against the covolume sandwich."""

    ratios: np.ndarray
    covolume: float
    lower: float
    upper: float
    passes: bool

    def to_json_dict(self) -> dict:
        return {
            "ratios": [float(r) for r in self.ratios],
            "covolume": self.covolume,
            "lower": self.lower,
            "upper": self.upper,
            "passes": bool(self.passes),
        }


def covolume_inequality_check(wavelet: FrequencyWavelet, dilation, translation,
                              functions, j_range,
                              frame_bounds: tuple[float, float] = (1.0, 1.0),
                              *, allowance: float | None = None,
                              strict_scales: bool = False,
                              defaults: Defaults = DEFAULTS) -> CovolumeCheck:
    """Check C1 - eps <= ||C f||^2 / (|det P| ||f||^2) <= C2 + eps per f.

    The covolume |det P| converts the transform norm into the frame-bound
    sandwich; eps is the discretization allowance.  For Parseval fixtures
    pass the default bounds (1, 1).
    """
    P = as_dilation(translation)
    covol = abs(P.det)
    c1, c2 = float(frame_bounds[0]), float(frame_bounds[1])
    if not (0.0 <= c1 <= c2):
        raise ConfigError(f"frame bounds must satisfy 0 <= C1 <= C2, "
                          f"got {(c1, c2)}")
    eps = defaults.allowance if allowance is None else float(allowance)
    if isinstance(functions, GridFunction):
        functions = [functions]
    ratios = []
    for f in functions:
        nf = f.norm_sq
        if nf == 0.0:
            raise NumericError("zero test function has no norm ratio")
        wn = continuous_transform_norm(
            wavelet, dilation, f, j_range,
            strict_scales=strict_scales, defaults=defaults)
        ratios.append(wn / (covol * nf))
    if not ratios:
        raise ConfigError("no test functions given")
    arr = np.array(ratios)
    lower, upper = c1 - eps, c2 + eps
    return CovolumeCheck(
        ratios=arr,
        covolume=covol,
        lower=lower,
        upper=upper,
        passes=bool(np.all((arr >= lower) & (arr <= upper))),
    )


def _window_offsets(A: DilationDescriptor, window: GBox, j: int,
                    grid: GridSpec, defaults: Defaults) -> np.ndarray:
    """Integer grid offsets o with o*spacing inside A^j M [u_lo, u_hi)."""
    shear = A.power(j) @ window.shear_matrix()
    d = grid.dim
    corners_u = np.array(np.meshgrid(
        *[(window.u_lo[a], window.u_hi[a]) for a in range(d)],
        indexing="ij")).reshape(d, -1).T
    corners_x = corners_u @ shear.T
    spacing = grid.spacing
    lo = np.floor(corners_x.min(axis=0) / spacing).astype(np.int64) - 1
    hi = np.ceil(corners_x.max(axis=0) / spacing).astype(np.int64) + 1
    span = hi - lo + 1
    if np.any(span >= np.array(grid.samples)):
        raise ConfigError(
            f"window spans the whole period at scale {j}; shrink it or "
            "use a coarser scale range")
    if int(np.prod(span)) > defaults.max_window_points:
        raise ResourceLimitError(
            f"window rasterizes to {int(np.prod(span))} offsets at scale "
            f"{j}, budget is {defaults.max_window_points}")
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    offsets = np.stack([m.ravel() for m in mesh], axis=-1)
    u = (offsets * spacing) @ np.linalg.inv(shear).T
    keep = np.all((u >= window.u_lo) & (u < window.u_hi), axis=1)
    kept = offsets[keep]
    if kept.size == 0:
        raise ConfigError(
            f"window contains no grid offset at scale {j}; it is smaller "
            "than one cell")
    return kept


@dataclass(frozen=True)
class AmalgamResult:
    """Windowed maximal-function norm with its per-scale breakdown."""

    norm_sq: float
    scale_contributions: dict
    window_offsets: dict

    def to_json_dict(self) -> dict:
        return {
            "norm_sq": self.norm_sq,
            "scale_contributions": {str(j): v for j, v in
                                    sorted(self.scale_contributions.items())},
            "window_offsets": {str(j): int(v) for j, v in
                               sorted(self.window_offsets.items())},
        }


def amalgam_maximal_norm(field: Mapping[int, np.ndarray], window: GBox,
                         dilation, grid: GridSpec, *,
                         defaults: Defaults = DEFAULTS) -> AmalgamResult:
    """Left-Haar-weighted squared L2 norm of the windowed maximal function.

    field maps j to the slice F(., A^j) on the grid; slices absent from
    the mapping are treated as zero.  At slot (x, A^j) the sup runs over
    the window's image under the group action: x offsets A^j M [u_lo, u_hi)
    rasterized to grid nodes, scale offsets m in [window.j_lo, window.j_hi].
    A heuristic surrogate for amalgam-class membership, not a proof of it.
    """
    A = as_dilation(dilation)
    if not isinstance(window, GBox):
        raise ConfigError("window must be a group box")
    if window.inverted:
        raise ConfigError("window must be a direct (non-inverted) box")
    if window.dim != grid.dim or A.dim != grid.dim:
        raise ConfigError("window, dilation, and grid dimensions must match")
    mags: dict[int, np.ndarray] = {}
    for j, values in field.items():
        v = np.asarray(values, dtype=np.complex128).reshape(grid.samples)
        mags[int(j)] = np.abs(v)
    if not mags:
        raise ConfigError("field holds no scale slices")

    det = abs(A.det)
    roll_axes = tuple(range(grid.dim))
    total = 0.0
    contributions: dict[int, float] = {}
    counts: dict[int, int] = {}
    for j in sorted(mags):
        offsets = _window_offsets(A, window, j, grid, defaults)
        counts[j] = offsets.shape[0]
        maximal = np.zeros(grid.samples)
        for m in range(window.j_lo, window.j_hi + 1):
            source = mags.get(j + m)
            if source is None:
                continue
            for o in offsets:
                np.maximum(maximal,
                           np.roll(source, shift=tuple(-o), axis=roll_axes),
                           out=maximal)
        contrib = det ** (-j) * grid.cell_volume * float(np.sum(maximal ** 2))
        contributions[j] = contrib
        total += contrib
    return AmalgamResult(
        norm_sq=total,
        scale_contributions=contributions,
        window_offsets=counts,
    )


@dataclass(frozen=True)
class FrameReport:
    """Aggregate frame diagnostics for one wavelet system.

    bessel_ratios holds sum |coef|^2 / ||f||^2 per seeded test function;
    continuous_norm_ratios holds ||C f||^2 / (|det P| ||f||^2).
    """

    system: dict
    c1_est: float
    c2_est: float
    parseval_defect: float
    bessel_ratios: tuple
    continuous_norm_ratios: tuple
    seed: int
    verdicts: dict
    scale_flags: dict
    note: str = "restricted-subspace estimate"

    @property
    def passes(self) -> bool:
        return all(self.verdicts.values())

    def to_json_dict(self) -> dict:
        return {
            "system": self.system,
            "c1_est": self.c1_est,
            "c2_est": self.c2_est,
            "parseval_defect": self.parseval_defect,
            "bessel_ratios": list(self.bessel_ratios),
            "continuous_norm_ratios": list(self.continuous_norm_ratios),
            "seed": self.seed,
            "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            "scale_flags": {str(j): s for j, s in
                            sorted(self.scale_flags.items())},
            "note": self.note,
        }


def frame_report(wavelet: FrequencyWavelet, dilation, translation,
                 grid: GridSpec, j_range, k_box, band, *,
                 test_band=None, n_test: int = 10, seed: int = 0,
                 allowance: float | None = None, half_space: bool = False,
                 strict_scales: bool = False,
                 defaults: Defaults = DEFAULTS) -> FrameReport:
    """Frame-bound estimate plus seeded test-function ratio checks.

    Test functions are random_bandlimited draws on test_band (defaulting
    to the estimation band) with seeds seed, seed+1, ...  Verdicts demand
    a positive lower bound and both ratio families inside
    [C1 - eps, C2 + eps].
    """
    A = as_dilation(dilation)
    P = as_dilation(translation)
    if n_test < 1:
        raise ConfigError("need at least one test function")
    eps = defaults.allowance if allowance is None else float(allowance)
    bounds = frame_bounds_estimate(
        wavelet, dilation, translation, grid, j_range, k_box, band,
        half_space=half_space, strict_scales=strict_scales, defaults=defaults)
    tb = band if test_band is None else test_band
    functions = [random_bandlimited(grid, tb, seed + i) for i in range(n_test)]
    bessel = []
    for f in functions:
        table = analysis_coefficients(
            wavelet, dilation, translation, f, j_range, k_box,
            strict_scales=strict_scales, defaults=defaults)
        bessel.append(table.norm_sq() / f.norm_sq)
    cov = covolume_inequality_check(
        wavelet, dilation, translation, functions, j_range,
        (bounds.lower, bounds.upper), allowance=eps,
        strict_scales=strict_scales, defaults=defaults)
    lo, hi = bounds.lower - eps, bounds.upper + eps
    verdicts = {
        "lower_bound_positive": bounds.lower > 0.0,
        "bessel_within_bounds": all(lo <= r <= hi for r in bessel),
        "continuous_within_bounds": cov.passes,
    }
    j_lo, j_hi = _j_range(j_range)
    k_lo, k_hi = _normalize_k_box(k_box, grid.dim)
    system = {
        "wavelet": wavelet.label,
        "dilation": A.matrix.tolist(),
        "translation": P.matrix.tolist(),
        "j_range": [j_lo, j_hi],
        "k_box": np.stack([k_lo, k_hi], axis=-1).tolist(),
        "band": [float(band[0]), float(band[1])],
        "test_band": [float(tb[0]), float(tb[1])],
        "n_test": n_test,
        "grid": grid.to_json_dict(),
        "n_vectors": bounds.n_vectors,
        "n_atoms": bounds.n_atoms,
        "n_edge_excluded": bounds.n_edge_excluded,
    }
    return FrameReport(
        system=system,
        c1_est=bounds.lower,
        c2_est=bounds.upper,
        parseval_defect=bounds.defect,
        bessel_ratios=tuple(bessel),
        continuous_norm_ratios=tuple(float(r) for r in cov.ratios),
        seed=seed,
        verdicts=verdicts,
        scale_flags=bounds.scale_flags,
    )
