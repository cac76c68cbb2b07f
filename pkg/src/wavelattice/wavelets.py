"""Frequency-domain wavelet models and wavelet-set verification.

Every wavelet in this package is represented through its Fourier
transform, evaluated with the unitary convention

    psi_hat(xi) = integral psi(t) exp(-2 pi i t . xi) dt.

Three concrete shapes cover what the checks need: a closed-form
spectrum, a finite union of half-open boxes with a single amplitude,
and samples on a regular frequency grid.  Half-open boxes [lo, hi)
make exact tilings representable; the dyadic band pair +-[1/2, 1)
covers every nonzero dyadic orbit point exactly once, with no face
counted twice.

`GridSpec` fixes the discretization used for transforms: signal
samples at x_m = -L + m*delta with delta = 2L/N, frequencies at
xi_n = n/(2L) for n in [-N/2, N/2).  With these scalings the discrete
Parseval identity holds exactly in floating point, which the frame
checks rely on.
"""

from __future__ import annotations

import abc
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import box_counts, orbit_box_counts
from .config import DEFAULTS, Defaults
from .errors import (
    ConfigError,
    SpectrumDomainError,
    UnsupportedDilationError,
)
from .linalg import DilationDescriptor, as_dilation, classify_dilation

__all__ = [
    "GridSpec",
    "FrequencyWavelet",
    "ClosedFormWavelet",
    "IndicatorUnionWavelet",
    "SampledWavelet",
    "WaveletSetReport",
    "builtin_wavelet",
    "scaled_spectrum",
    "norm_l2",
    "verify_wavelet_set",
    "save_spectrum",
    "load_sampled_wavelet",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Regular sampling grid on [-L, L)^d with N samples per axis."""

    half_width: tuple[float, ...]
    samples: tuple[int, ...]

    def __post_init__(self):
        hw = self.half_width
        ns = self.samples
        if np.isscalar(hw):
            hw = (float(hw),)
        else:
            hw = tuple(float(v) for v in hw)
        if np.isscalar(ns):
            ns = (int(ns),) * len(hw)
        else:
            ns = tuple(int(v) for v in ns)
        if len(hw) != len(ns):
            raise ConfigError(
                f"grid needs one sample count per axis, got {len(hw)} "
                f"half-widths and {len(ns)} counts"
            )
        for L in hw:
            if not (np.isfinite(L) and L > 0):
                raise ConfigError(f"grid half-width must be positive, got {L}")
        for n in ns:
            if not _is_power_of_two(n) or n < 8:
                raise ConfigError(
                    f"sample count must be a power of two >= 8, got {n}"
                )
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "samples", ns)

    @property
    def dim(self) -> int:
        return len(self.half_width)

    @property
    def spacing(self) -> np.ndarray:
        return np.array([2 * L / n for L, n in zip(self.half_width, self.samples)])

    @property
    def freq_spacing(self) -> np.ndarray:
        return np.array([1.0 / (2 * L) for L in self.half_width])

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def freq_cell_volume(self) -> float:
        return float(np.prod(self.freq_spacing))

    def sample_axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.arange(-(n // 2), n // 2) * (2 * L / n)
            for L, n in zip(self.half_width, self.samples)
        )

    def frequency_axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.arange(-(n // 2), n // 2) / (2 * L)
            for L, n in zip(self.half_width, self.samples)
        )

    def frequency_grid(self) -> np.ndarray:
        """All frequency nodes as a flat (prod(N), dim) array, C order."""
        mesh = np.meshgrid(*self.frequency_axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def to_frequency(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values, dtype=np.complex128).reshape(self.samples)
        spec = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(v)))
        return spec * self.cell_volume

    def to_signal(self, spectrum: np.ndarray) -> np.ndarray:
        s = np.asarray(spectrum, dtype=np.complex128).reshape(self.samples)
        v = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(s)))
        return v / self.cell_volume

    def signal_energy(self, values: np.ndarray) -> float:
        return self.cell_volume * float(np.sum(np.abs(values) ** 2))

    def frequency_energy(self, spectrum: np.ndarray) -> float:
        return self.freq_cell_volume * float(np.sum(np.abs(spectrum) ** 2))

    def to_json_dict(self) -> dict:
        return {"half_width": list(self.half_width), "samples": list(self.samples)}


def _as_points(xi, dim: int) -> np.ndarray:
    pts = np.asarray(xi, dtype=np.float64)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        # a bare vector is a column of scalars in 1D, one point otherwise
        pts = pts[:, None] if dim == 1 else pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {pts.shape}")
    return pts


class FrequencyWavelet(abc.ABC):
    """A wavelet given by its Fourier transform."""

    dim: int
    label: str
    # optional rigorous radial bound: (env, r_split) with
    # |psi_hat(xi)|^2 <= env(||xi||_2), env nondecreasing below r_split
    # and nonincreasing above it; enables certified truncation tails
    power_envelope: tuple | None = None

    @abc.abstractmethod
    def spectrum(self, xi) -> np.ndarray:
        """Evaluate psi_hat at points xi, shape (n, dim) -> complex (n,)."""

    def power(self, xi) -> np.ndarray:
        return np.abs(self.spectrum(xi)) ** 2


class ClosedFormWavelet(FrequencyWavelet):
    def __init__(self, fn, dim: int = 1, label: str = "closed-form",
                 freq_support: tuple[float, float] | None = None,
                 power_envelope: tuple | None = None):
        self._fn = fn
        self.dim = int(dim)
        self.label = label
        # modulus vanishes for |xi| outside [a, b]; None means unbounded
        self.freq_support = freq_support
        self.power_envelope = power_envelope

    def spectrum(self, xi) -> np.ndarray:
        pts = _as_points(xi, self.dim)
        out = np.asarray(self._fn(pts), dtype=np.complex128)
        return out.reshape(pts.shape[0])


class IndicatorUnionWavelet(FrequencyWavelet):
    """amplitude * indicator of a disjoint union of half-open boxes."""

    def __init__(self, boxes, amplitude: float = 1.0, dim: int | None = None,
                 label: str = "indicator"):
        lo, hi = [], []
        for b_lo, b_hi in boxes:
            lo.append(np.atleast_1d(np.asarray(b_lo, dtype=np.float64)))
            hi.append(np.atleast_1d(np.asarray(b_hi, dtype=np.float64)))
        if lo:
            self.lo = np.stack(lo)
            self.hi = np.stack(hi)
            if dim is not None and dim != self.lo.shape[1]:
                raise ValueError("dim disagrees with box shape")
            self.dim = self.lo.shape[1]
            if not np.all(self.hi > self.lo):
                raise ValueError("each box needs lo < hi on every axis")
        else:
            if dim is None:
                raise ValueError("empty union needs an explicit dim")
            self.dim = int(dim)
            self.lo = np.zeros((0, self.dim))
            self.hi = np.zeros((0, self.dim))
        self.amplitude = float(amplitude)
        self.label = label

    @property
    def n_boxes(self) -> int:
        return self.lo.shape[0]

    def union_volume(self) -> float:
        return float(np.sum(np.prod(self.hi - self.lo, axis=1)))

    def membership_counts(self, xi, boundary_tol: float = 0.0):
        """Per-point box count and a near-face flag, via the counting kernel."""
        pts = _as_points(xi, self.dim)
        if self.n_boxes == 0:
            n = pts.shape[0]
            return np.zeros(n, dtype=np.int64), np.zeros(n, dtype=bool)
        counts, flags = box_counts(pts, self.lo, self.hi, boundary_tol)
        return counts.astype(np.int64), flags.astype(bool)

    def spectrum(self, xi) -> np.ndarray:
        counts, _ = self.membership_counts(xi)
        return self.amplitude * counts.astype(np.complex128)

    def corners(self) -> np.ndarray:
        """All box corners, shape (n_boxes * 2^d, d)."""
        if self.n_boxes == 0:
            return np.zeros((0, self.dim))
        out = []
        for b in range(self.n_boxes):
            bounds = np.stack([self.lo[b], self.hi[b]])
            idx = np.indices((2,) * self.dim).reshape(self.dim, -1).T
            out.append(bounds[idx, np.arange(self.dim)])
        return np.concatenate(out, axis=0)

    def origin_distance(self) -> float:
        """Euclidean distance from the origin to the closed union."""
        if self.n_boxes == 0:
            return np.inf
        gap = np.maximum(np.maximum(self.lo, -self.hi), 0.0)
        return float(np.min(np.linalg.norm(gap, axis=1)))

    def to_json_dict(self) -> dict:
        return {
            "kind": "indicator-union",
            "label": self.label,
            "amplitude": self.amplitude,
            "boxes": [[list(l), list(h)] for l, h in zip(self.lo, self.hi)],
        }


class SampledWavelet(FrequencyWavelet):
    """Spectrum known only at nodes of a regular frequency grid.

    Evaluation interpolates linearly inside the sampled domain.  Points
    outside the domain evaluate to zero by default so that truncated
    orbit sums stay well defined; pass out_of_range="raise" to get a
    SpectrumDomainError instead.
    """

    def __init__(self, axes, values, label: str = "sampled",
                 out_of_range: str = "zero"):
        axes = tuple(np.asarray(a, dtype=np.float64) for a in axes)
        for a in axes:
            if a.ndim != 1 or a.size < 2 or not np.all(np.diff(a) > 0):
                raise ValueError("each axis must be a strictly increasing 1D array")
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != tuple(a.size for a in axes):
            raise ValueError(
                f"values shape {values.shape} does not match axes "
                f"{tuple(a.size for a in axes)}"
            )
        if out_of_range not in ("zero", "raise"):
            raise ValueError("out_of_range must be 'zero' or 'raise'")
        self.axes = axes
        self.values = values
        self.dim = len(axes)
        self.label = label
        self.out_of_range = out_of_range
        self._interp = None

    @property
    def domain(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([a[0] for a in self.axes])
        hi = np.array([a[-1] for a in self.axes])
        return lo, hi

    def spectrum(self, xi) -> np.ndarray:
        pts = _as_points(xi, self.dim)
        lo, hi = self.domain
        outside = np.any((pts < lo) | (pts > hi), axis=1)
        if self.out_of_range == "raise" and np.any(outside):
            worst = pts[outside][0]
            raise SpectrumDomainError(
                f"{int(np.count_nonzero(outside))} of {pts.shape[0]} evaluation "
                f"points fall outside the sampled domain "
                f"[{lo.tolist()}, {hi.tolist()}], e.g. {worst.tolist()}"
            )
        if self.dim == 1:
            x = self.axes[0]
            out = np.interp(pts[:, 0], x, self.values.real, left=0.0, right=0.0) \
                + 1j * np.interp(pts[:, 0], x, self.values.imag, left=0.0, right=0.0)
        else:
            if self._interp is None:
                from scipy.interpolate import RegularGridInterpolator

                self._interp = RegularGridInterpolator(
                    self.axes, self.values, method="linear",
                    bounds_error=False, fill_value=0.0,
                )
            out = self._interp(pts)
        out = np.asarray(out, dtype=np.complex128)
        out[outside] = 0.0
        return out

    def to_json_dict(self) -> dict:
        lo, hi = self.domain
        return {
            "kind": "sampled",
            "label": self.label,
            "shape": list(self.values.shape),
            "domain": [lo.tolist(), hi.tolist()],
            "out_of_range": self.out_of_range,
        }


def _haar_spectrum(pts: np.ndarray) -> np.ndarray:
    # psi = +1 on [0, 1/2), -1 on [1/2, 1); hat psi = (1 - e^{-i pi xi})^2 / (2 pi i xi)
    xi = pts[:, 0]
    num = (-np.expm1(-1j * np.pi * xi)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(xi == 0.0, 0.0, num / (2j * np.pi * np.where(xi == 0, 1.0, xi)))
    return out


_SMOOTHSTEPS = {
    1: lambda x: x,
    3: lambda x: x * x * (3 - 2 * x),
    5: lambda x: x**3 * (10 - 15 * x + 6 * x * x),
    7: lambda x: x**4 * (35 - 84 * x + (70 - 20 * x) * x * x),
}


def _meyer_factory(degree: int):
    try:
        nu = _SMOOTHSTEPS[degree]
    except KeyError:
        raise ConfigError(
            f"meyer bell degree must be one of {sorted(_SMOOTHSTEPS)}, got {degree}"
        ) from None

    def fn(pts: np.ndarray) -> np.ndarray:
        xi = pts[:, 0]
        a = np.abs(xi)
        mod = np.zeros_like(a)
        rise = (a >= 1 / 3) & (a < 2 / 3)
        fall = (a >= 2 / 3) & (a <= 4 / 3)
        mod[rise] = np.sin(0.5 * np.pi * nu(np.clip(3 * a[rise] - 1, 0.0, 1.0)))
        mod[fall] = np.cos(0.5 * np.pi * nu(np.clip(1.5 * a[fall] - 1, 0.0, 1.0)))
        return mod * np.exp(1j * np.pi * xi)

    return fn


def _haar_envelope(r):
    # sin^4(h)/h^2 <= min(h^2, 1/h^2) with h = pi r / 2; split at h = 1
    h2 = (np.pi * np.asarray(r, dtype=float) / 2) ** 2
    inv = np.full_like(h2, np.inf)
    nz = h2 > 0
    inv[nz] = 1.0 / h2[nz]
    return np.minimum(h2, inv)


def builtin_wavelet(name: str, **kwargs) -> FrequencyWavelet:
    """Construct a named wavelet.

    Names: "haar", "shannon_1d", "meyer_1d" (keyword degree in
    {1,3,5,7}, default 3), "zero" (keyword dim, default 1).
    """
    if name == "haar":
        return ClosedFormWavelet(_haar_spectrum, dim=1, label="haar",
                                 power_envelope=(_haar_envelope, 2 / np.pi))
    if name == "shannon_1d":
        amplitude = float(kwargs.pop("amplitude", 1.0))
        _reject_extra(name, kwargs)
        return IndicatorUnionWavelet(
            [([-1.0], [-0.5]), ([0.5], [1.0])],
            amplitude=amplitude, label="shannon_1d",
        )
    if name == "meyer_1d":
        degree = int(kwargs.pop("degree", 3))
        _reject_extra(name, kwargs)
        return ClosedFormWavelet(
            _meyer_factory(degree), dim=1,
            label=f"meyer_1d(degree={degree})",
            freq_support=(1 / 3, 4 / 3),
        )
    if name == "zero":
        dim = int(kwargs.pop("dim", 1))
        _reject_extra(name, kwargs)
        return IndicatorUnionWavelet([], amplitude=0.0, dim=dim, label="zero")
    raise ConfigError(f"unknown wavelet name {name!r}")


def _reject_extra(name: str, kwargs: dict):
    if kwargs:
        raise ConfigError(f"unexpected options for wavelet {name!r}: {sorted(kwargs)}")


def scaled_spectrum(wavelet: FrequencyWavelet, dilation, j: int) -> ClosedFormWavelet:
    """The wavelet dilated by A^j, as a frequency-domain object.

    The unitary dilation |det A|^{-j/2} psi(A^{-j} t) has spectrum
    |det A|^{j/2} psi_hat((A^T)^j xi).
    """
    A = as_dilation(dilation)
    if A.dim != wavelet.dim:
        raise ValueError("dilation dimension does not match the wavelet")
    weight = abs(A.det) ** (j / 2)
    Aj = A.power(j)

    def fn(pts):
        return weight * wavelet.spectrum(pts @ Aj)

    return ClosedFormWavelet(fn, dim=wavelet.dim,
                             label=f"{wavelet.label}@scale{j}")


def norm_l2(wavelet: FrequencyWavelet, grid: GridSpec | None = None,
            quad_limit: int = 400) -> float:
    """L2 norm of the wavelet, computed from the spectrum.

    Indicator unions are exact.  Closed forms in 1D use adaptive
    quadrature: on the known support when there is one (full quad
    accuracy), otherwise over unit intervals of [-32, 32] plus infinite
    tails, which is good to roughly 1e-4 in absolute terms for slowly
    decaying oscillatory spectra.  Everything else needs a grid and
    uses the Riemann sum on it.
    """
    if isinstance(wavelet, IndicatorUnionWavelet):
        return abs(wavelet.amplitude) * np.sqrt(wavelet.union_volume())
    if isinstance(wavelet, ClosedFormWavelet) and wavelet.dim == 1 and grid is None:
        from scipy.integrate import quad

        def p(x):
            return float(wavelet.power(np.array([[x]]))[0])

        support = wavelet.freq_support
        if support is not None:
            a, b = support
            val = quad(p, a, b, limit=quad_limit)[0]
            val += quad(p, -b, -a, limit=quad_limit)[0]
            return float(np.sqrt(val))
        body = sum(quad(p, m, m + 1, limit=64)[0] for m in range(-32, 32))
        with warnings.catch_warnings():
            # the infinite-tail transform converges slowly for oscillatory
            # integrands; the result is still within the documented accuracy
            warnings.simplefilter("ignore")
            tails = quad(p, 32.0, np.inf, limit=quad_limit)[0]
            tails += quad(p, -np.inf, -32.0, limit=quad_limit)[0]
        return float(np.sqrt(body + tails))
    if grid is None:
        raise ConfigError("this wavelet shape needs a grid to integrate on")
    if grid.dim != wavelet.dim:
        raise ValueError("grid dimension does not match the wavelet")
    vals = wavelet.power(grid.frequency_grid())
    return float(np.sqrt(grid.freq_cell_volume * np.sum(vals)))


# ---------------------------------------------------------------------------
# wavelet-set verification


@dataclass(frozen=True)
class WaveletSetReport:
    label: str
    dilation_ok: bool
    translation_ok: bool
    amplitude_ok: bool
    union_volume: float
    covolume: float
    orbit_scale_range: tuple[int, int]
    shift_count: int
    n_probes: int
    n_excluded_dilation: int
    n_excluded_translation: int
    dilation_count_range: tuple[int, int]
    translation_count_range: tuple[int, int]
    bessel_status: str = "assumed"

    @property
    def verdict(self) -> str:
        ok = self.dilation_ok and self.translation_ok and self.amplitude_ok
        return "wavelet_set" if ok else "not_wavelet_set"

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "verdict": self.verdict,
            "dilation_ok": self.dilation_ok,
            "translation_ok": self.translation_ok,
            "amplitude_ok": self.amplitude_ok,
            "union_volume": self.union_volume,
            "covolume": self.covolume,
            "orbit_scale_range": list(self.orbit_scale_range),
            "shift_count": self.shift_count,
            "n_probes": self.n_probes,
            "n_excluded_dilation": self.n_excluded_dilation,
            "n_excluded_translation": self.n_excluded_translation,
            "dilation_count_range": list(self.dilation_count_range),
            "translation_count_range": list(self.translation_count_range),
            "bessel_status": self.bessel_status,
        }


def _operator_norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2))


def _orbit_scale_bounds(A: DilationDescriptor, r_min: float, r_max: float,
                        set_radius: float, origin_gap: float) -> tuple[int, int]:
    """Smallest scale window outside which no orbit point can meet the set.

    For j > 0:  |(A^T)^j xi| >= |xi| / ||(A^T)^{-j}||, which eventually
    exceeds the outer radius of the set.  For j < 0 the image norm is at
    most ||(A^T)^j|| |xi|, which eventually drops below the origin gap.
    Expansiveness of A guarantees both bounds terminate.
    """
    j_hi = 0
    while r_min / _operator_norm(A.transpose_power(-(j_hi + 1))) <= set_radius:
        j_hi += 1
    j_lo = 0
    while _operator_norm(A.transpose_power(-(j_lo + 1))) * r_max >= origin_gap:
        j_lo += 1
    return -j_lo, j_hi


def _dual_shift_vectors(P: DilationDescriptor, wavelet: IndicatorUnionWavelet):
    """Integer combinations k with (P^T)^{-1} k able to move the base cell
    into the union: k ranges over the integer box hull of P^T W - [0,1)^d."""
    d = P.dim
    corners = wavelet.corners() @ P.matrix  # rows are P^T c for corners c
    lo = np.floor(corners.min(axis=0) - 1.0).astype(int)
    hi = np.ceil(corners.max(axis=0)).astype(int)
    axes = [np.arange(lo[a], hi[a] + 1) for a in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    ks = np.stack([m.ravel() for m in mesh], axis=-1).astype(np.float64)
    # rows are (P^T)^{-1} k; as row vectors that is k @ ((P^T)^{-1})^T = k @ P^{-1}
    return ks @ np.linalg.inv(P.matrix)


def verify_wavelet_set(wavelet: FrequencyWavelet, dilation, translation, *,
                       n_probes: int = 4096, seed: int = 0,
                       defaults: Defaults = DEFAULTS) -> WaveletSetReport:
    """Check the two tiling conditions that make an indicator union a
    wavelet set for the dilation/translation pair.

    Dilation condition: the orbit {(A^T)^j W} tiles frequency space away
    from the origin (orbit membership count exactly 1 at every probe).
    Translation condition: {W + (P^T)^{-1} k} tiles frequency space
    (shifted membership count exactly 1 on a fundamental cell).
    Probes that land within the boundary tolerance of a box face are
    excluded from both verdicts and reported.

    The amplitude must equal sqrt(|det P|) for the associated system to
    be normalized; that is recorded as amplitude_ok.
    """
    if not isinstance(wavelet, IndicatorUnionWavelet):
        raise ConfigError(
            "wavelet set checks apply to indicator-union spectra only; "
            f"got {type(wavelet).__name__}"
        )
    A = as_dilation(dilation)
    P = as_dilation(translation)
    if A.dim != wavelet.dim or P.dim != wavelet.dim:
        raise ValueError("dimensions of wavelet, dilation, translation disagree")
    if classify_dilation(A) != "expansive":
        raise UnsupportedDilationError(
            "orbit truncation needs an expansive dilation; "
            f"classification is {classify_dilation(A)!r}"
        )
    covolume = abs(P.det)
    amp_target = np.sqrt(covolume)
    amplitude_ok = bool(abs(wavelet.amplitude - amp_target) <= 1e-9 * max(1.0, amp_target))
    btol = defaults.probe_boundary_tol
    rng = np.random.default_rng(seed)

    if wavelet.n_boxes == 0:
        return WaveletSetReport(
            label=wavelet.label, dilation_ok=False, translation_ok=False,
            amplitude_ok=amplitude_ok, union_volume=0.0, covolume=covolume,
            orbit_scale_range=(0, 0), shift_count=0, n_probes=0,
            n_excluded_dilation=0, n_excluded_translation=0,
            dilation_count_range=(0, 0), translation_count_range=(0, 0),
        )

    origin_gap = wavelet.origin_distance()
    if origin_gap == 0.0:
        raise ConfigError(
            "the box union touches the origin, so the orbit sum cannot be "
            "truncated; a wavelet set must stay away from zero frequency"
        )

    corners = wavelet.corners()
    set_radius = float(np.max(np.linalg.norm(corners, axis=1)))
    bbox_lo = corners.min(axis=0)
    bbox_hi = corners.max(axis=0)
    span = bbox_hi - bbox_lo

    # --- dilation tiling on probes spread over an enlarged bounding box
    plo = bbox_lo - 0.25 * span
    phi = bbox_hi + 0.25 * span
    probes = rng.uniform(plo, phi, size=(n_probes, wavelet.dim))
    tiny = 1e-6 * float(np.max(np.abs([plo, phi])))
    for _ in range(64):
        bad = np.linalg.norm(probes, axis=1) < tiny
        if not np.any(bad):
            break
        probes[bad] = rng.uniform(plo, phi, size=(int(bad.sum()), wavelet.dim))
    norms = np.linalg.norm(probes, axis=1)
    j_lo, j_hi = _orbit_scale_bounds(A, float(norms.min()), float(norms.max()),
                                     set_radius, origin_gap)
    mats = np.stack([A.transpose_power(j) for j in range(j_lo, j_hi + 1)])
    counts, flags = orbit_box_counts(probes, mats, wavelet.lo, wavelet.hi, btol)
    keep = ~flags.astype(bool)
    kept = counts[keep]
    if kept.size == 0:
        raise ConfigError("every dilation probe was boundary-excluded; "
                          "loosen the tolerance or add probes")
    dilation_ok = bool(np.all(kept == 1))
    dil_range = (int(kept.min()), int(kept.max()))

    # --- translation tiling on a fundamental cell of the dual lattice
    t = rng.random(size=(n_probes, wavelet.dim))
    cell_probes = t @ np.linalg.inv(P.matrix)  # rows (P^T)^{-1} t
    shifts = _dual_shift_vectors(P, wavelet)
    pts = (cell_probes[None, :, :] + shifts[:, None, :]).reshape(-1, wavelet.dim)
    c2, f2 = box_counts(pts, wavelet.lo, wavelet.hi, btol)
    c2 = c2.reshape(shifts.shape[0], n_probes).sum(axis=0)
    f2 = f2.reshape(shifts.shape[0], n_probes).astype(bool).any(axis=0)
    keep2 = ~f2
    kept2 = c2[keep2]
    if kept2.size == 0:
        raise ConfigError("every translation probe was boundary-excluded; "
                          "loosen the tolerance or add probes")
    translation_ok = bool(np.all(kept2 == 1))
    tr_range = (int(kept2.min()), int(kept2.max()))

    return WaveletSetReport(
        label=wavelet.label,
        dilation_ok=dilation_ok,
        translation_ok=translation_ok,
        amplitude_ok=amplitude_ok,
        union_volume=wavelet.union_volume(),
        covolume=covolume,
        orbit_scale_range=(j_lo, j_hi),
        shift_count=int(shifts.shape[0]),
        n_probes=int(n_probes),
        n_excluded_dilation=int(np.count_nonzero(flags)),
        n_excluded_translation=int(np.count_nonzero(f2)),
        dilation_count_range=dil_range,
        translation_count_range=tr_range,
    )


# ---------------------------------------------------------------------------
# on-disk spectra: raw complex128 payload plus a JSON sidecar


def save_spectrum(path, wavelet: FrequencyWavelet, grid: GridSpec) -> Path:
    """Sample the wavelet on the grid and write <path>.bin and <path>.json.

    The payload is little-endian complex128 in C order; the sidecar
    records the grid so the samples can be reloaded without guessing.
    """
    base = Path(path)
    if grid.dim != wavelet.dim:
        raise ValueError("grid dimension does not match the wavelet")
    values = wavelet.spectrum(grid.frequency_grid()).reshape(grid.samples)
    bin_path = base.with_suffix(".bin")
    bin_path.write_bytes(np.ascontiguousarray(values, dtype="<c16").tobytes())
    sidecar = {
        "schema": 1,
        "kind": "sampled-spectrum",
        "dtype": "<c16",
        "order": "C",
        "shape": list(values.shape),
        "grid": grid.to_json_dict(),
        "label": wavelet.label,
    }
    json_path = base.with_suffix(".json")
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return bin_path


def load_sampled_wavelet(path) -> SampledWavelet:
    base = Path(path)
    sidecar = json.loads(base.with_suffix(".json").read_text())
    for key in ("schema", "dtype", "shape", "grid"):
        if key not in sidecar:
            raise ConfigError(f"spectrum sidecar is missing {key!r}")
    if sidecar["schema"] != 1:
        raise ConfigError(f"unsupported spectrum schema {sidecar['schema']}")
    if sidecar["dtype"] != "<c16":
        raise ConfigError(f"unsupported payload dtype {sidecar['dtype']}")
    shape = tuple(int(n) for n in sidecar["shape"])
    raw = base.with_suffix(".bin").read_bytes()
    values = np.frombuffer(raw, dtype="<c16")
    if values.size != int(np.prod(shape)):
        raise ConfigError(
            f"payload holds {values.size} samples but the sidecar says {shape}"
        )
    grid = GridSpec(tuple(sidecar["grid"]["half_width"]),
                    tuple(sidecar["grid"]["samples"]))
    return SampledWavelet(grid.frequency_axes(), values.reshape(shape),
                          label=str(sidecar.get("label", "sampled")))
