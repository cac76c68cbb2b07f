"""Calderon sums for generalized dilations.

For a wavelet psi and dilation A the Calderon function is

    S(xi) = sum over j in Z of |psi_hat((A^T)^j xi)|^2.

A normalized wavelet system over the translation matrix P reproduces
L2 exactly when S is a.e. equal to |det P|; a frame tolerates S pinched
between C1 |det P| and C2 |det P|.  Everything here works with the
truncated sum over a finite scale window plus a per-probe tail bound,
so a verdict always accounts for what the truncation may have missed.

Tails come in two strengths.  A wavelet that declares a radial power
envelope gets a certified bound, summing the envelope along operator
norm brackets of the orbit radius.  Anything else gets a heuristic:
zero at the window edge means the orbit has left the spectral support
(tail zero), and otherwise trailing block sums are extrapolated
geometrically, reporting infinity whenever the observed trend does not
actually decay.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULTS, Defaults
from .errors import ConfigError, NumericError, TruncationRangeError
from .linalg import as_dilation
from .wavelets import FrequencyWavelet, GridSpec, IndicatorUnionWavelet, _as_points

__all__ = [
    "CalderonReport",
    "calderon_partial_sum",
    "calderon_sum_on_grid",
    "calderon_report",
]

TAIL_WINDOW = 5


def _scale_terms(wavelet: FrequencyWavelet, A, pts: np.ndarray,
                 scale_range: tuple[int, int], boundary_tol: float):
    """Per-scale summands |psi_hat((A^T)^j xi)|^2 and near-face flags.

    The flag row is only populated for indicator unions, where a probe
    orbit passing within boundary_tol of a box face makes the membership
    count unreliable at that probe.
    """
    j_lo, j_hi = int(scale_range[0]), int(scale_range[1])
    if j_lo > j_hi:
        raise ConfigError(f"scale range is empty: [{j_lo}, {j_hi}]")
    n = pts.shape[0]
    terms = np.empty((j_hi - j_lo + 1, n))
    flags = np.zeros(n, dtype=bool)
    indicator = isinstance(wavelet, IndicatorUnionWavelet)
    for idx, j in enumerate(range(j_lo, j_hi + 1)):
        pts_j = pts @ A.power(j)  # rows (A^T)^j xi
        if indicator:
            counts, f = wavelet.membership_counts(pts_j, boundary_tol)
            terms[idx] = (wavelet.amplitude**2) * counts
            flags |= f
        else:
            terms[idx] = wavelet.power(pts_j)
    if np.isnan(terms).any():
        raise NumericError("the spectrum produced NaN inside the scale window")
    return terms, flags


def _geometric_tail(window: np.ndarray) -> np.ndarray:
    """Heuristic tail beyond the edge of a truncated positive series.

    `window` holds the trailing terms ordered toward the truncation
    edge, shape (m, n).  A vanishing edge term means the orbit has left
    the spectral support, so the tail is zero; that is exact for
    compactly supported spectra under an expansive dilation.  Otherwise
    consecutive blocks of width min(5, m//2) are summed and the decay
    ratio drives a geometric estimate b_last * q / (1 - q).  Blocks,
    not single terms, because oscillatory modulation (sin factors)
    makes term-by-term ratios useless while block masses decay
    steadily.  The ratio q is the more pessimistic of block-over-block
    and within-the-last-block, so that a spectral peak still inside the
    first block cannot mask growth at the edge; observed growth
    (q >= 1) yields an infinite, honest estimate.
    """
    m, n = window.shape
    t_last = window[-1]
    tail = np.full(n, np.inf)
    zero_edge = t_last <= 0
    tail[zero_edge] = 0.0
    w = min(TAIL_WINDOW, m // 2)
    if w == 0:
        return tail
    b2 = window[-w:].sum(axis=0)
    b1 = window[-2 * w:-w].sum(axis=0)
    q = np.full(n, np.inf)
    np.divide(b2, b1, out=q, where=b1 > 0)
    if w >= 2:
        w2 = w - w // 2
        h1 = window[-w:-w2].mean(axis=0)
        h2 = window[-w2:].mean(axis=0)
        half_q = np.full(n, np.inf)
        np.divide(h2, h1, out=half_q, where=h1 > 0)
        half_q[h2 <= 0] = 0.0
        q = np.maximum(q, half_q)
    good = ~zero_edge & (q < 1)
    tail[good] = b2[good] * q[good] / (1 - q[good])
    return tail


def _envelope_tail(wavelet, A, pts: np.ndarray, j_edge: int, side: str,
                   max_extra: int = 256) -> np.ndarray:
    """Certified tail bound from a declared radial power envelope.

    Beyond the truncation edge the orbit radius is bracketed through
    operator norms: for j > 0, ||(A^T)^j xi|| >= ||xi|| / ||(A^T)^{-j}||,
    and for j < 0, ||(A^T)^j xi|| <= ||(A^T)^j|| ||xi||.  Feeding the
    bracket endpoint into the monotone side of the envelope bounds each
    term; the summation stops once the envelope terms themselves decay
    geometrically and closes with a geometric remainder.  Envelope
    terms are smooth in j (no sign oscillation), so that extrapolation
    is sound.  If decay is never observed the bound is infinite.
    """
    env, r_split = wavelet.power_envelope
    norms = np.linalg.norm(pts, axis=1)
    n = norms.size
    total = np.zeros(n)
    bound = np.full(n, np.inf)
    pending = np.ones(n, dtype=bool)  # probes whose tail is not closed yet
    prev = None
    for m in range(1, max_extra + 1):
        j = j_edge + m if side == "upper" else j_edge - m
        try:
            M = A.transpose_power(-j if side == "upper" else j)
        except TruncationRangeError:
            # ran out of representable powers; keep the bounds already
            # closed, the rest stay infinite
            break
        opn = float(np.linalg.norm(M, 2))
        if side == "upper":
            term = env(np.maximum(norms / opn, r_split))
        else:
            term = env(np.minimum(norms * opn, r_split))
        total[pending] += term[pending]
        if prev is not None and m >= 8:
            with np.errstate(invalid="ignore", divide="ignore"):
                ratio = np.divide(term, prev, out=np.full_like(term, np.inf),
                                  where=prev > 0)
            ratio[term <= 0] = 0.0
            # a probe closes on its own schedule: one stray probe (for
            # instance the origin node, where the envelope never decays)
            # must not force everything else to an infinite bound
            close = pending & (ratio < 0.9)
            if np.any(close):
                rem = np.zeros(n)
                pos = close & (term > 0)
                rem[pos] = term[pos] * ratio[pos] / (1 - ratio[pos])
                bound[close] = total[close] + rem[close]
                pending[close] = False
                if not pending.any():
                    return bound
        prev = term
    return bound


def calderon_partial_sum(wavelet: FrequencyWavelet, dilation, xi,
                         scale_range: tuple[int, int]) -> np.ndarray:
    """Truncated Calderon sum at each probe, no exclusions applied."""
    A = as_dilation(dilation)
    pts = _as_points(xi, wavelet.dim)
    terms, _ = _scale_terms(wavelet, A, pts, scale_range, 0.0)
    return terms.sum(axis=0)


def calderon_sum_on_grid(wavelet: FrequencyWavelet, dilation, grid: GridSpec,
                         scale_range: tuple[int, int]) -> np.ndarray:
    """Truncated Calderon sum on every frequency node, shaped like the grid."""
    values = calderon_partial_sum(wavelet, dilation, grid.frequency_grid(),
                                  scale_range)
    return values.reshape(grid.samples)


@dataclass(frozen=True)
class CalderonReport:
    label: str
    mode: str
    target: float
    tol: float
    scale_range: tuple[int, int]
    n_probes: int
    n_excluded_origin: int
    n_excluded_boundary: int
    ess_inf: float
    ess_sup: float
    tail_upper_max: float
    max_deviation: float
    frame_bounds: tuple[float, float] | None
    verdict: str
    probes: np.ndarray = field(repr=False)
    partial: np.ndarray = field(repr=False)
    tail_lower_scale: np.ndarray = field(repr=False)
    tail_upper_scale: np.ndarray = field(repr=False)
    excluded: np.ndarray = field(repr=False)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "mode": self.mode,
            "target": self.target,
            "tol": self.tol,
            "scale_range": list(self.scale_range),
            "n_probes": self.n_probes,
            "n_excluded_origin": self.n_excluded_origin,
            "n_excluded_boundary": self.n_excluded_boundary,
            "ess_inf": self.ess_inf,
            "ess_sup": self.ess_sup,
            "tail_upper_max": self.tail_upper_max,
            "max_deviation": self.max_deviation,
            "frame_bounds": list(self.frame_bounds) if self.frame_bounds else None,
            "verdict": self.verdict,
        }

    def save_probe_table(self, path) -> Path:
        """Write one CSV row per probe: coordinates, partial sum, tails, flag."""
        path = Path(path)
        dim = self.probes.shape[1]
        header = [f"xi_{a}" for a in range(dim)]
        header += ["partial_sum", "tail_lower_scales", "tail_upper_scales", "excluded"]
        lines = [",".join(header)]
        for i in range(self.probes.shape[0]):
            row = [f"{v:.17g}" for v in self.probes[i]]
            row.append(f"{self.partial[i]:.17g}")
            row.append(f"{self.tail_lower_scale[i]:.17g}")
            row.append(f"{self.tail_upper_scale[i]:.17g}")
            row.append(str(int(self.excluded[i])))
            lines.append(",".join(row))
        path.write_text("\n".join(lines) + "\n")
        return path


def calderon_report(wavelet: FrequencyWavelet, dilation, probes=None, *,
                    grid: GridSpec | None = None,
                    scale_range: tuple[int, int] = (-20, 20),
                    translation=None, target: float | None = None,
                    mode: str = "identity", tol: float = 1e-8,
                    origin_exclusion_radius: float | None = None,
                    defaults: Defaults = DEFAULTS) -> CalderonReport:
    """Evaluate the truncated Calderon sum on probes and judge it.

    Exactly one of `probes` (explicit points) or `grid` must be given;
    a grid also sets the default origin exclusion radius to
    `defaults.origin_exclusion_spacings` frequency cells, since no
    truncated sum can be accurate arbitrarily close to zero frequency.
    The comparison value is `target`, or |det translation| when a
    translation matrix is supplied instead.

    mode "identity": the sum must equal the target within tol, with the
    extrapolated tails counted against the deviation.
    mode "frame": report certified-on-probes lower/upper bounds for the
    ratio sum/target; the lower bound uses the partial sum alone (an
    underestimate), the upper bound adds both tails.
    """
    A = as_dilation(dilation)
    if A.dim != wavelet.dim:
        raise ValueError("dilation dimension does not match the wavelet")
    if (probes is None) == (grid is None):
        raise ConfigError("pass exactly one of probes= or grid=")
    if mode not in ("identity", "frame"):
        raise ConfigError(f"mode must be 'identity' or 'frame', got {mode!r}")
    if target is None:
        if translation is None:
            raise ConfigError("pass target= or translation= to fix the "
                              "comparison value")
        target = abs(as_dilation(translation).det)
    target = float(target)
    if grid is not None:
        pts = grid.frequency_grid()
        default_radius = defaults.origin_exclusion_spacings * float(
            np.max(grid.freq_spacing))
    else:
        pts = _as_points(probes, wavelet.dim)
        default_radius = 0.0
    radius = default_radius if origin_exclusion_radius is None else float(
        origin_exclusion_radius)

    j_lo, j_hi = int(scale_range[0]), int(scale_range[1])
    n_scales = j_hi - j_lo + 1
    if n_scales < defaults.min_scale_samples:
        raise ConfigError(
            f"scale range [{j_lo}, {j_hi}] has {n_scales} scales; at least "
            f"{defaults.min_scale_samples} are needed to estimate tails"
        )
    terms, boundary_flags = _scale_terms(wavelet, A, pts, (j_lo, j_hi),
                                         defaults.boundary_tol)
    partial = terms.sum(axis=0)
    if wavelet.power_envelope is not None:
        tail_hi = _envelope_tail(wavelet, A, pts, j_hi, "upper")
        tail_lo = _envelope_tail(wavelet, A, pts, j_lo, "lower")
    else:
        w = min(2 * TAIL_WINDOW, n_scales)
        tail_hi = _geometric_tail(terms[-w:])
        tail_lo = _geometric_tail(terms[:w][::-1])

    origin_mask = np.linalg.norm(pts, axis=1) < radius
    excluded = origin_mask | boundary_flags
    kept = ~excluded
    if not kept.any():
        raise ConfigError("every probe was excluded (origin ball or box "
                          "boundary); nothing to report on")

    ess_inf = float(partial[kept].min())
    ess_sup = float(partial[kept].max())
    tails_total = tail_lo + tail_hi
    tail_upper_max = float(tails_total[kept].max())
    total_hi = partial + tails_total
    dev = np.maximum(np.abs(partial - target), np.abs(total_hi - target))
    max_deviation = float(dev[kept].max())

    if mode == "identity":
        frame_bounds = None
        verdict = "identity_holds" if max_deviation <= tol else "identity_fails"
    else:
        frame_bounds = (ess_inf / target, float(total_hi[kept].max()) / target)
        verdict = ("frame_bounds_estimated" if ess_inf > 0
                   else "lower_bound_vanishes")

    return CalderonReport(
        label=wavelet.label,
        mode=mode,
        target=target,
        tol=float(tol),
        scale_range=(j_lo, j_hi),
        n_probes=int(pts.shape[0]),
        n_excluded_origin=int(np.count_nonzero(origin_mask)),
        n_excluded_boundary=int(np.count_nonzero(boundary_flags)),
        ess_inf=ess_inf,
        ess_sup=ess_sup,
        tail_upper_max=tail_upper_max,
        max_deviation=max_deviation,
        frame_bounds=frame_bounds,
        verdict=verdict,
        probes=pts,
        partial=partial,
        tail_lower_scale=tail_lo,
        tail_upper_scale=tail_hi,
        excluded=excluded,
    )
