"""Config-driven verification runs producing JSON and CSV reports.

All subcommands share one JSON config schema; each reads the fields it
needs and rejects configs that are missing them.  Reports are
deterministic for a fixed config and seed: volatile values (timestamp,
package version, kernel backend) live in a separate ``metadata`` object
so callers can drop that single key and compare files byte for byte.

Exit codes: 0 when every verdict passes, 2 when the run completed but a
verdict failed, 1 on config or runtime errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .calderon import calderon_report
from .errors import ConfigError, ToolkitError
from .frames import (covolume_inequality_check, frame_report,
                     plancherel_identity_check, random_bandlimited)
from .group import (complement_box, covolume_quasilattice,
                    generate_quasilattice, make_interior_probes,
                    separation_density_check)
from .linalg import as_dilation
from .wavelets import (GridSpec, IndicatorUnionWavelet, builtin_wavelet,
                       load_sampled_wavelet, verify_wavelet_set)

SCHEMA_VERSION = 1

SUBCOMMANDS = ("calderon", "frame-bounds", "transform-identity",
               "quasilattice-check", "wavelet-set-check", "full-report")


# ---------------------------------------------------------------------------
# config parsing

@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description.

    Optional fields default to None; subcommands that need them raise
    ConfigError naming the missing fields and the config path.
    """

    source: str
    label: str
    dilation: tuple | None = None
    translation: tuple | None = None
    wavelet: dict | None = None
    grid: dict | None = None
    j_range: tuple[int, int] | None = None
    k_box: tuple | None = None
    band: tuple[float, float] | None = None
    test_band: tuple[float, float] | None = None
    truncation: int = 20
    tolerance: float = 1e-8
    allowance: float = 0.05
    plancherel_rtol: float = 0.02
    frame_bounds: tuple[float, float] = (1.0, 1.0)
    calderon_mode: str = "identity"
    n_test: int = 10
    n_probes: int = 400
    half_space: bool = False
    seed: int = 0
    outputs: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "label": self.label,
            "dilation": self.dilation,
            "translation": self.translation,
            "wavelet": self.wavelet,
            "grid": self.grid,
            "j_range": self.j_range,
            "k_box": self.k_box,
            "band": self.band,
            "test_band": self.test_band,
            "truncation": self.truncation,
            "tolerance": self.tolerance,
            "allowance": self.allowance,
            "plancherel_rtol": self.plancherel_rtol,
            "frame_bounds": self.frame_bounds,
            "calderon_mode": self.calderon_mode,
            "n_test": self.n_test,
            "n_probes": self.n_probes,
            "half_space": self.half_space,
            "seed": self.seed,
            "outputs": self.outputs,
        }
        return _jsonable(out)


def _fail(source: str, name: str, message: str):
    raise ConfigError(f"{source}: field '{name}': {message}")


def _as_int(value, name, source, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(source, name, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(source, name, f"must be >= {minimum}, got {value}")
    return int(value)


def _as_float(value, name, source, minimum=None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(source, name, f"expected a number, got {value!r}")
    v = float(value)
    if not np.isfinite(v):
        _fail(source, name, "must be finite")
    if minimum is not None and v <= minimum:
        _fail(source, name, f"must be > {minimum}, got {v}")
    return v


def _as_bool(value, name, source) -> bool:
    if not isinstance(value, bool):
        _fail(source, name, f"expected true/false, got {value!r}")
    return value


def _as_band(value, name, source) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        _fail(source, name, f"expected [lo, hi], got {value!r}")
    lo = _as_float(value[0], name, source)
    hi = _as_float(value[1], name, source)
    return (lo, hi)


def _as_j_range(value, name, source) -> tuple[int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        _fail(source, name, f"expected [j_lo, j_hi], got {value!r}")
    lo = _as_int(value[0], name, source)
    hi = _as_int(value[1], name, source)
    if lo > hi:
        _fail(source, name, f"range is empty: [{lo}, {hi}]")
    return (lo, hi)


def _as_k_box(value, name, source):
    # flat [lo, hi] for 1D, [[lo, hi], ...] per axis otherwise
    if not isinstance(value, (list, tuple)) or not value:
        _fail(source, name, f"expected [lo, hi] or per-axis pairs, got {value!r}")
    if all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        if len(value) != 2 or value[0] > value[1]:
            _fail(source, name, f"expected a nonempty [lo, hi], got {value!r}")
        return (int(value[0]), int(value[1]))
    pairs = []
    for i, pair in enumerate(value):
        axis = f"{name}[{i}]"
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            _fail(source, axis, f"expected [lo, hi], got {pair!r}")
        lo = _as_int(pair[0], axis, source)
        hi = _as_int(pair[1], axis, source)
        if lo > hi:
            _fail(source, axis, f"range is empty: [{lo}, {hi}]")
        pairs.append((lo, hi))
    return tuple(pairs)


def _as_matrix(value, name, source) -> tuple:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        _fail(source, name, f"expected a numeric matrix, got {value!r}")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        _fail(source, name, f"expected a square matrix, got shape {arr.shape}")
    try:
        as_dilation(arr)
    except ToolkitError as exc:
        _fail(source, name, str(exc))
    return tuple(tuple(row) for row in arr.tolist())


def _as_grid(value, name, source) -> dict:
    if not isinstance(value, dict) or set(value) != {"L", "N"}:
        _fail(source, name, "expected an object with keys 'L' and 'N'")
    try:
        GridSpec(_listify(value["L"]), _listify(value["N"]))
    except (ToolkitError, TypeError, ValueError) as exc:
        _fail(source, name, str(exc))
    return {"L": value["L"], "N": value["N"]}


def _listify(v):
    return tuple(v) if isinstance(v, (list, tuple)) else v


def _as_wavelet(value, name, source, config_dir: Path) -> dict:
    if not isinstance(value, dict):
        _fail(source, name, f"expected an object, got {value!r}")
    forms = {"builtin", "indicator_boxes", "sampled_file"} & set(value)
    if len(forms) != 1:
        _fail(source, name, "expected exactly one of 'builtin', "
                            "'indicator_boxes', 'sampled_file'")
    form = forms.pop()
    if form == "builtin":
        extra = set(value) - {"builtin", "kwargs"}
        if extra:
            _fail(source, name, f"unknown keys {sorted(extra)}")
        if not isinstance(value["builtin"], str):
            _fail(source, name, "'builtin' must be a wavelet name string")
        kwargs = value.get("kwargs", {})
        if not isinstance(kwargs, dict):
            _fail(source, f"{name}.kwargs", "expected an object")
        return {"builtin": value["builtin"], "kwargs": dict(kwargs)}
    if form == "indicator_boxes":
        extra = set(value) - {"indicator_boxes", "amplitude"}
        if extra:
            _fail(source, name, f"unknown keys {sorted(extra)}")
        boxes = value["indicator_boxes"]
        if not isinstance(boxes, (list, tuple)):
            _fail(source, name, "'indicator_boxes' must be a list of "
                                "[lo, hi] corner pairs")
        clean = []
        for i, box in enumerate(boxes):
            axis = f"{name}.indicator_boxes[{i}]"
            if not isinstance(box, (list, tuple)) or len(box) != 2:
                _fail(source, axis, f"expected [lo, hi], got {box!r}")
            lo, hi = (_listify(c) for c in box)
            clean.append([lo, hi])
        amp = _as_float(value.get("amplitude", 1.0), f"{name}.amplitude",
                        source)
        return {"indicator_boxes": clean, "amplitude": amp}
    path_value = value["sampled_file"]
    extra = set(value) - {"sampled_file"}
    if extra:
        _fail(source, name, f"unknown keys {sorted(extra)}")
    if not isinstance(path_value, str):
        _fail(source, name, "'sampled_file' must be a path string")
    path = Path(path_value)
    if not path.is_absolute():
        path = config_dir / path
    if not path.is_file():
        _fail(source, name, f"sampled wavelet file not found: {path}")
    return {"sampled_file": str(path)}


_KNOWN_FIELDS = {
    "label", "dilation", "translation", "wavelet", "grid", "j_range",
    "k_box", "band", "test_band", "truncation", "tolerance", "allowance",
    "plancherel_rtol", "frame_bounds", "calderon_mode", "n_test", "n_probes",
    "half_space", "seed", "outputs",
}


def parse_config(raw, source: str, config_dir: Path | None = None) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    unknown = set(raw) - _KNOWN_FIELDS
    if unknown:
        raise ConfigError(f"{source}: unknown fields {sorted(unknown)}")
    config_dir = config_dir or Path(".")

    label = raw.get("label", Path(source).stem)
    if not isinstance(label, str) or not label:
        _fail(source, "label", "expected a nonempty string")

    outputs = raw.get("outputs", {})
    if not isinstance(outputs, dict):
        _fail(source, "outputs", "expected an object")
    bad = set(outputs) - {"report", "table"}
    if bad:
        _fail(source, "outputs", f"unknown keys {sorted(bad)}")
    for key, v in outputs.items():
        if not isinstance(v, str) or not v:
            _fail(source, f"outputs.{key}", "expected a file name string")

    mode = raw.get("calderon_mode", "identity")
    if mode not in ("identity", "frame"):
        _fail(source, "calderon_mode", f"expected 'identity' or 'frame', "
                                       f"got {mode!r}")

    fb = raw.get("frame_bounds", (1.0, 1.0))
    fb = _as_band(fb, "frame_bounds", source)
    if not 0 < fb[0] <= fb[1]:
        _fail(source, "frame_bounds", f"need 0 < c1 <= c2, got {list(fb)}")

    return ExperimentConfig(
        source=source,
        label=label,
        dilation=(_as_matrix(raw["dilation"], "dilation", source)
                  if "dilation" in raw else None),
        translation=(_as_matrix(raw["translation"], "translation", source)
                     if "translation" in raw else None),
        wavelet=(_as_wavelet(raw["wavelet"], "wavelet", source, config_dir)
                 if "wavelet" in raw else None),
        grid=(_as_grid(raw["grid"], "grid", source)
              if "grid" in raw else None),
        j_range=(_as_j_range(raw["j_range"], "j_range", source)
                 if "j_range" in raw else None),
        k_box=(_as_k_box(raw["k_box"], "k_box", source)
               if "k_box" in raw else None),
        band=(_as_band(raw["band"], "band", source)
              if "band" in raw else None),
        test_band=(_as_band(raw["test_band"], "test_band", source)
                   if "test_band" in raw else None),
        truncation=_as_int(raw.get("truncation", 20), "truncation", source,
                           minimum=0),
        tolerance=_as_float(raw.get("tolerance", 1e-8), "tolerance", source,
                            minimum=0.0),
        allowance=_as_float(raw.get("allowance", 0.05), "allowance", source,
                            minimum=0.0),
        plancherel_rtol=_as_float(raw.get("plancherel_rtol", 0.02),
                                  "plancherel_rtol", source, minimum=0.0),
        frame_bounds=fb,
        calderon_mode=mode,
        n_test=_as_int(raw.get("n_test", 10), "n_test", source, minimum=1),
        n_probes=_as_int(raw.get("n_probes", 400), "n_probes", source,
                         minimum=1),
        half_space=_as_bool(raw.get("half_space", False), "half_space",
                            source),
        seed=_as_int(raw.get("seed", 0), "seed", source, minimum=0),
        outputs=dict(outputs),
    )


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    source = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{source}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_config(raw, source, config_dir=Path(path).parent)


def _need(config: ExperimentConfig, subcommand: str, *names: str):
    missing = [n for n in names if getattr(config, n) is None]
    if missing:
        raise ConfigError(f"{config.source}: subcommand '{subcommand}' "
                          f"requires config fields {missing}")


def build_wavelet(config: ExperimentConfig):
    spec = config.wavelet
    if "builtin" in spec:
        return builtin_wavelet(spec["builtin"], **spec.get("kwargs", {}))
    if "indicator_boxes" in spec:
        boxes = [(box[0], box[1]) for box in spec["indicator_boxes"]]
        return IndicatorUnionWavelet(boxes, amplitude=spec["amplitude"],
                                     label=config.label)
    return load_sampled_wavelet(spec["sampled_file"])


def build_grid(config: ExperimentConfig) -> GridSpec:
    return GridSpec(_listify(config.grid["L"]), _listify(config.grid["N"]))


# ---------------------------------------------------------------------------
# report output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _out_path(out_dir: Path, config: ExperimentConfig, subcommand: str,
              kind: str) -> Path:
    ext = "json" if kind == "report" else "csv"
    default = f"{config.label}_{subcommand.replace('-', '_')}.{ext}"
    return out_dir / config.outputs.get(kind, default)


def _write_report(path: Path, subcommand: str, config: ExperimentConfig,
                  result, ok: bool) -> Path:
    payload = {
        "schema": SCHEMA_VERSION,
        "subcommand": subcommand,
        "label": config.label,
        "config": config.to_json_dict(),
        "result": _jsonable(result),
        "verdict": "pass" if ok else "fail",
        "metadata": {
            "timestamp": datetime.datetime.now(
                datetime.timezone.utc).isoformat(),
        },
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def _write_table(path: Path, header: list[str], rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# subcommands

def _run_calderon(config: ExperimentConfig, out_dir: Path):
    _need(config, "calderon", "wavelet", "dilation", "translation", "grid")
    wavelet = build_wavelet(config)
    rep = calderon_report(wavelet, config.dilation, grid=build_grid(config),
                          scale_range=(-config.truncation, config.truncation),
                          translation=config.translation,
                          mode=config.calderon_mode, tol=config.tolerance)
    ok = rep.verdict in ("identity_holds", "frame_bounds_estimated")
    files = [_write_report(_out_path(out_dir, config, "calderon", "report"),
                           "calderon", config, rep.to_json_dict(), ok)]
    files.append(rep.save_probe_table(
        _out_path(out_dir, config, "calderon", "table")))
    return ok, files


def _run_frame_bounds(config: ExperimentConfig, out_dir: Path):
    _need(config, "frame-bounds", "wavelet", "dilation", "translation",
          "grid", "j_range", "k_box", "band")
    wavelet = build_wavelet(config)
    rep = frame_report(wavelet, config.dilation, config.translation,
                       build_grid(config), config.j_range, config.k_box,
                       config.band, test_band=config.test_band,
                       n_test=config.n_test, seed=config.seed,
                       allowance=config.allowance,
                       half_space=config.half_space)
    ok = rep.passes
    files = [_write_report(
        _out_path(out_dir, config, "frame-bounds", "report"),
        "frame-bounds", config, rep.to_json_dict(), ok)]
    rows = [(i, config.seed + i, b, c) for i, (b, c) in
            enumerate(zip(rep.bessel_ratios, rep.continuous_norm_ratios))]
    files.append(_write_table(
        _out_path(out_dir, config, "frame-bounds", "table"),
        ["index", "seed", "bessel_ratio", "continuous_ratio"], rows))
    return ok, files


def _run_transform_identity(config: ExperimentConfig, out_dir: Path):
    _need(config, "transform-identity", "wavelet", "dilation", "translation",
          "grid", "j_range")
    band = config.test_band or config.band
    if band is None:
        raise ConfigError(f"{config.source}: subcommand 'transform-identity' "
                          f"requires config fields ['test_band']")
    wavelet = build_wavelet(config)
    grid = build_grid(config)
    functions = [random_bandlimited(grid, band, config.seed + i)
                 for i in range(config.n_test)]
    checks = [plancherel_identity_check(wavelet, config.dilation, f,
                                        config.j_range,
                                        rtol=config.plancherel_rtol)
              for f in functions]
    covolume = covolume_inequality_check(wavelet, config.dilation,
                                         config.translation, functions,
                                         config.j_range,
                                         frame_bounds=config.frame_bounds,
                                         allowance=config.allowance)
    ok = all(c.passes for c in checks) and covolume.passes
    result = {
        "plancherel": [c.to_json_dict() for c in checks],
        "covolume": covolume.to_json_dict(),
    }
    files = [_write_report(
        _out_path(out_dir, config, "transform-identity", "report"),
        "transform-identity", config, result, ok)]
    rows = [(i, config.seed + i, c.ratio, r) for i, (c, r) in
            enumerate(zip(checks, covolume.ratios))]
    files.append(_write_table(
        _out_path(out_dir, config, "transform-identity", "table"),
        ["index", "seed", "plancherel_ratio", "covolume_ratio"], rows))
    return ok, files


def _run_quasilattice_check(config: ExperimentConfig, out_dir: Path):
    _need(config, "quasilattice-check", "dilation", "translation", "j_range",
          "k_box")
    window = generate_quasilattice(config.dilation, config.translation,
                                   config.j_range, config.k_box)
    cell = complement_box(config.translation).inverse()
    probes = make_interior_probes(window, cell, config.n_probes, config.seed)
    sep = separation_density_check(window, cell, probes)
    ok = sep.separated and sep.dense
    result = {
        "window": window.to_json_dict(),
        "separation": sep.to_json_dict(),
        "covolume": covolume_quasilattice(config.translation),
    }
    files = [_write_report(
        _out_path(out_dir, config, "quasilattice-check", "report"),
        "quasilattice-check", config, result, ok)]
    return ok, files


def _run_wavelet_set_check(config: ExperimentConfig, out_dir: Path):
    _need(config, "wavelet-set-check", "wavelet", "dilation", "translation")
    wavelet = build_wavelet(config)
    rep = verify_wavelet_set(wavelet, config.dilation, config.translation,
                             n_probes=config.n_probes, seed=config.seed)
    ok = rep.verdict == "wavelet_set"
    files = [_write_report(
        _out_path(out_dir, config, "wavelet-set-check", "report"),
        "wavelet-set-check", config, rep.to_json_dict(), ok)]
    return ok, files


# ---------------------------------------------------------------------------
# full-report fixture suite

_ANNULUS_BOXES = [((-2.0, -2.0), (2.0, -1.0)),
                  ((-2.0, 1.0), (2.0, 2.0)),
                  ((-2.0, -1.0), (-1.0, 1.0)),
                  ((1.0, -1.0), (2.0, 1.0))]


def _row(fixture, check, expected, observed, lo, hi):
    return {"fixture": fixture, "check": check, "expected": expected,
            "observed": observed, "ok": observed == expected,
            "lo": float(lo), "hi": float(hi)}


def _suite_rows(name, wavelet, dilation, translation, grid, *, j_range,
                truncation, tolerance, test_band, n_test, seed, frame,
                wavelet_set, quasilattice):
    rows = []

    rep = calderon_report(wavelet, dilation, grid=grid,
                          scale_range=(-truncation, truncation),
                          translation=translation, tol=tolerance)
    observed = "pass" if rep.verdict == "identity_holds" else "fail"
    rows.append(_row(name, "calderon", "pass", observed,
                     rep.ess_inf, rep.ess_sup))

    functions = [random_bandlimited(grid, test_band, seed + i)
                 for i in range(n_test)]
    checks = [plancherel_identity_check(wavelet, dilation, f, j_range)
              for f in functions]
    covolume = covolume_inequality_check(wavelet, dilation, translation,
                                         functions, j_range)
    ratios = ([c.ratio for c in checks] + list(covolume.ratios))
    observed = ("pass" if all(c.passes for c in checks) and covolume.passes
                else "fail")
    rows.append(_row(name, "transform-identity", "pass", observed,
                     min(ratios), max(ratios)))

    if frame is not None:
        rep = frame_report(wavelet, dilation, translation, grid,
                           frame["j_range"], frame["k_box"], frame["band"],
                           test_band=test_band, n_test=n_test, seed=seed,
                           half_space=frame.get("half_space", False))
        observed = "pass" if rep.passes else "fail"
        rows.append(_row(name, "frame-bounds", "pass", observed,
                         rep.c1_est, rep.c2_est))

    if wavelet_set is not None:
        rep = verify_wavelet_set(wavelet, dilation, translation,
                                 n_probes=2048, seed=seed)
        observed = "pass" if rep.verdict == "wavelet_set" else "fail"
        rows.append(_row(name, "wavelet-set-check", wavelet_set, observed,
                         rep.union_volume, rep.covolume))

    if quasilattice is not None:
        window = generate_quasilattice(dilation, translation,
                                       quasilattice["j_range"],
                                       quasilattice["k_box"])
        cell = complement_box(translation).inverse()
        probes = make_interior_probes(window, cell, 200, seed)
        sep = separation_density_check(window, cell, probes)
        observed = "pass" if sep.separated and sep.dense else "fail"
        rows.append(_row(name, "quasilattice-check", "pass", observed,
                         sep.min_count, sep.max_count))

    return rows


def _run_full_report(config: ExperimentConfig, out_dir: Path):
    grid1 = (build_grid(config) if config.grid is not None
             else GridSpec(16.0, 4096))
    if len(grid1.samples) != 1:
        raise ConfigError(f"{config.source}: full-report needs a "
                          f"one-dimensional grid")
    seed = config.seed
    n_test = config.n_test
    dyadic = ((2.0,),)
    unit = ((1.0,),)
    rows = []

    rows += _suite_rows(
        "shannon", builtin_wavelet("shannon_1d"), dyadic, unit, grid1,
        j_range=(-12, 12), truncation=30, tolerance=config.tolerance,
        test_band=(0.515, 0.985), n_test=n_test, seed=seed,
        frame={"j_range": (-1, 1), "k_box": (-32, 31), "band": (0.28, 1.32)},
        wavelet_set="pass",
        quasilattice={"j_range": (-8, 8), "k_box": (-32, 31)})

    rows += _suite_rows(
        "haar", builtin_wavelet("haar"), dyadic, unit, grid1,
        j_range=(-12, 12), truncation=40, tolerance=1e-6,
        test_band=(0.515, 0.985), n_test=n_test, seed=seed,
        frame={"j_range": (-4, 4), "k_box": (-32, 31),
               "band": (0.515, 0.985), "half_space": True},
        wavelet_set=None, quasilattice=None)

    rows += _suite_rows(
        "meyer", builtin_wavelet("meyer_1d"), dyadic, unit, grid1,
        j_range=(-12, 12), truncation=20, tolerance=config.tolerance,
        test_band=(0.515, 0.985), n_test=n_test, seed=seed,
        frame={"j_range": (-1, 1), "k_box": (-32, 31),
               "band": (0.35, 1.3), "half_space": True},
        wavelet_set=None, quasilattice=None)

    annulus = IndicatorUnionWavelet(_ANNULUS_BOXES, label="annulus")
    eye2 = ((1.0, 0.0), (0.0, 1.0))
    rows += _suite_rows(
        "annulus2d", annulus, ((2.0, 0.0), (0.0, 2.0)), eye2,
        GridSpec((8.0, 8.0), (256, 256)),
        j_range=(-8, 8), truncation=8, tolerance=config.tolerance,
        test_band=(0.515, 0.985), n_test=min(n_test, 3), seed=seed,
        frame=None, wavelet_set="fail",
        quasilattice={"j_range": (-2, 2), "k_box": ((-6, 5), (-6, 5))})

    ok = all(r["ok"] for r in rows)
    result = {"rows": rows,
              "n_checks": len(rows),
              "n_matching": sum(r["ok"] for r in rows)}
    files = [_write_report(
        _out_path(out_dir, config, "full-report", "report"),
        "full-report", config, result, ok)]
    table = [(r["fixture"], r["check"], r["expected"], r["observed"],
              r["ok"], r["lo"], r["hi"]) for r in rows]
    files.append(_write_table(
        _out_path(out_dir, config, "full-report", "table"),
        ["fixture", "check", "expected", "observed", "ok", "lo", "hi"],
        table))
    return ok, files


_RUNNERS = {
    "calderon": _run_calderon,
    "frame-bounds": _run_frame_bounds,
    "transform-identity": _run_transform_identity,
    "quasilattice-check": _run_quasilattice_check,
    "wavelet-set-check": _run_wavelet_set_check,
    "full-report": _run_full_report,
}


# ---------------------------------------------------------------------------
# entry point

class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wavelattice",
                     description="verification runs for wavelet systems "
                                 "over affine quasi-lattices")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="subcommand")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="path to a JSON experiment config")
        p.add_argument("--out", default=None,
                       help="output directory (default: $WAVELATTICE_OUT "
                            "or the working directory)")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        config = load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError(f"--seed must be >= 0, got {args.seed}")
            config = replace(config, seed=args.seed)
        out_dir = Path(args.out if args.out is not None
                       else os.environ.get("WAVELATTICE_OUT", "."))
        out_dir.mkdir(parents=True, exist_ok=True)
        ok, files = _RUNNERS[args.subcommand](config, out_dir)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in files:
        print(path)
    print(f"{args.subcommand} {config.label}: "
          f"{'pass' if ok else 'fail'}")
    return 0 if ok else 2


def entrypoint():
    sys.exit(main())
