import json
from dataclasses import replace

import numpy as np
import pytest
from scipy.special import erf

from wavelattice.config import DEFAULTS
from wavelattice.errors import (ConfigError, NumericError, ResourceLimitError,
                                ScaleRangeError)
from wavelattice.frames import (AmalgamResult, CoefficientTable, GridFunction,
                                amalgam_maximal_norm, analysis_coefficients,
                                continuous_transform_norm,
                                covolume_inequality_check,
                                frame_bounds_estimate, frame_report,
                                plancherel_identity_check, random_bandlimited,
                                transform_field, transform_scale_energies)
from wavelattice.group import GBox
from wavelattice.wavelets import GridSpec, builtin_wavelet

GRID = GridSpec(16.0, 4096)
DYADIC = [[2.0]]
UNIT = [[1.0]]


def shannon_function(grid=GRID, amplitude=1.0):
    w = builtin_wavelet("shannon_1d", amplitude=amplitude)
    spec = w.spectrum(grid.frequency_grid()).reshape(grid.samples)
    return GridFunction.from_spectrum(grid, spec)


def gaussian_function(grid=GRID):
    t = grid.sample_axes()[0]
    return GridFunction(grid, np.exp(-np.pi * t ** 2))


class TestGridFunction:
    def test_norm_matches_rectangle_rule(self):
        f = gaussian_function()
        manual = GRID.cell_volume * np.sum(np.abs(f.values) ** 2)
        assert f.norm_sq == pytest.approx(manual, rel=1e-15)
        # Gaussian is L2-normalized; periodization error is negligible here
        assert f.norm_sq == pytest.approx(1 / np.sqrt(2), rel=1e-12)

    def test_spectrum_roundtrip(self):
        f = gaussian_function()
        g = GridFunction.from_spectrum(GRID, f.spectrum())
        assert np.max(np.abs(g.values - f.values)) < 1e-13

    def test_non_finite_rejected(self):
        v = np.zeros(4096)
        v[0] = np.nan
        with pytest.raises(NumericError):
            GridFunction(GRID, v)

    def test_scaled_is_quadratic_in_norm(self):
        f = gaussian_function()
        assert f.scaled(3.0).norm_sq == pytest.approx(9 * f.norm_sq, rel=1e-14)


class TestRandomBandlimited:
    def test_unit_norm_and_support(self):
        f = random_bandlimited(GRID, (0.515, 0.985), seed=11)
        assert f.norm_sq == pytest.approx(1.0, abs=1e-12)
        spec = f.spectrum()
        radii = np.abs(GRID.frequency_grid()[:, 0])
        outside = (radii < 0.515) | (radii > 0.985)
        assert np.max(np.abs(spec.ravel()[outside])) < 1e-12

    def test_seed_determinism(self):
        a = random_bandlimited(GRID, (0.5, 1.0), seed=3)
        b = random_bandlimited(GRID, (0.5, 1.0), seed=3)
        c = random_bandlimited(GRID, (0.5, 1.0), seed=4)
        assert np.array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_empty_band_rejected(self):
        # strictly between the nodes at 0 and 1/32
        with pytest.raises(ConfigError):
            random_bandlimited(GRID, (0.001, 0.02), seed=0)

    def test_bad_band_rejected(self):
        with pytest.raises(ConfigError):
            random_bandlimited(GRID, (1.0, 0.5), seed=0)


class TestAnalysisCoefficients:
    def test_shannon_orthonormality(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (-2, 2), (-4, 3))
        at_origin = (tab.js == 0) & (tab.ks[:, 0] == 0)
        assert abs(tab.values[at_origin][0] - 1.0) < 1e-12
        assert np.max(np.abs(tab.values[~at_origin])) < 1e-12
        assert not tab.duplicate.any()
        assert tab.max_offset == 0.0
        assert tab.scale_flags == {}

    def test_shifted_atom_selectivity(self):
        # f = pi(A P k0, A) psi for k0 = 5: only coef(1, 5) survives
        sh = builtin_wavelet("shannon_1d")
        xi = GRID.frequency_grid()
        spec = (np.sqrt(2.0) * np.exp(-2j * np.pi * 10.0 * xi[:, 0])
                * sh.spectrum(2.0 * xi))
        f = GridFunction.from_spectrum(GRID, spec.reshape(GRID.samples))
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (-2, 2), (-8, 7))
        hit = (tab.js == 1) & (tab.ks[:, 0] == 5)
        assert abs(tab.values[hit][0] - 1.0) < 1e-12
        assert np.max(np.abs(tab.values[~hit])) < 1e-12

    def test_haar_gaussian_erf_oracle(self):
        # <gaussian, atom> in closed form through the error function
        def gauss_int(a, b):
            return 0.5 * (erf(np.sqrt(np.pi) * b) - erf(np.sqrt(np.pi) * a))

        def expected(j, k):
            x = 2.0 ** j * k
            half = 2.0 ** (j - 1)
            return 2.0 ** (-j / 2) * (gauss_int(x, x + half)
                                      - gauss_int(x + half, x + 2.0 ** j))

        f = gaussian_function()
        haar = builtin_wavelet("haar")
        tab = analysis_coefficients(haar, DYADIC, UNIT, f, (-2, 2), (-3, 3))
        for j, k, v in zip(tab.js, tab.ks[:, 0], tab.values):
            assert abs(v - expected(int(j), int(k))) < 1e-12

    def test_zero_function_gives_zero_table(self):
        f = GridFunction(GRID, np.zeros(4096))
        sh = builtin_wavelet("shannon_1d")
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (-1, 1), (-4, 3))
        assert np.all(tab.values == 0)

    def test_torus_duplicates_marked(self):
        # period 32: at scale 0 the 64 integer translates alias in pairs,
        # at scale 1 translates 2k alias four to a node
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (0, 1), (-32, 31))
        assert int(tab.duplicate[tab.js == 0].sum()) == 32
        assert int(tab.duplicate[tab.js == 1].sum()) == 48
        assert tab.norm_sq() < tab.norm_sq(include_duplicates=True)

    def test_canonical_order(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (-1, 1), (-2, 1))
        assert np.all(np.diff(tab.js) >= 0)
        per_scale = tab.ks[tab.js == 0, 0]
        assert np.array_equal(per_scale, np.arange(-2, 2))

    def test_snap_offsets_reported(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        tab = analysis_coefficients(sh, DYADIC, [[0.3]], f, (0, 0), (-4, 3))
        assert 0.0 < tab.max_offset <= 0.5

    def test_window_budget(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ResourceLimitError):
            analysis_coefficients(sh, DYADIC, UNIT, f, (0, 2), (0, 499999))

    def test_strict_scales_raises(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ScaleRangeError):
            analysis_coefficients(sh, DYADIC, UNIT, f, (-6, 0), (-2, 1),
                                  strict_scales=True)
        tab = analysis_coefficients(sh, DYADIC, UNIT, f, (-6, 0), (-2, 1))
        assert tab.scale_flags[-6] == "aliasing"

    def test_dimension_mismatch(self):
        f = shannon_function()
        zero2d = builtin_wavelet("zero", dim=2)
        with pytest.raises(ConfigError):
            analysis_coefficients(zero2d, DYADIC, UNIT, f, (0, 0), (0, 0))

    def test_csv_roundtrip(self, tmp_path):
        f = gaussian_function()
        haar = builtin_wavelet("haar")
        tab = analysis_coefficients(haar, DYADIC, UNIT, f, (-1, 1), (-2, 2))
        path = tmp_path / "coef.csv"
        tab.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "j,k_0,re,im"
        data = np.loadtxt(path, delimiter=",", skiprows=1).reshape(-1, 4)
        assert data.shape[0] == len(tab)
        assert np.max(np.abs(data[:, 2] + 1j * data[:, 3] - tab.values)) < 1e-15

    def test_csv_two_dimensional_header(self, tmp_path):
        grid = GridSpec((4.0, 4.0), (8, 8))
        f = GridFunction(grid, np.zeros((8, 8)))
        zero2d = builtin_wavelet("zero", dim=2)
        eye = [[1.0, 0.0], [0.0, 1.0]]
        twice = [[2.0, 0.0], [0.0, 2.0]]
        tab = analysis_coefficients(zero2d, twice, eye, f, (0, 0),
                                    [(0, 1), (0, 2)])
        path = tmp_path / "coef2.csv"
        tab.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "j,k_0,k_1,re,im"
        assert len(lines) == 7
        # lexicographic k order
        assert np.array_equal(tab.ks[:2], [[0, 0], [0, 1]])


class TestFrameBounds:
    def test_shannon_parseval_subspace(self):
        sh = builtin_wavelet("shannon_1d")
        res = frame_bounds_estimate(sh, DYADIC, UNIT, GRID, (-1, 1),
                                    (-32, 31), (0.28, 1.32))
        assert res.n_vectors == 64
        assert res.n_atoms == 112
        assert res.n_edge_excluded == 4
        assert abs(res.lower - 1.0) < 1e-9
        assert abs(res.upper - 1.0) < 1e-9
        assert res.defect < 1e-9
        assert res.max_offset == 0.0
        assert res.eigenvalues.size == 64
        assert res.lower <= res.upper
        assert res.note == "restricted-subspace estimate"

    def test_amplitude_scales_bounds_quadratically(self):
        base = frame_bounds_estimate(builtin_wavelet("shannon_1d"), DYADIC,
                                     UNIT, GRID, (-1, 1), (-32, 31),
                                     (0.28, 1.32))
        loud = frame_bounds_estimate(builtin_wavelet("shannon_1d", amplitude=2.0),
                                     DYADIC, UNIT, GRID, (-1, 1), (-32, 31),
                                     (0.28, 1.32))
        assert loud.lower == pytest.approx(4 * base.lower, rel=1e-10)
        assert loud.upper == pytest.approx(4 * base.upper, rel=1e-10)

    def test_zero_wavelet_gives_zero_bounds(self):
        res = frame_bounds_estimate(builtin_wavelet("zero"), DYADIC, UNIT,
                                    GRID, (-1, 1), (-4, 3), (0.28, 1.32))
        assert res.lower == pytest.approx(0.0, abs=1e-14)
        assert res.upper == pytest.approx(0.0, abs=1e-14)

    def test_half_space_selection(self):
        sh = builtin_wavelet("shannon_1d")
        res = frame_bounds_estimate(sh, DYADIC, UNIT, GRID, (-1, 1),
                                    (-32, 31), (0.28, 1.32), half_space=True)
        assert res.n_vectors == 32
        assert abs(res.lower - 1.0) < 1e-9
        assert abs(res.upper - 1.0) < 1e-9

    def test_empty_band_rejected(self):
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ConfigError):
            frame_bounds_estimate(sh, DYADIC, UNIT, GRID, (-1, 1), (-4, 3),
                                  (0.001, 0.02))

    def test_vector_cap(self):
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ResourceLimitError):
            frame_bounds_estimate(sh, DYADIC, UNIT, GRID, (-1, 1), (-4, 3),
                                  (0.1, 60.0), max_vectors=10)


class TestTransformNorm:
    def test_monotone_in_scale_range(self):
        f = gaussian_function()
        haar = builtin_wavelet("haar")
        norms = [continuous_transform_norm(haar, DYADIC, f, (-j, j))
                 for j in (2, 4, 8)]
        assert norms[0] <= norms[1] <= norms[2]

    def test_quadratic_homogeneity(self):
        f = gaussian_function()
        haar = builtin_wavelet("haar")
        base = continuous_transform_norm(haar, DYADIC, f, (-4, 4))
        scaled = continuous_transform_norm(haar, DYADIC, f.scaled(1.7), (-4, 4))
        assert scaled == pytest.approx(1.7 ** 2 * base, rel=1e-10)

    def test_zero_function_zero_norm(self):
        f = GridFunction(GRID, np.zeros(4096))
        haar = builtin_wavelet("haar")
        assert continuous_transform_norm(haar, DYADIC, f, (-2, 2)) == 0.0

    def test_scale_energies_match_frequency_side(self):
        f = random_bandlimited(GRID, (0.5, 1.5), seed=5)
        haar = builtin_wavelet("haar")
        energies = transform_scale_energies(haar, DYADIC, f, (-3, 3))
        power = np.abs(f.spectrum().ravel()) ** 2
        xi = GRID.frequency_grid()
        from wavelattice.linalg import as_dilation
        A = as_dilation(DYADIC)
        for idx, j in enumerate(range(-3, 4)):
            mod = np.abs(haar.spectrum(xi @ A.power(j))) ** 2
            direct = GRID.freq_cell_volume * float(np.sum(power * mod))
            assert energies[idx] == pytest.approx(direct, rel=1e-12)

    def test_unimodular_dilation_never_stabilizes(self):
        # |det A| = 1 repeats one scale term, so doubling the range nearly
        # doubles the norm; expansive dilations saturate instead
        f = gaussian_function()
        haar = builtin_wavelet("haar")
        flat_ratio = (continuous_transform_norm(haar, UNIT, f, (-16, 16))
                      / continuous_transform_norm(haar, UNIT, f, (-8, 8)))
        assert flat_ratio == pytest.approx(33 / 17, rel=1e-12)
        assert flat_ratio >= 1.8
        dyadic_ratio = (continuous_transform_norm(haar, DYADIC, f, (-16, 16))
                        / continuous_transform_norm(haar, DYADIC, f, (-8, 8)))
        assert dyadic_ratio <= 1.05

    def test_field_slices_and_flags(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        field, flags = transform_field(sh, DYADIC, f, (-6, 6))
        assert sorted(field) == list(range(-6, 7))
        # C f(0, A^0) = ||psi||^2 = 1 at the center node
        assert abs(field[0][2048] - 1.0) < 1e-12
        assert flags == {-6: "aliasing", 4: "unresolved",
                         5: "unresolved", 6: "empty"}

    def test_field_budget(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ResourceLimitError):
            transform_field(sh, DYADIC, f, (-200, 200))


class TestPlancherelCheck:
    def test_shannon_pipelines_agree(self):
        f = random_bandlimited(GRID, (0.515, 0.985), seed=2)
        sh = builtin_wavelet("shannon_1d")
        chk = plancherel_identity_check(sh, DYADIC, f, (-12, 12))
        assert abs(chk.ratio - 1.0) < 1e-12
        assert chk.passes

    def test_haar_gaussian_agrees(self):
        f = gaussian_function()
        haar = builtin_wavelet("haar")
        chk = plancherel_identity_check(haar, DYADIC, f, (-12, 12))
        assert abs(chk.ratio - 1.0) < 1e-12
        assert chk.time_side == pytest.approx(chk.frequency_side, rel=1e-12)

    def test_self_analysis_matches_norm(self):
        f = shannon_function()
        sh = builtin_wavelet("shannon_1d")
        chk = plancherel_identity_check(sh, DYADIC, f, (-1, 1))
        assert chk.time_side == pytest.approx(1.0, rel=1e-12)
        assert abs(chk.ratio - 1.0) < 1e-12

    def test_zero_function_rejected(self):
        f = GridFunction(GRID, np.zeros(4096))
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ConfigError):
            plancherel_identity_check(sh, DYADIC, f, (-2, 2))

    def test_disjoint_band_rejected(self):
        # scale 6 holds no Shannon support on this grid at all
        f = random_bandlimited(GRID, (0.515, 0.985), seed=2)
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ConfigError):
            plancherel_identity_check(sh, DYADIC, f, (6, 6))


class TestCovolumeInequality:
    def test_shannon_parseval_ratios(self):
        sh = builtin_wavelet("shannon_1d")
        fs = [random_bandlimited(GRID, (0.515, 0.985), seed=s)
              for s in range(5)]
        chk = covolume_inequality_check(sh, DYADIC, UNIT, fs, (-12, 12))
        assert np.max(np.abs(chk.ratios - 1.0)) < 1e-9
        assert chk.passes
        assert chk.covolume == 1.0
        assert chk.lower == pytest.approx(0.95)
        assert chk.upper == pytest.approx(1.05)

    def test_halved_wavelet_fails(self):
        half = builtin_wavelet("shannon_1d", amplitude=0.5)
        f = random_bandlimited(GRID, (0.515, 0.985), seed=1)
        chk = covolume_inequality_check(half, DYADIC, UNIT, f, (-12, 12))
        assert chk.ratios[0] == pytest.approx(0.25, rel=1e-9)
        assert not chk.passes

    def test_rescaled_translation_recovers(self):
        # |det P| = 2 with amplitude sqrt(2): Calderon sum doubles too
        w = builtin_wavelet("shannon_1d", amplitude=np.sqrt(2.0))
        f = random_bandlimited(GRID, (0.515, 0.985), seed=1)
        chk = covolume_inequality_check(w, DYADIC, [[2.0]], f, (-12, 12))
        assert chk.ratios[0] == pytest.approx(1.0, rel=1e-9)
        assert chk.passes

    def test_zero_function_rejected(self):
        sh = builtin_wavelet("shannon_1d")
        f = GridFunction(GRID, np.zeros(4096))
        with pytest.raises(NumericError):
            covolume_inequality_check(sh, DYADIC, UNIT, [f], (-2, 2))

    def test_empty_function_list_rejected(self):
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ConfigError):
            covolume_inequality_check(sh, DYADIC, UNIT, [], (-2, 2))

    def test_malformed_bounds_rejected(self):
        sh = builtin_wavelet("shannon_1d")
        f = random_bandlimited(GRID, (0.5, 1.0), seed=0)
        with pytest.raises(ConfigError):
            covolume_inequality_check(sh, DYADIC, UNIT, f, (-2, 2),
                                      frame_bounds=(2.0, 1.0))


SMALL = GridSpec(4.0, 64)


def one_cell_field():
    v = np.zeros(64)
    v[32] = 1.0
    return {0: v}


class TestAmalgamNorm:
    def test_one_cell_window_equals_cell_measure(self):
        w = GBox(u_lo=[0.0], u_hi=[SMALL.spacing[0]], j_lo=0, j_hi=0)
        res = amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL)
        assert res.norm_sq == pytest.approx(SMALL.cell_volume, rel=1e-14)
        assert res.window_offsets == {0: 1}

    def test_monotone_in_window(self):
        norms = []
        for cells in (1, 2, 4):
            w = GBox(u_lo=[0.0], u_hi=[cells * SMALL.spacing[0]],
                     j_lo=0, j_hi=0)
            norms.append(amalgam_maximal_norm(one_cell_field(), w,
                                              DYADIC, SMALL).norm_sq)
        assert norms[0] <= norms[1] <= norms[2]
        assert norms[2] == pytest.approx(4 * norms[0], rel=1e-14)

    def test_zero_field_zero_norm(self):
        w = GBox(u_lo=[0.0], u_hi=[0.5], j_lo=0, j_hi=0)
        res = amalgam_maximal_norm({0: np.zeros(64)}, w, DYADIC, SMALL)
        assert res.norm_sq == 0.0

    def test_python_loop_oracle(self):
        rng = np.random.default_rng(9)
        field = {0: rng.standard_normal(64) + 1j * rng.standard_normal(64),
                 1: rng.standard_normal(64) + 1j * rng.standard_normal(64)}
        delta = SMALL.spacing[0]
        window = GBox(u_lo=[0.0], u_hi=[3 * delta], j_lo=-1, j_hi=0)
        res = amalgam_maximal_norm(field, window, DYADIC, SMALL)

        total = 0.0
        for j in (0, 1):
            scale = 2.0 ** j
            offsets = [o for o in range(-64, 65)
                       if 0.0 <= o * delta / scale < 3 * delta]
            acc = 0.0
            for n in range(64):
                best = 0.0
                for m in (-1, 0):
                    src = field.get(j + m)
                    if src is None:
                        continue
                    for o in offsets:
                        best = max(best, abs(src[(n + o) % 64]))
                acc += best ** 2
            total += 2.0 ** (-j) * delta * acc
        assert res.norm_sq == pytest.approx(total, rel=1e-12)

    def test_missing_neighbor_slices_are_zero(self):
        w = GBox(u_lo=[0.0], u_hi=[SMALL.spacing[0]], j_lo=-1, j_hi=1)
        res = amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL)
        assert res.norm_sq == pytest.approx(SMALL.cell_volume, rel=1e-14)

    def test_inverted_window_rejected(self):
        w = GBox(u_lo=[0.0], u_hi=[0.5], j_lo=0, j_hi=0).inverse()
        with pytest.raises(ConfigError):
            amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL)

    def test_empty_field_rejected(self):
        w = GBox(u_lo=[0.0], u_hi=[0.5], j_lo=0, j_hi=0)
        with pytest.raises(ConfigError):
            amalgam_maximal_norm({}, w, DYADIC, SMALL)

    def test_window_spanning_period_rejected(self):
        w = GBox(u_lo=[0.0], u_hi=[100.0], j_lo=0, j_hi=0)
        with pytest.raises(ConfigError):
            amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL)

    def test_window_budget(self):
        tight = replace(DEFAULTS, max_window_points=3)
        w = GBox(u_lo=[0.0], u_hi=[1.0], j_lo=0, j_hi=0)
        with pytest.raises(ResourceLimitError):
            amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL,
                                 defaults=tight)

    def test_subcell_window_rejected(self):
        w = GBox(u_lo=[0.01], u_hi=[0.02], j_lo=0, j_hi=0)
        with pytest.raises(ConfigError):
            amalgam_maximal_norm(one_cell_field(), w, DYADIC, SMALL)


class TestFrameReport:
    def test_shannon_fixture_passes(self):
        sh = builtin_wavelet("shannon_1d")
        rep = frame_report(sh, DYADIC, UNIT, GRID, (-1, 1), (-32, 31),
                           (0.28, 1.32), test_band=(0.515, 0.985),
                           n_test=10, seed=42)
        assert rep.passes
        assert rep.c1_est == pytest.approx(1.0, abs=1e-9)
        assert rep.c2_est == pytest.approx(1.0, abs=1e-9)
        assert rep.parseval_defect < 1e-9
        assert len(rep.bessel_ratios) == 10
        assert max(abs(r - 1.0) for r in rep.bessel_ratios) < 1e-9
        assert max(abs(r - 1.0) for r in rep.continuous_norm_ratios) < 1e-9
        assert rep.seed == 42
        payload = json.dumps(rep.to_json_dict())
        assert "restricted-subspace" in payload

    def test_zero_wavelet_fails_verdict(self):
        rep = frame_report(builtin_wavelet("zero"), DYADIC, UNIT, GRID,
                           (-1, 1), (-4, 3), (0.28, 1.32),
                           test_band=(0.515, 0.985), n_test=2, seed=0)
        assert not rep.verdicts["lower_bound_positive"]
        assert not rep.passes

    def test_needs_a_test_function(self):
        sh = builtin_wavelet("shannon_1d")
        with pytest.raises(ConfigError):
            frame_report(sh, DYADIC, UNIT, GRID, (-1, 1), (-4, 3),
                         (0.28, 1.32), n_test=0)
