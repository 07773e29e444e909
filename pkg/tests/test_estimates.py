"""Tests for the estimate lab: angle bound, free waves, ratio fuzzing."""

import warnings

import numpy as np
import pytest

from mkg2d import estimates
from mkg2d.errors import ConfigurationError, DegenerateInputError
from mkg2d.estimates import (
    ExponentTuple,
    FrequencyTriple,
    FuzzConfig,
    angle_ratio,
    angle_scan,
    bilinear_conditions,
    bilinear_ratio_fuzz,
    free_wave,
    sobolev_product_ratio,
    sobolev_ratio_fuzz,
    strichartz_tataru_ratio,
)
from mkg2d.norms import XsbSpec, mixed_norm, window_bandwidth_factor, xsb_norm
from mkg2d.spectral import GridSpec, SpectralField2D, random_band_limited


GRID = GridSpec(nx=32, ny=32)

# worked exponent tuples: the plain product estimate, the null-form
# analogue with the inverse gradient folded into s0, and the designated
# growth witness violating the s-sum condition
PRODUCT_TUPLE = ExponentTuple(0.0, 0.5, 0.5, 0.0, 0.51, 0.51)
NULLFORM_TUPLE = ExponentTuple(1.0, 1.0, 1.0, 0.23, 0.51, 0.51)
INADMISSIBLE_TUPLE = ExponentTuple(-1.5, -1.0, -1.0, 0.2, 0.2, 0.2)


def gaussian_bump(grid, sigma_k):
    kk = grid.k1**2 + grid.k2**2
    c = np.exp(-kk / (2.0 * sigma_k**2))
    c[0, 0] = 0.0
    return SpectralField2D(grid, (c * grid.dealias_mask).astype(complex), is_real=True)


class TestFrequencyTriple:
    def test_closure_is_exact(self):
        t = FrequencyTriple.closed((1.5, 2.0), (0.25, -1.0), 0.7, -0.3)
        assert t.xi1[0] + t.xi2[0] + t.xi3[0] == 0.0
        assert t.tau1 + t.tau2 + t.tau3 == 0.0

    def test_nonclosed_rejected(self):
        with pytest.raises(ConfigurationError):
            FrequencyTriple((1, 0), (0, 1), (0, 0), 0.0, 0.0, 0.0)


class TestAngleRatio:
    def test_parallel_on_cone_is_zero(self):
        t = FrequencyTriple.closed((10.0, 0.0), (30.0, 0.0), 10.0, 30.0, (1, 1, 1))
        assert angle_ratio(t, 0.5, 0.5, 0.49) == 0.0

    def test_antiparallel_regression_constant(self):
        """Frozen value from the first calibrated run of this geometry."""
        t = FrequencyTriple.closed((10.0, 0.0), (-20.0, 0.0), 10.0, 20.0, (1, 1, 1))
        assert np.isclose(angle_ratio(t, 0.5, 0.5, 0.49), 1.54547619723915, rtol=1e-12)

    def test_degenerate_vector_gives_zero(self):
        t = FrequencyTriple.closed((0.0, 0.0), (3.0, 4.0), 1.0, -5.0)
        assert angle_ratio(t, 0.5, 0.5, 0.49) == 0.0

    def test_exponent_range_enforced(self):
        t = FrequencyTriple.closed((1.0, 0.0), (0.0, 1.0), 1.0, 1.0)
        with pytest.raises(ConfigurationError):
            angle_ratio(t, 0.7, 0.5, 0.49)

    def test_scan_stable_under_doubling(self):
        r1 = angle_scan(20_000, seed=2)
        r2 = angle_scan(40_000, seed=2)
        assert np.isfinite(r1.max_ratio)
        assert abs(r2.max_ratio - r1.max_ratio) <= 0.10 * r1.max_ratio

    def test_scan_maximum_regression(self):
        """The extremal sweep pins the sup near pi / 2^gamma."""
        r = angle_scan(5_000, seed=3)
        assert 1.8 < r.max_ratio < 2.5
        assert np.isclose(r.max_ratio, 2.1405012786598894, rtol=1e-6)

    def test_permuted_scan_bound_structure_valid(self):
        """Exchanging the second and third frequencies (with their weights)
        leaves the bound finite and of the same size."""
        r = angle_scan(20_000, seed=4, permute_23=True)
        assert np.isfinite(r.max_ratio)
        assert r.max_ratio < 2.5


class TestFreeWave:
    def test_initial_slice(self):
        rng = np.random.default_rng(5)
        u0 = random_band_limited(GRID, rng, k_max=6)
        u = free_wave(u0, nt=16, window="none")
        samples = u.to_samples()
        assert np.max(np.abs(samples[:, :, 0] - u0.to_physical())) < 1e-12

    def test_single_mode_phase(self):
        k = (3, 4)  # |xi| = 5 exactly
        u0 = SpectralField2D.single_mode(GRID, *k)
        u = free_wave(u0, nt=16, window="none")
        samples = u.to_samples()
        times = u.times()
        xs = 2.0 * np.pi * np.arange(GRID.nx) / GRID.nx
        for j in (0, 5, 11):
            expect = np.exp(
                1j * (k[0] * xs[:, None] + k[1] * xs[None, :] + 5.0 * times[j])
            )
            assert np.max(np.abs(samples[:, :, j] - expect)) < 1e-13 * GRID.nx

    def test_l2_constant_in_time(self):
        rng = np.random.default_rng(6)
        u0 = random_band_limited(GRID, rng, k_max=6)
        u = free_wave(u0, nt=16, window="none")
        samples = u.to_samples()
        norms = np.sqrt(np.mean(np.abs(samples) ** 2, axis=(0, 1)))
        assert np.max(np.abs(norms - norms[0])) < 1e-13 * norms[0]

    def test_window_spread_within_factor_four(self):
        """X^{0,b} of a windowed free wave tracks ||u0|| <bandwidth>^b.

        Calibrated value of the ratio is ~1.001; the contract is the
        factor-4 band.
        """
        rng = np.random.default_rng(7)
        u0 = random_band_limited(GRID, rng, k_max=8)
        u = free_wave(u0, nt=64)
        b = 0.6
        x0b = xsb_norm(u, XsbSpec(0.0, b, "wave"))
        reference = xsb_norm(u, XsbSpec(0.0, 0.0, "wave")) * window_bandwidth_factor(
            64, 2.0 * np.pi, b
        )
        assert 0.25 < x0b / reference < 4.0


class TestStrichartzTataru:
    def test_p2_anchor_case_at_most_one(self):
        """p = 2: vanishing exponents; the ratio is <= 1 by construction."""
        for seed in range(8, 13):
            rng = np.random.default_rng(seed)
            u0 = random_band_limited(GRID, rng, k_max=8)
            assert strichartz_tataru_ratio(u0, 2.0, "lp_l2", nt=32) <= 1.0

    def test_amplitude_invariance(self):
        rng = np.random.default_rng(13)
        u0 = random_band_limited(GRID, rng, k_max=8)
        for variant, p in (("lp_l2", 4.0), ("lp_l2plus", 4.0), ("strichartz_L6xt", 6.0)):
            r1 = strichartz_tataru_ratio(u0, p, variant, nt=32)
            r2 = strichartz_tataru_ratio(2.0 * u0, p, variant, nt=32)
            assert abs(r1 - r2) < 1e-12 * r1

    def test_dilation_scan(self):
        """Rescaled Gaussian bumps move the Lp_x L2_t ratios by < 25%."""
        g = GridSpec(nx=64, ny=64)
        for p in (2.0, 4.0, 6.0):
            rs = [
                strichartz_tataru_ratio(gaussian_bump(g, 1.5 * lam), p, "lp_l2", nt=96)
                for lam in (1.0, 2.0, 4.0)
            ]
            assert all(np.isfinite(rs))
            assert (max(rs) - min(rs)) / min(rs) < 0.25, (p, rs)

    def test_zero_input_degenerate(self):
        u0 = SpectralField2D.zeros(GRID)
        with pytest.raises(DegenerateInputError):
            strichartz_tataru_ratio(u0, 4.0, "lp_l2", nt=16)

    def test_bad_arguments(self):
        rng = np.random.default_rng(14)
        u0 = random_band_limited(GRID, rng, k_max=4)
        with pytest.raises(ConfigurationError):
            strichartz_tataru_ratio(u0, 8.0, "lp_l2")
        with pytest.raises(ConfigurationError):
            strichartz_tataru_ratio(u0, 4.0, "lp_l3")


class TestBilinearConditions:
    def test_worked_product_tuple(self):
        ok, violated = bilinear_conditions(PRODUCT_TUPLE)
        assert ok and violated == []

    def test_all_zeros_violated(self):
        ok, violated = bilinear_conditions(ExponentTuple(0, 0, 0, 0, 0, 0))
        assert not ok
        assert "b0 + b1 + b2 > 1/2" in violated
        assert "s0 + s1 + s2 > 3/4" in violated

    def test_nullform_case_tuple(self):
        """The tuple used for the potential-equation null form at r = 0.26."""
        eps = 0.01
        r = 0.26
        t = ExponentTuple(r + 0.5, 0.0, 0.0, 0.25 + eps, 0.5 + eps, 0.5 - eps)
        ok, violated = bilinear_conditions(t)
        assert ok, violated

    def test_two_reader_agreement(self):
        """Independent re-implementation agrees on random tuples."""
        rng = np.random.default_rng(15)
        for _ in range(1000):
            vals = rng.uniform(-2.0, 2.0, 6)
            e = ExponentTuple(*vals)
            ok, _ = bilinear_conditions(e)
            assert ok == independent_condition_check(*vals)


def independent_condition_check(s0, s1, s2, b0, b1, b2):
    """Second reader for the fourteen conditions, written from scratch
    as data-driven linear forms (used by the acceptance suite too)."""
    S = s0 + s1 + s2
    B = b0 + b1 + b2
    pair_b = (b0 + b1, b0 + b2, b1 + b2)
    checks = [
        B > 0.5,
        *[pb >= 0.0 for pb in pair_b],
        S + B > 1.5,
        S + min(pair_b) > 1.0,
        S + min(b0, b1, b2) > 0.5,
        S > 0.75,
        S + s1 + s2 + b0 > 1.0,
        S + s0 + s2 + b1 > 1.0,
        S + s0 + s1 + b2 > 1.0,
        s1 + s2 >= 0.0 and s1 + s2 + b0 >= 0.0,
        s0 + s2 >= 0.0 and s0 + s2 + b1 >= 0.0,
        s0 + s1 >= 0.0 and s0 + s1 + b2 >= 0.0,
    ]
    return all(checks)


class TestBilinearFuzz:
    def test_degenerate_trials_counted(self, monkeypatch):
        """Zero draws are rejected as degenerate, not folded into ratios."""

        real_draw = estimates._draw_field
        calls = {"n": 0}

        def half_zero(grid, nt, t_span, rng, kind):
            c, p = real_draw(grid, nt, t_span, rng, kind)
            calls["n"] += 1
            if calls["n"] % 4 == 1:  # zero out u in every other trial
                return np.zeros_like(c), {"kind": "zero"}
            return c, p

        monkeypatch.setattr(estimates, "_draw_field", half_zero)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = bilinear_ratio_fuzz(
                "product", PRODUCT_TUPLE, FuzzConfig(n=16, nt=16, n_trials=12, seed=0)
            )
        assert report.n_degenerate == 6
        assert report.n_trials == 6

    def test_parallel_gradient_pairs_annihilate(self):
        """Q12(u, u^2) with u band-limited to a safe band: ratio < 1e-8."""
        nt = 32
        rng = np.random.default_rng(16)
        kb = 5  # n/6 ish: u^2 is then represented exactly
        keep_x = (np.abs(GRID.k1) <= kb) & (np.abs(GRID.k2) <= kb)
        kt = np.fft.fftfreq(nt, 1.0 / nt)
        keep_t = np.abs(kt) <= kb
        cu = (
            rng.standard_normal((32, 32, nt)) + 1j * rng.standard_normal((32, 32, nt))
        ) * keep_x[:, :, None] * keep_t[None, None, :]
        su = estimates._st_samples(cu)
        cv = estimates._st_coeffs(su * su, estimates._st_mask(GRID, nt))
        q = estimates._bilinear_output("nullform_q12", GRID, nt, 2 * np.pi, cu, cv)
        num = xsb_norm(estimates._st_field(GRID, nt, 2 * np.pi, q), XsbSpec(0, 0, "wave"))
        den = xsb_norm(estimates._st_field(GRID, nt, 2 * np.pi, cu), XsbSpec(1.0, 0.5, "wave")) ** 2
        assert num / den < 1e-8

    def test_admissible_product_tuple_stable_small_scale(self):
        ra = bilinear_ratio_fuzz(
            "product", PRODUCT_TUPLE, FuzzConfig(n=16, nt=16, n_trials=60, seed=17)
        )
        rb = bilinear_ratio_fuzz(
            "product", PRODUCT_TUPLE, FuzzConfig(n=32, nt=32, n_trials=60, seed=17)
        )
        factor = rb.max_ratio / ra.max_ratio
        assert 0.5 < factor < 2.0, (ra.max_ratio, rb.max_ratio)

    def test_inadmissible_tuple_warns(self):
        with pytest.warns(UserWarning):
            bilinear_ratio_fuzz(
                "product",
                INADMISSIBLE_TUPLE,
                FuzzConfig(n=16, nt=16, n_trials=10, seed=18),
            )

    def test_nullform_tuple_sane(self):
        report = bilinear_ratio_fuzz(
            "nullform_q12", NULLFORM_TUPLE, FuzzConfig(n=32, nt=32, n_trials=40, seed=19)
        )
        assert 0.0 < report.max_ratio < 1.0
        assert report.max_ratio >= report.median_ratio

    def test_triple_product_runs(self):
        report = bilinear_ratio_fuzz(
            "triple_product", PRODUCT_TUPLE, FuzzConfig(n=16, nt=16, n_trials=30, seed=20)
        )
        assert report.n_degenerate == 0
        assert np.isfinite(report.max_ratio)
        assert report.argmax["w"]["kind"] == "gaussian"

    def test_report_records_worst_case_generator(self):
        report = bilinear_ratio_fuzz(
            "product", PRODUCT_TUPLE, FuzzConfig(n=16, nt=16, n_trials=30, seed=21)
        )
        assert "trial_seed" in report.argmax
        assert report.argmax["u"]["kind"] in ("gaussian", "cone")
        assert report.grid_meta["nx"] == 16
        assert len(report.trial_ratios) == report.n_trials


class TestSobolevProduct:
    def test_constant_second_factor(self):
        rng = np.random.default_rng(22)
        u = random_band_limited(GRID, rng, k_max=6)
        one = SpectralField2D.single_mode(GRID, 0, 0, 1.0, is_real=True)
        ratio = sobolev_product_ratio(u, one, 0.3, 0.6, 0.4)
        from mkg2d.norms import sobolev_norm

        expect = sobolev_norm(u, -0.3) / sobolev_norm(u, 0.6)
        assert np.isclose(ratio, expect, rtol=1e-12)
        assert ratio <= 1.0 + 1e-12  # s1 >= -s0 makes this a contraction

    def test_single_identical_mode_closed_form(self):
        """u = v = one mode k: ratio = <2k>^{-s0} / <k>^{s1+s2}."""
        k = (3, 2)
        u = SpectralField2D.single_mode(GRID, *k)
        s0, s1, s2 = 0.3, 0.7, 0.4
        ratio = sobolev_product_ratio(u, u, s0, s1, s2)
        ksq = k[0] ** 2 + k[1] ** 2
        expect = (1 + 4 * ksq) ** (-s0 / 2) / (1 + ksq) ** ((s1 + s2) / 2)
        assert np.isclose(ratio, expect, rtol=1e-12)

    def test_amplitude_scaling_invariance(self):
        rng = np.random.default_rng(23)
        u = random_band_limited(GRID, rng, k_max=6)
        v = random_band_limited(GRID, rng, k_max=6)
        r1 = sobolev_product_ratio(u, v, 0.51, 0.51, 0.0)
        r2 = sobolev_product_ratio(3.0 * u, 0.5 * v, 0.51, 0.51, 0.0)
        assert abs(r1 - r2) < 1e-12 * r1

    def test_fuzz_stability_under_refinement(self):
        ra = sobolev_ratio_fuzz(0.51, 0.51, 0.0, n=32, n_trials=100, seed=24)
        rb = sobolev_ratio_fuzz(0.51, 0.51, 0.0, n=64, n_trials=100, seed=24)
        factor = rb.max_ratio / ra.max_ratio
        assert 0.5 < factor < 2.0

    def test_off_condition_warns(self):
        with pytest.warns(UserWarning):
            sobolev_ratio_fuzz(0.0, 0.0, 0.0, n=16, n_trials=5, seed=25)
