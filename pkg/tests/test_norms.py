"""Tests for Sobolev, mixed, and weighted space-time norms."""

import numpy as np
import pytest

from mkg2d.errors import ConfigurationError
from mkg2d.norms import (
    SpaceTimeField,
    XsbSpec,
    make_window,
    mixed_norm,
    sobolev_norm,
    xsb_norm,
)
from mkg2d.spectral import (
    GridSpec,
    SpectralField2D,
    apply_symbol,
    bessel,
    random_band_limited,
)


GRID = GridSpec(nx=16, ny=16)
T_SPAN = 2.0 * np.pi
NT = 16


def rand_field(seed, is_real=False):
    rng = np.random.default_rng(seed)
    return random_band_limited(GRID, rng, is_real=is_real)


def rand_spacetime(seed, window="hann", nt=NT):
    """Random band-limited space-time field (band-limited in omega too)."""
    rng = np.random.default_rng(seed)
    slices = [random_band_limited(GRID, rng, k_max=4) for _ in range(nt)]
    return SpaceTimeField.from_slices(slices, T_SPAN, window=window)


class TestSobolevNorm:
    def test_unit_mode_h1(self):
        u = SpectralField2D.single_mode(GRID, 1, 0)
        assert np.isclose(sobolev_norm(u, 1.0), np.sqrt(2.0))

    def test_s_zero_is_l2(self):
        u = rand_field(1)
        assert np.isclose(sobolev_norm(u, 0.0), u.l2_norm(), rtol=1e-14)

    def test_matches_apply_symbol_oracle(self):
        """H^s norm equals the L2 norm of <grad>^s u computed independently."""
        u = rand_field(2)
        for s in (-0.7, 0.35, 1.5):
            direct = sobolev_norm(u, s)
            via_symbol = apply_symbol(u, bessel(s)).l2_norm()
            assert np.isclose(direct, via_symbol, rtol=1e-12)

    def test_homogeneous_drops_mean(self):
        u = rand_field(3)
        u.coeffs[0, 0] = 123.0  # must not contribute
        with_mean = sobolev_norm(u, 0.5, homogeneous=True)
        u.coeffs[0, 0] = 0.0
        without = sobolev_norm(u, 0.5, homogeneous=True)
        assert np.isclose(with_mean, without, rtol=1e-14)

    def test_homogeneous_vs_inhomogeneous_order(self):
        u = rand_field(4)
        u.coeffs[0, 0] = 0.0
        assert sobolev_norm(u, 1.0, homogeneous=True) <= sobolev_norm(u, 1.0)


class TestMixedNorm:
    def test_fubini_at_p_q_two(self):
        u = rand_spacetime(5)
        a = mixed_norm(u, 2, 2, "x_then_t")
        b = mixed_norm(u, 2, 2, "t_then_x")
        assert np.isclose(a, b, rtol=1e-12)
        assert np.isclose(a, u.l2_norm(), rtol=1e-12)

    def test_constant_field(self):
        """Constant c has norm c under the normalized measures (M = S = 1)."""
        c = 1.7
        slices = [SpectralField2D.single_mode(GRID, 0, 0, c, is_real=True) for _ in range(NT)]
        u = SpaceTimeField.from_slices(slices, T_SPAN, window="none")
        for p, q in ((2, 2), (4, 2), (6, 2), (np.inf, 2), (2, np.inf)):
            assert np.isclose(mixed_norm(u, p, q), c, rtol=1e-12)

    def test_separable_factorization(self):
        """u(t,x) = f(x) g(t): mixed norm = ||f||_p ||g||_q."""
        rng = np.random.default_rng(6)
        f = random_band_limited(GRID, rng, k_max=3, is_real=True)
        g = rng.standard_normal(NT)
        slices = [SpectralField2D(GRID, f.coeffs * g[j], True) for j in range(NT)]
        u = SpaceTimeField.from_slices(slices, T_SPAN, window="none")
        fp = np.abs(f.to_physical())
        for p, q in ((4, 2), (6, 2), (3, 5)):
            norm_f = np.mean(fp**p) ** (1.0 / p)
            norm_g = np.mean(np.abs(g) ** q) ** (1.0 / q)
            assert np.isclose(mixed_norm(u, p, q), norm_f * norm_g, rtol=1e-12)

    def test_rejects_bad_exponents(self):
        u = rand_spacetime(7)
        with pytest.raises(ConfigurationError):
            mixed_norm(u, 0.5, 2)
        with pytest.raises(ConfigurationError):
            mixed_norm(u, 2, 2, order="sideways")


class TestXsbNorm:
    def test_zero_exponents_equal_l2(self):
        u = rand_spacetime(8)
        for w in ("wave", "elliptic", "halfwave_plus", "halfwave_minus"):
            spec = XsbSpec(0.0, 0.0, w)
            assert np.isclose(xsb_norm(u, spec), u.l2_norm(), rtol=1e-12)
            assert np.isclose(xsb_norm(u, spec), mixed_norm(u, 2, 2), rtol=1e-12)

    def test_single_space_time_mode(self):
        k, m = (3, -1), 5
        coeffs = np.zeros((GRID.nx, GRID.ny, NT), dtype=complex)
        coeffs[GRID.mode_index(*k) + (m,)] = 1.0
        u = SpaceTimeField.from_coefficient_array(GRID, T_SPAN, coeffs)
        kabs = np.hypot(*k)
        s, b = 0.8, 0.6
        expect = (1.0 + kabs**2) ** (s / 2) * (1.0 + (abs(m) - kabs) ** 2) ** (b / 2)
        assert np.isclose(xsb_norm(u, XsbSpec(s, b, "wave")), expect, rtol=1e-12)

    def test_halfwave_vs_wave_ordering(self):
        """||u||_{X_pm} <= ||u||_{X_wave} for b <= 0 and reversed for b >= 0."""
        for seed in range(9, 14):
            u = rand_spacetime(seed)
            for sign_weight in ("halfwave_plus", "halfwave_minus"):
                up = xsb_norm(u, XsbSpec(0.3, 0.5, sign_weight))
                uw = xsb_norm(u, XsbSpec(0.3, 0.5, "wave"))
                assert up >= uw * (1 - 1e-12)
                dn = xsb_norm(u, XsbSpec(0.3, -0.5, sign_weight))
                dw = xsb_norm(u, XsbSpec(0.3, -0.5, "wave"))
                assert dn <= dw * (1 + 1e-12)

    def test_monotone_in_s_and_b(self):
        u = rand_spacetime(15)
        ns = [xsb_norm(u, XsbSpec(s, 0.25, "wave")) for s in (0.0, 0.5, 1.0, 2.0)]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(ns, ns[1:]))
        nb = [xsb_norm(u, XsbSpec(0.5, b, "wave")) for b in (0.0, 0.3, 0.8)]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(nb, nb[1:]))
        nneg = [xsb_norm(u, XsbSpec(0.5, b, "wave")) for b in (0.0, -0.3, -0.8)]
        assert all(a >= b * (1 - 1e-12) for a, b in zip(nneg, nneg[1:]))

    def test_amplitude_homogeneity(self):
        u = rand_spacetime(16)
        spec = XsbSpec(0.7, 0.4, "wave")
        assert np.isclose(xsb_norm(u.scaled(2.0), spec), 2.0 * xsb_norm(u, spec), rtol=1e-13)
        assert np.isclose(mixed_norm(u.scaled(2.0), 4, 2), 2.0 * mixed_norm(u, 4, 2), rtol=1e-12)

    def test_eps_validation(self):
        with pytest.raises(ConfigurationError):
            XsbSpec(0.0, 0.0, "wave", eps=0.5)
        with pytest.raises(ConfigurationError):
            XsbSpec(0.0, 0.0, "diagonal")


class TestWindow:
    def test_hann_vanishes_at_edges(self):
        w = make_window(32, "hann")
        assert w[0] == 0.0
        assert np.isclose(max(w), 1.0, atol=1e-10)

    def test_window_recorded_on_field(self):
        u = rand_spacetime(17, window="hann")
        assert u.window == "hann"

    def test_sample_roundtrip(self):
        """from_slices with no window, then to_samples, recovers the slices."""
        rng = np.random.default_rng(18)
        slices = [random_band_limited(GRID, rng, k_max=3) for _ in range(NT)]
        u = SpaceTimeField.from_slices(slices, T_SPAN, window="none")
        samples = u.to_samples()
        for j, s in enumerate(slices):
            assert np.max(np.abs(samples[:, :, j] - s.to_physical())) < 1e-12
