"""Tests for the gauge layer: Helmholtz split, half waves, constraints."""

import numpy as np
import pytest

from mkg2d.errors import PreconditionError
from mkg2d.gauge import (
    GaugeState,
    RegularityTriple,
    build_state,
    check_admissibility,
    compatibility_curlfree,
    curl,
    divergence,
    gauss_residual,
    gauss_residual_split,
    halfwave_reconstruct,
    halfwave_split,
    helmholtz_decompose,
    im_product_conj,
    initial_constraint_residual,
    leray_project,
    observables,
    verify_null_identities,
)
from mkg2d.spectral import (
    GridSpec,
    SpectralField2D,
    apply_symbol,
    bessel,
    partial,
    random_band_limited,
)

import oracles


GRID = GridSpec(nx=16, ny=16)


def rand_real(seed, grid=GRID, k_max=None):
    rng = np.random.default_rng(seed)
    return random_band_limited(grid, rng, k_max=k_max, is_real=True)


def rand_complex(seed, grid=GRID, k_max=None):
    rng = np.random.default_rng(seed)
    return random_band_limited(grid, rng, k_max=k_max, is_real=False)


def rand_pair(seed, grid=GRID, k_max=None):
    return (rand_real(seed, grid, k_max), rand_real(seed + 1000, grid, k_max))


def make_state(seed, grid=GRID, mass=1.0, amplitude=1.0):
    """Random valid state built through the public constructor."""
    phi0 = amplitude * rand_complex(seed, grid)
    phi1 = amplitude * rand_complex(seed + 1, grid)
    a = tuple(amplitude * f for f in rand_pair(seed + 2, grid))
    a_t = tuple(amplitude * f for f in rand_pair(seed + 4, grid))
    return build_state(phi0, phi1, a, a_t, mass=mass)


class TestHelmholtz:
    def test_gradient_has_no_df_part(self):
        chi = rand_real(1)
        grad = (apply_symbol(chi, partial(1)), apply_symbol(chi, partial(2)))
        a_df, _ = helmholtz_decompose(grad)
        scale = max(grad[0].l2_norm() + grad[1].l2_norm(), 1e-30)
        assert a_df[0].l2_norm() + a_df[1].l2_norm() < 1e-12 * scale

    def test_curl_field_has_no_cf_part(self):
        psi = rand_real(2)
        psi.coeffs[0, 0] = 0.0
        rot = (-1.0 * apply_symbol(psi, partial(2)), apply_symbol(psi, partial(1)))
        _, a_cf = helmholtz_decompose(rot)
        scale = max(rot[0].l2_norm() + rot[1].l2_norm(), 1e-30)
        assert a_cf[0].l2_norm() + a_cf[1].l2_norm() < 1e-12 * scale

    def test_completeness_and_character(self):
        a = rand_pair(3)
        a_df, a_cf = helmholtz_decompose(a)
        for j in range(2):
            err = (a[j] - (a_df[j] + a_cf[j])).l2_norm()
            assert err < 1e-12 * max(a[j].l2_norm(), 1e-30)
        assert divergence(a_df).l2_norm() < 1e-12 * max(a[0].l2_norm(), 1e-30)
        assert curl(a_cf).l2_norm() < 1e-12 * max(a[0].l2_norm(), 1e-30)

    def test_idempotence(self):
        a = rand_pair(4)
        a_df, _ = helmholtz_decompose(a)
        again_df, again_cf = helmholtz_decompose(a_df)
        for j in range(2):
            assert (again_df[j] - a_df[j]).l2_norm() < 1e-12 * max(a_df[j].l2_norm(), 1e-30)
            assert again_cf[j].l2_norm() < 1e-12 * max(a_df[j].l2_norm(), 1e-30)

    def test_l2_orthogonality(self):
        a = rand_pair(5)
        a_df, a_cf = helmholtz_decompose(a)
        inner = sum(
            np.sum(np.conj(a_df[j].coeffs) * a_cf[j].coeffs) for j in range(2)
        )
        norm_sq = sum(a[j].l2_norm() ** 2 for j in range(2))
        assert abs(inner) < 1e-11 * norm_sq

    def test_mean_mode_goes_to_cf(self):
        a = rand_pair(6)
        a[0].coeffs[0, 0] = 0.7
        a[1].coeffs[0, 0] = -0.3
        a_df, a_cf = helmholtz_decompose(a)
        assert a_df[0].coeffs[0, 0] == 0.0 and a_df[1].coeffs[0, 0] == 0.0
        assert np.isclose(a_cf[0].coeffs[0, 0], 0.7)
        assert np.isclose(a_cf[1].coeffs[0, 0], -0.3)

    def test_projector_matches_mode_by_mode_oracle(self):
        """P agrees with the explicit 2x2 Leray matrix at every mode."""
        a = rand_pair(7)
        a_df, _ = helmholtz_decompose(a)
        k1 = GRID.k1.ravel().astype(int)
        k2 = GRID.k2.ravel().astype(int)
        for i in range(GRID.nx):
            for j in range(GRID.ny):
                p = oracles.helmholtz_projector(k1[i], k2[j])
                vec = np.array([a[0].coeffs[i, j], a[1].coeffs[i, j]])
                got = np.array([a_df[0].coeffs[i, j], a_df[1].coeffs[i, j]])
                assert np.max(np.abs(p @ vec - got)) < 1e-12


class TestHalfWaves:
    def test_zero_velocity_splits_evenly(self):
        u = rand_complex(8)
        zero = SpectralField2D.zeros(GRID, is_real=False)
        plus, minus = halfwave_split(u, zero)
        assert (plus - 0.5 * u).l2_norm() < 1e-13
        assert (minus - 0.5 * u).l2_norm() < 1e-13

    def test_pure_velocity_single_mode(self):
        """u = 0, u_t = mode k: u_pm = -/+ (i/2) <k>^{-1} (that mode)."""
        k = (2, 1)
        u_t = SpectralField2D.single_mode(GRID, *k)
        zero = SpectralField2D.zeros(GRID, is_real=False)
        plus, minus = halfwave_split(zero, u_t)
        bk = np.sqrt(1.0 + k[0] ** 2 + k[1] ** 2)
        idx = GRID.mode_index(*k)
        assert np.isclose(plus.coeffs[idx], -0.5j / bk)
        assert np.isclose(minus.coeffs[idx], 0.5j / bk)

    def test_split_reconstruct_roundtrip(self):
        u, u_t = rand_complex(9), rand_complex(10)
        back_u, back_ut = halfwave_reconstruct(*halfwave_split(u, u_t))
        assert (back_u - u).l2_norm() < 1e-12 * max(u.l2_norm(), 1e-30)
        assert (back_ut - u_t).l2_norm() < 1e-12 * max(u_t.l2_norm(), 1e-30)

    def test_reconstruct_single_plus_mode(self):
        k = (3, -2)
        plus = SpectralField2D.single_mode(GRID, *k)
        minus = SpectralField2D.zeros(GRID, is_real=False)
        u, u_t = halfwave_reconstruct(plus, minus)
        bk = np.sqrt(1.0 + k[0] ** 2 + k[1] ** 2)
        idx = GRID.mode_index(*k)
        assert np.isclose(u.coeffs[idx], 1.0)
        assert np.isclose(u_t.coeffs[idx], 1j * bk)

    def test_equal_halves_mean_static(self):
        w = rand_complex(11)
        _, u_t = halfwave_reconstruct(w, w)
        assert u_t.l2_norm() < 1e-13 * max(w.l2_norm(), 1e-30)

    def test_linearity(self):
        u1, u2 = rand_complex(12), rand_complex(13)
        v1, v2 = rand_complex(14), rand_complex(15)
        a, b = 1.3, -0.4 + 0.2j
        p, m = halfwave_reconstruct(a * u1 + b * u2, a * v1 + b * v2)
        p1, m1 = halfwave_reconstruct(u1, v1)
        p2, m2 = halfwave_reconstruct(u2, v2)
        assert (p - (a * p1 + b * p2)).l2_norm() < 1e-13 * max(p.l2_norm(), 1e-30)
        assert (m - (a * m1 + b * m2)).l2_norm() < 1e-13 * max(m.l2_norm(), 1e-30)


class TestCompatibility:
    def test_zero_velocity_gives_zero(self):
        phi0 = rand_complex(16)
        zero = SpectralField2D.zeros(GRID, is_real=False)
        out = compatibility_curlfree(phi0, zero)
        assert out[0].l2_norm() + out[1].l2_norm() == 0.0

    def test_real_data_gives_zero(self):
        phi0, phi1 = rand_real(17), rand_real(18)
        out = compatibility_curlfree(phi0, phi1)
        assert out[0].l2_norm() + out[1].l2_norm() < 1e-13 * (
            phi0.l2_norm() * phi1.l2_norm() + 1e-30
        )

    def test_divergence_matches_current(self):
        phi0, phi1 = rand_complex(19), rand_complex(20)
        a_cf_t = compatibility_curlfree(phi0, phi1)
        j = im_product_conj(phi0, phi1)
        div = divergence(a_cf_t)
        j_meanfree = j.coeffs.copy()
        j_meanfree[0, 0] = 0.0
        assert np.max(np.abs(div.coeffs - j_meanfree)) < 1e-11 * max(j.l2_norm(), 1e-30)
        assert curl(a_cf_t).l2_norm() < 1e-12 * max(j.l2_norm(), 1e-30)


class TestGaussResidual:
    def test_vacuum_with_constant_potential(self):
        zero = SpectralField2D.zeros(GRID, is_real=False)
        zero_r = SpectralField2D.zeros(GRID, is_real=True)
        const = SpectralField2D.single_mode(GRID, 0, 0, 0.8, is_real=True)
        state = GaugeState(
            phi_plus=zero,
            phi_minus=zero.copy(),
            a_df_plus=(zero_r, zero_r),
            a_df_minus=(zero_r.copy(), zero_r.copy()),
            a_cf=(const, zero_r.copy()),
        )
        res = gauss_residual(state)
        assert res.l2_norm() == 0.0

    def test_compatible_data_has_tiny_residual(self):
        state = make_state(21)
        l2, mean, rel = gauss_residual_split(state)
        assert l2 < 1e-10
        # the mean-mode obstruction is generically nonzero on the torus
        j = im_product_conj(state.phi(), state.phi_t())
        assert np.isclose(mean, float(j.coeffs[0, 0].real))

    def test_initial_residual_detects_incompatible_data(self):
        """div a' != Im(phi0 conj(phi1)) is caught at the data level."""
        phi0, phi1 = rand_complex(22), rand_complex(23)
        a_t = rand_pair(24)
        res = initial_constraint_residual(phi0, phi1, a_t)
        assert res.l2_norm() > 1e-3  # generic data violate the constraint
        fixed_cf = compatibility_curlfree(phi0, phi1)
        a_t_df = leray_project(a_t)
        fixed = (a_t_df[0] + fixed_cf[0], a_t_df[1] + fixed_cf[1])
        res2 = initial_constraint_residual(phi0, phi1, fixed)
        c = res2.coeffs.copy()
        c[0, 0] = 0.0  # mean mode is the torus obstruction
        assert np.sqrt(np.sum(np.abs(c) ** 2)) < 1e-11


class TestNullIdentities:
    def test_constant_phi_trivial(self):
        phi = SpectralField2D.single_mode(GRID, 0, 0, 2.0)
        a = rand_pair(25)
        a_df, _ = helmholtz_decompose(a)
        report = verify_null_identities(phi, a_df)
        assert report.coupling == 0.0 or report.coupling < 1e-12

    def test_real_phi_kills_current(self):
        """Re phi only: both sides of the projected-current identities vanish."""
        phi = rand_real(26, k_max=3)
        a = rand_pair(27)
        a_df, _ = helmholtz_decompose(a)
        d1 = apply_symbol(phi, partial(1))
        from mkg2d.spectral import pointwise_product

        lhs = leray_project(
            (pointwise_product(phi, d1.conj()),
             pointwise_product(phi, apply_symbol(phi, partial(2)).conj()))
        )
        assert lhs[0].l2_norm() + lhs[1].l2_norm() < 1e-10 * max(phi.l2_norm() ** 2, 1e-30)
        report = verify_null_identities(phi, a_df)
        assert report.max_error() < 1e-10

    def test_random_fields_at_n64(self):
        grid = GridSpec(nx=64, ny=64)
        phi = rand_complex(28, grid)
        a_df, _ = helmholtz_decompose(rand_pair(29, grid))
        report = verify_null_identities(phi, a_df)
        assert report.max_error() < 1e-10

    def test_requires_divergence_free_input(self):
        a = rand_pair(30)  # not projected
        phi = rand_complex(31)
        with pytest.raises(PreconditionError):
            verify_null_identities(phi, a)


class TestAdmissibility:
    def test_energy_triple(self):
        ok, violated = check_admissibility(RegularityTriple(1.0, 1.0, 1.0))
        assert ok and violated == []

    def test_minimal_regularity_corner(self):
        d = 0.01
        s = 0.5 + 1.0 / 14.0 + d
        ok, violated = check_admissibility(RegularityTriple(s, 0.25 + d, s))
        assert ok, violated

    def test_equal_exponent_corner(self):
        d = 0.01
        v = 0.5 + 1.0 / 12.0 + d
        ok, violated = check_admissibility(RegularityTriple(v, v, v))
        assert ok, violated

    def test_one_half_everywhere_fails(self):
        ok, violated = check_admissibility(RegularityTriple(0.5, 0.5, 0.5))
        assert not ok
        assert "s > 1/2 + l/8" in violated

    def test_monotone_in_s_below_caps(self):
        """Raising s never breaks admissibility while s < min(r + 1/2, l)."""
        rng = np.random.default_rng(32)
        found = 0
        while found < 25:
            s, r, l = rng.uniform(0.3, 1.6, size=3)
            ok, _ = check_admissibility(RegularityTriple(s, r, l))
            if not ok:
                continue
            found += 1
            cap = min(r + 0.5, l)
            for s2 in np.linspace(s, cap, 5)[1:-1]:
                ok2, violated2 = check_admissibility(RegularityTriple(float(s2), r, l))
                assert ok2, (s, r, l, s2, violated2)

    def test_eps_tilde_range(self):
        with pytest.raises(ValueError):
            RegularityTriple(1.0, 1.0, 1.0, eps_tilde=0.3)


class TestStateAndObservables:
    def test_build_state_satisfies_invariants(self):
        state = make_state(33)
        state.validate()

    def test_observable_fields_are_real(self):
        state = make_state(34)
        obs = observables(state)
        for f in (obs.f12, obs.gauss_residual_field, obs.energy_density, obs.charge_density):
            assert f.hermitian_defect() < 1e-10
        for comp in obs.e_field:
            assert comp.hermitian_defect() < 1e-10

    def test_energy_density_nonnegative(self):
        state = make_state(35)
        density = observables(state).energy_density.to_physical()
        assert np.min(np.asarray(density).real) > -1e-12
