"""Initial-data generation at prescribed Sobolev regularity.

Rough data: Fourier amplitudes |k|^{-(sigma+1+delta)} with uniform random
phases, where sigma is the target exponent of each component and
delta = 0.01.  The H^sigma' norm of such a field stays bounded under
grid refinement exactly for sigma' < sigma + delta.  The curl-free and
divergence-free potentials are built in their own subspaces (via Riesz
compositions of rough scalars), and the curl-free part of dA/dt comes
from the compatibility condition so the Gauss constraint holds at t=0
up to the torus mean mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError
from .gauge import (
    GaugeState,
    Pair,
    RegularityTriple,
    check_admissibility,
    compatibility_curlfree,
    halfwave_split,
    halfwave_split_pair,
    im_product_conj,
    leray_project,
)
from .spectral import GridSpec, SpectralField2D, apply_symbol, riesz

__all__ = [
    "InitialData",
    "rough_data_generate",
    "smooth_data_generate",
    "data_to_state",
    "isotropic_spectrum",
    "fit_spectral_slope",
    "ROUGHNESS_DELTA",
]

ROUGHNESS_DELTA = 0.01


@dataclass
class InitialData:
    """Raw Cauchy data (phi, d_t phi, A, d_t A) in decomposed form."""

    phi0: SpectralField2D
    phi1: SpectralField2D
    a_df: Pair
    a_df_t: Pair
    a_cf: Pair
    a_cf_t: Pair  # determined by the compatibility condition
    gauss_mean_obstruction: float  # torus mean of Im(phi0 conj(phi1))


def _power_law_amplitudes(grid: GridSpec, exponent: float) -> np.ndarray:
    """|k|^{-exponent} inside the retained band, zero at k=0 and beyond."""
    kk = np.sqrt((grid.k1**2 + grid.k2**2))
    amp = np.zeros(grid.shape)
    nz = kk > 0
    amp[nz] = kk[nz] ** (-exponent)
    return amp * grid.dealias_mask


def _rough_complex(grid: GridSpec, rng: np.random.Generator, sigma: float) -> SpectralField2D:
    amp = _power_law_amplitudes(grid, sigma + 1.0 + ROUGHNESS_DELTA)
    phases = np.exp(2j * np.pi * rng.random(grid.shape))
    return SpectralField2D(grid, amp * phases, is_real=False)


def _rough_real(grid: GridSpec, rng: np.random.Generator, sigma: float) -> SpectralField2D:
    """Real field with exact per-mode amplitudes.

    Normalizing a Hermitian white-noise field mode-by-mode keeps the
    conjugate symmetry while pinning every |c(k)| to the power law.
    """
    amp = _power_law_amplitudes(grid, sigma + 1.0 + ROUGHNESS_DELTA)
    white = np.fft.fft2(rng.standard_normal(grid.shape))
    mag = np.abs(white)
    mag[mag == 0] = 1.0
    return SpectralField2D(grid, amp * white / mag, is_real=True)


def _gaussian_amplitudes(grid: GridSpec, amplitude: float, k0: float) -> np.ndarray:
    kk = grid.k1**2 + grid.k2**2
    amp = amplitude * np.exp(-kk / (2.0 * k0**2))
    amp[0, 0] = 0.0
    return amp * grid.dealias_mask


def _smooth_complex(grid, rng, amplitude, k0):
    amp = _gaussian_amplitudes(grid, amplitude, k0)
    phases = np.exp(2j * np.pi * rng.random(grid.shape))
    return SpectralField2D(grid, amp * phases, is_real=False)


def _smooth_real(grid, rng, amplitude, k0):
    amp = _gaussian_amplitudes(grid, amplitude, k0)
    white = np.fft.fft2(rng.standard_normal(grid.shape))
    mag = np.abs(white)
    mag[mag == 0] = 1.0
    return SpectralField2D(grid, amp * white / mag, is_real=True)


def _solenoidal(stream: SpectralField2D) -> Pair:
    """(R2 w, -R1 w): exactly divergence-free."""
    return (apply_symbol(stream, riesz(2)), -1.0 * apply_symbol(stream, riesz(1)))


def _irrotational(potential: SpectralField2D, mean: tuple[float, float] = (0.0, 0.0)) -> Pair:
    """(R1 v, R2 v) plus a constant: exactly curl-free; carries the mean."""
    a1 = apply_symbol(potential, riesz(1))
    a2 = apply_symbol(potential, riesz(2))
    a1.coeffs[0, 0] = mean[0]
    a2.coeffs[0, 0] = mean[1]
    return (a1, a2)


def _assemble(phi0, phi1, a_df, a_df_t, a_cf) -> InitialData:
    a_cf_t = compatibility_curlfree(phi0, phi1)
    j = im_product_conj(phi0, phi1)
    return InitialData(
        phi0=phi0,
        phi1=phi1,
        a_df=a_df,
        a_df_t=a_df_t,
        a_cf=a_cf,
        a_cf_t=a_cf_t,
        gauss_mean_obstruction=float(j.coeffs[0, 0].real),
    )


def rough_data_generate(
    reg: RegularityTriple,
    grid: GridSpec,
    seed: int,
    override_admissibility: bool = False,
    amplitude: float = 1.0,
) -> InitialData:
    """Random data in the regularity classes of the local theory.

    phi0 in H^s, phi1 in H^{s-1}, a_df in H^r, a_df_t in H^{r-1},
    a_cf in the weighted H^l class; a_cf_t from the compatibility
    condition.  Refuses inadmissible exponents unless overridden.
    """
    ok, violated = check_admissibility(reg)
    if not ok and not override_admissibility:
        raise AdmissibilityError(violated)
    rng = np.random.default_rng(seed)
    phi0 = amplitude * _rough_complex(grid, rng, reg.s)
    phi1 = amplitude * _rough_complex(grid, rng, reg.s - 1.0)
    a_df = _solenoidal(amplitude * _rough_real(grid, rng, reg.r))
    a_df_t = _solenoidal(amplitude * _rough_real(grid, rng, reg.r - 1.0))
    mean = tuple(0.1 * amplitude * rng.standard_normal(2))
    a_cf = _irrotational(amplitude * _rough_real(grid, rng, reg.l), mean)
    return _assemble(phi0, phi1, a_df, a_df_t, a_cf)


def smooth_data_generate(
    grid: GridSpec,
    seed: int,
    amplitude: float = 0.25,
    k0: float = 2.0,
) -> InitialData:
    """Gaussian-spectrum variant: same structure, spectra decaying like
    exp(-|k|^2 / 2 k0^2), resolved to machine precision well inside the
    dealias band."""
    rng = np.random.default_rng(seed)
    phi0 = _smooth_complex(grid, rng, amplitude, k0)
    phi1 = _smooth_complex(grid, rng, amplitude, k0)
    a_df = _solenoidal(_smooth_real(grid, rng, amplitude, k0))
    a_df_t = _solenoidal(_smooth_real(grid, rng, amplitude, k0))
    mean = tuple(0.1 * amplitude * rng.standard_normal(2))
    a_cf = _irrotational(_smooth_real(grid, rng, amplitude, k0), mean)
    return _assemble(phi0, phi1, a_df, a_df_t, a_cf)


def data_to_state(
    data: InitialData, mass: float = 1.0, eps_tilde: float = 0.01, t: float = 0.0
) -> GaugeState:
    """Half-wave split of the raw data; the slaved a_cf_t is not stored."""
    phi_plus, phi_minus = halfwave_split(data.phi0, data.phi1)
    adf_plus, adf_minus = halfwave_split_pair(data.a_df, leray_project(data.a_df_t))
    return GaugeState(
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        a_df_plus=adf_plus,
        a_df_minus=adf_minus,
        a_cf=data.a_cf,
        t=t,
        mass=mass,
        eps_tilde=eps_tilde,
    )


# ---------------------------------------------------------------------------
# Spectrum analysis
# ---------------------------------------------------------------------------


def isotropic_spectrum(u: SpectralField2D) -> tuple[np.ndarray, np.ndarray]:
    """(ring radii, RMS amplitude per ring), rings at integer |k|."""
    g = u.grid
    kk = np.sqrt(g.k1**2 + g.k2**2)
    rings = np.rint(kk).astype(int)
    kmax = int(rings.max())
    radii, rms = [], []
    power = np.abs(u.coeffs) ** 2
    for k in range(1, kmax + 1):
        sel = rings == k
        if np.any(sel) and np.any(power[sel] > 0):
            radii.append(float(k))
            rms.append(float(np.sqrt(np.mean(power[sel]))))
    return np.asarray(radii), np.asarray(rms)


def fit_spectral_slope(
    u: SpectralField2D, k_lo: float = 2.0, k_hi: float | None = None
) -> float:
    """Least-squares slope of log RMS amplitude vs log |k| over a band."""
    if k_hi is None:
        k_hi = 0.8 * min(u.grid.nx, u.grid.ny) * u.grid.dealias_fraction / 2.0
    radii, rms = isotropic_spectrum(u)
    sel = (radii >= k_lo) & (radii <= k_hi) & (rms > 0)
    if np.count_nonzero(sel) < 4:
        raise ValueError("not enough populated rings for a slope fit")
    coeff = np.polyfit(np.log(radii[sel]), np.log(rms[sel]), 1)
    return float(coeff[0])
