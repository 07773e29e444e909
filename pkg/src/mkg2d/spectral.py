"""Fourier-multiplier calculus on a periodic 2D grid.

Conventions used throughout the package:

* A field is stored by its Fourier series coefficients ``c[k1, k2]`` in
  numpy FFT layout, with integer mode indices ``k in [-n/2, n/2)`` and
  physical frequencies ``xi = (2*pi/period) * k``.  Synthesis is
  ``u(x) = sum_k c[k] exp(i xi_k . x)``.
* All Lebesgue-type norms are taken with respect to the normalized
  (mean) measure on the torus, so Plancherel is exact:
  ``||u||_L2^2 = sum_k |c[k]|^2`` and a unit plane wave has unit norm.
  Products of coefficients then convolve with no volume factor.
* Nonlinear products are formed in physical space and truncated by the
  2/3-rule mask.  Fields whose supports lie inside the retained band
  produce alias-free (exact) truncated convolutions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, ShapeError

__all__ = [
    "GridSpec",
    "SpectralField2D",
    "SymbolSpec",
    "apply_symbol",
    "pointwise_product",
    "null_form_q12",
]


@dataclass(frozen=True)
class GridSpec:
    """Periodic square-torus grid: nx*ny points on a box of side `period`."""

    nx: int
    ny: int
    period: float = 2.0 * np.pi
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self):
        for n, name in ((self.nx, "nx"), (self.ny, "ny")):
            if n < 8 or n % 2 != 0:
                raise ConfigurationError(f"{name}={n}: grid sizes must be even and >= 8")
        if not (self.period > 0):
            raise ConfigurationError(f"period={self.period} must be positive")
        if not (0.0 < self.dealias_fraction <= 1.0):
            raise ConfigurationError(
                f"dealias_fraction={self.dealias_fraction} must lie in (0, 1]"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    # -- cached wavenumber tables ------------------------------------

    @property
    def k1(self) -> np.ndarray:
        """Integer mode indices along axis 0, shape (nx, 1)."""
        return _tables(self)[0]

    @property
    def k2(self) -> np.ndarray:
        """Integer mode indices along axis 1, shape (1, ny)."""
        return _tables(self)[1]

    @property
    def xi1(self) -> np.ndarray:
        return _tables(self)[2]

    @property
    def xi2(self) -> np.ndarray:
        return _tables(self)[3]

    @property
    def xi_abs(self) -> np.ndarray:
        """|xi| on the full (nx, ny) lattice."""
        return _tables(self)[4]

    @property
    def bessel(self) -> np.ndarray:
        """<xi> = sqrt(1 + |xi|^2) on the lattice."""
        return _tables(self)[5]

    @property
    def dealias_mask(self) -> np.ndarray:
        """Boolean mask of the retained band |k_j| < n_j * fraction / 2."""
        return _tables(self)[6]

    def mode_index(self, k1: int, k2: int) -> tuple[int, int]:
        """Array index of the integer mode (k1, k2)."""
        if not (-self.nx // 2 <= k1 < self.nx // 2 and -self.ny // 2 <= k2 < self.ny // 2):
            raise ConfigurationError(f"mode ({k1},{k2}) outside the grid")
        return (k1 % self.nx, k2 % self.ny)


@lru_cache(maxsize=64)
def _tables(grid: GridSpec):
    k1 = np.fft.fftfreq(grid.nx, d=1.0 / grid.nx).reshape(grid.nx, 1)
    k2 = np.fft.fftfreq(grid.ny, d=1.0 / grid.ny).reshape(1, grid.ny)
    scale = 2.0 * np.pi / grid.period
    xi1 = scale * k1
    xi2 = scale * k2
    xi_abs = np.sqrt(xi1**2 + xi2**2)
    bessel = np.sqrt(1.0 + xi_abs**2)
    f = grid.dealias_fraction
    mask = (np.abs(k1) < grid.nx * f / 2.0) & (np.abs(k2) < grid.ny * f / 2.0)
    return k1, k2, xi1, xi2, xi_abs, bessel, mask


@dataclass
class SpectralField2D:
    """Complex Fourier coefficients on a GridSpec, plus a reality flag."""

    grid: GridSpec
    coeffs: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ShapeError(
                f"coefficient array {self.coeffs.shape} does not match grid {self.grid.shape}"
            )
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    # -- constructors --------------------------------------------------

    @classmethod
    def zeros(cls, grid: GridSpec, is_real: bool = True) -> "SpectralField2D":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), is_real)

    @classmethod
    def from_physical(cls, grid: GridSpec, samples: np.ndarray) -> "SpectralField2D":
        """Build from point samples on the nx*ny grid (x varies along axis 0)."""
        samples = np.asarray(samples)
        if samples.shape != grid.shape:
            raise ShapeError(f"sample array {samples.shape} does not match grid {grid.shape}")
        coeffs = np.fft.fft2(samples) / (grid.nx * grid.ny)
        return cls(grid, coeffs, is_real=bool(np.isrealobj(samples)))

    @classmethod
    def single_mode(
        cls, grid: GridSpec, k1: int, k2: int, amplitude: complex = 1.0, is_real: bool = False
    ) -> "SpectralField2D":
        """The plane wave amplitude * exp(i xi_k . x) (unit L2 norm for |amplitude|=1)."""
        c = np.zeros(grid.shape, dtype=np.complex128)
        c[grid.mode_index(k1, k2)] = amplitude
        return cls(grid, c, is_real)

    # -- basic queries --------------------------------------------------

    def to_physical(self) -> np.ndarray:
        out = np.fft.ifft2(self.coeffs) * (self.grid.nx * self.grid.ny)
        return out.real if self.is_real else out

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def mean(self) -> complex:
        m = self.coeffs[0, 0]
        return float(m.real) if self.is_real else complex(m)

    def hermitian_defect(self) -> float:
        """Relative departure from conj-symmetry c(-k) = conj(c(k))."""
        c = self.coeffs
        c_neg = np.roll(c[::-1, ::-1], shift=(1, 1), axis=(0, 1))
        scale = np.max(np.abs(c)) or 1.0
        return float(np.max(np.abs(c - np.conj(c_neg))) / scale)

    def copy(self) -> "SpectralField2D":
        return SpectralField2D(self.grid, self.coeffs.copy(), self.is_real)

    # -- arithmetic (coefficients are linear data) ----------------------

    def __add__(self, other: "SpectralField2D") -> "SpectralField2D":
        _require_same_grid(self, other)
        return SpectralField2D(self.grid, self.coeffs + other.coeffs, self.is_real and other.is_real)

    def __sub__(self, other: "SpectralField2D") -> "SpectralField2D":
        _require_same_grid(self, other)
        return SpectralField2D(self.grid, self.coeffs - other.coeffs, self.is_real and other.is_real)

    def __mul__(self, scalar: complex) -> "SpectralField2D":
        real = self.is_real and np.isreal(scalar)
        return SpectralField2D(self.grid, self.coeffs * scalar, bool(real))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField2D":
        return SpectralField2D(self.grid, -self.coeffs, self.is_real)

    def conj(self) -> "SpectralField2D":
        """Complex conjugate (in physical space)."""
        c_neg = np.roll(self.coeffs[::-1, ::-1], shift=(1, 1), axis=(0, 1))
        return SpectralField2D(self.grid, np.conj(c_neg), self.is_real)

    def real_part(self) -> "SpectralField2D":
        return SpectralField2D(self.grid, 0.5 * (self.coeffs + self.conj().coeffs), True)

    def imag_part(self) -> "SpectralField2D":
        return SpectralField2D(self.grid, -0.5j * (self.coeffs - self.conj().coeffs), True)


def _require_same_grid(u: SpectralField2D, v: SpectralField2D):
    if u.grid != v.grid:
        raise ShapeError(f"grid mismatch: {u.grid} vs {v.grid}")


# ---------------------------------------------------------------------------
# Fourier multipliers
# ---------------------------------------------------------------------------

_SYMBOL_KINDS = ("frac_grad", "bessel", "partial", "riesz", "inv_laplace")


@dataclass(frozen=True)
class SymbolSpec:
    """Descriptor of a scalar Fourier multiplier.

    kind/alpha/j select one of |grad|^alpha, <grad>^alpha, d_j, R_j or
    (-Laplace)^{-1}; zero_mode_rule fixes what happens to the k=0 mode
    where the homogeneous symbols are singular or undefined.
    """

    kind: str
    alpha: float = 0.0
    j: int = 1
    zero_mode_rule: str = "zero"

    def __post_init__(self):
        if self.kind not in _SYMBOL_KINDS:
            raise ConfigurationError(f"unknown symbol kind {self.kind!r}")
        if self.zero_mode_rule not in ("zero", "identity"):
            raise ConfigurationError(f"unknown zero_mode_rule {self.zero_mode_rule!r}")
        if self.kind in ("partial", "riesz") and self.j not in (1, 2):
            raise ConfigurationError(f"component j={self.j} must be 1 or 2")
        singular = (
            self.kind in ("riesz", "inv_laplace")
            or (self.kind == "frac_grad" and self.alpha < 0)
        )
        if singular and self.zero_mode_rule != "zero":
            raise ConfigurationError(
                f"{self.kind} (alpha={self.alpha}) is singular at k=0 and "
                "must carry zero_mode_rule='zero'"
            )


def frac_grad(alpha: float) -> SymbolSpec:
    return SymbolSpec("frac_grad", alpha=alpha)


def bessel(alpha: float, zero_mode_rule: str = "identity") -> SymbolSpec:
    return SymbolSpec("bessel", alpha=alpha, zero_mode_rule=zero_mode_rule)


def partial(j: int) -> SymbolSpec:
    return SymbolSpec("partial", j=j)


def riesz(j: int) -> SymbolSpec:
    return SymbolSpec("riesz", j=j)


def inv_laplace() -> SymbolSpec:
    return SymbolSpec("inv_laplace")


def symbol_values(grid: GridSpec, sym: SymbolSpec) -> np.ndarray:
    """The multiplier evaluated on the (nx, ny) frequency lattice."""
    xi = grid.xi_abs
    with np.errstate(divide="ignore", invalid="ignore"):
        if sym.kind == "frac_grad":
            m = np.where(xi > 0, xi**sym.alpha, 0.0).astype(np.complex128)
        elif sym.kind == "bessel":
            m = (grid.bessel**sym.alpha).astype(np.complex128)
        elif sym.kind == "partial":
            m = 1j * (grid.xi1 if sym.j == 1 else grid.xi2) * np.ones_like(xi)
        elif sym.kind == "riesz":
            xij = grid.xi1 if sym.j == 1 else grid.xi2
            m = np.where(xi > 0, 1j * xij / np.where(xi > 0, xi, 1.0), 0.0)
            m = m * np.ones_like(xi)
        elif sym.kind == "inv_laplace":
            m = np.where(xi > 0, 1.0 / np.where(xi > 0, xi**2, 1.0), 0.0).astype(np.complex128)
        else:  # pragma: no cover - guarded by SymbolSpec validation
            raise ConfigurationError(sym.kind)
    if sym.zero_mode_rule == "identity":
        m = m.copy()
        m[0, 0] = 1.0
    else:
        if sym.kind == "bessel":
            # <0>^alpha = 1; an explicit zero rule overrides it.
            m = m.copy()
            m[0, 0] = 0.0
    return m


def apply_symbol(u: SpectralField2D, sym: SymbolSpec) -> SpectralField2D:
    """Coefficient-wise multiplication by the symbol."""
    m = symbol_values(u.grid, sym)
    # partial/riesz have odd imaginary symbols: they preserve real fields.
    keeps_real = u.is_real
    return SpectralField2D(u.grid, u.coeffs * m, keeps_real)


# ---------------------------------------------------------------------------
# Dealiased products and the Q12 null form
# ---------------------------------------------------------------------------


def dealias(u: SpectralField2D) -> SpectralField2D:
    """Zero every coefficient outside the retained 2/3 band."""
    return SpectralField2D(u.grid, u.coeffs * u.grid.dealias_mask, u.is_real)


def _product_coeffs(grid: GridSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = grid.nx * grid.ny
    pa = np.fft.ifft2(a) * n
    pb = np.fft.ifft2(b) * n
    return (np.fft.fft2(pa * pb) / n) * grid.dealias_mask


def pointwise_product(u: SpectralField2D, v: SpectralField2D) -> SpectralField2D:
    """Physical-space product followed by the 2/3-rule mask.

    Exact (equals the truncated convolution sum_{k'} u(k') v(k-k')) when
    both factors are supported inside the retained band.
    """
    _require_same_grid(u, v)
    coeffs = _product_coeffs(u.grid, u.coeffs, v.coeffs)
    return SpectralField2D(u.grid, coeffs, u.is_real and v.is_real)


def null_form_q12(u: SpectralField2D, v: SpectralField2D) -> SpectralField2D:
    """Q12(u, v) = d1(u) d2(v) - d2(u) d1(v), dealiased.

    Antisymmetric; annihilates pairs with parallel gradients.
    """
    _require_same_grid(u, v)
    g = u.grid
    d1u = (1j * g.xi1) * u.coeffs
    d2u = (1j * g.xi2) * u.coeffs
    d1v = (1j * g.xi1) * v.coeffs
    d2v = (1j * g.xi2) * v.coeffs
    coeffs = _product_coeffs(g, d1u, d2v) - _product_coeffs(g, d2u, d1v)
    return SpectralField2D(g, coeffs, u.is_real and v.is_real)


def band_limit(u: SpectralField2D, k_max: float) -> SpectralField2D:
    """Zero all modes with max(|k1|, |k2|) > k_max (integer mode units)."""
    g = u.grid
    keep = (np.abs(g.k1) <= k_max) & (np.abs(g.k2) <= k_max)
    return SpectralField2D(g, u.coeffs * keep, u.is_real)


def with_grid(u: SpectralField2D, grid: GridSpec) -> SpectralField2D:
    """Re-embed the coefficients of `u` on a finer grid (same period)."""
    if grid.period != u.grid.period:
        raise ShapeError("period mismatch in grid embedding")
    if grid.nx < u.grid.nx or grid.ny < u.grid.ny:
        raise ShapeError("target grid must be at least as fine")
    c = np.zeros(grid.shape, dtype=np.complex128)
    src = u.coeffs
    hx, hy = u.grid.nx // 2, u.grid.ny // 2
    for a, sa in ((slice(0, hx), slice(0, hx)), (slice(-hx, None), slice(-hx, None))):
        for b, sb in ((slice(0, hy), slice(0, hy)), (slice(-hy, None), slice(-hy, None))):
            c[a, b] = src[sa, sb]
    return SpectralField2D(grid, c, u.is_real)


def random_band_limited(
    grid: GridSpec,
    rng: np.random.Generator,
    k_max: float | None = None,
    is_real: bool = False,
    decay: float = 0.0,
) -> SpectralField2D:
    """Gaussian random field supported on max(|k1|,|k2|) <= k_max.

    `decay` > 0 multiplies amplitudes by <xi>^-decay.  Real fields are
    produced by generating random samples in physical space.
    """
    if k_max is None:
        k_max = min(grid.nx, grid.ny) * grid.dealias_fraction / 2.0 - 1.0
    if is_real:
        samples = rng.standard_normal(grid.shape)
        field = SpectralField2D.from_physical(grid, samples)
    else:
        c = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        field = SpectralField2D(grid, c, is_real=False)
    if decay:
        field = SpectralField2D(field.grid, field.coeffs * grid.bessel ** (-decay), field.is_real)
    return band_limit(field, k_max)


def replace_coeffs(u: SpectralField2D, coeffs: np.ndarray) -> SpectralField2D:
    return replace(u, coeffs=coeffs)
