"""Discrete norms: Sobolev, mixed Lp_x Lq_t, and weighted space-time L2.

Space-time fields carry the coefficients of the *windowed* signal: time
slices are multiplied by a fixed smooth window (raised cosine by
default) before the temporal transform, and every norm in this module
is a norm of that windowed object.  Ratios must always compare
quantities computed with the same window; the window is recorded on the
field for that reason.

As in the spatial module, Lebesgue norms use normalized (mean) measure
in both x and t, which makes the space-time Plancherel identity exact:
||u||_{L2_x L2_t}^2 = sum |u_hat(k, omega)|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ShapeError
from .spectral import GridSpec, SpectralField2D

__all__ = [
    "XsbSpec",
    "SpaceTimeField",
    "sobolev_norm",
    "mixed_norm",
    "xsb_norm",
    "make_window",
]


def sobolev_norm(u: SpectralField2D, s: float, homogeneous: bool = False) -> float:
    """H^s (or homogeneous H-dot^s) norm.

    The homogeneous weight |xi|^s is undefined on the mean mode; that
    mode is always excluded from the homogeneous sum.
    """
    g = u.grid
    asq = np.abs(u.coeffs) ** 2
    if homogeneous:
        w = g.xi_abs.copy()
        w[0, 0] = 1.0
        total = np.sum(w ** (2.0 * s) * asq) - asq[0, 0]
    else:
        total = np.sum(g.bessel ** (2.0 * s) * asq)
    return float(np.sqrt(max(total, 0.0)))


# ---------------------------------------------------------------------------
# Space-time fields
# ---------------------------------------------------------------------------

_WINDOWS = ("hann", "none")


def make_window(nt: int, kind: str = "hann") -> np.ndarray:
    """Temporal taper evaluated on the nt uniform samples of [0, T)."""
    if kind == "hann":
        # raised cosine, compactly supported in the open window
        j = np.arange(nt)
        return np.sin(np.pi * j / nt) ** 2
    if kind == "none":
        return np.ones(nt)
    raise ConfigurationError(f"unknown window kind {kind!r}")


@dataclass
class SpaceTimeField:
    """Complex coefficients over (k1, k2, omega) of a windowed signal."""

    grid: GridSpec
    nt: int
    t_span: float
    coeffs: np.ndarray
    window: str = "hann"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expect = (self.grid.nx, self.grid.ny, self.nt)
        if self.coeffs.shape != expect:
            raise ShapeError(f"coefficients {self.coeffs.shape} do not match {expect}")
        if self.window not in _WINDOWS:
            raise ConfigurationError(f"unknown window kind {self.window!r}")

    @classmethod
    def from_slices(
        cls,
        slices: list[SpectralField2D],
        t_span: float,
        window: str = "hann",
        meta: dict | None = None,
    ) -> "SpaceTimeField":
        """Window the time samples and transform along t."""
        nt = len(slices)
        grid = slices[0].grid
        stack = np.stack([s.coeffs for s in slices], axis=-1)
        w = make_window(nt, window)
        coeffs = np.fft.fft(stack * w, axis=-1) / nt
        return cls(grid, nt, t_span, coeffs, window, meta or {})

    @classmethod
    def from_coefficient_array(
        cls,
        grid: GridSpec,
        t_span: float,
        coeffs: np.ndarray,
        window: str = "hann",
        meta: dict | None = None,
    ) -> "SpaceTimeField":
        return cls(grid, coeffs.shape[-1], t_span, coeffs.astype(np.complex128), window, meta or {})

    @property
    def omega(self) -> np.ndarray:
        """Temporal frequencies on the lattice (2 pi / t_span) Z, shape (nt,)."""
        return np.fft.fftfreq(self.nt, d=1.0 / self.nt) * (2.0 * np.pi / self.t_span)

    def times(self) -> np.ndarray:
        return self.t_span * np.arange(self.nt) / self.nt

    def to_samples(self) -> np.ndarray:
        """Physical samples of the windowed field, shape (nx, ny, nt)."""
        slices = np.fft.ifft(self.coeffs, axis=-1) * self.nt
        return np.fft.ifft2(slices, axes=(0, 1)) * (self.grid.nx * self.grid.ny)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def scaled(self, factor: complex) -> "SpaceTimeField":
        return SpaceTimeField(
            self.grid, self.nt, self.t_span, self.coeffs * factor, self.window, dict(self.meta)
        )


def _lp_reduce(values: np.ndarray, p: float, axis) -> np.ndarray:
    """Discrete Lp norm with respect to the normalized measure along `axis`."""
    if np.isinf(p):
        return np.max(values, axis=axis)
    return np.mean(values**p, axis=axis) ** (1.0 / p)


def mixed_norm(u: SpaceTimeField, p: float, q: float, order: str = "x_then_t") -> float:
    """Nested Lp/Lq quadrature of the windowed samples.

    order='x_then_t' is the Lp_x Lq_t norm (inner integral in time,
    outer in space); 't_then_x' is Lq_t Lp_x.
    """
    if not (p >= 1 and q >= 1):
        raise ConfigurationError("p, q must lie in [1, inf]")
    absu = np.abs(u.to_samples())
    if order == "x_then_t":
        inner = _lp_reduce(absu, q, axis=2)  # over time at each point
        return float(_lp_reduce(inner, p, axis=(0, 1)))
    if order == "t_then_x":
        inner = _lp_reduce(absu, p, axis=(0, 1))  # over space at each time
        return float(_lp_reduce(inner, q, axis=0))
    raise ConfigurationError(f"unknown order {order!r}")


# ---------------------------------------------------------------------------
# X^{s,b} norms
# ---------------------------------------------------------------------------

_WEIGHTS = ("wave", "elliptic", "halfwave_plus", "halfwave_minus")


@dataclass(frozen=True)
class XsbSpec:
    """Descriptor of a weighted space-time norm.

    weight selects the modulation variable: <|omega| - |xi|> (wave),
    <omega> (elliptic, for the curl-free potential), or
    <omega +/- |xi|> (half waves).  eps records the small exponent used
    to realize "+"-type exponents; it is bookkeeping carried along into
    reports, not applied implicitly.
    """

    s: float
    b: float
    weight: str = "wave"
    eps: float = 0.01

    def __post_init__(self):
        if self.weight not in _WEIGHTS:
            raise ConfigurationError(f"unknown weight kind {self.weight!r}")
        if not (0.0 < self.eps <= 0.1):
            raise ConfigurationError(f"eps={self.eps} must lie in (0, 0.1]")


def _modulation(u: SpaceTimeField, weight: str) -> np.ndarray:
    om = u.omega.reshape(1, 1, u.nt)
    xi = u.grid.xi_abs[:, :, None]
    if weight == "wave":
        arg = np.abs(om) - xi
    elif weight == "elliptic":
        arg = om * np.ones_like(xi)
    elif weight == "halfwave_plus":
        arg = om + xi
    elif weight == "halfwave_minus":
        arg = om - xi
    else:  # pragma: no cover
        raise ConfigurationError(weight)
    return np.sqrt(1.0 + arg**2)


def xsb_norm(u: SpaceTimeField, spec: XsbSpec) -> float:
    """(sum <xi>^{2s} W^{2b} |u_hat|^2)^{1/2} over the space-time lattice."""
    bess = u.grid.bessel[:, :, None]
    w = _modulation(u, spec.weight)
    total = np.sum(bess ** (2.0 * spec.s) * w ** (2.0 * spec.b) * np.abs(u.coeffs) ** 2)
    return float(np.sqrt(total))


def window_bandwidth_factor(nt: int, t_span: float, b: float, window: str = "hann") -> float:
    """RMS modulation spread <omega>^b of the bare window.

    For a windowed free wave the X^{0,b} norm is approximately the L2
    norm times this factor; used to sanity-check window-induced spread.
    """
    w = make_window(nt, window)
    what = np.fft.fft(w) / nt
    om = np.fft.fftfreq(nt, d=1.0 / nt) * (2.0 * np.pi / t_span)
    weights = (1.0 + om**2) ** b * np.abs(what) ** 2
    return float(np.sqrt(np.sum(weights) / np.sum(np.abs(what) ** 2)))
