"""Gauge-state representation and the identities behind the reformulation.

The dynamical state in temporal gauge consists of half-waves for the
scalar field and for the divergence-free potential, plus the curl-free
potential itself (whose time derivative is slaved to the current).

Half-wave convention (fixed package-wide): with <D> = <grad>,

    u_pm = (u -/+ i <D>^{-1} u_t) / 2
    u    = u_+ + u_-,      u_t = i <D> (u_+ - u_-)

so a pure plus-wave mode evolves freely as exp(+i <xi> t).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import PreconditionError, ShapeError
from .spectral import (
    GridSpec,
    SpectralField2D,
    apply_symbol,
    bessel,
    frac_grad,
    inv_laplace,
    partial,
    pointwise_product,
    null_form_q12,
    riesz,
    symbol_values,
)

Pair = tuple[SpectralField2D, SpectralField2D]

__all__ = [
    "GaugeState",
    "RegularityTriple",
    "ObservableFields",
    "helmholtz_decompose",
    "halfwave_split",
    "halfwave_reconstruct",
    "compatibility_curlfree",
    "gauss_residual",
    "verify_null_identities",
    "check_admissibility",
]


# ---------------------------------------------------------------------------
# Regularity exponents and the admissibility predicate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularityTriple:
    """Sobolev exponents (s, r, l) plus the small weight exponent for A^cf."""

    s: float
    r: float
    l: float
    eps_tilde: float = 0.01

    def __post_init__(self):
        if not (0.0 < self.eps_tilde < 0.25):
            raise ValueError(f"eps_tilde={self.eps_tilde} must lie in (0, 1/4)")


# (name, predicate) pairs; strict vs non-strict exactly as stated.
_ADMISSIBILITY_CONSTRAINTS = (
    ("r > 1/4", lambda s, r, l: r > 0.25),
    ("l >= s", lambda s, r, l: l >= s),
    ("s > 1/2 + l/8", lambda s, r, l: s > 0.5 + l / 8.0),
    ("s > 1/4 + l/2", lambda s, r, l: s > 0.25 + l / 2.0),
    ("s > 1/4 + r/2", lambda s, r, l: s > 0.25 + r / 2.0),
    ("s > 7/16 + r/4", lambda s, r, l: s > 7.0 / 16.0 + r / 4.0),
    ("r + 1/2 > s", lambda s, r, l: r + 0.5 > s),
    ("s >= r - 1/2", lambda s, r, l: s >= r - 0.5),
    ("s > l - 1/2", lambda s, r, l: s > l - 0.5),
)


def check_admissibility(reg: RegularityTriple) -> tuple[bool, list[str]]:
    """Evaluate the local well-posedness inequalities; name every violation."""
    violated = [
        name
        for name, pred in _ADMISSIBILITY_CONSTRAINTS
        if not pred(reg.s, reg.r, reg.l)
    ]
    return (not violated, violated)


# ---------------------------------------------------------------------------
# Gauge state
# ---------------------------------------------------------------------------


@dataclass
class GaugeState:
    """Full dynamical state at one instant of time."""

    phi_plus: SpectralField2D
    phi_minus: SpectralField2D
    a_df_plus: Pair
    a_df_minus: Pair
    a_cf: Pair
    t: float = 0.0
    mass: float = 1.0
    eps_tilde: float = 0.01

    @property
    def grid(self) -> GridSpec:
        return self.phi_plus.grid

    def fields(self) -> list[SpectralField2D]:
        return [
            self.phi_plus,
            self.phi_minus,
            self.a_df_plus[0],
            self.a_df_plus[1],
            self.a_df_minus[0],
            self.a_df_minus[1],
            self.a_cf[0],
            self.a_cf[1],
        ]

    def phi(self) -> SpectralField2D:
        return self.phi_plus + self.phi_minus

    def phi_t(self) -> SpectralField2D:
        return 1j * apply_symbol(self.phi_plus - self.phi_minus, bessel(1.0))

    def a_df(self) -> Pair:
        return tuple(p + m for p, m in zip(self.a_df_plus, self.a_df_minus))

    def a_df_t(self) -> Pair:
        return tuple(
            1j * apply_symbol(p - m, bessel(1.0))
            for p, m in zip(self.a_df_plus, self.a_df_minus)
        )

    def a_total(self) -> Pair:
        adf = self.a_df()
        return (adf[0] + self.a_cf[0], adf[1] + self.a_cf[1])

    def copy(self) -> "GaugeState":
        return replace(
            self,
            phi_plus=self.phi_plus.copy(),
            phi_minus=self.phi_minus.copy(),
            a_df_plus=tuple(f.copy() for f in self.a_df_plus),
            a_df_minus=tuple(f.copy() for f in self.a_df_minus),
            a_cf=tuple(f.copy() for f in self.a_cf),
        )

    def validate(self, tol: float = 1e-11):
        """Check the structural invariants (df/cf character, reality)."""
        adf = self.a_df()
        div = divergence(adf)
        h1 = _pair_h1_norm(adf)
        if h1 > 0 and div.l2_norm() > tol * h1:
            raise PreconditionError("a_df is not divergence-free to tolerance")
        cf_curl = curl(self.a_cf)
        h1c = _pair_h1_norm(self.a_cf)
        if h1c > 0 and cf_curl.l2_norm() > tol * h1c:
            raise PreconditionError("a_cf is not curl-free to tolerance")
        for comp in self.a_cf:
            if comp.hermitian_defect() > 1e-12:
                raise PreconditionError("a_cf components must be real fields")


def divergence(a: Pair) -> SpectralField2D:
    return apply_symbol(a[0], partial(1)) + apply_symbol(a[1], partial(2))


def curl(a: Pair) -> SpectralField2D:
    return apply_symbol(a[1], partial(1)) - apply_symbol(a[0], partial(2))


def _pair_h1_norm(a: Pair) -> float:
    b = bessel(1.0)
    return float(
        np.hypot(apply_symbol(a[0], b).l2_norm(), apply_symbol(a[1], b).l2_norm())
    )


# ---------------------------------------------------------------------------
# Helmholtz decomposition
# ---------------------------------------------------------------------------


def helmholtz_decompose(a: Pair) -> tuple[Pair, Pair]:
    """Split a = a_df + a_cf with div a_df = 0, curl a_cf = 0.

    a_df = (R2 w, -R1 w) with w = R1 a2 - R2 a1, and
    a_cf = -(R1 v, R2 v) with v = R1 a1 + R2 a2; the mean mode is
    carried by a_cf.
    """
    if a[0].grid != a[1].grid:
        raise ShapeError("components live on different grids")
    r1a1 = apply_symbol(a[0], riesz(1))
    r2a1 = apply_symbol(a[0], riesz(2))
    r1a2 = apply_symbol(a[1], riesz(1))
    r2a2 = apply_symbol(a[1], riesz(2))
    w = r1a2 - r2a1
    v = r1a1 + r2a2
    a_df = (apply_symbol(w, riesz(2)), -1.0 * apply_symbol(w, riesz(1)))
    a_cf_0 = -1.0 * apply_symbol(v, riesz(1))
    a_cf_1 = -1.0 * apply_symbol(v, riesz(2))
    # Riesz transforms drop the mean; reattach it on the curl-free part.
    a_cf_0.coeffs[0, 0] = a[0].coeffs[0, 0]
    a_cf_1.coeffs[0, 0] = a[1].coeffs[0, 0]
    return a_df, (a_cf_0, a_cf_1)


def leray_project(a: Pair) -> Pair:
    """P a: the divergence-free part."""
    return helmholtz_decompose(a)[0]


# ---------------------------------------------------------------------------
# Half waves
# ---------------------------------------------------------------------------


def halfwave_split(
    u: SpectralField2D, u_t: SpectralField2D
) -> tuple[SpectralField2D, SpectralField2D]:
    """u_pm = (u -/+ i <D>^{-1} u_t) / 2."""
    if u.grid != u_t.grid:
        raise ShapeError("u and u_t live on different grids")
    w = 1j * apply_symbol(u_t, bessel(-1.0))
    plus = 0.5 * (u - w)
    minus = 0.5 * (u + w)
    return plus, minus


def halfwave_reconstruct(
    u_plus: SpectralField2D, u_minus: SpectralField2D
) -> tuple[SpectralField2D, SpectralField2D]:
    """Inverse of halfwave_split: u = u_+ + u_-, u_t = i <D>(u_+ - u_-)."""
    if u_plus.grid != u_minus.grid:
        raise ShapeError("half waves live on different grids")
    u = u_plus + u_minus
    u_t = 1j * apply_symbol(u_plus - u_minus, bessel(1.0))
    return u, u_t


def halfwave_split_pair(a: Pair, a_t: Pair) -> tuple[Pair, Pair]:
    s0 = halfwave_split(a[0], a_t[0])
    s1 = halfwave_split(a[1], a_t[1])
    return (s0[0], s1[0]), (s0[1], s1[1])


# ---------------------------------------------------------------------------
# Bilinear currents, compatibility, Gauss residual
# ---------------------------------------------------------------------------


def im_product_conj(u: SpectralField2D, v: SpectralField2D) -> SpectralField2D:
    """Dealiased Im(u * conj(v)) as a real field."""
    out = pointwise_product(u, v.conj())
    return out.imag_part()


def compatibility_curlfree(phi0: SpectralField2D, phi1: SpectralField2D) -> Pair:
    """The curl-free part of dA/dt(0) forced by the Gauss constraint:

        a'_cf = -(-Laplace)^{-1} grad Im(phi0 conj(phi1))

    Its divergence equals the mean-free part of Im(phi0 conj(phi1)); the
    mean itself is the torus obstruction and is reported separately by
    the diagnostics.
    """
    if phi0.grid != phi1.grid:
        raise ShapeError("phi0 and phi1 live on different grids")
    j = im_product_conj(phi0, phi1)
    pot = apply_symbol(j, inv_laplace())
    return (
        -1.0 * apply_symbol(pot, partial(1)),
        -1.0 * apply_symbol(pot, partial(2)),
    )


def a_cf_time_derivative(state: GaugeState) -> Pair:
    """dA^cf/dt slaved to the current: -(-Laplace)^{-1} grad Im(phi d_t phi bar)."""
    j = im_product_conj(state.phi(), state.phi_t())
    pot = apply_symbol(j, inv_laplace())
    return (
        -1.0 * apply_symbol(pot, partial(1)),
        -1.0 * apply_symbol(pot, partial(2)),
    )


def gauss_residual(state: GaugeState) -> SpectralField2D:
    """Pointwise violation of the Gauss law,  d^j F_{j0} + Im(phi conj(D_0 phi)).

    In temporal gauge F_{j0} = -d_t A_j, so the residual field is
    Im(phi d_t phi bar) - div(d_t A), with d_t A reconstructed from the
    half waves (df part) and from the slaved curl-free equation.  The
    reformulation enforces the constraint on nonzero modes by
    construction; the k=0 coefficient carries the torus mean-mode
    obstruction.
    """
    j = im_product_conj(state.phi(), state.phi_t())
    da_df = state.a_df_t()
    pot = apply_symbol(j, inv_laplace())
    da_cf = (
        -1.0 * apply_symbol(pot, partial(1)),
        -1.0 * apply_symbol(pot, partial(2)),
    )
    da = (da_df[0] + da_cf[0], da_df[1] + da_cf[1])
    return j - divergence(da)


def gauss_residual_split(state: GaugeState) -> tuple[float, float, float]:
    """(L2 of nonzero modes, mean-mode value, relative size).

    The relative size divides by the L2 norm of the current density
    Im(phi d_t phi bar), the natural scale of the two cancelling terms.
    """
    res = gauss_residual(state)
    mean = float(res.coeffs[0, 0].real)
    c = res.coeffs.copy()
    c[0, 0] = 0.0
    l2 = float(np.sqrt(np.sum(np.abs(c) ** 2)))
    j = im_product_conj(state.phi(), state.phi_t())
    scale = max(j.l2_norm(), 1e-300)
    return l2, mean, l2 / scale


def initial_constraint_residual(
    phi0: SpectralField2D, phi1: SpectralField2D, a_t: Pair
) -> SpectralField2D:
    """Data-level Gauss check:  div a' - Im(phi0 conj(phi1)).

    Vanishes on nonzero modes exactly when the curl-free part of a'
    comes from compatibility_curlfree.
    """
    return divergence(a_t) - im_product_conj(phi0, phi1)


def build_state(
    phi0: SpectralField2D,
    phi1: SpectralField2D,
    a: Pair,
    a_t: Pair,
    t: float = 0.0,
    mass: float = 1.0,
    eps_tilde: float = 0.01,
) -> GaugeState:
    """Assemble a GaugeState from raw initial data (phi, d_t phi, A, d_t A).

    A is Helmholtz-decomposed; only the divergence-free part of d_t A is
    dynamical (the curl-free part is slaved to the current by the Gauss
    law, cf. compatibility_curlfree).
    """
    a_df, a_cf = helmholtz_decompose(a)
    a_t_df = leray_project(a_t)
    phi_plus, phi_minus = halfwave_split(phi0, phi1)
    adf_plus, adf_minus = halfwave_split_pair(a_df, a_t_df)
    return GaugeState(
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        a_df_plus=adf_plus,
        a_df_minus=adf_minus,
        a_cf=a_cf,
        t=t,
        mass=mass,
        eps_tilde=eps_tilde,
    )


# ---------------------------------------------------------------------------
# Null-form identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NullIdentityReport:
    """Relative L2 discrepancies of the three reformulation identities."""

    coupling: float  # A^df . grad(phi) = Q12(phi, |D|^{-1}(R1 A2 - R2 A1))
    current_1: float  # P(phi grad(phi) bar)_1 = -2i R2 |D|^{-1} Q12(Re phi, Im phi)
    current_2: float  # P(phi grad(phi) bar)_2 = +2i R1 |D|^{-1} Q12(Re phi, Im phi)

    def max_error(self) -> float:
        return max(self.coupling, self.current_1, self.current_2)


def _rel_l2(lhs: SpectralField2D, rhs: SpectralField2D, input_scale: float) -> float:
    # Floor the denominator at a fraction of the generic term size so the
    # ratio stays meaningful when both sides cancel to roundoff.
    scale = max(lhs.l2_norm(), rhs.l2_norm(), 1e-4 * input_scale, 1e-300)
    return (lhs - rhs).l2_norm() / scale


def verify_null_identities(phi: SpectralField2D, a_df: Pair) -> NullIdentityReport:
    """Evaluate both sides of the three null-structure identities."""
    div = divergence(a_df)
    h1 = _pair_h1_norm(a_df)
    if h1 > 0 and div.l2_norm() > 1e-8 * h1:
        raise PreconditionError("a_df must be divergence-free")

    # coupling term in the scalar equation
    d1phi = apply_symbol(phi, partial(1))
    d2phi = apply_symbol(phi, partial(2))
    lhs_a = pointwise_product(a_df[0], d1phi) + pointwise_product(a_df[1], d2phi)
    w = apply_symbol(a_df[1], riesz(1)) - apply_symbol(a_df[0], riesz(2))
    psi = apply_symbol(w, frac_grad(-1.0))
    rhs_a = null_form_q12(phi, psi)

    # projected current in the potential equation
    grad_conj = (
        pointwise_product(phi, d1phi.conj()),
        pointwise_product(phi, d2phi.conj()),
    )
    lhs_p = leray_project(grad_conj)
    q = apply_symbol(null_form_q12(phi.real_part(), phi.imag_part()), frac_grad(-1.0))
    rhs_1 = -2j * apply_symbol(q, riesz(2))
    rhs_2 = 2j * apply_symbol(q, riesz(1))

    grad_norm = float(np.hypot(d1phi.l2_norm(), d2phi.l2_norm()))
    a_norm = float(np.hypot(a_df[0].l2_norm(), a_df[1].l2_norm()))
    coupling_scale = a_norm * grad_norm
    current_scale = phi.l2_norm() * grad_norm
    return NullIdentityReport(
        coupling=_rel_l2(lhs_a, rhs_a, coupling_scale),
        current_1=_rel_l2(lhs_p[0], rhs_1, current_scale),
        current_2=_rel_l2(lhs_p[1], rhs_2, current_scale),
    )


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------


@dataclass
class ObservableFields:
    """Real diagnostic fields derived from one state."""

    f12: SpectralField2D
    e_field: Pair
    gauss_residual_field: SpectralField2D
    energy_density: SpectralField2D
    charge_density: SpectralField2D


def observables(state: GaugeState) -> ObservableFields:
    a = state.a_total()
    f12 = curl(a)
    da_df = state.a_df_t()
    da_cf = a_cf_time_derivative(state)
    e1 = -1.0 * (da_df[0] + da_cf[0])
    e2 = -1.0 * (da_df[1] + da_cf[1])
    phi = state.phi()
    phi_t = state.phi_t()

    grid = state.grid
    phi_p = phi.to_physical()
    phi_t_p = phi_t.to_physical()
    a_p = [c.to_physical().real for c in a]
    e_p = [e1.to_physical().real, e2.to_physical().real]
    f12_p = f12.to_physical().real
    d_phi = [
        apply_symbol(phi, partial(1)).to_physical(),
        apply_symbol(phi, partial(2)).to_physical(),
    ]
    cov = [d_phi[j] + 1j * a_p[j] * phi_p for j in range(2)]
    energy = 0.5 * (
        e_p[0] ** 2
        + e_p[1] ** 2
        + f12_p**2
        + np.abs(cov[0]) ** 2
        + np.abs(cov[1]) ** 2
        + np.abs(phi_t_p) ** 2
        + state.mass**2 * np.abs(phi_p) ** 2
    )
    charge = np.imag(np.conj(phi_p) * phi_t_p)
    return ObservableFields(
        f12=f12,
        e_field=(e1, e2),
        gauss_residual_field=gauss_residual(state),
        energy_density=SpectralField2D.from_physical(grid, energy),
        charge_density=SpectralField2D.from_physical(grid, charge),
    )
