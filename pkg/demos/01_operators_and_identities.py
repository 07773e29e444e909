#!/usr/bin/env python3
"""Walk through the operator layer: multipliers, the Helmholtz split,
and the null-form identities that power the gauge-decomposed system.

Run:  python3 demos/01_operators_and_identities.py
"""

import numpy as np

from mkg2d import (
    GridSpec,
    apply_symbol,
    helmholtz_decompose,
    null_form_q12,
    pointwise_product,
    verify_null_identities,
)
from mkg2d.gauge import curl, divergence
from mkg2d.spectral import bessel, frac_grad, random_band_limited, riesz

rng = np.random.default_rng(0)
grid = GridSpec(nx=64, ny=64)
print(f"grid: {grid.nx} x {grid.ny}, period {grid.period:.6f}, "
      f"retained band |k| <= {int(grid.nx * grid.dealias_fraction / 2) - 0}")

# --- fractional calculus round trip -----------------------------------
u = random_band_limited(grid, rng)
u.coeffs[0, 0] = 0.0
roundtrip = apply_symbol(apply_symbol(u, frac_grad(0.5)), frac_grad(-0.5))
print(f"|grad|^1/2 then |grad|^-1/2 error: {(roundtrip - u).l2_norm() / u.l2_norm():.2e}")

r1r1 = apply_symbol(apply_symbol(u, riesz(1)), riesz(1))
r2r2 = apply_symbol(apply_symbol(u, riesz(2)), riesz(2))
print(f"R1^2 + R2^2 + Id error:           {(r1r1 + r2r2 + u).l2_norm() / u.l2_norm():.2e}")

# --- Helmholtz decomposition ------------------------------------------
a = (random_band_limited(grid, rng, is_real=True),
     random_band_limited(grid, rng, is_real=True))
a_df, a_cf = helmholtz_decompose(a)
total = np.hypot(a[0].l2_norm(), a[1].l2_norm())
resid = np.hypot((a[0] - a_df[0] - a_cf[0]).l2_norm(), (a[1] - a_df[1] - a_cf[1]).l2_norm())
print(f"helmholtz completeness:           {resid / total:.2e}")
print(f"div of solenoidal part:           {divergence(a_df).l2_norm() / total:.2e}")
print(f"curl of irrotational part:        {curl(a_cf).l2_norm() / total:.2e}")

# --- the null form annihilates parallel gradients ----------------------
v = random_band_limited(grid, rng, is_real=True, k_max=10)
vsq = pointwise_product(v, v)
q = null_form_q12(v, vsq)
h2 = apply_symbol(v, bessel(2.0)).l2_norm()
print(f"Q12(v, v^2) (parallel gradients): {q.l2_norm() / h2**2:.2e}")

# --- identities behind the reformulation -------------------------------
phi = random_band_limited(grid, rng)
report = verify_null_identities(phi, a_df)
print("identity residuals (coupling, current_1, current_2):")
print(f"  {report.coupling:.2e}  {report.current_1:.2e}  {report.current_2:.2e}")
