#!/usr/bin/env python3
"""Tour of the estimate lab: angle bound, mixed-norm ratios for free
waves, exponent conditions, and ratio fuzzing with a growth contrast.

Writes demos/out/fuzz_product.jsonl (plot with viz/plot.py --kind
ratio_histogram).

Run:  python3 demos/04_estimate_lab.py
"""

import os
import warnings

import numpy as np

from mkg2d import ExponentTuple, bilinear_conditions, bilinear_ratio_fuzz
from mkg2d import strichartz_tataru_ratio
from mkg2d.estimates import FuzzConfig, angle_scan
from mkg2d.reports import write_report_jsonl
from mkg2d.spectral import GridSpec, random_band_limited

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

# --- angle bound --------------------------------------------------------
scan = angle_scan(50_000, seed=3)
print(f"angle bound sup over {scan.n_samples} triples: {scan.max_ratio:.4f}")
print(f"  worst case: {scan.argmax}")

# --- free-wave mixed norms ---------------------------------------------
grid = GridSpec(nx=32, ny=32)
rng = np.random.default_rng(4)
u0 = random_band_limited(grid, rng, k_max=8)
print("\nfree-wave ratios (Lp_x L2_t vs adapted weighted norm):")
for p in (2.0, 4.0, 6.0):
    print(f"  p = {p:.0f}: {strichartz_tataru_ratio(u0, p, 'lp_l2'):.4f}")
print(f"  space-time L6: {strichartz_tataru_ratio(u0, 6.0, 'strichartz_L6xt'):.4f}")

# --- exponent conditions -------------------------------------------------
good = ExponentTuple(0.0, 0.5, 0.5, 0.0, 0.51, 0.51)
bad = ExponentTuple(-1.5, -1.0, -1.0, 0.2, 0.2, 0.2)
print("\ncondition check:")
for name, e in (("admissible", good), ("violating", bad)):
    ok, violated = bilinear_conditions(e)
    print(f"  {name}: {'satisfied' if ok else 'violated: ' + violated[0] + ', ...'}")

# --- fuzz contrast --------------------------------------------------------
print("\nratio fuzz under grid doubling (the falsifiable signature):")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for name, e in (("admissible", good), ("violating", bad)):
        r32 = bilinear_ratio_fuzz("product", e, FuzzConfig(n=32, nt=32, n_trials=100, seed=5))
        r64 = bilinear_ratio_fuzz("product", e, FuzzConfig(n=64, nt=64, n_trials=100, seed=5))
        print(f"  {name}: max 32^3 = {r32.max_ratio:9.3f}   64^3 = {r64.max_ratio:9.3f}"
              f"   growth x{r64.max_ratio / r32.max_ratio:.2f}")
        if name == "admissible":
            path = os.path.join(out_dir, "fuzz_product.jsonl")
            write_report_jsonl(r32, path)
            print(f"  wrote {path}")
