#!/usr/bin/env python3
"""Offline figures from simulator output files.

    plot.py --kind timeseries      --in diagnostics.csv   --out fig.png
    plot.py --kind spectrum        --in state.mkg2        --out fig.png
    plot.py --kind ratio_histogram --in fuzz.jsonl        --out fig.png
    plot.py --kind convergence     --in convergence.csv   --out fig.png

Reads only the documented file formats (no in-process coupling to the
simulator).  Figures are deterministic: fixed style, no timestamps.
Key computed values (fitted slopes, maxima) are printed as key=value
lines on standard output.  Exit codes: 0 success, 2 schema/input error.
"""

from __future__ import annotations

import argparse
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from readers import (  # noqa: E402
    SchemaError,
    fit_loglog_slope,
    read_diagnostics_csv,
    read_ratio_jsonl,
    read_snapshot,
    ring_spectrum,
)

STYLE = {
    "figure.figsize": (8.0, 6.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 110,
}


def plot_timeseries(in_path, out_path) -> dict:
    cols = read_diagnostics_csv(in_path)
    t = cols["t"]
    fig, axes = plt.subplots(2, 2, sharex=True)
    ax = axes[0, 0]
    ax.plot(t, cols["energy"], color="tab:blue", label="energy")
    ax.plot(t, cols["charge"], color="tab:orange", label="charge")
    ax.set_ylabel("conserved quantities")
    ax.legend(loc="best")
    ax = axes[0, 1]
    drift = np.abs(cols["energy"] - cols["energy"][0])
    qdrift = np.abs(cols["charge"] - cols["charge"][0])
    floor = 1e-18
    ax.semilogy(t, np.maximum(drift, floor), color="tab:blue", label="|E - E(0)|")
    ax.semilogy(t, np.maximum(qdrift, floor), color="tab:orange", label="|Q - Q(0)|")
    ax.set_ylabel("absolute drift")
    ax.legend(loc="best")
    ax = axes[1, 0]
    ax.semilogy(t, np.maximum(cols["gauss_residual_l2"], floor), color="tab:red",
                label="constraint residual (L2)")
    ax.semilogy(t, np.maximum(np.abs(cols["gauss_mean_mode"]), floor), color="tab:purple",
                label="|mean-mode obstruction|")
    ax.set_xlabel("t")
    ax.set_ylabel("Gauss law")
    ax.legend(loc="best")
    ax = axes[1, 1]
    for name, color in (("phi_hs", "tab:green"), ("adf_hr", "tab:brown"),
                        ("acf_weighted", "tab:gray")):
        ax.plot(t, cols[name], color=color, label=name)
    ax.set_xlabel("t")
    ax.set_ylabel("tracked norms")
    ax.legend(loc="best")
    fig.suptitle("run diagnostics")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {"rows": len(t), "energy_final": float(cols["energy"][-1])}


def plot_spectrum(in_path, out_path) -> dict:
    snap = read_snapshot(in_path)
    phi = snap.fields["phi_plus"][0] + snap.fields["phi_minus"][0]
    radii, rms = ring_spectrum(phi)
    # fit over the inertial band, away from the lowest rings and the
    # dealias cutoff (2/3 rule assumed, as documented for snapshots)
    k_hi = 0.8 * snap.nx / 3.0
    sel = (radii >= 2.0) & (radii <= k_hi) & (rms > 0)
    slope = fit_loglog_slope(radii[sel], rms[sel])
    fig, ax = plt.subplots()
    ax.loglog(radii, rms, ".", color="tab:blue", label="ring RMS amplitude")
    xfit = radii[sel]
    yfit = np.exp(np.polyval(np.polyfit(np.log(xfit), np.log(rms[sel]), 1), np.log(xfit)))
    ax.loglog(xfit, yfit, "-", color="tab:red", label=f"fit: slope {slope:.3f}")
    ax.set_xlabel("|k|")
    ax.set_ylabel("RMS coefficient amplitude")
    ax.set_title(f"scalar-field spectrum at t={snap.t:g} (n={snap.nx})")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {"fitted_slope": slope}


def plot_ratio_histogram(in_path, out_path) -> dict:
    trials, report = read_ratio_jsonl(in_path)
    if not trials:
        raise SchemaError(f"{in_path}: no trial records to histogram")
    ratios = np.asarray([rec["ratio"] for rec in trials])
    observed_max = float(ratios.max())
    if not np.isclose(observed_max, report["max_ratio"], rtol=1e-12):
        raise SchemaError(
            f"{in_path}: trial maximum {observed_max!r} disagrees with the "
            f"report's max_ratio {report['max_ratio']!r}"
        )
    fig, ax = plt.subplots()
    ax.hist(ratios, bins=min(40, max(10, len(ratios) // 5)), color="tab:blue", alpha=0.8)
    ax.axvline(report["max_ratio"], color="tab:red", label=f"max {report['max_ratio']:.4g}")
    ax.axvline(report["median_ratio"], color="tab:orange", linestyle="--",
               label=f"median {report['median_ratio']:.4g}")
    ax.set_xlabel("trial ratio")
    ax.set_ylabel("count")
    ax.set_title(f"{report['target']}: {report['n_trials']} trials "
                 f"(grid {report['grid']['nx']})")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {"max_ratio": report["max_ratio"], "n_trials": report["n_trials"]}


def plot_convergence(in_path, out_path) -> dict:
    with open(in_path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "dt,energy_drift,final_state_diff":
        raise SchemaError(f"{in_path}: not a convergence CSV")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise SchemaError(f"{in_path}: malformed row {ln!r}")
        rows.append([float(p) for p in parts])
    arr = np.asarray(rows)
    dts, drifts, diffs = arr[:, 0], arr[:, 1], arr[:, 2]
    good = np.isfinite(diffs) & (diffs > 0)
    if good.sum() >= 2:  # refinement studies may have as few as two levels
        order = float(np.polyfit(np.log(dts[good]), np.log(diffs[good]), 1)[0])
    else:
        order = float("nan")
    fig, ax = plt.subplots()
    ax.loglog(dts, np.maximum(drifts, 1e-18), "o-", label="energy drift")
    if good.any():
        ax.loglog(dts[good], diffs[good], "s-", label=f"state diff (order {order:.2f})")
    ax.set_xlabel("dt")
    ax.set_ylabel("relative error")
    ax.set_title("time-step refinement")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {"fitted_order": order}


_KINDS = {
    "timeseries": plot_timeseries,
    "spectrum": plot_spectrum,
    "ratio_histogram": plot_ratio_histogram,
    "convergence": plot_convergence,
}


class PlotJob:
    """One rendering task: input path(s), output image, plot kind."""

    def __init__(self, kind: str, in_path: str, out_path: str):
        if kind not in _KINDS:
            raise SchemaError(f"unknown plot kind {kind!r}")
        self.kind = kind
        self.in_path = in_path
        self.out_path = out_path


def plot(job: PlotJob) -> dict:
    """Render one job; returns the computed key values."""
    plt.rcParams.update(STYLE)
    return _KINDS[job.kind](job.in_path, job.out_path)


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--kind", required=True, choices=sorted(_KINDS))
    parser.add_argument("--in", dest="in_path", required=True)
    parser.add_argument("--out", dest="out_path", required=True)
    args = parser.parse_args(argv)
    try:
        results = plot(PlotJob(args.kind, args.in_path, args.out_path))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for key, value in results.items():
        print(f"{key}={value!r}")
    print(f"figure={args.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
