"""Command-line surface.

Machine-readable results go to standard output (key=value lines or
files); diagnostics and errors go to standard error.  Exit codes:
0 success / affirmative verdict, 1 negative verdict or blow-up,
2 usage or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import data as datamod
from .diagnostics import compute_record, write_csv
from .dynamics import EvolveConfig, evolve
from .errors import BlowUpError, ConfigurationError, Mkg2dError, ShapeError
from .estimates import ExponentTuple, FuzzConfig, bilinear_ratio_fuzz, sobolev_ratio_fuzz
from .gauge import (
    RegularityTriple,
    check_admissibility,
    curl,
    divergence,
    helmholtz_decompose,
    verify_null_identities,
)
from .norms import sobolev_norm
from .reports import write_report_jsonl
from .runconfig import CONFIG_KEYS, RunConfig, load_config
from .snapshots import snapshot_read, snapshot_write
from .spectral import GridSpec, SpectralField2D, random_band_limited

_CONFIG_HELP = "config keys: " + ", ".join(sorted(CONFIG_KEYS))


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mkg2d",
        description="Pseudospectral gauge-field/scalar simulator and estimate lab "
        "on the periodic 2D torus.",
        epilog=_CONFIG_HELP,
    )
    sub = top.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate data and march in time", epilog=_CONFIG_HELP)
    sim.add_argument("--config", help="key = value config file")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="output directory")
    sim.add_argument("--grid", type=int, help="grid points per axis")
    sim.add_argument("--dt", type=float)
    sim.add_argument("--t-end", type=float)
    sim.add_argument("--rhs", choices=("direct", "nullform"))
    sim.add_argument("--data-kind", choices=("rough_random", "smooth_gaussian", "file"))
    sim.add_argument("--data-file")
    sim.add_argument("--override-admissibility", action="store_true", default=None)

    dec = sub.add_parser("decompose", help="Helmholtz-split the potential of a snapshot")
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--out", required=True, help="output directory")

    chk = sub.add_parser("check-identities", help="verify the null-form and projector identities")
    chk.add_argument("--grid", type=int, default=64)
    chk.add_argument("--seed", type=int, default=0)

    adm = sub.add_parser("check-admissibility", help="evaluate the regularity inequalities")
    adm.add_argument("s", type=float)
    adm.add_argument("r", type=float)
    adm.add_argument("l", type=float)
    adm.add_argument("--eps-tilde", type=float, default=0.01)

    fz = sub.add_parser("fuzz", help="empirical ratio supremum for one estimate target")
    fz.add_argument("--target", required=True,
                    choices=("product", "nullform_q12", "triple_product", "sobolev"))
    fz.add_argument("--exponents", required=True,
                    help="comma list: s0,s1,s2,b0,b1,b2 (sobolev: s0,s1,s2)")
    fz.add_argument("--trials", type=int, default=200)
    fz.add_argument("--grid", type=int, default=32)
    fz.add_argument("--nt", type=int, default=32)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--out", help="JSONL output path")

    cv = sub.add_parser("convergence", help="time-step refinement study")
    cv.add_argument("--grid", type=int, default=32)
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--dt", type=float, default=2e-3)
    cv.add_argument("--t-end", type=float, default=0.25)
    cv.add_argument("--levels", type=int, default=3)
    cv.add_argument("--out", help="CSV output path")

    nm = sub.add_parser("norms", help="evaluate the tracked norms on a snapshot")
    nm.add_argument("--in", dest="infile", required=True)
    nm.add_argument("--s", type=float, default=1.0)
    nm.add_argument("--r", type=float, default=1.0)
    nm.add_argument("--l", type=float, default=1.0)
    nm.add_argument("--eps-tilde", type=float, default=0.01)
    return top


def _runconfig_from_args(args) -> RunConfig:
    if args.config is not None:
        cfg = load_config(args.config)
        values = dict(cfg.raw)
    else:
        values = {}
    overrides = {
        "seed": args.seed,
        "out_dir": args.out,
        "grid_n": args.grid,
        "dt": args.dt,
        "t_end": args.t_end,
        "rhs_form": args.rhs,
        "data_kind": args.data_kind,
        "data_file": args.data_file,
        "override_admissibility": args.override_admissibility,
    }
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    return RunConfig.from_values(values)


def _initial_state(cfg: RunConfig):
    if cfg.data_kind == "file":
        state = snapshot_read(cfg.data_file)
        if state.grid.shape != cfg.grid.shape:
            raise ShapeError(
                f"snapshot grid {state.grid.shape} does not match configured "
                f"grid {cfg.grid.shape}; no resampling is done"
            )
        return state
    if cfg.data_kind == "rough_random":
        data = datamod.rough_data_generate(
            cfg.regularity, cfg.grid, cfg.seed,
            override_admissibility=cfg.override_admissibility,
            amplitude=cfg.amplitude,
        )
    else:
        data = datamod.smooth_data_generate(
            cfg.grid, cfg.seed, amplitude=cfg.amplitude, k0=cfg.k0
        )
    return datamod.data_to_state(data, mass=cfg.mass, eps_tilde=cfg.regularity.eps_tilde)


def _cmd_simulate(args) -> int:
    cfg = _runconfig_from_args(args)
    state = _initial_state(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    snapshot_write(state, os.path.join(cfg.out_dir, "initial.mkg2"))

    counter = {"n": 0}

    def on_snapshot(s):
        counter["n"] += 1
        snapshot_write(s, os.path.join(cfg.out_dir, f"snap_{counter['n']:06d}.mkg2"))

    final, records = evolve(
        state,
        cfg.evolve,
        regularity=cfg.regularity,
        on_snapshot=on_snapshot if cfg.evolve.snapshot_stride else None,
    )
    snapshot_write(final, os.path.join(cfg.out_dir, "final.mkg2"))
    write_csv(records, os.path.join(cfg.out_dir, "diagnostics.csv"))
    last = records[-1]
    print(f"t_final={final.t!r}")
    print(f"energy={last.energy!r}")
    print(f"charge={last.charge!r}")
    print(f"gauss_residual_l2={last.gauss_residual_l2!r}")
    print(f"out_dir={cfg.out_dir}")
    return 0


def _cmd_decompose(args) -> int:
    state = snapshot_read(args.infile)
    a = state.a_total()
    a_df, a_cf = helmholtz_decompose(a)
    os.makedirs(args.out, exist_ok=True)
    zero = SpectralField2D.zeros(state.grid, is_real=False)
    from dataclasses import replace

    half_df = tuple(0.5 * f for f in a_df)
    df_state = replace(
        state,
        phi_plus=zero,
        phi_minus=zero.copy(),
        a_df_plus=half_df,
        a_df_minus=tuple(f.copy() for f in half_df),
        a_cf=(SpectralField2D.zeros(state.grid), SpectralField2D.zeros(state.grid)),
    )
    cf_state = replace(
        state,
        phi_plus=zero.copy(),
        phi_minus=zero.copy(),
        a_df_plus=(SpectralField2D.zeros(state.grid), SpectralField2D.zeros(state.grid)),
        a_df_minus=(SpectralField2D.zeros(state.grid), SpectralField2D.zeros(state.grid)),
        a_cf=a_cf,
    )
    snapshot_write(df_state, os.path.join(args.out, "a_df.mkg2"))
    snapshot_write(cf_state, os.path.join(args.out, "a_cf.mkg2"))
    total = max(np.hypot(a[0].l2_norm(), a[1].l2_norm()), 1e-300)
    completeness = (
        np.hypot((a[0] - a_df[0] - a_cf[0]).l2_norm(), (a[1] - a_df[1] - a_cf[1]).l2_norm())
        / total
    )
    print(f"completeness_residual={float(completeness)!r}")
    print(f"div_a_df={divergence(a_df).l2_norm()!r}")
    print(f"curl_a_cf={curl(a_cf).l2_norm()!r}")
    print(f"out_dir={args.out}")
    return 0


def _cmd_check_identities(args) -> int:
    grid = GridSpec(nx=args.grid, ny=args.grid)
    rng = np.random.default_rng(args.seed)
    phi = random_band_limited(grid, rng, is_real=False)
    raw = (random_band_limited(grid, rng, is_real=True),
           random_band_limited(grid, rng, is_real=True))
    a_df, a_cf = helmholtz_decompose(raw)
    report = verify_null_identities(phi, a_df)
    completeness = np.hypot(
        (raw[0] - a_df[0] - a_cf[0]).l2_norm(), (raw[1] - a_df[1] - a_cf[1]).l2_norm()
    ) / max(np.hypot(raw[0].l2_norm(), raw[1].l2_norm()), 1e-300)
    checks = {
        "identity_coupling": (report.coupling, 1e-10),
        "identity_current_1": (report.current_1, 1e-10),
        "identity_current_2": (report.current_2, 1e-10),
        "helmholtz_completeness": (completeness, 1e-12),
        "helmholtz_div_df": (divergence(a_df).l2_norm(), 1e-10),
        "helmholtz_curl_cf": (curl(a_cf).l2_norm(), 1e-10),
    }
    ok = True
    for name, (value, tol) in checks.items():
        verdict = "ok" if value < tol else "FAIL"
        ok &= value < tol
        print(f"{name}={value!r} tol={tol!r} {verdict}")
    return 0 if ok else 1


def _cmd_check_admissibility(args) -> int:
    reg = RegularityTriple(s=args.s, r=args.r, l=args.l, eps_tilde=args.eps_tilde)
    ok, violated = check_admissibility(reg)
    if ok:
        print("admissible")
        return 0
    print("not admissible")
    for name in violated:
        print(f"violated: {name}")
    return 1


def _cmd_fuzz(args) -> int:
    parts = [float(p) for p in args.exponents.split(",")]
    if args.target == "sobolev":
        if len(parts) != 3:
            raise ConfigurationError("sobolev target needs s0,s1,s2")
        report = sobolev_ratio_fuzz(
            *parts, n=args.grid, n_trials=args.trials, seed=args.seed
        )
    else:
        if len(parts) != 6:
            raise ConfigurationError("need six exponents s0,s1,s2,b0,b1,b2")
        report = bilinear_ratio_fuzz(
            args.target,
            ExponentTuple(*parts),
            FuzzConfig(n=args.grid, nt=args.nt, n_trials=args.trials, seed=args.seed),
        )
    if args.out:
        write_report_jsonl(report, args.out)
        print(f"report={args.out}")
    print(f"target={report.target}")
    print(f"n_trials={report.n_trials}")
    print(f"n_degenerate={report.n_degenerate}")
    print(f"max_ratio={report.max_ratio!r}")
    print(f"median_ratio={report.median_ratio!r}")
    return 0


def _cmd_convergence(args) -> int:
    grid = GridSpec(nx=args.grid, ny=args.grid)
    data = datamod.smooth_data_generate(grid, args.seed, amplitude=0.3, k0=1.5)
    state = datamod.data_to_state(data)
    dts = [args.dt / 2**j for j in range(args.levels)]
    finals, drifts = [], []
    for dt in dts:
        cfg = EvolveConfig(dt=dt, t_end=args.t_end, diag_stride=max(1, int(round(args.t_end / dt / 8))))
        final, records = evolve(state, cfg)
        e0 = records[0].energy
        drift = max(abs(r.energy - e0) for r in records[1:]) / abs(e0)
        finals.append(final)
        drifts.append(drift)
    diffs = []
    for a, b in zip(finals, finals[1:]):
        diffs.append(sum((x - y).l2_norm() for x, y in zip(a.fields(), b.fields())))
    lines = ["dt,energy_drift,final_state_diff"]
    for j, dt in enumerate(dts):
        d = diffs[j] if j < len(diffs) else float("nan")
        lines.append(f"{dt!r},{drifts[j]!r},{d!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        print(f"csv={args.out}")
    sys.stdout.write(text)
    for j in range(len(diffs) - 1):
        order = float(np.log2(diffs[j] / diffs[j + 1]))
        print(f"observed_order_level_{j}={order!r}")
    return 0


def _cmd_norms(args) -> int:
    state = snapshot_read(args.infile)
    reg = RegularityTriple(s=args.s, r=args.r, l=args.l, eps_tilde=args.eps_tilde)
    rec = compute_record(state, reg)
    print(f"t={rec.t!r}")
    print(f"phi_hs={rec.phi_hs!r}")
    print(f"adf_hr={rec.adf_hr!r}")
    print(f"acf_weighted={rec.acf_weighted!r}")
    print(f"energy={rec.energy!r}")
    print(f"charge={rec.charge!r}")
    print(f"gauss_residual_l2={rec.gauss_residual_l2!r}")
    print(f"gauss_mean_mode={rec.gauss_mean_mode!r}")
    print(f"l2_phi={sobolev_norm(state.phi(), 0.0)!r}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "decompose": _cmd_decompose,
    "check-identities": _cmd_check_identities,
    "check-admissibility": _cmd_check_admissibility,
    "fuzz": _cmd_fuzz,
    "convergence": _cmd_convergence,
    "norms": _cmd_norms,
}


def cli_dispatch(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BlowUpError as exc:
        print(f"error: blow-up detected: {exc}", file=sys.stderr)
        return 1
    except (Mkg2dError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch())
