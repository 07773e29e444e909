"""Per-step observables and the diagnostics CSV sink.

The CSV schema is fixed: one header row with the column names below, in
this order, then one row per record.  Floats are written with repr
(shortest round-trip form), which makes reruns byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigurationError
from .gauge import GaugeState, RegularityTriple, gauss_residual_split
from .norms import sobolev_norm

__all__ = ["DiagnosticsRecord", "compute_record", "write_csv", "read_csv", "CSV_COLUMNS"]

CSV_COLUMNS = (
    "t",
    "gauss_residual_l2",
    "gauss_mean_mode",
    "energy",
    "charge",
    "phi_hs",
    "adf_hr",
    "acf_weighted",
)


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of run diagnostics (the norms tracked by the solution)."""

    t: float
    gauss_residual_l2: float
    gauss_mean_mode: float
    energy: float
    charge: float
    phi_hs: float
    adf_hr: float
    acf_weighted: float

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ConfigurationError(f"diagnostics entry {f.name} is not finite")

    def as_row(self) -> list[float]:
        return [getattr(self, name) for name in CSV_COLUMNS]


def weighted_cf_norm(state: GaugeState, l: float, eps_tilde: float) -> float:
    """|| |grad|^eps A^cf ||_{H^{l-eps}} over both components."""
    g = state.grid
    w = g.xi_abs ** (2.0 * eps_tilde) * g.bessel ** (2.0 * (l - eps_tilde))
    total = sum(float(np.sum(w * np.abs(c.coeffs) ** 2)) for c in state.a_cf)
    return math.sqrt(total)


def compute_record(
    state: GaugeState, regularity: RegularityTriple | None = None
) -> DiagnosticsRecord:
    from .dynamics import conserved_quantities  # runtime import, avoids cycle

    reg = regularity or RegularityTriple(1.0, 1.0, 1.0, state.eps_tilde)
    l2, mean, _rel = gauss_residual_split(state)
    energy, charge = conserved_quantities(state)
    adf = state.a_df()
    adf_hr = math.hypot(
        sobolev_norm(adf[0], reg.r), sobolev_norm(adf[1], reg.r)
    )
    return DiagnosticsRecord(
        t=state.t,
        gauss_residual_l2=l2,
        gauss_mean_mode=mean,
        energy=energy,
        charge=charge,
        phi_hs=sobolev_norm(state.phi(), reg.s),
        adf_hr=adf_hr,
        acf_weighted=weighted_cf_norm(state, reg.l, reg.eps_tilde),
    )


def write_csv(records: list[DiagnosticsRecord], path) -> None:
    """Write the fixed-schema CSV; time must be strictly increasing."""
    ts = [r.t for r in records]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ConfigurationError("record times must be strictly increasing")
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(",".join(repr(v) for v in r.as_row()))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> list[DiagnosticsRecord]:
    with open(path, "r") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ConfigurationError(
            f"diagnostics CSV schema mismatch; expected header {','.join(CSV_COLUMNS)}"
        )
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ConfigurationError(f"malformed diagnostics row: {ln!r}")
        out.append(DiagnosticsRecord(*(float(p) for p in parts)))
    return out
