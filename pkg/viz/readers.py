"""Standalone readers for the simulator's documented file formats.

Deliberately independent of the simulator package: everything here
parses bytes/text against the published schemas (diagnostics CSV,
ratio-report JSONL, MKG2 snapshot) and raises SchemaError on any
mismatch.  Keeping a second implementation of each format honest-checks
the writers.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass

import numpy as np


class SchemaError(Exception):
    """Input does not conform to a documented schema."""


DIAG_COLUMNS = (
    "t",
    "gauss_residual_l2",
    "gauss_mean_mode",
    "energy",
    "charge",
    "phi_hs",
    "adf_hr",
    "acf_weighted",
)

REPORT_FORMAT_VERSION = 1

SNAPSHOT_MAGIC = b"MKG2"
SNAPSHOT_VERSION = 1
# block tag -> (name, component count)
SNAPSHOT_BLOCKS = ((1, "phi_plus", 1), (2, "phi_minus", 1),
                   (3, "a_df_plus", 2), (4, "a_df_minus", 2), (5, "a_cf", 2))


def read_diagnostics_csv(path) -> dict[str, np.ndarray]:
    """Parse the fixed-schema diagnostics CSV into column arrays."""
    with open(path, "r") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty diagnostics file")
    header = tuple(lines[0].split(","))
    if header != DIAG_COLUMNS:
        raise SchemaError(
            f"{path}: header {','.join(header)!r} does not match the "
            f"documented schema {','.join(DIAG_COLUMNS)!r}"
        )
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != len(DIAG_COLUMNS):
            raise SchemaError(f"{path}:{i}: expected {len(DIAG_COLUMNS)} columns")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise SchemaError(f"{path}:{i}: {exc}")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    arr = np.asarray(rows)
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{path}: non-finite diagnostics values")
    return {name: arr[:, j] for j, name in enumerate(DIAG_COLUMNS)}


def read_ratio_jsonl(path) -> tuple[list[dict], dict]:
    """Parse a fuzz JSONL file into (trial records, summary record)."""
    trials, summaries = [], []
    with open(path, "r") as fh:
        for i, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{i}: invalid JSON ({exc})")
            if rec.get("format_version") != REPORT_FORMAT_VERSION:
                raise SchemaError(f"{path}:{i}: unknown format_version")
            kind = rec.get("type")
            if kind == "trial":
                trials.append(rec)
            elif kind == "report":
                summaries.append(rec)
            else:
                raise SchemaError(f"{path}:{i}: unknown record type {kind!r}")
    if len(summaries) != 1:
        raise SchemaError(f"{path}: expected exactly one report record")
    return trials, summaries[0]


@dataclass
class Snapshot:
    nx: int
    ny: int
    period: float
    t: float
    mass: float
    eps_tilde: float
    fields: dict[str, list[np.ndarray]]  # name -> list of (nx, ny) complex arrays


def read_snapshot(path) -> Snapshot:
    """Parse the MKG2 binary snapshot (header, tagged blocks, CRC)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise SchemaError(f"{path}: bad magic")
    body, tail = raw[4:-4], raw[-4:]
    if zlib.crc32(body) & 0xFFFFFFFF != struct.unpack("<I", tail)[0]:
        raise SchemaError(f"{path}: CRC mismatch")
    head = struct.Struct("<HIIdddd")
    version, nx, ny, period, t, mass, eps_tilde = head.unpack_from(body, 0)
    if version != SNAPSHOT_VERSION:
        raise SchemaError(f"{path}: unsupported version {version}")
    offset = head.size
    nbytes = nx * ny * 16
    fields: dict[str, list[np.ndarray]] = {}
    for tag, name, ncomp in SNAPSHOT_BLOCKS:
        if offset >= len(body) or body[offset] != tag:
            raise SchemaError(f"{path}: missing block {name}")
        offset += 1
        comps = []
        for _ in range(ncomp):
            if offset + nbytes > len(body):
                raise SchemaError(f"{path}: block {name} truncated")
            comps.append(
                np.frombuffer(body[offset : offset + nbytes], dtype="<c16").reshape(nx, ny)
            )
            offset += nbytes
        fields[name] = comps
    if offset != len(body):
        raise SchemaError(f"{path}: trailing bytes")
    return Snapshot(nx, ny, period, t, mass, eps_tilde, fields)


def ring_spectrum(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(integer ring radii, RMS amplitude per ring) of one mode array."""
    nx, ny = coeffs.shape
    k1 = np.fft.fftfreq(nx, d=1.0 / nx).reshape(nx, 1)
    k2 = np.fft.fftfreq(ny, d=1.0 / ny).reshape(1, ny)
    rings = np.rint(np.sqrt(k1**2 + k2**2)).astype(int)
    power = np.abs(coeffs) ** 2
    radii, rms = [], []
    for k in range(1, rings.max() + 1):
        sel = rings == k
        if np.any(sel) and np.any(power[sel] > 0):
            radii.append(float(k))
            rms.append(float(np.sqrt(power[sel].mean())))
    return np.asarray(radii), np.asarray(rms)


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    if len(x) < 4:
        raise SchemaError("not enough points for a slope fit")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
