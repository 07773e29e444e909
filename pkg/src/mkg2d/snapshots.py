"""Bit-exact binary snapshots of a GaugeState.

Layout (little-endian throughout):

    magic   4 bytes  b"MKG2"
    version u16      currently 1
    nx, ny  u32, u32
    period, t, mass, eps_tilde   f64 x 4
    five field blocks, each:  tag u8, then complex128 coefficients in
        row-major mode order (pairs store both components in sequence)
        tag 1 phi_plus (1 component)   tag 2 phi_minus (1)
        tag 3 a_df_plus (2)            tag 4 a_df_minus (2)
        tag 5 a_cf (2)
    crc32   u32 of everything after the magic

Round-trips are bitwise; any structural problem raises a distinct error
and never returns a partial state.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import (
    SnapshotChecksumError,
    SnapshotMagicError,
    SnapshotTruncatedError,
    SnapshotVersionError,
)
from .gauge import GaugeState
from .spectral import GridSpec, SpectralField2D

__all__ = ["snapshot_write", "snapshot_read", "MAGIC", "FORMAT_VERSION"]

MAGIC = b"MKG2"
FORMAT_VERSION = 1

_BLOCKS = (  # (tag, components, is_real)
    (1, 1, False),  # phi_plus
    (2, 1, False),  # phi_minus
    (3, 2, False),  # a_df_plus
    (4, 2, False),  # a_df_minus
    (5, 2, True),  # a_cf
)


def _field_bytes(f: SpectralField2D) -> bytes:
    return np.ascontiguousarray(f.coeffs, dtype="<c16").tobytes()


def snapshot_write(state: GaugeState, path) -> None:
    g = state.grid
    header = struct.pack(
        "<HIIdddd",
        FORMAT_VERSION,
        g.nx,
        g.ny,
        g.period,
        state.t,
        state.mass,
        state.eps_tilde,
    )
    groups = (
        (state.phi_plus,),
        (state.phi_minus,),
        state.a_df_plus,
        state.a_df_minus,
        state.a_cf,
    )
    body = bytearray(header)
    for (tag, ncomp, _), fields in zip(_BLOCKS, groups):
        assert len(fields) == ncomp
        body.append(tag)
        for f in fields:
            body.extend(_field_bytes(f))
    crc = zlib.crc32(bytes(body)) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes(body))
        fh.write(struct.pack("<I", crc))


def snapshot_read(path) -> GaugeState:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise SnapshotMagicError(f"{path}: expected magic {MAGIC!r}")
    if len(raw) < 4 + 2 + 8 + 32 + 4:
        raise SnapshotTruncatedError(f"{path}: header incomplete")
    body, crc_bytes = raw[4:-4], raw[-4:]
    (crc_stored,) = struct.unpack("<I", crc_bytes)
    if zlib.crc32(body) & 0xFFFFFFFF != crc_stored:
        raise SnapshotChecksumError(f"{path}: payload CRC mismatch")
    version, nx, ny, period, t, mass, eps_tilde = struct.unpack_from("<HIIdddd", body, 0)
    if version != FORMAT_VERSION:
        raise SnapshotVersionError(f"{path}: unsupported version {version}")
    offset = struct.calcsize("<HIIdddd")
    grid = GridSpec(nx=nx, ny=ny, period=period)
    field_nbytes = nx * ny * 16
    fields: dict[int, list[SpectralField2D]] = {}
    for tag, ncomp, is_real in _BLOCKS:
        if offset + 1 > len(body):
            raise SnapshotTruncatedError(f"{path}: missing block tag {tag}")
        if body[offset] != tag:
            raise SnapshotTruncatedError(
                f"{path}: expected block tag {tag}, found {body[offset]}"
            )
        offset += 1
        comps = []
        for _ in range(ncomp):
            end = offset + field_nbytes
            if end > len(body):
                raise SnapshotTruncatedError(f"{path}: block {tag} truncated")
            coeffs = (
                np.frombuffer(body[offset:end], dtype="<c16")
                .reshape(nx, ny)
                .astype(np.complex128)
            )
            comps.append(SpectralField2D(grid, coeffs, is_real))
            offset = end
        fields[tag] = comps
    if offset != len(body):
        raise SnapshotTruncatedError(f"{path}: {len(body) - offset} trailing bytes")
    return GaugeState(
        phi_plus=fields[1][0],
        phi_minus=fields[2][0],
        a_df_plus=tuple(fields[3]),
        a_df_minus=tuple(fields[4]),
        a_cf=tuple(fields[5]),
        t=t,
        mass=mass,
        eps_tilde=eps_tilde,
    )
