"""Bit-exact file formats: field/carpet CSV, QWCP binary carpets, .meta text.

CSV is `t,x,re,im,density` with 17 significant digits after a header row.
The binary carpet is magic ``QWCP``, a little-endian u32 version, u64 nx and
nt, then nt*nx float64 densities, time-major.  Identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import ComplexField, SpatialGrid
from .errors import ConfigError
from .solver import CarpetRecord

MAGIC = b"QWCP"
VERSION = 1


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_field_csv(path: str | Path, field: ComplexField, t: float) -> None:
    lines = ["t,x,re,im,density"]
    for x, v in zip(field.grid.points, field.values):
        lines.append(",".join([_fmt(t), _fmt(x), _fmt(v.real), _fmt(v.imag),
                               _fmt(abs(v) ** 2)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_field_csv(path: str | Path) -> tuple[ComplexField, float]:
    """Read a single-time field file back; the grid must be uniform."""
    try:
        rows = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read field file {path}: {exc}") from exc
    if not rows or rows[0].strip() != "t,x,re,im,density":
        raise ConfigError(f"{path}: expected header 't,x,re,im,density'")
    data = np.array([[float(c) for c in row.split(",")]
                     for row in rows[1:] if row.strip()])
    if data.ndim != 2 or data.shape[1] != 5 or data.shape[0] < 3:
        raise ConfigError(f"{path}: malformed field rows")
    ts = data[:, 0]
    if np.ptp(ts) != 0.0:
        raise ConfigError(f"{path}: field file must hold a single time slice")
    x = data[:, 1]
    steps = np.diff(x)
    if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * abs(steps[0]):
        raise ConfigError(f"{path}: x column must be a uniform increasing grid")
    grid = SpatialGrid(float(x[0]), float(x[-1]), len(x))
    values = data[:, 2] + 1j * data[:, 3]
    return ComplexField(grid, values), float(ts[0])


def write_carpet_csv(path: str | Path, rec: CarpetRecord) -> None:
    if rec.values is None:
        raise ValueError("carpet record lacks complex values for CSV export")
    lines = ["t,x,re,im,density"]
    xs = rec.grid.points
    for i, t in enumerate(rec.ts):
        row_v = rec.values[i]
        row_d = rec.densities[i]
        tstr = _fmt(float(t))
        for j in range(len(xs)):
            v = row_v[j]
            lines.append(",".join([tstr, _fmt(xs[j]), _fmt(v.real),
                                   _fmt(v.imag), _fmt(row_d[j])]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_carpet_binary(path: str | Path, rec: CarpetRecord) -> None:
    nt, nx = rec.densities.shape
    header = MAGIC + struct.pack("<IQQ", VERSION, nx, nt)
    payload = np.ascontiguousarray(rec.densities, dtype="<f8").tobytes()
    Path(path).write_bytes(header + payload)


def read_carpet_binary(path: str | Path) -> tuple[np.ndarray, int, int]:
    blob = Path(path).read_bytes()
    if blob[:4] != MAGIC:
        raise ConfigError(f"{path}: not a QWCP carpet")
    version, nx, nt = struct.unpack("<IQQ", blob[4:24])
    if version != VERSION:
        raise ConfigError(f"{path}: unsupported QWCP version {version}")
    dens = np.frombuffer(blob[24:], dtype="<f8").reshape(nt, nx)
    return dens, nx, nt


def write_carpet_meta(path: str | Path, rec: CarpetRecord) -> None:
    lines = [
        f"x_lo = {_fmt(rec.grid.lo)}",
        f"x_hi = {_fmt(rec.grid.hi)}",
        f"n_x = {rec.grid.n_points}",
        f"t_lo = {_fmt(float(rec.ts[0]))}",
        f"t_hi = {_fmt(float(rec.ts[-1]))}",
        f"n_t = {len(rec.ts)}",
        f"frame = {rec.frame}",
    ]
    for key in sorted(rec.metadata):
        lines.append(f"{key} = {rec.metadata[key]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
