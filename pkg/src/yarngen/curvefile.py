"""Curve container formats.

Binary "YFC1": magic, u32 strip count, then per strip a u32 level tag,
u32 vertex count and the vertices as little-endian 3*f64.  Round-trips
float64 exactly.  A plain-text variant (one "v x y z" line per vertex,
strips separated by blank lines) exists for eyeballing and diffing.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .polyline import PolyLineSet

__all__ = ["CurveFormatError", "write_curve_file", "read_curve_file",
           "write_curve_text", "read_curve_text"]

MAGIC = b"YFC1"
_HEAD = struct.Struct("<4sI")
_STRIP_HEAD = struct.Struct("<II")


class CurveFormatError(ValueError):
    """Bad magic, truncated payload, or malformed text."""


def write_curve_file(path, curves: PolyLineSet) -> None:
    path = Path(path)
    parts = [_HEAD.pack(MAGIC, len(curves))]
    for strip, lv in zip(curves.strips, curves.levels):
        arr = np.ascontiguousarray(strip, dtype="<f8")
        parts.append(_STRIP_HEAD.pack(lv, len(arr)))
        parts.append(arr.tobytes())
    path.write_bytes(b"".join(parts))


def read_curve_file(path) -> PolyLineSet:
    data = Path(path).read_bytes()
    if len(data) < _HEAD.size:
        raise CurveFormatError("file too short for header")
    magic, n_strips = _HEAD.unpack_from(data, 0)
    if magic != MAGIC:
        raise CurveFormatError(f"bad magic {magic!r}")
    pos = _HEAD.size
    out = PolyLineSet()
    for _ in range(n_strips):
        if pos + _STRIP_HEAD.size > len(data):
            raise CurveFormatError("truncated strip header")
        lv, count = _STRIP_HEAD.unpack_from(data, pos)
        pos += _STRIP_HEAD.size
        nbytes = count * 3 * 8
        if pos + nbytes > len(data):
            raise CurveFormatError("truncated strip payload")
        strip = np.frombuffer(data, dtype="<f8", count=count * 3, offset=pos)
        out.append(strip.reshape(count, 3).astype(np.float64), lv)
        pos += nbytes
    if pos != len(data):
        raise CurveFormatError(f"{len(data) - pos} trailing bytes")
    return out


def write_curve_text(path, curves: PolyLineSet) -> None:
    lines = []
    for strip, lv in zip(curves.strips, curves.levels):
        lines.append(f"# level {lv}")
        for x, y, z in strip:
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
        lines.append("")
    Path(path).write_text("\n".join(lines))


def read_curve_text(path) -> PolyLineSet:
    out = PolyLineSet()
    verts: list = []
    level = 0
    for raw_line in Path(path).read_text().splitlines() + [""]:
        line = raw_line.strip()
        if line.startswith("#"):
            try:
                level = int(line.split()[-1])
            except ValueError as exc:
                raise CurveFormatError(f"bad level line {line!r}") from exc
        elif line.startswith("v "):
            parts = line.split()
            if len(parts) != 4:
                raise CurveFormatError(f"bad vertex line {line!r}")
            verts.append([float(p) for p in parts[1:]])
        elif not line:
            if verts:
                out.append(np.array(verts), level)
                verts = []
                level = 0
        else:
            raise CurveFormatError(f"unrecognized line {line!r}")
    return out
