"""Hair and loop flyaways.

Flyaways are copies of contiguous raw-yarn segments found by rejection
sampling, so they inherit the twist deformation of the strips they came
from.  Loops stay anchored at both ends and bulge radially; hairs are
squeezed along z and rotated outward about their lowest vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import FlyawayParams
from .polyline import HAIR_TAG, LOOP_TAG, PolyLineSet
from .rng import RngStream

__all__ = [
    "SegmentNotFoundError",
    "FlyawayReport",
    "select_segment",
    "make_loop",
    "make_hair",
    "add_flyaways",
]

MAX_ATTEMPTS = 64

# Fixed length spreads for the two flyaway types, in model units.
LOOP_LENGTH_STD = 0.01
HAIR_LENGTH_STD = 0.05


class SegmentNotFoundError(RuntimeError):
    """Rejection sampling exhausted its attempts without a long-enough chain."""


@dataclass
class FlyawayReport:
    requested: int = 0
    loops: int = 0
    hairs: int = 0
    skipped: int = 0

    @property
    def added(self) -> int:
        return self.loops + self.hairs


def _arc_tables(yarn: PolyLineSet):
    """Per-strip cumulative arc length plus global vertex offsets."""
    counts = np.array([len(s) for s in yarn.strips])
    offsets = np.concatenate([[0], np.cumsum(counts)])
    arcs = [
        np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(s, axis=0), axis=1))])
        for s in yarn.strips
    ]
    return offsets, arcs


def select_segment(
    yarn: PolyLineSet,
    target_length: float,
    rng: RngStream,
    max_attempts: int = MAX_ATTEMPTS,
    _tables=None,
) -> np.ndarray:
    """Copy of a contiguous vertex chain with arc length >= target_length.

    Each attempt picks a vertex uniformly over all strips, walks in a
    uniformly random direction, and rejects when the strip ends early.
    """
    if not yarn.strips:
        raise ValueError("yarn is empty")
    if target_length <= 0:
        raise ValueError("target_length must be positive")
    offsets, arcs = _tables if _tables is not None else _arc_tables(yarn)
    total = int(offsets[-1])
    for _ in range(max_attempts):
        gidx = int(rng.draw_uniform() * total)
        si = int(np.searchsorted(offsets, gidx, side="right")) - 1
        v = gidx - int(offsets[si])
        forward = rng.draw_uniform() < 0.5
        arc = arcs[si]
        if forward:
            j = int(np.searchsorted(arc, arc[v] + target_length))
            if j < len(arc):
                return yarn.strips[si][v : j + 1].copy()
        else:
            # walking towards index 0: need arc[v] - arc[j] >= target
            j = int(np.searchsorted(arc, arc[v] - target_length, side="right")) - 1
            if j >= 0 and arc[v] - arc[j] >= target_length:
                return yarn.strips[si][j : v + 1].copy()
    raise SegmentNotFoundError(
        f"no chain of length {target_length} found in {max_attempts} attempts"
    )


def make_loop(segment: np.ndarray, d_mean: float, d_std: float, rng: RngStream) -> np.ndarray:
    """Bulge a copied segment radially with half a sine period.

    Vertex i of a (j+1)-vertex segment gets the offset
    d * sin(i*pi/j) * (v_x, v_y, 0) with d = d_mean + d_std*R drawn once
    per flyaway; the direction is the vertex's own (unnormalized) xy, so
    endpoints stay put and z is never touched.
    """
    segment = np.asarray(segment, dtype=np.float64)
    if len(segment) < 3:
        raise ValueError("loop segment needs >= 3 vertices")
    j = len(segment) - 1
    d = d_mean + d_std * rng.draw_normal()
    i = np.arange(len(segment), dtype=np.float64)
    amount = d * np.sin(i * math.pi / j)
    out = segment.copy()
    out[:, 0] += amount * segment[:, 0]
    out[:, 1] += amount * segment[:, 1]
    return out


def make_hair(segment: np.ndarray, beta: float, s: float) -> np.ndarray:
    """Squeeze a copied segment along z, then tilt it outward by beta.

    The squeeze contracts z about the lowest vertex by 1/(1+s) so the
    inherited helical wiggles get relatively larger (s=0 is identity).
    The rotation axis is (yarn axis) x (radial direction at the lowest
    vertex), so the free end lifts away from the yarn surface; the lowest
    vertex is the fixed point of the whole transform.
    """
    segment = np.asarray(segment, dtype=np.float64)
    if len(segment) < 2:
        raise ValueError("hair segment needs >= 2 vertices")
    low = segment[np.argmin(segment[:, 2])].copy()
    out = segment.copy()
    out[:, 2] = low[2] + (out[:, 2] - low[2]) / (1.0 + s)

    radial = np.array([low[0], low[1], 0.0])
    nr = np.linalg.norm(radial)
    radial = radial / nr if nr > 1e-12 else np.array([1.0, 0.0, 0.0])
    axis = np.cross(np.array([0.0, 0.0, 1.0]), radial)
    # Rodrigues rotation about the axis through the lowest vertex
    rel = out - low
    cosb, sinb = math.cos(beta), math.sin(beta)
    out = (
        low
        + rel * cosb
        + np.cross(axis, rel) * sinb
        + np.outer(rel @ axis, axis) * (1.0 - cosb)
    )
    return out


def add_flyaways(
    yarn: PolyLineSet,
    params: FlyawayParams,
    rng: RngStream,
    max_attempts: int = MAX_ATTEMPTS,
) -> tuple[PolyLineSet, FlyawayReport]:
    """Append g flyaway strips to a copy of the yarn.

    Each flyaway is loop-type with probability p, else hair-type; target
    lengths are the configured means plus a fixed-spread normal draw,
    redrawn while non-positive.  Segments are sourced from the original
    raw strips only.  Unsatisfiable flyaways (rejection sampling
    exhausted) are skipped and counted in the report.
    """
    out = yarn.copy()
    report = FlyawayReport(requested=params.g)
    tables = _arc_tables(yarn) if params.g else None
    for _ in range(params.g):
        is_loop = rng.draw_uniform() < params.p
        mean, spread = (
            (params.l_loop, LOOP_LENGTH_STD) if is_loop else (params.l_hair, HAIR_LENGTH_STD)
        )
        length = -1.0
        for _ in range(max_attempts):
            length = mean + spread * rng.draw_normal()
            if length > 0:
                break
        if length <= 0:
            report.skipped += 1
            continue
        try:
            segment = select_segment(yarn, length, rng, max_attempts, _tables=tables)
        except SegmentNotFoundError:
            report.skipped += 1
            continue
        if is_loop:
            if len(segment) < 3:
                report.skipped += 1
                continue
            out.append(make_loop(segment, params.d_mean, params.d_std, rng), LOOP_TAG)
            report.loops += 1
        else:
            out.append(make_hair(segment, params.beta, params.s), HAIR_TAG)
            report.hairs += 1
    return out, report
