"""Hierarchical twisted-curve construction.

A raw yarn is built bottom-up from a straight seed line: at each level,
N copies of the previous level are placed on a circle (few instances) or
across a disc (many), squeezed along x into an elliptic cross-section,
rotated so the squeezed axis lies along the radial direction, and carried
along per-instance helices expressed through a moving coordinate frame.

Randomness enters in a fixed order per level: one placement draw per
instance, then per instance a triple of helix draws (migration amplitude,
offset, frequency) followed by one z-jitter draw per helix vertex.  This
order is part of the reproducibility contract.
"""

from __future__ import annotations

import math

import numpy as np

from .params import DISC, SMALL_CIRCLE, LevelSpec
from .polyline import RAW_TAG, PolyLineSet
from .rng import RngStream

__all__ = [
    "build_level_zero",
    "place_instances_small",
    "place_instances_large",
    "migration_scale",
    "build_helix",
    "apply_ellipse_and_rotate",
    "map_to_helix",
    "build_raw_yarn",
]

_TWO_PI = 2.0 * math.pi
# Golden-ratio-free angular step for disc placement; consecutive indices
# land 0.137 of a turn apart, giving a pseudo-random looking spread.
_DISC_TURN_FRACTION = 0.137


def build_level_zero(total_length: float, alpha_f: float) -> PolyLineSet:
    """Straight seed line along z with vertex spacing alpha_f.

    Vertex i sits at (0, 0, i*alpha_f); the strip has
    floor(total_length/alpha_f) + 1 vertices.
    """
    if total_length <= 0 or alpha_f <= 0:
        raise ValueError("total_length and alpha_f must be positive")
    # tolerate total_length/alpha_f landing a hair below an integer
    n_edges = int(math.floor(total_length / alpha_f + 1e-9))
    if n_edges < 1:
        raise ValueError("total_length must cover at least one edge")
    i = np.arange(n_edges + 1, dtype=np.float64)
    strip = np.zeros((n_edges + 1, 3))
    strip[:, 2] = i * alpha_f
    return PolyLineSet([strip], [RAW_TAG])


def place_instances_small(N: int, r: float, j_xy: float, rng: RngStream) -> np.ndarray:
    """Regular placement of N points on a circle of radius r.

    Point i sits at angle 2*pi*i/N in the (sin, cos) convention, plus a
    jitter of j_xy * R along (1, 1) with a single normal draw R per point.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    i = np.arange(N, dtype=np.float64)
    theta = _TWO_PI * i / N
    pts = np.empty((N, 2))
    pts[:, 0] = r * np.sin(theta)
    pts[:, 1] = r * np.cos(theta)
    jit = j_xy * rng.draw_normal(N)
    pts[:, 0] += jit
    pts[:, 1] += jit
    return pts


def place_instances_large(N: int, r: float, j_xy: float, rng: RngStream) -> np.ndarray:
    """Disc placement for large N, sparser towards the center.

    Point i (i = 1..N) sits at radius r * i^0.3 / N^0.3 and angle
    2*pi*0.137*i, plus the same shared-draw jitter as the circle variant.
    The outermost sample lands exactly at radius r.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    i = np.arange(1, N + 1, dtype=np.float64)
    radius = r * i**0.3 / N**0.3
    theta = _TWO_PI * _DISC_TURN_FRACTION * i
    pts = np.empty((N, 2))
    pts[:, 0] = radius * np.sin(theta)
    pts[:, 1] = radius * np.cos(theta)
    jit = j_xy * rng.draw_normal(N)
    pts[:, 0] += jit
    pts[:, 1] += jit
    return pts


def migration_scale(i, H: int, amp: float, off: float, freq: float):
    """Radius modulation s_i = 1 + max(0, amp)*cos(2*off + (i/H)*2*pi*freq).

    amp, off and freq are per-helix draws; a non-positive amplitude
    disables migration.  Accepts scalar or array vertex indices i.
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    i = np.asarray(i, dtype=np.float64)
    s = 1.0 + max(0.0, amp) * np.cos(2.0 * off + (i / H) * _TWO_PI * freq)
    return s if s.ndim else float(s)


def _phase_offset(p) -> float:
    # In the (sin, cos) parametrization the phase that makes vertex 0
    # coincide with p is atan2(p_x, p_y).
    return math.atan2(p[0], p[1])


def build_helix(p, spec: LevelSpec, turns: float, rng: RngStream) -> PolyLineSet:
    """Helix through the placement point p, ascending in z.

    Radius is |p|; the phase offset makes vertex 0 coincide with p when
    jitter and migration are off.  A negative pitch winds the opposite
    way with the same per-turn rise |pitch|.  Consumes three per-helix
    draws (migration amplitude scaled by spec.migration, offset,
    frequency) and one z-jitter draw per vertex.
    """
    if turns <= 0:
        raise ValueError("turns must be positive")
    amp = spec.migration * rng.draw_normal()
    off = rng.draw_normal()
    freq = rng.draw_normal()
    H = spec.helix_resolution
    n = int(math.ceil(turns * H - 1e-9)) + 1
    i = np.arange(n, dtype=np.float64)
    z_jit = spec.jitter_z * rng.draw_normal(n)
    r_h = math.hypot(p[0], p[1])
    sgn = 1.0 if spec.pitch > 0 else -1.0
    theta = sgn * (i / H) * _TWO_PI + _phase_offset(p)
    s = migration_scale(i, H, amp, off, freq)
    strip = np.empty((n, 3))
    strip[:, 0] = r_h * s * np.sin(theta)
    strip[:, 1] = r_h * s * np.cos(theta)
    strip[:, 2] = (i / H) * abs(spec.pitch) + z_jit
    if np.any(np.diff(strip[:, 2]) <= 0):
        raise ValueError("z-jitter too large: helix z must strictly increase")
    return PolyLineSet([strip], [RAW_TAG])


def apply_ellipse_and_rotate(template: PolyLineSet, e: float, p) -> PolyLineSet:
    """Squeeze template x by e, then rotate so the squeezed axis is radial.

    The rotation maps local +x onto the direction from p towards the
    origin, so the minor axis of the elliptic cross-section faces the
    bundle center.  z is untouched.
    """
    a = math.sin(_phase_offset(p))
    b = math.cos(_phase_offset(p))
    # proper rotation (det=+1) with first column -(a, b): +x -> inward radial
    out = PolyLineSet()
    for strip, lv in zip(template.strips, template.levels):
        x = e * strip[:, 0]
        y = strip[:, 1]
        new = np.empty_like(strip)
        new[:, 0] = -a * x + b * y
        new[:, 1] = -b * x - a * y
        new[:, 2] = strip[:, 2]
        out.append(new, lv)
    return out


def _helix_frames(h: np.ndarray):
    """Per-vertex tangent frame of a helix strip, by finite differences."""
    tang = np.empty_like(h)
    tang[1:-1] = h[2:] - h[:-2]
    tang[0] = h[1] - h[0]
    tang[-1] = h[-1] - h[-2]
    norms = np.linalg.norm(tang, axis=1)
    if np.any(norms < 1e-15):
        raise ValueError("degenerate helix tangent")
    return tang / norms[:, None]


def map_to_helix(template: PolyLineSet, helix: PolyLineSet) -> PolyLineSet:
    """Re-express template vertices in the moving frame of a helix.

    A template vertex at height z is attached to the helix point at arc
    position z (measured from the helix's first vertex), offset along two
    orthonormal normals of the local frame by its (x, y) coordinates.
    The frame tangent comes from finite differences of helix vertices;
    the first normal is the global x-axis rejected from the tangent (the
    y-axis when those are parallel), the second its cross product.
    """
    h = np.asarray(helix.strips[0], dtype=np.float64)
    if len(h) < 2:
        raise ValueError("helix needs >= 2 vertices")
    grid = h[:, 2] - h[0, 2]
    if np.any(np.diff(grid) <= 0):
        raise ValueError("helix z must strictly increase")
    tangents = _helix_frames(h)

    out = PolyLineSet()
    for strip, lv in zip(template.strips, template.levels):
        u = np.clip(strip[:, 2], 0.0, grid[-1])
        idx = np.clip(np.searchsorted(grid, u, side="right") - 1, 0, len(grid) - 2)
        frac = (u - grid[idx]) / (grid[idx + 1] - grid[idx])
        frac = np.clip(frac, 0.0, 1.0)[:, None]
        center = h[idx] * (1.0 - frac) + h[idx + 1] * frac
        t = tangents[idx] * (1.0 - frac) + tangents[idx + 1] * frac
        t /= np.linalg.norm(t, axis=1)[:, None]
        # normal: reject global x from the tangent, fall back to global y
        nrm = -t[:, 0:1] * t
        nrm[:, 0] += 1.0
        bad = np.linalg.norm(nrm, axis=1) < 1e-9
        if np.any(bad):
            nrm[bad] = -t[bad, 1:2] * t[bad]
            nrm[bad, 1] += 1.0
        nrm /= np.linalg.norm(nrm, axis=1)[:, None]
        binrm = np.cross(t, nrm)
        mapped = center + strip[:, 0:1] * nrm + strip[:, 1:2] * binrm
        out.append(mapped, lv)
    return out


def _build_level(template: PolyLineSet, spec: LevelSpec, rng: RngStream) -> PolyLineSet:
    extent = max(float(s[:, 2].max()) for s in template.strips)
    if spec.placement_mode == SMALL_CIRCLE:
        pts = place_instances_small(spec.instance_count, spec.placement_radius, spec.jitter_xy, rng)
    elif spec.placement_mode == DISC:
        pts = place_instances_large(spec.instance_count, spec.placement_radius, spec.jitter_xy, rng)
    else:
        raise ValueError(f"unknown placement_mode {spec.placement_mode!r}")
    turns = max(1, math.ceil(extent / abs(spec.pitch) - 1e-9))
    out = PolyLineSet()
    for p in pts:
        helix = build_helix(p, spec, turns, rng)
        local = apply_ellipse_and_rotate(template, spec.ellipse_scale, p)
        mapped = map_to_helix(local, helix)
        out.strips.extend(mapped.strips)
        out.levels.extend(mapped.levels)
    return out


def _trim_to_length(ps: PolyLineSet, total_length: float) -> PolyLineSet:
    tol = 1e-9 * max(1.0, total_length)
    out = PolyLineSet()
    for strip, lv in zip(ps.strips, ps.levels):
        k = int(np.searchsorted(strip[:, 2], total_length + tol, side="right"))
        out.append(strip[: max(2, k)], lv)
    return out


def build_raw_yarn(
    specs: list,
    total_length: float,
    alpha_f: float,
    rng: RngStream,
) -> PolyLineSet:
    """Full hierarchical build: seed line, then one twist pass per spec.

    ``specs`` is ordered fiber level first, outermost level last; any
    depth is legal.  The result has prod(spec.instance_count) strips,
    trimmed to total_length in z.
    """
    if not specs:
        raise ValueError("specs must be non-empty")
    out = build_level_zero(total_length, alpha_f)
    for spec in specs:
        out = _build_level(out, spec, rng)
    return _trim_to_length(out, total_length)
