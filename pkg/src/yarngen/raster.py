"""Orthographic curve rasterization and crops.

The camera looks along the model +y axis: image columns are model z
(the yarn axis, centered vertically in the image), rows are model x,
and model y is depth.  Strips are drawn as anti-aliased polylines of
stroke width 2*t_x*scale, shaded by depth (nearer is brighter) and
composited with a per-pixel maximum, which makes the result independent
of draw order.

The per-segment pixel loop is the package's hot spot.  It runs through
a numba JIT kernel by default and falls back to an equivalent pure-numpy
kernel; set YARNGEN_BACKEND=numpy|numba to force one
(benchmarks/bench_raster.py compares them).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .polyline import PolyLineSet
from .rng import RngStream

__all__ = ["ImageConfig", "rasterize", "random_crop", "active_backend"]

# Deepest fibers keep this much brightness so the far side stays visible.
SHADE_FLOOR = 0.25
# Longer projected segments are split so kernel bounding boxes stay small.
SPLIT_PX = 8.0

_ENV_VAR = "YARNGEN_BACKEND"


# Largest sampleable yarn diameter, 2*(R_ply + r_x) at the interval tops.
MAX_YARN_DIAMETER = 2.0 * (1.486 + 0.789)


@dataclass(frozen=True)
class ImageConfig:
    """Raster geometry.

    When scale is None it is derived from the height so the largest
    database yarn (diameter ~4.55 units) spans 90% of the image height.
    """

    width: int = 2000
    height: int = 600
    scale: float | None = None
    crop_width: int = 1200
    crop_height: int = 584

    @property
    def effective_scale(self) -> float:
        if self.scale is not None:
            return self.scale
        return 0.9 * self.height / MAX_YARN_DIAMETER

    @property
    def total_length(self) -> float:
        return self.width / self.effective_scale


def active_backend(backend: str | None = None) -> str:
    """Resolve the kernel backend name ("numba" or "numpy")."""
    mode = backend or os.environ.get(_ENV_VAR, "auto")
    if mode not in ("auto", "numba", "numpy"):
        raise ValueError(f"unknown backend {mode!r}")
    if mode == "numpy":
        return "numpy"
    try:
        from . import _raster_numba  # noqa: F401
        return "numba"
    except ImportError:
        if mode == "numba":
            raise
        return "numpy"


def _kernel(backend: str | None):
    if active_backend(backend) == "numba":
        from ._raster_numba import draw_segments
    else:
        from ._raster_numpy import draw_segments
    return draw_segments


def _project_segments(curves: PolyLineSet, scale: float, width: int, height: int):
    """Flatten strips into split, culled segment endpoint/shade arrays."""
    ys = [s[:, 1] for s in curves.strips]
    dmin = min(float(y.min()) for y in ys)
    dmax = max(float(y.max()) for y in ys)
    span = dmax - dmin

    xs0, ys0, xs1, ys1, sh0, sh1 = [], [], [], [], [], []
    for strip, y in zip(curves.strips, ys):
        cols = strip[:, 2] * scale
        rows = height / 2.0 - strip[:, 0] * scale
        if span > 1e-12:
            shade = SHADE_FLOOR + (1.0 - SHADE_FLOOR) * (y - dmin) / span
        else:
            shade = np.ones_like(y)
        ax, bx = cols[:-1], cols[1:]
        ay, by = rows[:-1], rows[1:]
        sa, sb = shade[:-1], shade[1:]
        dx, dy = bx - ax, by - ay
        n_sub = np.maximum(
            1, np.ceil(np.maximum(np.abs(dx), np.abs(dy)) / SPLIT_PX).astype(np.int64)
        )
        parent = np.repeat(np.arange(len(dx)), n_sub)
        group_start = np.cumsum(n_sub) - n_sub
        k = np.arange(int(n_sub.sum())) - np.repeat(group_start, n_sub)
        f0 = k / n_sub[parent]
        f1 = (k + 1) / n_sub[parent]
        xs0.append(ax[parent] + f0 * dx[parent])
        xs1.append(ax[parent] + f1 * dx[parent])
        ys0.append(ay[parent] + f0 * dy[parent])
        ys1.append(ay[parent] + f1 * dy[parent])
        sh0.append(sa[parent] + f0 * (sb - sa)[parent])
        sh1.append(sa[parent] + f1 * (sb - sa)[parent])

    x0 = np.concatenate(xs0)
    x1 = np.concatenate(xs1)
    y0 = np.concatenate(ys0)
    y1 = np.concatenate(ys1)
    s0 = np.concatenate(sh0)
    s1 = np.concatenate(sh1)
    return x0, y0, x1, y1, s0, s1


def rasterize(
    curves: PolyLineSet,
    t_x: float,
    t_y: float,
    scale: float,
    width: int,
    height: int,
    backend: str | None = None,
) -> np.ndarray:
    """Render curves to an 8-bit grayscale image of shape (height, width).

    Stroke width is 2*t_x*scale pixels; t_y (the depth-axis fiber radius)
    does not affect an orthographic projection and is accepted for
    interface symmetry.  An empty curve set renders as all zeros.
    """
    if width <= 0 or height <= 0:
        raise ValueError("image dimensions must be positive")
    if scale <= 0:
        raise ValueError("scale must be positive")
    img = np.zeros((height, width), dtype=np.float64)
    if len(curves) > 0:
        x0, y0, x1, y1, s0, s1 = _project_segments(curves, scale, width, height)
        halfw = float(t_x * scale)
        # drop segments that cannot touch the image
        pad = halfw + 1.0
        keep = (
            (np.maximum(x0, x1) >= -pad)
            & (np.minimum(x0, x1) <= width - 1 + pad)
            & (np.maximum(y0, y1) >= -pad)
            & (np.minimum(y0, y1) <= height - 1 + pad)
        )
        _kernel(backend)(img, x0[keep], y0[keep], x1[keep], y1[keep],
                         s0[keep], s1[keep], halfw)
    return np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def random_crop(image: np.ndarray, crop_w: int, crop_h: int, rng: RngStream) -> np.ndarray:
    """Axis-aligned crop at a uniform random offset (x drawn first)."""
    h, w = image.shape[:2]
    if crop_w > w or crop_h > h or crop_w <= 0 or crop_h <= 0:
        raise ValueError(f"crop {crop_w}x{crop_h} does not fit image {w}x{h}")
    x0 = int(rng.draw_uniform() * (w - crop_w + 1))
    y0 = int(rng.draw_uniform() * (h - crop_h + 1))
    return image[y0 : y0 + crop_h, x0 : x0 + crop_w].copy()
