"""JIT rasterization kernel; the numpy twin lives in _raster_numpy."""

from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True)
def draw_segments(img, x0, y0, x1, y1, s0, s1, halfw):
    h, w = img.shape
    pad = halfw + 0.5
    for k in range(x0.shape[0]):
        ax = x0[k]
        ay = y0[k]
        bx = x1[k]
        by = y1[k]
        dx = bx - ax
        dy = by - ay
        L2 = dx * dx + dy * dy
        sa = s0[k]
        sb = s1[k]

        xlo = int(max(math.floor(min(ax, bx) - pad), 0.0))
        xhi = int(min(math.ceil(max(ax, bx) + pad), w - 1.0))
        ylo = int(max(math.floor(min(ay, by) - pad), 0.0))
        yhi = int(min(math.ceil(max(ay, by) + pad), h - 1.0))

        for iy in range(ylo, yhi + 1):
            fy = float(iy)
            for ix in range(xlo, xhi + 1):
                fx = float(ix)
                if L2 > 0.0:
                    t = ((fx - ax) * dx + (fy - ay) * dy) / L2
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                else:
                    t = 0.0
                cx = ax + t * dx
                cy = ay + t * dy
                ddx = fx - cx
                ddy = fy - cy
                d = math.sqrt(ddx * ddx + ddy * ddy)
                cov = halfw + 0.5 - d
                if cov <= 0.0:
                    continue
                if cov > 1.0:
                    cov = 1.0
                val = cov * (sa + t * (sb - sa))
                if val > img[iy, ix]:
                    img[iy, ix] = val
