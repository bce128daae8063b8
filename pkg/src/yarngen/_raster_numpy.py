"""Pure-numpy rasterization kernel.

Arithmetic mirrors the numba kernel expression for expression so both
backends produce identical images.  Segments are processed in chunks,
each padded to the chunk's largest pixel bounding box, and composited
with an order-independent per-pixel maximum.
"""

from __future__ import annotations

import numpy as np

CHUNK = 16384


def draw_segments(img, x0, y0, x1, y1, s0, s1, halfw):
    h, w = img.shape
    pad = halfw + 0.5
    n = x0.shape[0]
    for lo in range(0, n, CHUNK):
        hi = min(n, lo + CHUNK)
        _draw_chunk(img, h, w, pad, halfw,
                    x0[lo:hi], y0[lo:hi], x1[lo:hi], y1[lo:hi], s0[lo:hi], s1[lo:hi])


def _draw_chunk(img, h, w, pad, halfw, ax, ay, bx, by, sa, sb):
    dx = bx - ax
    dy = by - ay
    L2 = dx * dx + dy * dy

    xlo = np.maximum(np.floor(np.minimum(ax, bx) - pad), 0.0).astype(np.int64)
    xhi = np.minimum(np.ceil(np.maximum(ax, bx) + pad), w - 1.0).astype(np.int64)
    ylo = np.maximum(np.floor(np.minimum(ay, by) - pad), 0.0).astype(np.int64)
    yhi = np.minimum(np.ceil(np.maximum(ay, by) + pad), h - 1.0).astype(np.int64)

    keep = (xlo <= xhi) & (ylo <= yhi)
    if not np.any(keep):
        return
    ax, ay, bx, by = ax[keep], ay[keep], bx[keep], by[keep]
    dx, dy, L2, sa, sb = dx[keep], dy[keep], L2[keep], sa[keep], sb[keep]
    xlo, xhi, ylo, yhi = xlo[keep], xhi[keep], ylo[keep], yhi[keep]

    bw = int(np.max(xhi - xlo)) + 1
    bh = int(np.max(yhi - ylo)) + 1
    ix = xlo[:, None, None] + np.arange(bw, dtype=np.int64)[None, None, :]
    iy = ylo[:, None, None] + np.arange(bh, dtype=np.int64)[None, :, None]
    inside = (ix <= xhi[:, None, None]) & (iy <= yhi[:, None, None])

    fx = ix.astype(np.float64)
    fy = iy.astype(np.float64)
    a_x = ax[:, None, None]
    a_y = ay[:, None, None]
    d_x = dx[:, None, None]
    d_y = dy[:, None, None]
    l2 = L2[:, None, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((fx - a_x) * d_x + (fy - a_y) * d_y) / l2
    t = np.where(l2 > 0.0, t, 0.0)
    np.clip(t, 0.0, 1.0, out=t)
    cx = a_x + t * d_x
    cy = a_y + t * d_y
    ddx = fx - cx
    ddy = fy - cy
    d = np.sqrt(ddx * ddx + ddy * ddy)
    cov = halfw + 0.5 - d
    hit = inside & (cov > 0.0)
    if not np.any(hit):
        return
    np.clip(cov, None, 1.0, out=cov)
    val = cov * (sa[:, None, None] + t * (sb - sa)[:, None, None])
    rows = np.broadcast_to(iy, hit.shape)[hit]
    cols = np.broadcast_to(ix, hit.shape)[hit]
    np.maximum.at(img, (rows, cols), val[hit])
