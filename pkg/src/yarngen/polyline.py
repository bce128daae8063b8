"""Ordered vertex strips shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["PolyLineSet", "RAW_TAG", "HAIR_TAG", "LOOP_TAG"]

RAW_TAG = 0
HAIR_TAG = 254
LOOP_TAG = 255


@dataclass
class PolyLineSet:
    """A set of 3D polylines (strips), each tagged with its level of origin.

    Strips are (K, 3) float64 arrays with K >= 2.  Raw-yarn strips ascend
    strictly in z; flyaway transforms may break that, which is why they
    carry their own tags (254 hair, 255 loop).
    """

    strips: list = field(default_factory=list)
    levels: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.strips) != len(self.levels):
            raise ValueError("strips and levels must have equal length")

    def __len__(self):
        return len(self.strips)

    def append(self, strip: np.ndarray, level: int) -> None:
        strip = np.asarray(strip, dtype=np.float64)
        if strip.ndim != 2 or strip.shape[1] != 3 or strip.shape[0] < 2:
            raise ValueError("strip must be a (K>=2, 3) array")
        self.strips.append(strip)
        self.levels.append(int(level))

    def copy(self) -> "PolyLineSet":
        return PolyLineSet([s.copy() for s in self.strips], list(self.levels))

    def total_vertices(self) -> int:
        return sum(len(s) for s in self.strips)

    def bounds(self):
        """(min_xyz, max_xyz) over all strips; zeros when empty."""
        if not self.strips:
            return np.zeros(3), np.zeros(3)
        lo = np.min([s.min(axis=0) for s in self.strips], axis=0)
        hi = np.max([s.max(axis=0) for s in self.strips], axis=0)
        return lo, hi

    def level_counts(self) -> dict:
        counts: dict = {}
        for lv in self.levels:
            counts[lv] = counts.get(lv, 0) + 1
        return counts
