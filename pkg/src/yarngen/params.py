"""Parameter records for the twist hierarchy and the flyaway pass.

Field names follow the generator's parameter catalog: per-ply fiber count
m with ellipse radii (t_x, t_y) and pitch alpha (negative: fibers and
plies twist in opposite directions), ply count n with ellipse radii
(r_x, r_y), yarn-helix pitch alpha_ply and radius R_ply, plus the
stochastic jitters j (radial migration), j_z and j_xy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "LevelSpec",
    "RawYarnParams",
    "FlyawayParams",
    "AuxSample",
    "levels_from_params",
    "DEFAULT_ALPHA_F",
]

# Seed-line vertex spacing (model units) used when none is given.
DEFAULT_ALPHA_F = 0.04

SMALL_CIRCLE = "small-circle"
DISC = "disc"


@dataclass(frozen=True)
class LevelSpec:
    """Twist geometry of one hierarchy level.

    instance_count copies of the previous level are placed on a circle
    (placement_mode "small-circle") or across a disc ("disc") of radius
    placement_radius, then each copy follows its own helix with the given
    signed pitch.  A negative pitch reverses the winding direction; the
    built strips always ascend in z.
    """

    instance_count: int
    placement_radius: float
    jitter_xy: float
    jitter_z: float
    pitch: float
    helix_resolution: int
    ellipse_scale: float
    migration: float
    placement_mode: str = SMALL_CIRCLE

    def __post_init__(self):
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")
        if self.helix_resolution < 3:
            raise ValueError("helix_resolution must be >= 3")
        if self.placement_radius < 0:
            raise ValueError("placement_radius must be >= 0")
        if not (0.0 < self.ellipse_scale <= 1.0):
            raise ValueError("ellipse_scale must be in (0, 1]")
        if self.pitch == 0:
            raise ValueError("pitch must be nonzero")
        if self.migration < 0:
            raise ValueError("migration must be >= 0")
        if self.placement_mode not in (SMALL_CIRCLE, DISC):
            raise ValueError(f"unknown placement_mode {self.placement_mode!r}")


@dataclass
class RawYarnParams:
    """Raw-yarn (pre-flyaway) parameters of the fiber/ply/yarn model."""

    m: int
    t_x: float
    t_y: float
    alpha: float
    n: int
    r_x: float
    r_y: float
    alpha_ply: float
    R_ply: float
    j: float = 0.0
    j_z: float = 0.0
    j_xy: float = 0.0
    alpha_f: float = DEFAULT_ALPHA_F

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if not (self.t_x > 0 and self.t_y > 0):
            raise ValueError("fiber radii must be positive")
        if not (self.r_x > 0 and self.r_y > 0 and self.R_ply >= 0):
            raise ValueError("ply radii must be positive")
        if self.alpha == 0 or self.alpha_ply == 0:
            raise ValueError("pitches must be nonzero")
        if self.alpha_f <= 0:
            raise ValueError("alpha_f must be positive")


@dataclass
class FlyawayParams:
    """Flyaway statistics: g strips, each a loop with probability p."""

    g: int
    p: float
    beta: float
    l_hair: float
    s: float
    l_loop: float
    d_mean: float
    d_std: float

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("g must be >= 0")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError("p must be in [0, 1]")
        for name in ("l_hair", "l_loop", "d_mean", "d_std"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not (0.0 <= self.s):
            raise ValueError("s must be >= 0")


@dataclass
class AuxSample:
    """Auxiliary quantities the guided sampler draws before deriving radii
    and pitches; kept with the annotation for provenance."""

    r_frac: float
    area_frac_ply: float
    area_frac_yarn: float
    gamma: float
    gamma_ply: float


def _resolution_for(pitch: float, alpha_f: float) -> int:
    # Helix vertex z-spacing ~ alpha_f so frame lookups match the seed
    # line's resolution.
    return int(min(4096, max(16, math.ceil(abs(pitch) / alpha_f))))


def levels_from_params(raw: RawYarnParams, levels: int = 3) -> list[LevelSpec]:
    """Level stack for build_raw_yarn, innermost (fiber) first.

    ``levels`` counts hierarchy levels including the seed line, so the
    standard fiber/ply/yarn model is levels=3 (two twist passes).  Levels
    beyond 3 twist pairs of the previous result into a thicker yarn.
    """
    if levels < 2:
        raise ValueError("need at least 2 levels (seed line + one twist)")
    fiber = LevelSpec(
        instance_count=raw.m,
        placement_radius=raw.r_x,
        jitter_xy=raw.j_xy,
        jitter_z=raw.j_z,
        pitch=raw.alpha,
        helix_resolution=_resolution_for(raw.alpha, raw.alpha_f),
        ellipse_scale=raw.t_y / raw.t_x,
        migration=raw.j,
        placement_mode=DISC,
    )
    ply = LevelSpec(
        instance_count=raw.n,
        placement_radius=raw.R_ply,
        jitter_xy=0.0,
        jitter_z=0.0,
        pitch=raw.alpha_ply,
        helix_resolution=_resolution_for(raw.alpha_ply, raw.alpha_f),
        ellipse_scale=raw.r_y / raw.r_x,
        migration=0.0,
        placement_mode=SMALL_CIRCLE,
    )
    stack = [fiber, ply]
    radius = raw.R_ply + raw.r_x
    pitch = raw.alpha_ply
    for _ in range(levels - 3):
        radius *= 1.1
        pitch *= 3.0
        stack.append(
            LevelSpec(
                instance_count=2,
                placement_radius=radius,
                jitter_xy=0.0,
                jitter_z=0.0,
                pitch=pitch,
                helix_resolution=_resolution_for(pitch, raw.alpha_f),
                ellipse_scale=0.9,
                migration=0.0,
                placement_mode=SMALL_CIRCLE,
            )
        )
        radius *= 2.0
    return stack[: levels - 1]
