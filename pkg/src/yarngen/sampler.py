"""Guided random sampling of yarn configurations.

Raw-yarn radii and pitches are not drawn directly: fiber thickness,
counts and a set of auxiliary densities/angles are drawn uniformly from
calibrated intervals and the remaining parameters derived from them, so
every configuration is a physically packable yarn.  Derived values are
additionally rejected against the published database envelope, which the
raw derivation can exceed in rare corner cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .params import AuxSample, FlyawayParams, RawYarnParams
from .rng import RngStream

__all__ = [
    "RAW_ENVELOPE",
    "FLY_INTERVALS",
    "sample_raw_yarn",
    "sample_flyaway",
    "sample_yarn",
    "validate",
    "ValidityReport",
]

# Database envelope of the derived raw-yarn parameters: every sampled
# configuration must land inside these closed intervals.
RAW_ENVELOPE = {
    "m": (20, 200),
    "r_x": (0.029, 0.789),
    "r_y": (0.042, 0.830),
    "alpha": (-25.778, -0.476),
    "alpha_ply": (0.639, 31.655),
    "R_ply": (0.053, 1.486),
}

# Directly sampled intervals (closed) for the probabilistic parameters.
FLY_INTERVALS = {
    "g": (30, 300),
    "p": (0.35, 0.65),
    "beta": (0.050, 1.571),
    "l_hair": (0.222, 14.5),
    "s": (0.0, 1.0),
    "l_loop": (0.407, 34.627),
    "d_mean": (0.394, 30.469),
    "d_std": (0.007, 5.0),
    "j": (0.0, 0.3),
    "j_xy": (0.0, 0.03),
}

T_Y_INTERVAL = (0.006, 0.01)
T_X_FACTOR = 2.5
M_SAMPLING = (40, 200)
N_INTERVAL = (2, 6)
AREA_FRAC_PLY = (0.035, 0.215)
AREA_FRAC_YARN = (0.55, 0.82)
GAMMA_DEG = (50.0, 80.0)

# Helix-angle band for the validity report, radians.
GAMMA_RAD = (math.radians(GAMMA_DEG[0]), math.radians(GAMMA_DEG[1]))


def _uniform(rng: RngStream, lo: float, hi: float) -> float:
    return lo + rng.draw_uniform() * (hi - lo)


def r_frac_interval(n: int) -> tuple[float, float]:
    """Ply squeeze ratio interval; fewer plies squeeze harder."""
    if n == 2:
        return (0.67, 0.9)
    if n == 3:
        return (0.72, 0.91)
    return (0.85, 0.95)


def sample_raw_yarn(rng: RngStream) -> tuple[RawYarnParams, AuxSample]:
    """Draw one raw-yarn configuration via the auxiliary variables.

    Draw order: t_y, t_x, n, m, r_frac, area_frac_ply, area_frac_yarn,
    gamma_ply, gamma; then radii and pitches are derived.  Configurations
    whose derived values fall outside RAW_ENVELOPE are redrawn.
    """
    while True:
        t_y = _uniform(rng, *T_Y_INTERVAL)
        t_x = _uniform(rng, t_y, T_X_FACTOR * t_y)
        n = rng.draw_int(*N_INTERVAL)
        m = rng.draw_int(*M_SAMPLING)
        r_frac = _uniform(rng, *r_frac_interval(n))
        area_ply = _uniform(rng, *AREA_FRAC_PLY)
        area_yarn = _uniform(rng, *AREA_FRAC_YARN)
        gamma_ply = math.radians(_uniform(rng, *GAMMA_DEG))
        gamma = math.radians(_uniform(rng, *GAMMA_DEG))

        r_x = math.sqrt(m * t_x * t_y / (area_ply * r_frac))
        r_y = r_frac * r_x
        reach = r_x / math.sin(gamma_ply)
        R_ply = math.sqrt(n * r_frac * reach**2 / area_yarn) - r_frac * reach
        alpha_ply = 2.0 * math.pi * R_ply * math.tan(gamma_ply)
        alpha = -2.0 * math.pi * r_x * math.tan(gamma)

        derived = {"m": m, "r_x": r_x, "r_y": r_y, "alpha": alpha,
                   "alpha_ply": alpha_ply, "R_ply": R_ply}
        if all(lo <= derived[k] <= hi for k, (lo, hi) in RAW_ENVELOPE.items()):
            raw = RawYarnParams(
                m=m, t_x=t_x, t_y=t_y, alpha=alpha,
                n=n, r_x=r_x, r_y=r_y, alpha_ply=alpha_ply, R_ply=R_ply,
            )
            aux = AuxSample(
                r_frac=r_frac, area_frac_ply=area_ply, area_frac_yarn=area_yarn,
                gamma=gamma, gamma_ply=gamma_ply,
            )
            return raw, aux


def sample_flyaway(rng: RngStream) -> tuple[FlyawayParams, float, float]:
    """Draw flyaway statistics plus the migration/distribution jitters.

    Returns (params, j, j_xy); j and j_xy belong to the raw-yarn record
    but are drawn here with the other probabilistic parameters.  Draw
    order follows FLY_INTERVALS.  No z-jitter interval is published; j_z
    stays 0 unless set explicitly.
    """
    g = rng.draw_int(*FLY_INTERVALS["g"])
    p = _uniform(rng, *FLY_INTERVALS["p"])
    beta = _uniform(rng, *FLY_INTERVALS["beta"])
    l_hair = _uniform(rng, *FLY_INTERVALS["l_hair"])
    s = _uniform(rng, *FLY_INTERVALS["s"])
    l_loop = _uniform(rng, *FLY_INTERVALS["l_loop"])
    d_mean = _uniform(rng, *FLY_INTERVALS["d_mean"])
    d_std = _uniform(rng, *FLY_INTERVALS["d_std"])
    j = _uniform(rng, *FLY_INTERVALS["j"])
    j_xy = _uniform(rng, *FLY_INTERVALS["j_xy"])
    fly = FlyawayParams(g=g, p=p, beta=beta, l_hair=l_hair, s=s,
                        l_loop=l_loop, d_mean=d_mean, d_std=d_std)
    return fly, j, j_xy


def sample_yarn(rng: RngStream) -> tuple[RawYarnParams, FlyawayParams, AuxSample]:
    """One full configuration: raw yarn, then flyaway block."""
    raw, aux = sample_raw_yarn(rng)
    fly, j, j_xy = sample_flyaway(rng)
    return replace(raw, j=j, j_xy=j_xy), fly, aux


@dataclass
class ValidityReport:
    ok: bool
    violations: list = field(default_factory=list)
    gamma: float = float("nan")
    gamma_ply: float = float("nan")


def validate(raw: RawYarnParams, fly: FlyawayParams | None = None) -> ValidityReport:
    """Interval check against the database conventions; reports, never raises.

    Recomputes the helix angles from the pitches and flags values outside
    the 50..80 degree band, sign violations, and any parameter outside
    its published interval.
    """
    v: list = []

    def check(name, value, lo, hi):
        if not (lo <= value <= hi):
            v.append(f"{name}={value:g} outside [{lo:g}, {hi:g}]")

    if raw.alpha >= 0:
        v.append(f"alpha={raw.alpha:g} must be negative")
    if raw.alpha_ply <= 0:
        v.append(f"alpha_ply={raw.alpha_ply:g} must be positive")
    check("n", raw.n, *N_INTERVAL)
    check("t_y", raw.t_y, *T_Y_INTERVAL)
    check("t_x", raw.t_x, T_Y_INTERVAL[0], T_X_FACTOR * T_Y_INTERVAL[1])
    if raw.t_x < raw.t_y:
        v.append(f"t_x={raw.t_x:g} smaller than t_y={raw.t_y:g}")
    for name, (lo, hi) in RAW_ENVELOPE.items():
        check(name, getattr(raw, name), lo, hi)

    gamma = math.atan(-raw.alpha / (2.0 * math.pi * raw.r_x))
    gamma_ply = (
        math.atan(raw.alpha_ply / (2.0 * math.pi * raw.R_ply))
        if raw.R_ply > 0
        else float("nan")
    )
    check("gamma", gamma, *GAMMA_RAD)
    check("gamma_ply", gamma_ply, *GAMMA_RAD)

    if fly is not None:
        for name, (lo, hi) in FLY_INTERVALS.items():
            if name in ("j", "j_xy"):
                check(name, getattr(raw, name), lo, hi)
            else:
                check(name, getattr(fly, name), lo, hi)
    return ValidityReport(ok=not v, violations=v, gamma=gamma, gamma_ply=gamma_ply)
