"""Seedable procedural yarn geometry and dataset synthesis."""

__version__ = "0.1.0"

from .params import AuxSample, FlyawayParams, LevelSpec, RawYarnParams, levels_from_params
from .polyline import HAIR_TAG, LOOP_TAG, RAW_TAG, PolyLineSet
from .rng import RngStream, phase_streams

__all__ = [
    "__version__",
    "AuxSample",
    "FlyawayParams",
    "LevelSpec",
    "RawYarnParams",
    "levels_from_params",
    "PolyLineSet",
    "RAW_TAG",
    "HAIR_TAG",
    "LOOP_TAG",
    "RngStream",
    "phase_streams",
]
