"""Sample pipeline and dataset persistence.

A dataset is a directory of PNG renders, per-sample annotation JSONs
carrying the full parameter set, optional curve binaries, a JSON-lines
manifest, and a metadata header.  Every record regenerates bit-identical
curves and images from its annotation: the stages of the pipeline draw
from independent child streams of the sample seed, so rebuilding from
known parameters (skipping the sampler) still replays the exact build
and flyaway draws.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from PIL import Image

from . import __version__
from .curves import build_raw_yarn
from .flyaway import FlyawayReport, add_flyaways
from .params import AuxSample, FlyawayParams, RawYarnParams, levels_from_params
from .polyline import PolyLineSet
from .raster import ImageConfig, rasterize
from .rng import phase_streams
from .sampler import sample_yarn

__all__ = [
    "GenConfig",
    "YarnSample",
    "build_sample",
    "sample_and_build",
    "annotation_dict",
    "params_from_annotation",
    "write_annotation",
    "read_annotation",
    "write_image",
    "generate_dataset",
    "read_manifest",
    "split_counts",
]

# Full-scale split convention: 4000 training / 345 validation records.
FULL_TRAIN = 4000
FULL_VAL = 345

ANNOTATION_KEYS = [
    "m", "t_x", "t_y", "alpha",
    "n", "r_x", "r_y", "alpha_ply", "R_ply",
    "j_z", "j", "j_xy",
    "g", "p", "beta", "l_hair", "s", "l_loop", "d_mean", "d_std",
]


@dataclass(frozen=True)
class GenConfig:
    """Generation settings that, with the parameters and seed, pin a sample."""

    image: ImageConfig = ImageConfig()
    levels: int = 3
    total_length: float | None = None  # defaults to image.width / image.scale

    @property
    def length(self) -> float:
        return self.total_length if self.total_length is not None else self.image.total_length


@dataclass
class YarnSample:
    curves: PolyLineSet
    raw: RawYarnParams
    fly: FlyawayParams
    seed: int
    image: np.ndarray
    config: GenConfig
    aux: AuxSample | None = None
    report: FlyawayReport | None = None


def build_sample(
    raw: RawYarnParams,
    fly: FlyawayParams,
    seed: int,
    config: GenConfig = GenConfig(),
    aux: AuxSample | None = None,
) -> YarnSample:
    """Deterministic build of one sample from explicit parameters."""
    _, build_rng, fly_rng, _ = phase_streams(seed)
    specs = levels_from_params(raw, config.levels)
    curves = build_raw_yarn(specs, config.length, raw.alpha_f, build_rng)
    curves, report = add_flyaways(curves, fly, fly_rng)
    img = rasterize(
        curves, raw.t_x, raw.t_y,
        config.image.effective_scale, config.image.width, config.image.height,
    )
    return YarnSample(curves=curves, raw=raw, fly=fly, seed=seed, image=img,
                      config=config, aux=aux, report=report)


def sample_and_build(seed: int, config: GenConfig = GenConfig()) -> YarnSample:
    """Draw a configuration with the guided sampler, then build it."""
    sample_rng, _, _, _ = phase_streams(seed)
    raw, fly, aux = sample_yarn(sample_rng)
    return build_sample(raw, fly, seed, config, aux=aux)


def annotation_dict(sample: YarnSample) -> dict:
    """Label record: the full parameter catalog plus provenance."""
    raw, fly = sample.raw, sample.fly
    ann = {
        "m": raw.m, "t_x": raw.t_x, "t_y": raw.t_y, "alpha": raw.alpha,
        "n": raw.n, "r_x": raw.r_x, "r_y": raw.r_y,
        "alpha_ply": raw.alpha_ply, "R_ply": raw.R_ply,
        "j_z": raw.j_z, "j": raw.j, "j_xy": raw.j_xy,
        "g": fly.g, "p": fly.p, "beta": fly.beta, "l_hair": fly.l_hair,
        "s": fly.s, "l_loop": fly.l_loop, "d_mean": fly.d_mean, "d_std": fly.d_std,
        "seed": sample.seed,
        "generator_version": __version__,
        "aux": asdict(sample.aux) if sample.aux is not None else None,
        "gen": {
            "alpha_f": raw.alpha_f,
            "total_length": sample.config.length,
            "levels": sample.config.levels,
            "width": sample.config.image.width,
            "height": sample.config.image.height,
            "scale": sample.config.image.effective_scale,
        },
    }
    return ann


def params_from_annotation(ann: dict) -> tuple[RawYarnParams, FlyawayParams, GenConfig, int]:
    raw = RawYarnParams(
        m=int(ann["m"]), t_x=ann["t_x"], t_y=ann["t_y"], alpha=ann["alpha"],
        n=int(ann["n"]), r_x=ann["r_x"], r_y=ann["r_y"],
        alpha_ply=ann["alpha_ply"], R_ply=ann["R_ply"],
        j=ann.get("j", 0.0), j_z=ann.get("j_z", 0.0), j_xy=ann.get("j_xy", 0.0),
        alpha_f=ann.get("gen", {}).get("alpha_f", RawYarnParams.__dataclass_fields__["alpha_f"].default),
    )
    fly = FlyawayParams(
        g=int(ann["g"]), p=ann["p"], beta=ann["beta"], l_hair=ann["l_hair"],
        s=ann["s"], l_loop=ann["l_loop"], d_mean=ann["d_mean"], d_std=ann["d_std"],
    )
    gen = ann.get("gen", {})
    image = ImageConfig(
        width=int(gen.get("width", 2000)),
        height=int(gen.get("height", 600)),
        scale=float(gen.get("scale", 100.0)),
    )
    config = GenConfig(image=image, levels=int(gen.get("levels", 3)),
                       total_length=gen.get("total_length"))
    return raw, fly, config, int(ann.get("seed", 0))


def write_annotation(path, sample: YarnSample) -> None:
    Path(path).write_text(json.dumps(annotation_dict(sample), indent=1, sort_keys=True))


def read_annotation(path) -> dict:
    return json.loads(Path(path).read_text())


def write_image(path, image: np.ndarray) -> None:
    Image.fromarray(image, mode="L").save(Path(path), format="PNG")


def split_counts(count: int) -> tuple[int, int]:
    """Train/val counts at the 4000:345 convention; exact at full scale."""
    if count == FULL_TRAIN + FULL_VAL:
        return FULL_TRAIN, FULL_VAL
    train = int(round(count * FULL_TRAIN / (FULL_TRAIN + FULL_VAL)))
    return train, count - train


def _one_record(args):
    index, seed, config, out_dir, write_curves = args
    from .curvefile import write_curve_file  # local import keeps workers lean

    sample = sample_and_build(seed, config)
    name = f"{index:05d}"
    image_path = f"images/{name}.png"
    ann_path = f"annotations/{name}.json"
    write_image(Path(out_dir) / image_path, sample.image)
    write_annotation(Path(out_dir) / ann_path, sample)
    row = {
        "id": index,
        "seed": seed,
        "image_path": image_path,
        "annotation_path": ann_path,
        "width": config.image.width,
        "height": config.image.height,
    }
    if write_curves:
        curve_path = f"curves/{name}.yfc"
        write_curve_file(Path(out_dir) / curve_path, sample.curves)
        row["curve_path"] = curve_path
    return row


def generate_dataset(
    count: int,
    base_seed: int,
    config: GenConfig,
    out_dir,
    write_curves: bool = True,
    jobs: int = 1,
) -> Path:
    """Write ``count`` samples with seeds base_seed..base_seed+count-1.

    Parallel across samples (rows are still written in index order); a
    failure mid-run flushes the manifest rows completed so far before
    re-raising, so partial datasets stay readable.
    """
    out_dir = Path(out_dir)
    for sub in ("images", "annotations") + (("curves",) if write_curves else ()):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)

    train, val = split_counts(count)
    meta = {
        "count": count,
        "base_seed": base_seed,
        "width": config.image.width,
        "height": config.image.height,
        "scale": config.image.effective_scale,
        "levels": config.levels,
        "generator_version": __version__,
        "train_count": train,
        "val_count": val,
    }
    (out_dir / "dataset_meta.json").write_text(json.dumps(meta, indent=1))

    tasks = [(i, base_seed + i, config, str(out_dir), write_curves) for i in range(count)]
    rows: list = []
    manifest_path = out_dir / "manifest.jsonl"
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for row in pool.map(_one_record, tasks):
                    rows.append(row)
        else:
            for task in tasks:
                rows.append(_one_record(task))
    except BaseException as exc:
        _write_manifest(manifest_path, rows)
        raise RuntimeError(
            f"dataset generation aborted after {len(rows)}/{count} records "
            f"(partial manifest written): {exc}"
        ) from exc
    _write_manifest(manifest_path, rows)
    return manifest_path


def _write_manifest(path: Path, rows: list) -> None:
    path.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))


def read_manifest(path) -> list:
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            rows.append(json.loads(line))
    return rows
