"""Command-line front end.

Subcommands: generate (one sample), dataset (many samples + manifest),
edit (re-generate from an annotation with overrides), inspect (summarize
a curve file).  Exit codes: 0 ok, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .curvefile import CurveFormatError, read_curve_file, write_curve_file, write_curve_text
from .dataset import (
    GenConfig,
    annotation_dict,
    build_sample,
    generate_dataset,
    params_from_annotation,
    read_annotation,
    sample_and_build,
    write_annotation,
    write_image,
)
from .params import FlyawayParams, RawYarnParams
from .raster import ImageConfig
from .sampler import validate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

# Parameter flags keep the catalog's names verbatim (--alpha-ply -> alpha_ply).
RAW_FLAGS = ["m", "t_x", "t_y", "alpha", "n", "r_x", "r_y", "alpha_ply", "R_ply",
             "j", "j_z", "j_xy", "alpha_f"]
FLY_FLAGS = ["g", "p", "beta", "l_hair", "s", "l_loop", "d_mean", "d_std"]
INT_FLAGS = {"m", "n", "g"}


def _add_image_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--width", type=int, default=2000, help="image width in pixels")
    p.add_argument("--height", type=int, default=600, help="image height in pixels")
    p.add_argument("--scale", type=float, default=None,
                   help="pixels per model unit (default: fit to image height)")
    p.add_argument("--length", type=float, default=None,
                   help="yarn length in model units (default: width/scale)")
    p.add_argument("--levels", type=int, default=3,
                   help="hierarchy depth incl. the seed line (3 = fiber/ply/yarn)")


def _add_param_args(p: argparse.ArgumentParser) -> None:
    for name in RAW_FLAGS + FLY_FLAGS:
        p.add_argument(
            f"--{name.replace('_', '-')}",
            dest=f"param_{name}",
            type=int if name in INT_FLAGS else float,
            default=None,
            help=f"override parameter {name}",
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="yarngen", description=__doc__)
    ap.add_argument("--version", action="version", version=f"yarngen {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate one yarn sample")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out-dir", type=Path, default=Path("."))
    g.add_argument("--name", default=None, help="basename for outputs (default: seed)")
    g.add_argument("--params", type=Path, default=None,
                   help="annotation JSON; its values take precedence over flags")
    g.add_argument("--no-image", action="store_true")
    g.add_argument("--no-curves", action="store_true")
    g.add_argument("--text-curves", action="store_true",
                   help="also write the plain-text debug curve format")
    g.add_argument("--json", action="store_true", help="print a machine-readable summary")
    _add_image_args(g)
    _add_param_args(g)

    d = sub.add_parser("dataset", help="generate an annotated dataset")
    d.add_argument("--count", type=int, required=True)
    d.add_argument("--base-seed", type=int, default=0)
    d.add_argument("--out-dir", type=Path, required=True)
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--no-curves", action="store_true")
    d.add_argument("--json", action="store_true")
    _add_image_args(d)

    e = sub.add_parser("edit", help="regenerate from an annotation with overrides")
    e.add_argument("--base", type=Path, required=True, help="base annotation JSON")
    e.add_argument("--seed", type=int, default=None,
                   help="seed for the regeneration (default: the base annotation's)")
    e.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                   help="set a parameter, e.g. --set alpha=-2.5")
    e.add_argument("--mul", action="append", default=[], metavar="NAME=FACTOR",
                   help="scale a parameter, e.g. --mul alpha_ply=0.5")
    e.add_argument("--out-dir", type=Path, default=Path("."))
    e.add_argument("--name", default=None)
    e.add_argument("--no-image", action="store_true")
    e.add_argument("--no-curves", action="store_true")
    e.add_argument("--json", action="store_true")

    i = sub.add_parser("inspect", help="summarize a curve file")
    i.add_argument("curve_file", type=Path)
    i.add_argument("--json", action="store_true")

    return ap


def _apply_overrides(raw: RawYarnParams, fly: FlyawayParams, args) -> tuple:
    raw_kw = dataclasses.asdict(raw)
    fly_kw = dataclasses.asdict(fly)
    for name in RAW_FLAGS:
        value = getattr(args, f"param_{name}", None)
        if value is not None:
            raw_kw[name] = value
    for name in FLY_FLAGS:
        value = getattr(args, f"param_{name}", None)
        if value is not None:
            fly_kw[name] = value
    return RawYarnParams(**raw_kw), FlyawayParams(**fly_kw)


def _gen_config(args) -> GenConfig:
    image = ImageConfig(width=args.width, height=args.height, scale=args.scale)
    return GenConfig(image=image, levels=args.levels, total_length=args.length)


def _write_sample(sample, out_dir: Path, name: str, args) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    ann_path = out_dir / f"{name}.json"
    write_annotation(ann_path, sample)
    paths["annotation"] = str(ann_path)
    if not args.no_curves:
        curve_path = out_dir / f"{name}.yfc"
        write_curve_file(curve_path, sample.curves)
        paths["curves"] = str(curve_path)
    if getattr(args, "text_curves", False):
        text_path = out_dir / f"{name}.txt"
        write_curve_text(text_path, sample.curves)
        paths["text_curves"] = str(text_path)
    if not args.no_image:
        img_path = out_dir / f"{name}.png"
        write_image(img_path, sample.image)
        paths["image"] = str(img_path)
    return paths


def _summary(sample, paths: dict) -> dict:
    return {
        "seed": sample.seed,
        "strips": len(sample.curves),
        "level_counts": {str(k): v for k, v in sample.curves.level_counts().items()},
        "flyaways_added": sample.report.added if sample.report else 0,
        "flyaways_skipped": sample.report.skipped if sample.report else 0,
        "paths": paths,
    }


def _report_validity(raw, fly, json_mode: bool) -> dict:
    rep = validate(raw, fly)
    if not rep.ok and not json_mode:
        for msg in rep.violations:
            print(f"warning: {msg}", file=sys.stderr)
    return {"ok": rep.ok, "violations": rep.violations,
            "gamma": rep.gamma, "gamma_ply": rep.gamma_ply}


def cmd_generate(args) -> int:
    config = _gen_config(args)
    if args.params is not None:
        ann = read_annotation(args.params)
        raw, fly, config, _ = params_from_annotation(ann)
        sample = build_sample(raw, fly, args.seed, config)
    else:
        sample = sample_and_build(args.seed, config)
        raw, fly = _apply_overrides(sample.raw, sample.fly, args)
        if (raw, fly) != (sample.raw, sample.fly):
            sample = build_sample(raw, fly, args.seed, config)
    name = args.name or f"yarn_{args.seed}"
    paths = _write_sample(sample, args.out_dir, name, args)
    summary = _summary(sample, paths)
    summary["validity"] = _report_validity(sample.raw, sample.fly, args.json)
    if args.json:
        print(json.dumps(summary, indent=1))
    else:
        print(f"wrote {name}: {len(sample.curves)} strips "
              f"({summary['flyaways_added']} flyaways)")
    return EXIT_OK


def cmd_dataset(args) -> int:
    config = _gen_config(args)
    manifest = generate_dataset(
        args.count, args.base_seed, config, args.out_dir,
        write_curves=not args.no_curves, jobs=args.jobs,
    )
    if args.json:
        print(json.dumps({"manifest": str(manifest), "count": args.count}))
    else:
        print(f"wrote {args.count} records, manifest at {manifest}")
    return EXIT_OK


def _parse_assignments(pairs: list, what: str) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"bad {what} {pair!r}, expected NAME=VALUE")
        name, value = pair.split("=", 1)
        out[name.strip()] = float(value)
    return out


def cmd_edit(args) -> int:
    ann = read_annotation(args.base)
    raw, fly, config, base_seed = params_from_annotation(ann)
    raw_kw = dataclasses.asdict(raw)
    fly_kw = dataclasses.asdict(fly)

    def apply(name, fn):
        if name in raw_kw:
            raw_kw[name] = fn(raw_kw[name])
        elif name in fly_kw:
            fly_kw[name] = fn(fly_kw[name])
        else:
            raise ValueError(f"unknown parameter {name!r}")

    for name, value in _parse_assignments(args.set, "--set").items():
        apply(name, lambda _old, v=value: v)
    for name, factor in _parse_assignments(args.mul, "--mul").items():
        apply(name, lambda old, f=factor: old * f)
    for key in ("m", "n"):
        raw_kw[key] = int(round(raw_kw[key]))
    fly_kw["g"] = int(round(fly_kw["g"]))

    raw2, fly2 = RawYarnParams(**raw_kw), FlyawayParams(**fly_kw)
    seed = args.seed if args.seed is not None else base_seed
    sample = build_sample(raw2, fly2, seed, config)
    name = args.name or f"{args.base.stem}_edit"
    paths = _write_sample(sample, args.out_dir, name, args)
    summary = _summary(sample, paths)
    # out-of-range edits are legitimate; report, do not fail
    summary["validity"] = _report_validity(raw2, fly2, args.json)
    if args.json:
        print(json.dumps(summary, indent=1))
    else:
        print(f"wrote {name}: {len(sample.curves)} strips")
    return EXIT_OK


def cmd_inspect(args) -> int:
    curves = read_curve_file(args.curve_file)
    lo, hi = curves.bounds()
    lengths = [
        float(np.sum(np.linalg.norm(np.diff(s, axis=0), axis=1))) for s in curves.strips
    ]
    radius = max((float(np.hypot(s[:, 0], s[:, 1]).max()) for s in curves.strips), default=0.0)
    summary = {
        "strips": len(curves),
        "level_counts": {str(k): v for k, v in sorted(curves.level_counts().items())},
        "total_vertices": curves.total_vertices(),
        "length_min": min(lengths, default=0.0),
        "length_mean": float(np.mean(lengths)) if lengths else 0.0,
        "length_max": max(lengths, default=0.0),
        "bbox_min": [float(v) for v in lo],
        "bbox_max": [float(v) for v in hi],
        "radial_extent": radius,
    }
    if args.json:
        print(json.dumps(summary, indent=1))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "dataset": cmd_dataset,
    "edit": cmd_edit,
    "inspect": cmd_inspect,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, CurveFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc.__cause__, OSError):
            return EXIT_IO
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
