"""Batch command-line front end.

Subcommands: prompts, refine, eval, pipeline, ablate, phantom, bench.
Exit codes: 0 success, 1 partial failures, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import metrics, raster
from .phantom import PhantomSpec, generate_phantom
from .pipeline import (
    ablate_prompt_count,
    load_pipeline_config,
    prune_with_fallback,
    run_pipeline,
)
from .prompting import (
    PromptConfig,
    generate_prompts,
    prompt_set_from_json,
    prompt_set_to_json,
)
from .pruning import PruneConfig
from .refiner import RefineConfig, refine

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


def _add_prompt_flags(p):
    p.add_argument("--min-area", type=int, default=None)
    p.add_argument("--min-extent", type=int, default=None)
    p.add_argument("--n-positive", type=int, default=None)
    p.add_argument("--n-negative", type=int, default=None)
    p.add_argument("--margin-radius", type=int, default=None)
    p.add_argument("--negative-source",
                   choices=["background_margin", "low_confidence", "both"], default=None)
    p.add_argument("--connectivity", choices=["four", "eight"], default=None)


def _pipeline_overrides(args):
    return {
        "image_dir": getattr(args, "image_dir", None),
        "coarse_dir": getattr(args, "coarse_dir", None),
        "gt_dir": getattr(args, "gt_dir", None),
        "out_dir": getattr(args, "out_dir", None),
        "runs": getattr(args, "runs", None),
        "connectivity": args.connectivity,
        "refine_mode": getattr(args, "refine_mode", None),
        "refiner_cmd": getattr(args, "refiner_cmd", None),
        "prune.min_area": args.min_area,
        "prune.min_extent": args.min_extent,
        "prompt.n_positive": args.n_positive,
        "prompt.n_negative": args.n_negative,
        "prompt.margin_radius": args.margin_radius,
        "prompt.negative_source": args.negative_source,
        "refine.intensity_tolerance": getattr(args, "tolerance", None),
        "refine.negative_block_radius": getattr(args, "block_radius", None),
    }


def cmd_prompts(args):
    cfg = load_pipeline_config(args.config, _pipeline_overrides(args))
    mask = raster.binarize(raster.load_grayscale(args.mask))
    pruned, fallback, comps = prune_with_fallback(mask, cfg)
    image_id = args.image_id or os.path.splitext(os.path.basename(args.mask))[0]
    ps = generate_prompts(
        pruned.clean_mask, pruned.low_conf_mask, image_id,
        cfg.prompt, cfg.connectivity, components=comps,
    )
    with open(args.out, "w") as fh:
        fh.write(prompt_set_to_json(ps))
    if fallback:
        print(f"warning: pruning fallback engaged for {image_id}", file=sys.stderr)
    print(f"wrote {len(ps.points)} prompts to {args.out}")
    return EXIT_OK


def cmd_refine(args):
    image = raster.load_grayscale(args.image)
    with open(args.prompts) as fh:
        ps = prompt_set_from_json(fh.read())
    cfg = RefineConfig(
        intensity_tolerance=args.tolerance,
        negative_block_radius=args.block_radius,
    )
    mask = refine(image, ps, cfg)
    raster.save_mask(mask, args.out)
    print(f"wrote refined mask to {args.out}")
    return EXIT_OK


def cmd_eval(args):
    pred = raster.binarize(raster.load_grayscale(args.pred))
    gt = raster.binarize(raster.load_grayscale(args.gt))
    rep = metrics.evaluate(pred, gt, os.path.basename(args.pred))
    payload = metrics.report_to_dict(rep)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(f"dice={rep.dice:.4f} iou={rep.iou:.4f} accuracy={rep.accuracy:.4f}")
    return EXIT_OK


def cmd_pipeline(args):
    cfg = load_pipeline_config(args.config, _pipeline_overrides(args))
    if not cfg.image_dir or not cfg.coarse_dir:
        raise ValueError("image_dir and coarse_dir are required")
    batch = run_pipeline(cfg)
    if not batch.results:
        print("no inputs")
        return EXIT_OK
    print(f"processed {batch.n_processed}/{len(batch.results)} images "
          f"({batch.n_failed} failed)")
    if batch.aggregate is not None:
        print(metrics.format_table(batch.aggregate))
    return EXIT_OK if batch.n_failed == 0 else EXIT_PARTIAL


def cmd_ablate(args):
    cfg = load_pipeline_config(args.config, _pipeline_overrides(args))
    counts = [int(c) for c in args.counts.split(",")]
    rows = ablate_prompt_count(cfg, counts)
    for row in rows:
        dice_txt = "failed" if row["status"] == "failed" else f"{row['mean_dice']:.4f}"
        print(f"count={row['count']:>4}  mean_dice={dice_txt}")
    failed = any(row["status"] == "failed" for row in rows)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_phantom(args):
    for sub in ("images", "gt", "coarse"):
        os.makedirs(os.path.join(args.out, sub), exist_ok=True)
    for i in range(args.count):
        spec = PhantomSpec(
            width=args.width,
            height=args.height,
            ribbon_count=args.ribbons,
            ribbon_thickness=args.thickness,
            noise_blob_count=args.blobs,
            noise_blob_max_area=args.blob_max_area,
            coarse_erosion=args.erosion,
            rng_seed=args.seed + i,
        )
        image, gt, coarse = generate_phantom(spec)
        stem = f"phantom_{i:03d}"
        raster.save_grayscale(image, os.path.join(args.out, "images", stem + ".png"))
        raster.save_mask(gt, os.path.join(args.out, "gt", stem + ".png"))
        raster.save_mask(coarse, os.path.join(args.out, "coarse", stem + ".png"))
        with open(os.path.join(args.out, "images", stem + ".spec.json"), "w") as fh:
            fh.write(spec.to_json())
    print(f"wrote {args.count} phantoms to {args.out}")
    return EXIT_OK


def cmd_bench(args):
    from .pipeline import PipelineConfig

    spec = PhantomSpec(
        width=args.size, height=args.size, ribbon_count=2, ribbon_thickness=9,
        noise_blob_count=10, coarse_erosion=1, rng_seed=args.seed,
    )
    _, _, coarse = generate_phantom(spec)
    cfg = PipelineConfig()

    def stage(mask):
        pruned, _, comps = prune_with_fallback(mask, cfg)
        return generate_prompts(
            pruned.clean_mask, pruned.low_conf_mask, "bench",
            cfg.prompt, cfg.connectivity, components=comps,
        )

    stage(coarse)  # warm up
    fps = metrics.measure_fps(stage, [coarse] * args.repeat)
    print(f"prompt generation on {args.size}x{args.size}: {fps:.2f} images/s")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="maskprompt",
        description="Coarse-to-fine point-prompt generation, refinement and evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prompts", help="coarse mask -> prompt JSON")
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--image-id", default="")
    p.add_argument("--config", default="")
    _add_prompt_flags(p)
    p.set_defaults(func=cmd_prompts)

    p = sub.add_parser("refine", help="image + prompt JSON -> refined mask")
    p.add_argument("--image", required=True)
    p.add_argument("--prompts", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tolerance", type=int, default=25)
    p.add_argument("--block-radius", type=int, default=10)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("eval", help="pred + gt masks -> metrics")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--json", default="")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="full batch run")
    p.add_argument("--config", default="")
    p.add_argument("--image-dir", dest="image_dir", default=None)
    p.add_argument("--coarse-dir", dest="coarse_dir", default=None)
    p.add_argument("--gt-dir", dest="gt_dir", default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--refine-mode", dest="refine_mode",
                   choices=["oracle", "export", "external"], default=None)
    p.add_argument("--refiner-cmd", dest="refiner_cmd", default=None)
    p.add_argument("--tolerance", type=int, default=None)
    p.add_argument("--block-radius", type=int, default=None)
    _add_prompt_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("ablate", help="prompt-count sweep -> CSV")
    p.add_argument("--config", default="")
    p.add_argument("--counts", default="2,6,10,20,40,60")
    p.add_argument("--image-dir", dest="image_dir", default=None)
    p.add_argument("--coarse-dir", dest="coarse_dir", default=None)
    p.add_argument("--gt-dir", dest="gt_dir", default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--tolerance", type=int, default=None)
    p.add_argument("--block-radius", type=int, default=None)
    _add_prompt_flags(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("phantom", help="generate synthetic fixtures")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--width", type=int, default=400)
    p.add_argument("--height", type=int, default=400)
    p.add_argument("--ribbons", type=int, default=1)
    p.add_argument("--thickness", type=int, default=5)
    p.add_argument("--blobs", type=int, default=10)
    p.add_argument("--blob-max-area", type=int, default=999)
    p.add_argument("--erosion", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("bench", help="prompt-generation throughput")
    p.add_argument("--size", type=int, default=1024)
    p.add_argument("--repeat", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
