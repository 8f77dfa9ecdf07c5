"""Batch pipeline: coarse mask -> components -> pruning -> prompts -> refine
-> metrics, plus the prompt-count ablation sweep."""

from __future__ import annotations

import csv
import json
import logging
import os
import subprocess
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import metrics, raster
from .components import EIGHT, label_components
from .prompting import (
    PromptConfig,
    generate_prompts,
    prompt_set_to_json,
)
from .pruning import PruneConfig, prune
from .refiner import RefineConfig, refine

log = logging.getLogger("maskprompt")

IMAGE_EXTS = (".png", ".pgm")

TP_COLOR = (0, 255, 0)
FP_COLOR = (255, 0, 0)
FN_COLOR = (0, 0, 255)


@dataclass
class PipelineConfig:
    image_dir: str = ""
    coarse_dir: str = ""
    gt_dir: str = ""  # optional; metrics skipped when empty
    out_dir: str = "out"
    runs: int = 1
    connectivity: str = EIGHT
    prune: PruneConfig = field(default_factory=PruneConfig)
    prompt: PromptConfig = field(default_factory=PromptConfig)
    refine: RefineConfig = field(default_factory=RefineConfig)
    refine_mode: str = "oracle"  # oracle | export | external
    refiner_cmd: str = ""  # external refiner executable, used by refine_mode=external

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.refine_mode not in ("oracle", "export", "external"):
            raise ValueError(f"bad refine_mode: {self.refine_mode!r}")
        if self.refine_mode == "external" and not self.refiner_cmd:
            raise ValueError("refine_mode=external requires refiner_cmd")


@dataclass
class ImageResult:
    stem: str
    prompts: object = None
    refined: object = None
    report: object = None
    fallback: bool = False
    error: str = ""


@dataclass
class BatchResult:
    results: list
    n_processed: int
    n_failed: int
    aggregate: object = None


def load_pipeline_config(path, overrides=None):
    """Read a YAML key-value config file; `overrides` (flat dict, dotted keys
    like 'prune.min_area') win over file values."""
    import yaml

    doc = {}
    if path:
        with open(path) as fh:
            doc = yaml.safe_load(fh) or {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    try:
        return PipelineConfig(
            image_dir=str(doc.get("image_dir", "")),
            coarse_dir=str(doc.get("coarse_dir", "")),
            gt_dir=str(doc.get("gt_dir", "")),
            out_dir=str(doc.get("out_dir", "out")),
            runs=int(doc.get("runs", 1)),
            connectivity=str(doc.get("connectivity", EIGHT)),
            prune=PruneConfig(**(doc.get("prune") or {})),
            prompt=PromptConfig(**(doc.get("prompt") or {})),
            refine=RefineConfig(**(doc.get("refine") or {})),
            refine_mode=str(doc.get("refine_mode", "oracle")),
            refiner_cmd=str(doc.get("refiner_cmd", "")),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad pipeline config: {exc}") from exc


def prune_with_fallback(coarse_mask, cfg):
    """Label + prune; when everything is pruned, halve both thresholds once,
    and as a last resort keep the largest raw component. Returns
    (PruneResult, fallback_engaged, (labels, retained_stats))."""
    labels, stats = label_components(coarse_mask, cfg.connectivity)
    result = prune(labels, stats, cfg.prune)
    fallback = False
    if not result.retained_ids and stats:
        fallback = True
        relaxed = PruneConfig(cfg.prune.min_area // 2, cfg.prune.min_extent // 2)
        result = prune(labels, stats, relaxed)
        if not result.retained_ids:
            largest = min(stats, key=lambda s: (-s.area, s.id))
            clean = (labels == largest.id).astype(np.uint8)
            low_conf = ((labels > 0) & (labels != largest.id)).astype(np.uint8)
            removed = [s.id for s in stats if s.id != largest.id]
            from .pruning import PruneResult

            result = PruneResult(clean, low_conf, [largest.id], removed)
    retained_set = set(result.retained_ids)
    retained_stats = [s for s in stats if s.id in retained_set]
    return result, fallback, (labels, retained_stats)


def error_overlay(pred, gt):
    """RGB overlay: true positives green, false positives red, false negatives
    blue, everything else black."""
    pred = np.asarray(pred) != 0
    gt = np.asarray(gt) != 0
    out = np.zeros(pred.shape + (3,), dtype=np.uint8)
    out[pred & gt] = TP_COLOR
    out[pred & ~gt] = FP_COLOR
    out[~pred & gt] = FN_COLOR
    return out


def save_overlay(pred, gt, path):
    from PIL import Image

    Image.fromarray(error_overlay(pred, gt), mode="RGB").save(path, format="PNG")


def _find_pair(directory, stem):
    for ext in IMAGE_EXTS:
        candidate = os.path.join(directory, stem + ext)
        if os.path.exists(candidate):
            return candidate
    return None


def _external_refine(cfg, image_path, prompts_path, out_path):
    cmd = cfg.refiner_cmd.split() + [
        "--image", image_path,
        "--prompts", prompts_path,
        "--output", out_path,
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"external refiner failed ({proc.returncode}): {proc.stderr.strip()}")
    return raster.binarize(raster.load_grayscale(out_path))


def process_image(cfg, stem, image_path, coarse_path, gt_path=None, write=True):
    """Run one image through the pipeline. Returns an ImageResult; raises
    nothing for per-image data errors (they land in result.error)."""
    result = ImageResult(stem=stem)
    try:
        image = raster.load_grayscale(image_path)
        coarse = raster.binarize(raster.load_grayscale(coarse_path))
        if image.shape != coarse.shape:
            raise ValueError(f"image/coarse shape mismatch for {stem}")
        gt = raster.binarize(raster.load_grayscale(gt_path)) if gt_path else None

        t0 = time.perf_counter()
        pruned, fallback, comps = prune_with_fallback(coarse, cfg)
        result.fallback = fallback
        if fallback:
            log.warning("%s: pruning fallback engaged", stem)
        prompts = generate_prompts(
            pruned.clean_mask, pruned.low_conf_mask, stem,
            cfg.prompt, cfg.connectivity, components=comps,
        )
        result.prompts = prompts
        if prompts.truncated:
            log.warning("%s: prompt budget truncated by region size", stem)

        prompts_path = os.path.join(cfg.out_dir, f"{stem}.prompts.json")
        refined_path = os.path.join(cfg.out_dir, f"{stem}.refined.png")
        if write:
            with open(prompts_path, "w") as fh:
                fh.write(prompt_set_to_json(prompts))

        refined = None
        if cfg.refine_mode == "oracle":
            refined = refine(image, prompts, cfg.refine)
        elif cfg.refine_mode == "external":
            refined = _external_refine(cfg, image_path, prompts_path, refined_path)
        wall = time.perf_counter() - t0

        result.refined = refined
        if write and refined is not None and cfg.refine_mode != "external":
            raster.save_mask(refined, refined_path)
        if refined is not None and gt is not None:
            result.report = metrics.evaluate(refined, gt, stem, wall)
            if write:
                save_overlay(refined, gt, os.path.join(cfg.out_dir, f"{stem}.overlay.png"))
    except Exception as exc:  # per-image failures must not kill the batch
        result.error = str(exc)
        log.error("%s: %s", stem, exc)
    return result


def list_batch(cfg):
    """(stem, image, coarse, gt-or-None) tuples paired by filename stem."""
    stems = sorted(
        os.path.splitext(f)[0]
        for f in os.listdir(cfg.image_dir)
        if f.lower().endswith(IMAGE_EXTS)
    )
    batch = []
    for stem in stems:
        image_path = _find_pair(cfg.image_dir, stem)
        coarse_path = _find_pair(cfg.coarse_dir, stem)
        gt_path = _find_pair(cfg.gt_dir, stem) if cfg.gt_dir else None
        batch.append((stem, image_path, coarse_path, gt_path))
    return batch


def run_pipeline(cfg, write=True):
    if write:
        os.makedirs(cfg.out_dir, exist_ok=True)
    batch = list_batch(cfg)
    if not batch:
        log.warning("no inputs found in %s", cfg.image_dir)
        return BatchResult(results=[], n_processed=0, n_failed=0)

    runs = []
    results = []
    for _ in range(cfg.runs):
        results = []
        for stem, image_path, coarse_path, gt_path in batch:
            if coarse_path is None:
                res = ImageResult(stem=stem, error="missing coarse mask")
                log.error("%s: missing coarse mask", stem)
            else:
                res = process_image(cfg, stem, image_path, coarse_path, gt_path, write)
            results.append(res)
        reports = [r.report for r in results if r.report is not None]
        if reports:
            runs.append(reports)

    agg = metrics.aggregate(runs) if runs else None
    n_failed = sum(1 for r in results if r.error)
    if write:
        _write_metrics(cfg, results, agg)
    return BatchResult(
        results=results,
        n_processed=len(results) - n_failed,
        n_failed=n_failed,
        aggregate=agg,
    )


def _write_metrics(cfg, results, agg):
    rows = [r.report for r in results if r.report is not None]
    if not rows and agg is None:
        return
    with open(os.path.join(cfg.out_dir, "metrics.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image", "dice", "iou", "accuracy", "wall_time_s"])
        for rep in rows:
            writer.writerow(
                [rep.image_id, f"{rep.dice:.6f}", f"{rep.iou:.6f}",
                 f"{rep.accuracy:.6f}", f"{rep.wall_time_s:.4f}" if rep.wall_time_s else ""]
            )
    if agg is not None:
        with open(os.path.join(cfg.out_dir, "metrics.json"), "w") as fh:
            json.dump(
                {
                    "dice_mean": agg.dice_mean, "dice_std": agg.dice_std,
                    "iou_mean": agg.iou_mean, "iou_std": agg.iou_std,
                    "accuracy_mean": agg.accuracy_mean, "accuracy_std": agg.accuracy_std,
                    "n_runs": agg.n_runs,
                },
                fh, indent=2,
            )
            fh.write("\n")


def ablate_prompt_count(cfg, counts, write=True):
    """Run the pipeline once per total prompt count (odd remainder goes to the
    positive side) and report mean Dice per count."""
    rows = []
    for count in counts:
        n_pos = count - count // 2
        n_neg = count // 2
        sub = replace(
            cfg,
            prompt=replace(cfg.prompt, n_positive=n_pos, n_negative=n_neg),
            out_dir=os.path.join(cfg.out_dir, f"ablate_{count}"),
        )
        batch = run_pipeline(sub, write=write)
        reports = [r.report for r in batch.results if r.report is not None]
        if reports and batch.n_failed == 0:
            mean_dice = sum(r.dice for r in reports) / len(reports)
            rows.append({"count": count, "mean_dice": mean_dice, "status": "ok"})
        else:
            rows.append({"count": count, "mean_dice": float("nan"), "status": "failed"})
    if write:
        os.makedirs(cfg.out_dir, exist_ok=True)
        with open(os.path.join(cfg.out_dir, "ablation.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["count", "mean_dice", "status"])
            for row in rows:
                dice_txt = "" if row["status"] == "failed" else f"{row['mean_dice']:.6f}"
                writer.writerow([row["count"], dice_txt, row["status"]])
    return rows
