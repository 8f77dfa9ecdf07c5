"""Segmentation quality metrics, run aggregation, and throughput measurement."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np


@dataclass
class MetricsReport:
    dice: float
    iou: float
    accuracy: float
    image_id: str = ""
    wall_time_s: float | None = None


@dataclass
class AggregateReport:
    dice_mean: float
    dice_std: float
    iou_mean: float
    iou_std: float
    accuracy_mean: float
    accuracy_std: float
    n_runs: int
    fps: float | None = None


def _counts(pred, gt):
    pred = np.asarray(pred) != 0
    gt = np.asarray(gt) != 0
    if pred.shape != gt.shape:
        raise ValueError(f"dimension mismatch: {pred.shape} vs {gt.shape}")
    inter = int(np.count_nonzero(pred & gt))
    return inter, int(np.count_nonzero(pred)), int(np.count_nonzero(gt)), pred.size


def dice(pred, gt):
    """2|P∩G| / (|P|+|G|), 1.0 when both masks are empty."""
    inter, p, g, _ = _counts(pred, gt)
    if p + g == 0:
        return 1.0
    return 2.0 * inter / (p + g)


def iou(pred, gt):
    """|P∩G| / |P∪G|, 1.0 when both masks are empty."""
    inter, p, g, _ = _counts(pred, gt)
    union = p + g - inter
    if union == 0:
        return 1.0
    return inter / union


def pixel_accuracy(pred, gt):
    pred = np.asarray(pred) != 0
    gt = np.asarray(gt) != 0
    if pred.shape != gt.shape:
        raise ValueError(f"dimension mismatch: {pred.shape} vs {gt.shape}")
    return int(np.count_nonzero(pred == gt)) / pred.size


def evaluate(pred, gt, image_id="", wall_time_s=None):
    return MetricsReport(
        dice=dice(pred, gt),
        iou=iou(pred, gt),
        accuracy=pixel_accuracy(pred, gt),
        image_id=image_id,
        wall_time_s=wall_time_s,
    )


def mean_std(values):
    """Arithmetic mean and sample (N-1) standard deviation; std is 0 for N=1."""
    values = list(values)
    if not values:
        raise ValueError("empty input")
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def aggregate(runs, fps=None):
    """Aggregate per-run report lists: mean and sample std across run-level means."""
    runs = [list(r) for r in runs]
    if not runs or any(not r for r in runs):
        raise ValueError("empty input")
    run_means = {
        name: [sum(getattr(rep, name) for rep in run) / len(run) for run in runs]
        for name in ("dice", "iou", "accuracy")
    }
    d = mean_std(run_means["dice"])
    j = mean_std(run_means["iou"])
    a = mean_std(run_means["accuracy"])
    return AggregateReport(d[0], d[1], j[0], j[1], a[0], a[1], n_runs=len(runs), fps=fps)


def measure_fps(stage, images):
    """Wall-clock images/second of `stage` over a batch, timed around the
    stage only. Runs the batch sequentially on the calling thread."""
    images = list(images)
    if not images:
        raise ValueError("empty batch")
    t0 = time.perf_counter()
    for image in images:
        stage(image)
    elapsed = time.perf_counter() - t0
    return len(images) / elapsed


def format_table(agg):
    """Aligned text table with Dice/IoU/ACC as percentages plus FPS."""
    header = f"{'Dice (%)':>16}  {'IoU (%)':>16}  {'ACC (%)':>16}  {'FPS':>10}"
    fps = f"{agg.fps:.2f}" if agg.fps is not None else "-"
    row = (
        f"{agg.dice_mean * 100:6.2f} ± {agg.dice_std * 100:6.3f}  "
        f"{agg.iou_mean * 100:6.2f} ± {agg.iou_std * 100:6.3f}  "
        f"{agg.accuracy_mean * 100:6.2f} ± {agg.accuracy_std * 100:6.3f}  "
        f"{fps:>10}"
    )
    return header + "\n" + row


def report_to_dict(rep):
    out = {
        "image": rep.image_id,
        "dice": rep.dice,
        "iou": rep.iou,
        "accuracy": rep.accuracy,
    }
    if rep.wall_time_s is not None:
        out["wall_time_s"] = rep.wall_time_s
    return out
