"""Morphology-aware pruning of labeled components by area and bbox extent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_MIN_AREA = 1000
DEFAULT_MIN_EXTENT = 275


@dataclass(frozen=True)
class PruneConfig:
    min_area: int = DEFAULT_MIN_AREA
    min_extent: int = DEFAULT_MIN_EXTENT

    def __post_init__(self):
        if self.min_area < 0 or self.min_extent < 0:
            raise ValueError("min_area and min_extent must be >= 0")


@dataclass
class PruneResult:
    clean_mask: np.ndarray
    low_conf_mask: np.ndarray
    retained_ids: list = field(default_factory=list)
    removed_ids: list = field(default_factory=list)


def keeps(stats, cfg):
    """A component survives iff it is not smaller than min_area pixels and not
    smaller than min_extent in either bbox dimension (equality retains)."""
    return (
        stats.area >= cfg.min_area
        and stats.bbox_w >= cfg.min_extent
        and stats.bbox_h >= cfg.min_extent
    )


def prune(labels, stats, cfg=PruneConfig()):
    labels = np.asarray(labels)
    n = len(stats)
    present = np.bincount(labels.ravel(), minlength=n + 1)
    for s in stats:
        if s.id < 1 or s.id > n or present[s.id] == 0:
            raise ValueError(f"component id {s.id} absent from label map")

    keep_lut = np.zeros(n + 1, dtype=bool)
    retained, removed = [], []
    for s in stats:
        if keeps(s, cfg):
            keep_lut[s.id] = True
            retained.append(s.id)
        else:
            removed.append(s.id)

    foreground = labels > 0
    clean = (keep_lut[labels] & foreground).astype(np.uint8)
    low_conf = (~keep_lut[labels] & foreground).astype(np.uint8)
    return PruneResult(clean, low_conf, retained, removed)
