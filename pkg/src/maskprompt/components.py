"""Connected-component labeling and per-component geometry."""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np
from scipy import ndimage

FOUR = "four"
EIGHT = "eight"


@dataclass(frozen=True)
class ComponentStats:
    id: int
    area: int
    bbox_x: int
    bbox_y: int
    bbox_w: int
    bbox_h: int


def _structure(connectivity):
    if connectivity == EIGHT:
        return np.ones((3, 3), dtype=bool)
    if connectivity == FOUR:
        return ndimage.generate_binary_structure(2, 1)
    raise ValueError(f"connectivity must be 'four' or 'eight', got {connectivity!r}")


def _cv_connectivity(connectivity):
    if connectivity == EIGHT:
        return 8
    if connectivity == FOUR:
        return 4
    raise ValueError(f"connectivity must be 'four' or 'eight', got {connectivity!r}")


def label_components(mask, connectivity=EIGHT):
    """Label components of a binary mask.

    Returns (labels, stats): an int32 label map (0 = background, ids 1..N
    dense) and ComponentStats sorted by id. Ids follow raster-scan order of
    each component's first pixel.
    """
    mask = np.asarray(mask)
    binary = np.ascontiguousarray((mask != 0).astype(np.uint8))
    num, raw, cstats, _ = cv2.connectedComponentsWithStats(
        binary, connectivity=_cv_connectivity(connectivity)
    )
    n = num - 1
    if n == 0:
        return np.zeros(mask.shape, dtype=np.int32), []

    def scan_key(c):
        top = int(cstats[c, cv2.CC_STAT_TOP])
        left = int(cstats[c, cv2.CC_STAT_LEFT])
        width = int(cstats[c, cv2.CC_STAT_WIDTH])
        col = left + int(np.argmax(raw[top, left : left + width] == c))
        return (top, col)

    order = sorted(range(1, num), key=scan_key)
    lut = np.zeros(num, dtype=np.int32)
    for new_id, old_id in enumerate(order, start=1):
        lut[old_id] = new_id
    labels = lut[raw]

    stats = []
    for new_id, old_id in enumerate(order, start=1):
        stats.append(
            ComponentStats(
                id=new_id,
                area=int(cstats[old_id, cv2.CC_STAT_AREA]),
                bbox_x=int(cstats[old_id, cv2.CC_STAT_LEFT]),
                bbox_y=int(cstats[old_id, cv2.CC_STAT_TOP]),
                bbox_w=int(cstats[old_id, cv2.CC_STAT_WIDTH]),
                bbox_h=int(cstats[old_id, cv2.CC_STAT_HEIGHT]),
            )
        )
    return labels, stats
