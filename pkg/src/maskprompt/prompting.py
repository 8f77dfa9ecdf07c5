"""Positive/negative point-prompt generation via greedy farthest-point sampling.

All distance comparisons use exact squared-integer arithmetic; every tie is
broken by lowest row-major index, so outputs are identical across platforms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import cv2
import numpy as np

from .components import EIGHT, label_components

POSITIVE = 1
NEGATIVE = 0

try:
    from numba import njit

    @njit(cache=True)
    def _greedy_select(xs, ys, first, k):
        n = xs.size
        selected = np.empty(k, dtype=np.int64)
        selected[0] = first
        dmin = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        for j in range(1, k):
            # one fused pass: fold in the previous pick, track the next argmax
            px, py = xs[selected[j - 1]], ys[selected[j - 1]]
            best = 0
            best_d = np.int64(-1)
            for i in range(n):
                dx = xs[i] - px
                dy = ys[i] - py
                d = dx * dx + dy * dy
                if d < dmin[i]:
                    dmin[i] = d
                if dmin[i] > best_d:  # strict > keeps the lowest row-major index
                    best_d = dmin[i]
                    best = i
            selected[j] = best
        return selected

except ImportError:  # pragma: no cover - numba is an optional accelerator
    _greedy_select = None


class EmptySamplingRegionError(ValueError):
    def __init__(self, role):
        self.role = role
        super().__init__(f"empty sampling region ({role})")


class NoPositiveRegionError(EmptySamplingRegionError):
    def __init__(self):
        ValueError.__init__(self, "no positive region")
        self.role = "positive"


class NoNegativeRegionError(EmptySamplingRegionError):
    def __init__(self):
        ValueError.__init__(self, "no negative region")
        self.role = "negative"


@dataclass(frozen=True)
class PointPrompt:
    x: int
    y: int
    label: int  # POSITIVE or NEGATIVE


@dataclass(frozen=True)
class PromptConfig:
    n_positive: int = 20
    n_negative: int = 20
    negative_source: str = "both"  # background_margin | low_confidence | both
    margin_radius: int = 5

    def __post_init__(self):
        if self.n_positive < 0 or self.n_negative < 0 or self.margin_radius < 0:
            raise ValueError("counts and margin_radius must be >= 0")
        if self.negative_source not in ("background_margin", "low_confidence", "both"):
            raise ValueError(f"bad negative_source: {self.negative_source!r}")

    def digest(self):
        payload = json.dumps(self.__dict__, sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class PromptSet:
    points: tuple
    n_positive: int
    n_negative: int
    source_image: str
    config_digest: str
    width: int
    height: int
    truncated: bool = False


def distance_to(target):
    """Exact Euclidean distance from every pixel to the nearest True pixel of
    `target` (float32; squared values are exact integers, so comparisons and
    ties behave as in integer arithmetic). All-False targets map to +inf."""
    target = np.asarray(target, dtype=bool)
    if not target.any():
        return np.full(target.shape, np.inf, dtype=np.float32)
    src = np.ascontiguousarray((~target).astype(np.uint8))
    return cv2.distanceTransform(src, cv2.DIST_L2, cv2.DIST_MASK_PRECISE)


def distance_transform(mask):
    """Euclidean distance of each foreground pixel to the nearest background
    pixel, with the image border counting as background; 0 on background."""
    padded = np.ascontiguousarray(np.pad(np.asarray(mask) != 0, 1).astype(np.uint8))
    return cv2.distanceTransform(padded, cv2.DIST_L2, cv2.DIST_MASK_PRECISE)[1:-1, 1:-1]


def squared_depth(mask):
    """Squared border-aware distance transform as exact int64."""
    d = distance_transform(mask).astype(np.float64)
    return np.rint(d * d).astype(np.int64)


def _fps_from_coords(xs, ys, depth_at, k):
    """Greedy selection over row-major-ordered coordinates with seed depths."""
    first = int(np.argmax(depth_at))  # argmax keeps the lowest row-major index
    if _greedy_select is not None:
        selected = _greedy_select(xs.astype(np.int64), ys.astype(np.int64), first, k)
    else:
        cxs = xs.astype(np.int64)
        cys = ys.astype(np.int64)
        selected = [first]
        dmin = (cxs - cxs[first]) ** 2 + (cys - cys[first]) ** 2
        scratch = np.empty_like(dmin)
        for _ in range(1, k):
            nxt = int(np.argmax(dmin))
            selected.append(nxt)
            np.subtract(cxs, cxs[nxt], out=scratch)
            scratch *= scratch
            d = (cys - cys[nxt]) ** 2
            scratch += d
            np.minimum(dmin, scratch, out=dmin)
    return [(int(xs[i]), int(ys[i])) for i in selected]


def farthest_point_sample(region, k, role="region"):
    """Greedy farthest-point sampling over a boolean region.

    The first point maximizes the region's own distance transform; each next
    point maximizes its minimum distance to the already-selected set. Returns
    (points, truncated) where points is a list of (x, y) and truncated flags
    k exceeding the region size.
    """
    region = np.asarray(region) != 0
    if k <= 0:
        return [], False
    ys, xs = np.nonzero(region)  # row-major order
    n = ys.size
    if n == 0:
        raise EmptySamplingRegionError(role)
    truncated = k > n
    k = min(k, n)

    # Seed at the region's deepest pixel; crop to the bounding box first (the
    # box perimeter is all background, so the cropped transform is identical).
    y0, y1 = int(ys[0]), int(ys[-1])
    x0, x1 = int(xs.min()), int(xs.max())
    depth = distance_transform(region[y0 : y1 + 1, x0 : x1 + 1])[ys - y0, xs - x0]
    return _fps_from_coords(xs, ys, depth, k), truncated


def allocate_counts(areas, n):
    """Split n sample slots across components proportionally to area.

    Largest-remainder rounding; every component gets at least one slot while
    quota remains; no quota exceeds the component's area (surplus is
    redistributed). Ties go to the lower index.
    """
    m = len(areas)
    if m == 0 or n <= 0:
        return [0] * m
    if n <= m:
        order = sorted(range(m), key=lambda i: (-areas[i], i))
        quotas = [0] * m
        for i in order[:n]:
            quotas[i] = 1
        return quotas

    quotas = [min(1, areas[i]) for i in range(m)]
    remaining = n - sum(quotas)
    while remaining > 0:
        free = [i for i in range(m) if quotas[i] < areas[i]]
        if not free:
            break  # every component saturated; caller flags truncation
        total = sum(areas[i] for i in free)
        base = {i: remaining * areas[i] // total for i in free}
        spill = remaining - sum(base.values())
        by_remainder = sorted(free, key=lambda i: (-(remaining * areas[i] % total), i))
        for i in by_remainder[:spill]:
            base[i] += 1
        progressed = False
        for i in free:
            add = min(base[i], areas[i] - quotas[i])
            quotas[i] += add
            progressed = progressed or add > 0
        remaining = n - sum(quotas)
        if not progressed:
            break
    return quotas


def negative_region(clean, low_conf, cfg):
    """Pixels eligible for negative prompts: background farther than
    margin_radius from clean foreground, low-confidence foreground, or both."""
    clean = np.asarray(clean) != 0
    low_conf = np.asarray(low_conf) != 0
    if clean.any() and cfg.margin_radius > 0:
        r = cfg.margin_radius
        span = np.arange(-r, r + 1)
        kernel = (np.add.outer(span * span, span * span) <= r * r).astype(np.uint8)
        near_clean = cv2.dilate(clean.astype(np.uint8), kernel).astype(bool)
    else:
        near_clean = clean
    beyond_margin = ~near_clean & ~low_conf
    if cfg.negative_source == "background_margin":
        return beyond_margin
    if cfg.negative_source == "low_confidence":
        return low_conf
    return beyond_margin | low_conf


def generate_prompts(
    clean, low_conf, image_id, cfg=PromptConfig(), connectivity=EIGHT, components=None
):
    """Sample cfg.n_positive points on the clean mask (allocated across its
    components proportionally to area) and cfg.n_negative points on the
    negative region. Deterministic for fixed inputs and config.

    `components` may carry a precomputed (labels, stats) pair for the clean
    mask to skip relabeling; stats must describe exactly the clean components
    in raster-scan order.
    """
    clean = np.asarray(clean)
    low_conf = np.asarray(low_conf)
    if clean.shape != low_conf.shape:
        raise ValueError("clean and low-confidence masks must share dimensions")
    if np.any((clean != 0) & (low_conf != 0)):
        raise ValueError("clean and low-confidence masks must be disjoint")

    height, width = clean.shape
    points = []
    truncated = False

    if cfg.n_positive > 0:
        if not clean.any():
            raise NoPositiveRegionError()
        if components is not None:
            labels, stats = components
        else:
            labels, stats = label_components(clean, connectivity)
        quotas = allocate_counts([s.area for s in stats], cfg.n_positive)
        if sum(quotas) < cfg.n_positive:
            truncated = True
        # One transform serves every component: disjoint components never
        # shadow each other's nearest-background distances.
        depth = distance_transform(clean)
        for s, quota in zip(stats, quotas):
            if quota == 0:
                continue
            window = (
                slice(s.bbox_y, s.bbox_y + s.bbox_h),
                slice(s.bbox_x, s.bbox_x + s.bbox_w),
            )
            ys, xs = np.nonzero(labels[window] == s.id)
            ys = ys + s.bbox_y
            xs = xs + s.bbox_x
            picked = _fps_from_coords(xs, ys, depth[ys, xs], quota)
            points.extend(PointPrompt(x, y, POSITIVE) for x, y in picked)

    if cfg.n_negative > 0:
        region = negative_region(clean, low_conf, cfg)
        if not region.any():
            raise NoNegativeRegionError()
        picked, trunc = farthest_point_sample(region, cfg.n_negative, "negative")
        truncated = truncated or trunc
        points.extend(PointPrompt(x, y, NEGATIVE) for x, y in picked)

    n_pos = sum(1 for p in points if p.label == POSITIVE)
    n_neg = len(points) - n_pos
    return PromptSet(
        points=tuple(points),
        n_positive=n_pos,
        n_negative=n_neg,
        source_image=str(image_id),
        config_digest=cfg.digest(),
        width=width,
        height=height,
        truncated=truncated,
    )


def prompt_set_to_json(ps):
    """Canonical JSON wire format; positives precede negatives, in selection
    order. Byte-identical for identical prompt sets."""
    doc = {
        "image": ps.source_image,
        "width": ps.width,
        "height": ps.height,
        "points": [{"x": p.x, "y": p.y, "label": p.label} for p in ps.points],
        "config_digest": ps.config_digest,
    }
    return json.dumps(doc, indent=2) + "\n"


def prompt_set_from_json(text):
    doc = json.loads(text)
    width, height = int(doc["width"]), int(doc["height"])
    points = []
    for p in doc["points"]:
        x, y, label = int(p["x"]), int(p["y"]), int(p["label"])
        if label not in (POSITIVE, NEGATIVE):
            raise ValueError(f"bad prompt label {label}")
        if not (0 <= x < width and 0 <= y < height):
            raise ValueError(f"prompt ({x}, {y}) out of bounds for {width}x{height}")
        points.append(PointPrompt(x, y, label))
    n_pos = sum(1 for p in points if p.label == POSITIVE)
    return PromptSet(
        points=tuple(points),
        n_positive=n_pos,
        n_negative=len(points) - n_pos,
        source_image=str(doc["image"]),
        config_digest=str(doc.get("config_digest", "")),
        width=width,
        height=height,
    )
