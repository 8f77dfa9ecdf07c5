"""Synthetic test fixtures: thin curvilinear ribbons over textured background,
plus corrupted coarse masks with injected sub-threshold noise blobs.

Geometry is integer-only and driven by a seeded PCG64 generator, so identical
specs produce byte-identical fixtures on every platform.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

RIBBON_LOW = 190  # ribbon intensities span [RIBBON_LOW, RIBBON_HIGH]
RIBBON_HIGH = 210
BACKGROUND_LOW = 10
BACKGROUND_HIGH = 60


class PhantomFitError(ValueError):
    """Requested ribbons cannot fit in the canvas."""


@dataclass(frozen=True)
class PhantomSpec:
    width: int = 400
    height: int = 400
    ribbon_count: int = 1
    ribbon_thickness: int = 5
    noise_blob_count: int = 0
    noise_blob_max_area: int = 999
    coarse_erosion: int = 0
    rng_seed: int = 0

    def to_json(self):
        return json.dumps(asdict(self), indent=2) + "\n"

    @staticmethod
    def from_json(text):
        return PhantomSpec(**json.loads(text))


def _disk(radius):
    if radius <= 0:
        return np.ones((1, 1), dtype=bool)
    span = np.arange(-radius, radius + 1)
    return np.add.outer(span * span, span * span) <= radius * radius


def _ribbon_centerline(spec, index, rng):
    """Integer polyline from the left to the right margin, drifting diagonally
    downward with a bounded random-walk offset. Parallel ribbons stay
    separated by a fixed vertical gap."""
    amp = 3
    margin = spec.ribbon_thickness + amp + 2
    gap = 2 * spec.ribbon_thickness + 2 * amp + 6
    x0, x1 = margin, spec.width - 1 - margin
    y_top = margin + index * gap
    y_bot = spec.height - 1 - margin - (spec.ribbon_count - 1 - index) * gap
    if x1 - x0 < 8 or y_bot - y_top < 8:
        raise PhantomFitError(
            f"{spec.ribbon_count} ribbons of thickness {spec.ribbon_thickness} "
            f"do not fit in {spec.width}x{spec.height}"
        )
    offset = 0
    ys = []
    for x in range(x0, x1 + 1):
        offset = int(np.clip(offset + int(rng.integers(-1, 2)), -amp, amp))
        base = y_top + (x - x0) * (y_bot - y_top) // (x1 - x0)
        ys.append(int(np.clip(base + offset, y_top - amp, y_bot + amp)))
    return x0, ys


def _rasterize_ribbon(canvas, x0, ys):
    prev = ys[0]
    for i, y in enumerate(ys):
        lo, hi = min(prev, y), max(prev, y)
        canvas[lo : hi + 1, x0 + i] = True
        prev = y


def _place_blobs(coarse, forbidden, spec, rng):
    placed = 0
    tries = 0
    max_tries = 400 * max(spec.noise_blob_count, 1)
    while placed < spec.noise_blob_count:
        tries += 1
        if tries > max_tries:
            raise PhantomFitError("could not place all noise blobs")
        a = int(rng.integers(2, 7))
        b = int(rng.integers(2, 7))
        cx = int(rng.integers(a + 1, spec.width - a - 1))
        cy = int(rng.integers(b + 1, spec.height - b - 1))
        ys, xs = np.mgrid[-b : b + 1, -a : a + 1]
        blob = (xs * b) ** 2 + (ys * a) ** 2 <= (a * b) ** 2
        if int(blob.sum()) > spec.noise_blob_max_area:
            continue
        win = (slice(cy - b, cy + b + 1), slice(cx - a, cx + a + 1))
        if forbidden[win][blob].any():
            continue
        coarse[win][blob] = True
        # keep later blobs non-adjacent so each stays its own component
        grown = ndimage.binary_dilation(np.pad(blob, 1), structure=np.ones((3, 3), dtype=bool))
        gwin = (slice(cy - b - 1, cy + b + 2), slice(cx - a - 1, cx + a + 2))
        forbidden[gwin] |= grown
        placed += 1


def generate_phantom(spec):
    """Build (image, gt_mask, coarse_mask) for a spec. coarse_mask is gt_mask
    eroded by coarse_erosion with noise_blob_count spurious small components
    added away from the ribbons."""
    if spec.width < 16 or spec.height < 16 or spec.ribbon_thickness < 1:
        raise PhantomFitError("canvas too small or thickness < 1")
    rng = np.random.Generator(np.random.PCG64(spec.rng_seed))

    gt = np.zeros((spec.height, spec.width), dtype=bool)
    for i in range(spec.ribbon_count):
        x0, ys = _ribbon_centerline(spec, i, rng)
        _rasterize_ribbon(gt, x0, ys)
    gt = ndimage.binary_dilation(gt, structure=_disk(spec.ribbon_thickness // 2))

    image = rng.integers(
        BACKGROUND_LOW, BACKGROUND_HIGH + 1, size=gt.shape, dtype=np.int64
    )
    ribbon_tex = rng.integers(RIBBON_LOW, RIBBON_HIGH + 1, size=gt.shape, dtype=np.int64)
    image[gt] = ribbon_tex[gt]
    image = image.astype(np.uint8)

    coarse = gt.copy()
    if spec.coarse_erosion > 0:
        coarse = ndimage.binary_erosion(gt, structure=_disk(spec.coarse_erosion))
    if spec.noise_blob_count > 0:
        # keep blobs clear of the full ribbons (not just the eroded coarse) so
        # negatives sampled on blobs never block real structure
        forbidden = ndimage.binary_dilation(
            gt | coarse, structure=np.ones((3, 3), dtype=bool)
        )
        _place_blobs(coarse, forbidden, spec, rng)

    return image, gt.astype(np.uint8), coarse.astype(np.uint8)
