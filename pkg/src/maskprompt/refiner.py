"""Deterministic prompt-driven refiner: seeded region growing over intensity,
with exclusion disks around negative prompts.

Stands in for an ML promptable segmenter so the prompt pipeline can be tested
end to end without model weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .components import EIGHT, _structure
from .prompting import NEGATIVE, POSITIVE, distance_to


class NoSeedsError(ValueError):
    def __init__(self):
        super().__init__("no seeds")


class InvalidPromptError(ValueError):
    pass


@dataclass(frozen=True)
class RefineConfig:
    intensity_tolerance: int = 25
    negative_block_radius: int = 10
    connectivity: str = EIGHT
    max_iterations: int | None = None  # None = grow to fixpoint

    def __post_init__(self):
        if not 0 <= self.intensity_tolerance <= 255:
            raise ValueError("intensity_tolerance must be in [0, 255]")
        if self.negative_block_radius < 0:
            raise ValueError("negative_block_radius must be >= 0")


def refine(img, prompts, cfg=RefineConfig()):
    """Grow a region from every positive prompt over pixels within
    intensity_tolerance of that seed's own intensity, never entering pixels
    within negative_block_radius of a negative prompt. Seed pixels themselves
    are always foreground, even inside a blocked disk."""
    img = np.asarray(img)
    height, width = img.shape
    seeds = [p for p in prompts.points if p.label == POSITIVE]
    negatives = [p for p in prompts.points if p.label == NEGATIVE]
    if not seeds:
        raise NoSeedsError()
    for p in prompts.points:
        if not (0 <= p.x < width and 0 <= p.y < height):
            raise InvalidPromptError(f"invalid prompt ({p.x}, {p.y}) for {width}x{height}")

    if negatives:
        neg_mask = np.zeros(img.shape, dtype=bool)
        for p in negatives:
            neg_mask[p.y, p.x] = True
        blocked = distance_to(neg_mask) <= cfg.negative_block_radius
    else:
        blocked = np.zeros(img.shape, dtype=bool)

    structure = _structure(cfg.connectivity)
    out = np.zeros(img.shape, dtype=bool)
    intensities = img.astype(np.int16)
    for value in sorted({int(img[p.y, p.x]) for p in seeds}):
        allowed = (np.abs(intensities - value) <= cfg.intensity_tolerance) & ~blocked
        group = [p for p in seeds if int(img[p.y, p.x]) == value]
        if cfg.max_iterations is None:
            labels, _ = ndimage.label(allowed, structure=structure)
            for p in group:
                lab = labels[p.y, p.x]
                if lab > 0:
                    out |= labels == lab
        else:
            grown = np.zeros(img.shape, dtype=bool)
            for p in group:
                grown[p.y, p.x] = allowed[p.y, p.x]
            for _ in range(cfg.max_iterations):
                nxt = ndimage.binary_dilation(grown, structure=structure, mask=allowed)
                if (nxt == grown).all():
                    break
                grown = nxt
            out |= grown

    for p in seeds:  # blocked seeds still count as foreground
        out[p.y, p.x] = True
    return out.astype(np.uint8)
