"""Coarse-to-fine point-prompt generation and refinement for binary masks."""

from .components import ComponentStats, label_components
from .metrics import dice, iou, pixel_accuracy
from .phantom import PhantomSpec, generate_phantom
from .prompting import (
    PointPrompt,
    PromptConfig,
    PromptSet,
    distance_transform,
    farthest_point_sample,
    generate_prompts,
)
from .pruning import PruneConfig, PruneResult, prune
from .raster import binarize, load_grayscale, save_mask
from .refiner import RefineConfig, refine

__all__ = [
    "ComponentStats",
    "PhantomSpec",
    "PointPrompt",
    "PromptConfig",
    "PromptSet",
    "PruneConfig",
    "PruneResult",
    "RefineConfig",
    "binarize",
    "dice",
    "distance_transform",
    "farthest_point_sample",
    "generate_phantom",
    "generate_prompts",
    "iou",
    "label_components",
    "load_grayscale",
    "pixel_accuracy",
    "prune",
    "refine",
    "save_mask",
]
