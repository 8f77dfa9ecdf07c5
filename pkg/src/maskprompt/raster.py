"""Loading, binarizing and saving grayscale images and binary masks.

Rasters and masks are 2-D numpy uint8 arrays, row-major, origin top-left
(x = column, y = row). Masks hold only {0, 1}; on disk foreground is 255.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image, UnidentifiedImageError

SUPPORTED_FORMATS = ("PNG", "PPM")  # PPM covers binary PGM (P5)


class UnsupportedImageError(ValueError):
    """File is not a supported 8-bit PNG or PGM image."""


class EmptyRasterError(ValueError):
    """Image has zero width or height."""


def load_grayscale(path):
    """Load an 8-bit image as a 2-D uint8 array, taking channel 0 if multi-channel."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        im = Image.open(path)
    except UnidentifiedImageError as exc:
        raise UnsupportedImageError(f"unsupported image format: {path}") from exc
    if im.format not in SUPPORTED_FORMATS:
        raise UnsupportedImageError(
            f"unsupported image format {im.format!r}: {path} (expected PNG or PGM)"
        )
    if im.mode.startswith("I") or im.mode == "F":
        raise UnsupportedImageError(f"unsupported bit depth (mode {im.mode}): {path}")
    if im.mode == "1":
        im = im.convert("L")
    elif im.mode == "P":
        im = im.convert("RGB")
    arr = np.asarray(im)
    if arr.ndim == 3:
        arr = arr[:, :, 0]
    if arr.size == 0:
        raise EmptyRasterError(f"empty raster: {path}")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def binarize(raster):
    """Set every non-zero pixel to 1."""
    return (np.asarray(raster) != 0).astype(np.uint8)


def validate_mask(mask):
    mask = np.asarray(mask)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a non-empty 2-D array")
    if not np.isin(mask, (0, 1)).all():
        raise ValueError("mask values must be 0 or 1")
    return mask.astype(np.uint8, copy=False)


def save_mask(mask, path):
    """Write a mask as an 8-bit single-channel image (foreground 255)."""
    mask = validate_mask(mask)
    save_grayscale(mask * 255, path)


def save_grayscale(raster, path):
    """Write a 2-D uint8 array as PNG (or binary PGM for .pgm paths)."""
    arr = np.ascontiguousarray(np.asarray(raster, dtype=np.uint8))
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("raster must be a non-empty 2-D array")
    im = Image.fromarray(arr, mode="L")
    fmt = "PPM" if str(path).lower().endswith((".pgm", ".ppm")) else "PNG"
    im.save(path, format=fmt)
