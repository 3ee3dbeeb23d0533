"""Field visualization: colormap lookup plus optional alpha blend over an
image, written as PNG with deterministic bytes for fixed inputs.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, UnidentifiedImageError

from .colormap import COLORMAP
from .errors import FormatError


def field_to_rgb(fld: np.ndarray) -> np.ndarray:
    """Map a [0, 1] field through the fixed colormap (half rounds up)."""
    arr = np.asarray(fld, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"field must be 2-D, got shape {arr.shape}")
    v = np.clip(arr, 0.0, 1.0)
    idx = np.floor(v * 255.0 + 0.5).astype(np.int64)
    return COLORMAP[np.clip(idx, 0, 255)]


def render_overlay(fld: np.ndarray, out_path, image_path=None) -> None:
    """Render a field to PNG, optionally blended over an image.

    When an image is given, each pixel blends colormap(v) over the image
    with alpha 0.5 * v, so zero-valued cells leave the image untouched.
    Standalone renders write the colormap directly.
    """
    rgb = field_to_rgb(fld)
    if image_path is None:
        Image.fromarray(rgb, mode="RGB").save(out_path, format="PNG")
        return

    try:
        img = Image.open(image_path)
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise FormatError(f"{image_path}: not a readable image ({exc})") from exc
    base = np.asarray(img.convert("RGB"), dtype=np.float64)
    if base.shape[:2] != rgb.shape[:2]:
        raise ValueError(
            f"image dimensions {base.shape[:2]} do not match field {rgb.shape[:2]}"
        )
    v = np.clip(np.asarray(fld, dtype=np.float64), 0.0, 1.0)
    alpha = (0.5 * v)[:, :, None]
    blended = base * (1.0 - alpha) + rgb.astype(np.float64) * alpha
    out = np.floor(blended + 0.5).astype(np.uint8)
    Image.fromarray(out, mode="RGB").save(out_path, format="PNG")
