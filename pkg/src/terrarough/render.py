"""Static PNG heatmaps of rasters (nodata transparent)."""

from __future__ import annotations

import numpy as np


def to_rgba(values: np.ndarray, palette: str = "viridis") -> np.ndarray:
    from matplotlib import colormaps

    try:
        cmap = colormaps[palette]
    except KeyError:
        raise ValueError(f"unknown palette {palette!r}") from None
    v = np.asarray(values, dtype=np.float64)
    ok = ~np.isnan(v)
    norm = np.zeros_like(v)
    if ok.any():
        lo, hi = v[ok].min(), v[ok].max()
        if hi > lo:
            norm[ok] = (v[ok] - lo) / (hi - lo)
    rgba = np.round(cmap(norm) * 255).astype(np.uint8)
    rgba[~ok] = 0
    return rgba


def render_png(values: np.ndarray, path, palette: str = "viridis", scale: int = 4) -> tuple[int, int]:
    """Write a heatmap with each raster cell drawn as a ``scale x scale`` block.

    Returns the image size as (width, height).
    """
    from PIL import Image

    if int(scale) < 1:
        raise ValueError("scale must be a positive integer")
    rgba = to_rgba(values, palette)
    rgba = np.repeat(np.repeat(rgba, scale, axis=0), scale, axis=1)
    img = Image.fromarray(np.ascontiguousarray(rgba), mode="RGBA")
    img.save(path, format="PNG", optimize=False, compress_level=6)
    return img.size
