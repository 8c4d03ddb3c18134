"""Recombination of processed layers: blending, edge overlay, relief, presets."""

from __future__ import annotations

import numpy as np

from .edges import dipole_edge_map
from .raster import as_raster, histogram, otsu_threshold, threshold_binary

BLEND_MODES = ("alpha", "multiply_darken", "min")

MAX_RELIEF_OFFSET = 8


def _pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = as_raster(a)
    b = as_raster(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def blend(a: np.ndarray, b: np.ndarray, mode: str = "alpha", alpha: float = 0.5) -> np.ndarray:
    """Combine two rasters.

    Modes: ``alpha`` is the linear mix ``(1-alpha)*a + alpha*b``;
    ``multiply_darken`` darkens ``a`` where ``b`` is dark, scaled by alpha;
    ``min`` takes the pointwise darker value.
    """
    a, b = _pair(a, b)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if mode == "alpha":
        out = (1.0 - alpha) * a + alpha * b
    elif mode == "multiply_darken":
        out = a * (1.0 - alpha * (1.0 - b))
    elif mode == "min":
        out = np.minimum(a, b)
    else:
        raise ValueError(f"unknown blend mode {mode!r}; expected one of {BLEND_MODES}")
    return np.clip(out, 0.0, 1.0)


def overlay_edges(img: np.ndarray, edge_map: np.ndarray, gain: float = 0.8) -> np.ndarray:
    """Darken the image along detected edges: ``img * (1 - gain * E)``.

    Darkening (rather than painting) restores letter strokes while keeping
    the substrate tone; no pixel ever gets brighter.
    """
    img, edge_map = _pair(img, edge_map)
    if gain < 0:
        raise ValueError(f"gain must be >= 0, got {gain}")
    return np.clip(img * (1.0 - gain * edge_map), 0.0, 1.0)


def bas_relief(
    img: np.ndarray,
    dx: int = 1,
    dy: int = 1,
    depth: float = 1.0,
    bias: float = 0.5,
) -> np.ndarray:
    """Relief rendering: biased directional difference against a shifted copy.

    ``out(p) = clamp(bias + depth * (img(p) - img(p + (dx, dy))))`` with
    replicate padding for the shifted sample.
    """
    img = as_raster(img)
    if abs(dx) > MAX_RELIEF_OFFSET or abs(dy) > MAX_RELIEF_OFFSET:
        raise ValueError(f"offsets must satisfy |dx|,|dy| <= {MAX_RELIEF_OFFSET}, got ({dx}, {dy})")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    pad = max(abs(dx), abs(dy), 1)
    padded = np.pad(img, pad, mode="edge")
    h, w = img.shape
    shifted = padded[pad + dy : pad + dy + h, pad + dx : pad + dx + w]
    return np.clip(bias + depth * (img - shifted), 0.0, 1.0)


def enhance_text(
    img: np.ndarray,
    t: float | None = None,
    radius: int = 2,
    edge_gain: float = 1.0,
    mix: float = 0.9,
) -> np.ndarray:
    """Text-enhancement preset: thresholding combined with edge restoration.

    Thresholding alone wipes out faint letters, so the binary letter mask
    is softened against the original before edges darken the strokes:

        letters  = threshold at ``t`` (Otsu when ``t`` is None)
        softened = 0.5 blend of image and letters
        result   = mix of image with overlay_edges(min(img, softened), edges)

    ``mix=0`` returns the input bit-exactly.
    """
    img = as_raster(img)
    if t is None:
        t = otsu_threshold(histogram(img, 256))
    letters = threshold_binary(img, t)
    edge_map = dipole_edge_map(img, radius)
    softened = blend(img, letters, "alpha", 0.5)
    base = np.minimum(img, softened)
    darkened = overlay_edges(base, edge_map, edge_gain)
    return blend(img, darkened, "alpha", mix)
