"""Edge detection from windowed dipole moments of the intensity field.

For a pixel p and window radius r, the dipole moments are the first
moments of intensity about the window center over the full square window:

    Dx = sum_{dy=-r..r} sum_{dx=-r..r} I(p + (dx, dy)) * dx
    Dy = sum_{dy=-r..r} sum_{dx=-r..r} I(p + (dx, dy)) * dy

Both are accumulated as paired differences in a fixed order,

    Dx = sum_{dy=-r..r} sum_{dx=1..r} (I(p+(dx,dy)) - I(p+(-dx,dy))) * dx
    Dy = sum_{dx=-r..r} sum_{dy=1..r} (I(p+(dx,dy)) - I(p+(dx,-dy))) * dy

which is algebraically the same but cancels constant windows exactly in
floating point; the order is fixed so the vectorized map is bit-identical
to a scalar double loop. Borders use replicate padding. The edge magnitude
is sqrt(Dx^2 + Dy^2) / M clamped to 1, where M = (2r+1) * r * (r+1) / 2 is
the largest single-axis moment an intensity field in [0, 1] can produce.
"""

from __future__ import annotations

import numpy as np

from .raster import as_raster

# Output maps snap to this grid: sub-ulp accumulation residue (e.g. from a
# constant intensity offset) must not leak into the stored magnitudes.
EDGE_QUANT_STEPS = 65535


def max_axis_moment(radius: int) -> float:
    """Largest |Dx| (or |Dy|) achievable with intensities in [0, 1]."""
    return (2 * radius + 1) * radius * (radius + 1) / 2


def dipole_moments(raster: np.ndarray, p: tuple[int, int], radius: int) -> tuple[float, float]:
    """Dipole moments (Dx, Dy) of the window around pixel ``p = (x, y)``."""
    arr = as_raster(raster)
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    x, y = p
    h, w = arr.shape
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"pixel {p} outside {w}x{h} image")

    def sample(xx: int, yy: int) -> float:
        return float(arr[min(max(yy, 0), h - 1), min(max(xx, 0), w - 1)])

    dx_sum = 0.0
    for dy in range(-radius, radius + 1):
        for dx in range(1, radius + 1):
            dx_sum += (sample(x + dx, y + dy) - sample(x - dx, y + dy)) * dx
    dy_sum = 0.0
    for dx in range(-radius, radius + 1):
        for dy in range(1, radius + 1):
            dy_sum += (sample(x + dx, y + dy) - sample(x + dx, y - dy)) * dy
    return dx_sum, dy_sum


def dipole_edge_map(raster: np.ndarray, radius: int) -> np.ndarray:
    """Per-pixel dipole-moment edge magnitudes, normalized to [0, 1]."""
    arr = as_raster(raster)
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    h, w = arr.shape
    if radius >= min(w, h) / 2:
        raise ValueError(f"radius {radius} too large for a {w}x{h} image (must be < min/2)")
    padded = np.pad(arr, radius, mode="edge")

    def window(dx: int, dy: int) -> np.ndarray:
        return padded[radius + dy : radius + dy + h, radius + dx : radius + dx + w]

    dx_sum = np.zeros((h, w))
    for dy in range(-radius, radius + 1):
        for dx in range(1, radius + 1):
            dx_sum += (window(dx, dy) - window(-dx, dy)) * dx
    dy_sum = np.zeros((h, w))
    for dx in range(-radius, radius + 1):
        for dy in range(1, radius + 1):
            dy_sum += (window(dx, dy) - window(dx, -dy)) * dy

    magnitude = np.sqrt(dx_sum * dx_sum + dy_sum * dy_sum) / max_axis_moment(radius)
    clamped = np.minimum(magnitude, 1.0)
    return np.floor(clamped * EDGE_QUANT_STEPS + 0.5) / EDGE_QUANT_STEPS


def edge_threshold(edge_map: np.ndarray, t: float) -> np.ndarray:
    """Binary overlay mask: 1.0 where the edge magnitude exceeds ``t``."""
    arr = as_raster(edge_map)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {t}")
    return np.where(arr > t, 1.0, 0.0)
