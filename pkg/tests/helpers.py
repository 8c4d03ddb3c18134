"""Shared synthetic fixtures: papyrus-like images with known glyph masks."""

import numpy as np


def dilate_chebyshev(mask, k):
    """Binary dilation by Chebyshev distance k (separable sliding OR)."""
    if k <= 0:
        return mask.copy()
    h, w = mask.shape
    padded = np.pad(mask, k, mode="constant")
    rows = np.zeros((h + 2 * k, w), dtype=bool)
    for dx in range(-k, k + 1):
        rows |= padded[:, k + dx : k + dx + w]
    out = np.zeros((h, w), dtype=bool)
    for dy in range(-k, k + 1):
        out |= rows[k + dy : k + dy + h, :]
    return out


def glyph_mask(width, height, seed=0):
    """Letter-like strokes (4 px wide) in jittered text lines.

    Jitter and shape variety keep the strokes from aligning into
    page-height vertical stripes, which real text never forms."""
    mask = np.zeros((height, width), dtype=bool)
    rng = np.random.default_rng(seed)
    cell = 20
    for cy in range(cell, height - cell // 2, cell):
        for cx in range(cell, width - cell // 2, cell):
            kind = int(rng.integers(0, 4))
            jx, jy = (int(j) for j in rng.integers(-4, 5, 2))
            x0, y0 = cx - 6 + jx, cy - 6 + jy
            mask[y0 : y0 + 12, x0 : x0 + 4] = True
            if kind == 0:  # L shape
                mask[y0 + 8 : y0 + 12, x0 : x0 + 12] = True
            elif kind == 1:  # T shape
                mask[y0 : y0 + 4, x0 - 3 : x0 + 9] = True
            elif kind == 2:  # H shape
                mask[y0 : y0 + 12, x0 + 8 : x0 + 12] = True
                mask[y0 + 4 : y0 + 8, x0 : x0 + 8] = True
            # kind 3: bare vertical stroke
    return mask


def synthetic_papyrus(
    width=256,
    height=256,
    stroke_tone=0.2,
    base_tone=0.75,
    grating_amplitude=0.0,
    grating_period=8,
    noise_sigma=0.02,
    seed=1,
):
    """Papyrus-like fixture: base tone, optional vertical-line texture,
    dark glyph strokes, Gaussian noise. Returns (image, glyph_mask)."""
    rng = np.random.default_rng(seed)
    mask = glyph_mask(width, height, seed=seed)
    img = np.full((height, width), base_tone)
    if grating_amplitude:
        x = np.arange(width)[None, :]
        img = img + grating_amplitude * np.cos(2 * np.pi * x / grating_period)
    img = img - (base_tone - stroke_tone) * mask
    if noise_sigma:
        img = img + rng.normal(0.0, noise_sigma, size=(height, width))
    return np.clip(img, 0.0, 1.0), mask


def stroke_contrast(img, mask, near=3, far=12):
    """Mean |stroke - local background|.

    Local background is the mean tone in an annulus around the glyphs
    (Chebyshev distance in (near, far]), which stays clear of the edge
    detector's response zone.
    """
    annulus = dilate_chebyshev(mask, far) & ~dilate_chebyshev(mask, near)
    bg = img[annulus].mean()
    return float(np.abs(img[mask] - bg).mean())
