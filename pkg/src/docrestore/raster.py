"""Raster primitives: codecs, grayscale conversion, histograms, thresholding.

A raster is a 2D ``float64`` numpy array, row-major, with intensities in
``[0, 1]``. Every other module consumes and produces this representation;
quantization to 8 bits happens only at encode time.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from PIL import Image, UnidentifiedImageError


class DecodeError(ValueError):
    """Raised when image bytes cannot be turned into a valid raster."""


def as_raster(data) -> np.ndarray:
    """Validate an array as a raster (2D, finite, values in [0, 1])."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"raster must be 2D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("raster must have at least one pixel")
    if not np.all(np.isfinite(arr)):
        raise ValueError("raster contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("raster values must lie in [0, 1]")
    return arr


def decode_image(data: bytes, format: str | None = None) -> np.ndarray:
    """Decode PNG or binary PGM bytes into a grayscale raster.

    8-bit samples map to ``v / 255``. Multi-channel PNG input is reduced
    with :func:`to_grayscale`. ``format`` may be ``"png"``/``"pgm"``;
    when omitted it is sniffed from the magic bytes.

    Raises:
        DecodeError: malformed container, unsupported mode/bit depth,
            or zero dimensions.
    """
    if format is None:
        if data[:8] == b"\x89PNG\r\n\x1a\n":
            format = "png"
        elif data[:2] == b"P5":
            format = "pgm"
        else:
            raise DecodeError("unrecognized image container (expected PNG or binary PGM)")
    format = format.lower()
    if format == "png":
        return _decode_png(data)
    if format == "pgm":
        return _decode_pgm(data)
    raise DecodeError(f"unsupported format {format!r} (expected 'png' or 'pgm')")


def _decode_png(data: bytes) -> np.ndarray:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"malformed PNG: {exc}") from exc
    if img.format != "PNG":
        raise DecodeError(f"expected PNG container, got {img.format}")
    if img.width < 1 or img.height < 1:
        raise DecodeError("PNG has zero dimensions")
    if img.mode in ("I;16", "I;16B", "I;16L", "I", "F"):
        raise DecodeError(f"unsupported PNG bit depth (mode {img.mode}); only 8-bit is supported")
    if img.mode == "L":
        return np.asarray(img, dtype=np.float64) / 255.0
    if img.mode in ("RGB", "RGBA"):
        channels = np.asarray(img, dtype=np.float64)[:, :, :3] / 255.0
        return to_grayscale(channels)
    raise DecodeError(f"unsupported PNG mode {img.mode!r}; expected 8-bit gray or RGB/RGBA")


def _decode_pgm(data: bytes) -> np.ndarray:
    # Header: "P5", width, height, maxval as whitespace-separated tokens,
    # '#' comments run to end of line, then one whitespace byte before pixels.
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        byte = data[pos : pos + 1]
        if byte.isspace():
            pos += 1
        elif byte == b"#":
            newline = data.find(b"\n", pos)
            pos = len(data) if newline < 0 else newline + 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace() and data[end : end + 1] != b"#":
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if len(tokens) < 4 or tokens[0] != b"P5":
        raise DecodeError("malformed PGM: incomplete P5 header")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise DecodeError(f"malformed PGM: non-numeric header field ({exc})") from exc
    if width < 1 or height < 1:
        raise DecodeError("PGM has zero dimensions")
    if maxval != 255:
        raise DecodeError(f"unsupported PGM maxval {maxval}; only 8-bit (255) is supported")
    pixels = data[pos + 1 :]
    if len(pixels) < width * height:
        raise DecodeError(f"malformed PGM: expected {width * height} bytes of pixel data, got {len(pixels)}")
    raw = np.frombuffer(pixels[: width * height], dtype=np.uint8)
    return raw.reshape(height, width).astype(np.float64) / 255.0


def encode_image(raster: np.ndarray, format: str = "png") -> bytes:
    """Encode a raster as 8-bit grayscale PNG or binary PGM.

    Values are quantized as ``round(v * 255)`` (half away from zero), so
    a decode of the result matches the input within 1/255 per pixel.
    """
    arr = as_raster(raster)
    quantized = np.floor(arr * 255.0 + 0.5).astype(np.uint8)
    format = format.lower()
    if format == "png":
        buf = io.BytesIO()
        Image.fromarray(quantized, mode="L").save(buf, format="PNG")
        return buf.getvalue()
    if format == "pgm":
        h, w = quantized.shape
        return b"P5\n%d %d\n255\n" % (w, h) + quantized.tobytes()
    raise ValueError(f"unsupported format {format!r} (expected 'png' or 'pgm')")


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Reduce an (H, W, 3) array of [0, 1] channels to Rec.601 luminance."""
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected 3 channels, got shape {arr.shape}")
    y = 0.299 * arr[:, :, 0] + 0.587 * arr[:, :, 1] + 0.114 * arr[:, :, 2]
    return np.clip(y, 0.0, 1.0)


@dataclass(frozen=True)
class Histogram:
    """Intensity histogram: ``counts[k]`` pixels fell into bin ``k``."""

    counts: np.ndarray

    @property
    def bin_count(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def histogram(raster: np.ndarray, bin_count: int = 256) -> Histogram:
    """Histogram of a raster; bin index is ``min(floor(v * bins), bins - 1)``."""
    arr = as_raster(raster)
    if bin_count < 2:
        raise ValueError(f"bin_count must be >= 2, got {bin_count}")
    idx = np.minimum(np.floor(arr * bin_count).astype(np.int64), bin_count - 1)
    counts = np.bincount(idx.ravel(), minlength=bin_count)
    return Histogram(counts=counts)


def threshold_binary(raster: np.ndarray, t: float) -> np.ndarray:
    """Binarize: 1.0 where ``v > t``, else 0.0 (strict, so t=1 is all black)."""
    arr = as_raster(raster)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {t}")
    return np.where(arr > t, 1.0, 0.0)


def otsu_threshold(hist: Histogram) -> float:
    """Threshold (a bin center) maximizing between-class variance.

    The scan is carried out in exact integer arithmetic so the argmax is
    platform independent; ties break toward the lower threshold. If all
    mass sits in one bin, that bin's center is returned.
    """
    counts = [int(c) for c in hist.counts]
    bins = len(counts)
    total = sum(counts)
    if total <= 0:
        raise ValueError("histogram is empty")
    occupied = [k for k, c in enumerate(counts) if c > 0]
    if len(occupied) == 1:
        return (occupied[0] + 0.5) / bins

    moment_total = sum(k * c for k, c in enumerate(counts))
    best_k = 0
    best_score = Fraction(0)
    s0 = 0  # pixels in bins 0..k
    m0 = 0  # first moment of bins 0..k
    for k in range(bins - 1):
        s0 += counts[k]
        m0 += k * counts[k]
        s1 = total - s0
        if s0 == 0 or s1 == 0:
            continue
        m1 = moment_total - m0
        # between-class variance up to a constant factor: (m0*s1 - m1*s0)^2 / (s0*s1)
        score = Fraction((m0 * s1 - m1 * s0) ** 2, s0 * s1)
        if score > best_score:
            best_score = score
            best_k = k
    return (best_k + 0.5) / bins


def normalize_range(values: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Affinely map ``[min, max]`` of the input onto ``[lo, hi]``.

    Accepts out-of-[0, 1] intermediates (e.g. raw filter output); a
    constant input maps to the midpoint ``(lo + hi) / 2``.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"need 0 <= lo < hi <= 1, got lo={lo}, hi={hi}")
    mn = arr.min()
    mx = arr.max()
    if mx == mn:
        return np.full(arr.shape, (lo + hi) / 2.0)
    # elementwise division so the extremes land exactly on lo and hi
    out = lo + ((arr - mn) / (mx - mn)) * (hi - lo)
    return np.clip(out, lo, hi)
