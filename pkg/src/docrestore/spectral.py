"""2D Fourier transform, magnitude views, and multiplicative filtering.

Convention: unnormalized forward transform, 1/N inverse (numpy's default),
coefficients stored DC-centered. Images are zero-padded to the next even
size before the transform so DC sits unambiguously at (height/2, width/2);
the inverse crops back to the original size. No apodization window is
applied; border leakage is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import as_raster, normalize_range


@dataclass(frozen=True)
class Spectrum:
    """DC-centered complex spectrum of a (possibly padded) raster."""

    coefficients: np.ndarray
    orig_width: int
    orig_height: int

    @property
    def width(self) -> int:
        return self.coefficients.shape[1]

    @property
    def height(self) -> int:
        return self.coefficients.shape[0]


def padded_size(n: int) -> int:
    """Next even size >= n."""
    return n if n % 2 == 0 else n + 1


def forward_spectrum(raster: np.ndarray) -> Spectrum:
    """Transform a raster to its DC-centered spectrum."""
    arr = as_raster(raster)
    h, w = arr.shape
    ph, pw = padded_size(h), padded_size(w)
    padded = np.zeros((ph, pw))
    padded[:h, :w] = arr
    coeffs = np.fft.fftshift(np.fft.fft2(padded))
    return Spectrum(coefficients=coeffs, orig_width=w, orig_height=h)


def inverse_spectrum_raw(spectrum: Spectrum) -> np.ndarray:
    """Real part of the inverse transform, cropped to original size, unclamped."""
    field = np.fft.ifft2(np.fft.ifftshift(spectrum.coefficients))
    return field.real[: spectrum.orig_height, : spectrum.orig_width]


def inverse_spectrum(spectrum: Spectrum, renormalize: bool = False) -> np.ndarray:
    """Back-transform a spectrum to a raster.

    ``renormalize`` stretches the result onto [0, 1] (the display choice used
    for filtered views); otherwise values are clamped into range.
    """
    raw = inverse_spectrum_raw(spectrum)
    if renormalize:
        return normalize_range(raw, 0.0, 1.0)
    return np.clip(raw, 0.0, 1.0)


def spectrum_magnitude_view(spectrum: Spectrum, log_scale: bool = True) -> np.ndarray:
    """Magnitude of each coefficient as a raster, normalized to [0, 1].

    With ``log_scale`` the view shows ``ln(1 + |C|)``, which keeps texture
    peaks visible orders of magnitude below DC.
    """
    mag = np.abs(spectrum.coefficients)
    if log_scale:
        mag = np.log1p(mag)
    return normalize_range(mag, 0.0, 1.0)


def _center_distances(width: int, height: int) -> np.ndarray:
    cy, cx = height // 2, width // 2
    v = np.arange(height)[:, None] - cy
    u = np.arange(width)[None, :] - cx
    return np.sqrt(u * u + v * v)


def make_highpass_mask(width: int, height: int, cutoff: float, softness: float = 0.0) -> np.ndarray:
    """Radial high-pass mask: 0 inside ``cutoff``, 1 beyond ``cutoff + softness``.

    The transition is a smoothstep ramp; ``softness=0`` gives the ideal
    filter. ``cutoff=0`` is the identity mask.
    """
    if cutoff < 0 or softness < 0:
        raise ValueError("cutoff and softness must be >= 0")
    dist = _center_distances(width, height)
    if softness == 0:
        return np.where(dist < cutoff, 0.0, 1.0)
    t = np.clip((dist - cutoff) / softness, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def make_axis_notch_mask(
    width: int,
    height: int,
    half_width: float = 1.0,
    guard_radius: float = 4.0,
    axis: str = "horizontal_freq_axis",
) -> np.ndarray:
    """Notch that zeroes a band along the horizontal frequency axis.

    Vertical line textures (papyrus fibers) concentrate energy on the
    row through DC; this mask zeroes samples with ``|v - v_center| <=
    half_width`` outside a guard disc of ``guard_radius`` that preserves
    DC and the immediate low-frequency neighborhood.
    """
    if axis != "horizontal_freq_axis":
        raise ValueError(f"unsupported axis {axis!r}")
    if half_width < 0 or guard_radius < 0:
        raise ValueError("half_width and guard_radius must be >= 0")
    cy = height // 2
    v_offset = np.abs(np.arange(height)[:, None] - cy)
    in_band = v_offset <= half_width
    beyond_guard = _center_distances(width, height) > guard_radius
    return np.where(in_band & beyond_guard, 0.0, 1.0)


def mask_from_raster(raster: np.ndarray, spectrum: Spectrum | None = None) -> np.ndarray:
    """Use a raster verbatim as an attenuation mask (no symmetrization).

    If ``spectrum`` is given, the raster's dimensions must equal that
    spectrum's (padded) dimensions.
    """
    mask = as_raster(raster)
    if spectrum is not None and mask.shape != spectrum.coefficients.shape:
        raise ValueError(
            f"mask is {mask.shape[1]}x{mask.shape[0]} but spectrum is "
            f"{spectrum.width}x{spectrum.height}"
        )
    return mask


def apply_mask(spectrum: Spectrum, mask: np.ndarray) -> Spectrum:
    """Attenuate a spectrum coefficient-wise by a [0, 1] mask."""
    mask = np.asarray(mask, dtype=np.float64)
    if mask.shape != spectrum.coefficients.shape:
        raise ValueError(
            f"mask is {mask.shape[1]}x{mask.shape[0]} but spectrum is "
            f"{spectrum.width}x{spectrum.height}"
        )
    if mask.min() < 0.0 or mask.max() > 1.0:
        raise ValueError("mask values must lie in [0, 1]")
    return Spectrum(
        coefficients=spectrum.coefficients * mask,
        orig_width=spectrum.orig_width,
        orig_height=spectrum.orig_height,
    )


def fourier_filter(
    raster: np.ndarray, mask: np.ndarray, renormalize: bool = True
) -> np.ndarray:
    """Forward transform, apply a mask, and back-transform in one step."""
    spectrum = forward_spectrum(raster)
    filtered = apply_mask(spectrum, mask_from_raster(mask, spectrum))
    return inverse_spectrum(filtered, renormalize=renormalize)
