"""Digital restoration toolkit for scanned ancient documents."""

from .compose import BLEND_MODES, bas_relief, blend, enhance_text, overlay_edges
from .edges import dipole_edge_map, dipole_moments, edge_threshold, max_axis_moment
from .raster import (
    DecodeError,
    Histogram,
    as_raster,
    decode_image,
    encode_image,
    histogram,
    normalize_range,
    otsu_threshold,
    threshold_binary,
    to_grayscale,
)
from .ops import OPS, validate_params
from .pipeline import (
    PipelineSpec,
    PipelineStep,
    PipelineValidationError,
    parse_pipeline,
    run_pipeline,
    validate_pipeline,
)
from .spectral import (
    Spectrum,
    apply_mask,
    forward_spectrum,
    fourier_filter,
    inverse_spectrum,
    inverse_spectrum_raw,
    make_axis_notch_mask,
    make_highpass_mask,
    mask_from_raster,
    padded_size,
    spectrum_magnitude_view,
)

__version__ = "0.1.0"

__all__ = [
    "BLEND_MODES",
    "DecodeError",
    "Histogram",
    "OPS",
    "PipelineSpec",
    "PipelineStep",
    "PipelineValidationError",
    "Spectrum",
    "apply_mask",
    "as_raster",
    "bas_relief",
    "blend",
    "decode_image",
    "dipole_edge_map",
    "dipole_moments",
    "edge_threshold",
    "encode_image",
    "enhance_text",
    "forward_spectrum",
    "fourier_filter",
    "histogram",
    "inverse_spectrum",
    "inverse_spectrum_raw",
    "make_axis_notch_mask",
    "make_highpass_mask",
    "mask_from_raster",
    "max_axis_moment",
    "normalize_range",
    "otsu_threshold",
    "overlay_edges",
    "padded_size",
    "parse_pipeline",
    "run_pipeline",
    "spectrum_magnitude_view",
    "threshold_binary",
    "to_grayscale",
    "validate_params",
    "validate_pipeline",
]
