"""Operation registry shared by the pipeline runner, CLI, and workbench service.

Every operation reachable from a pipeline document or the HTTP API is
declared here with a parameter schema, so all front doors validate and
execute identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import compose, edges, raster, spectral

_REQUIRED = object()


@dataclass(frozen=True)
class Param:
    kind: str  # float | int | bool | str | float_or_null
    default: Any = _REQUIRED
    lo: float | None = None
    hi: float | None = None
    choices: tuple[str, ...] | None = None

    @property
    def required(self) -> bool:
        return self.default is _REQUIRED


@dataclass(frozen=True)
class OpSpec:
    name: str
    inputs: tuple[str, ...]
    params: dict[str, Param]
    fn: Callable[..., np.ndarray]
    summary: str = ""


def _check_value(name: str, spec: Param, value: Any) -> str | None:
    if spec.kind == "float_or_null" and value is None:
        return None
    if spec.kind == "bool":
        if not isinstance(value, bool):
            return f"param '{name}' must be a boolean"
        return None
    if spec.kind == "str":
        if not isinstance(value, str):
            return f"param '{name}' must be a string"
        if spec.choices and value not in spec.choices:
            return f"param '{name}' must be one of {list(spec.choices)}"
        return None
    if spec.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            return f"param '{name}' must be an integer"
    elif spec.kind in ("float", "float_or_null"):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return f"param '{name}' must be a number"
    else:  # pragma: no cover - registry misconfiguration
        return f"param '{name}' has unknown kind {spec.kind!r}"
    if spec.lo is not None and value < spec.lo:
        return f"param '{name}' must be >= {spec.lo}, got {value}"
    if spec.hi is not None and value > spec.hi:
        return f"param '{name}' must be <= {spec.hi}, got {value}"
    return None


def validate_params(op: OpSpec, params: dict[str, Any]) -> tuple[dict[str, Any], list[str]]:
    """Fill defaults and type/range-check; returns (normalized, errors)."""
    errors = []
    if not isinstance(params, dict):
        return {}, [f"params must be an object, got {type(params).__name__}"]
    normalized: dict[str, Any] = {}
    for name in params:
        if name not in op.params:
            errors.append(f"unknown param '{name}' for op '{op.name}'")
    for name, spec in op.params.items():
        if name in params:
            problem = _check_value(name, spec, params[name])
            if problem:
                errors.append(problem)
            else:
                value = params[name]
                if spec.kind in ("float", "float_or_null") and isinstance(value, int):
                    value = float(value)
                normalized[name] = value
        elif spec.required:
            errors.append(f"missing required param '{name}' for op '{op.name}'")
        else:
            normalized[name] = spec.default
    return normalized, errors


def _op_grayscale(img: np.ndarray) -> np.ndarray:
    # decoded inputs are already single-channel; kept so recipes can state it
    return img.copy()


def _op_otsu(img: np.ndarray) -> np.ndarray:
    t = raster.otsu_threshold(raster.histogram(img, 256))
    return raster.threshold_binary(img, t)


def _op_highpass(img: np.ndarray, cutoff: float, softness: float, renormalize: bool) -> np.ndarray:
    spectrum = spectral.forward_spectrum(img)
    mask = spectral.make_highpass_mask(spectrum.width, spectrum.height, cutoff, softness)
    return spectral.inverse_spectrum(spectral.apply_mask(spectrum, mask), renormalize=renormalize)


def _op_notch(img: np.ndarray, half_width: float, guard_radius: float, renormalize: bool) -> np.ndarray:
    spectrum = spectral.forward_spectrum(img)
    mask = spectral.make_axis_notch_mask(spectrum.width, spectrum.height, half_width, guard_radius)
    return spectral.inverse_spectrum(spectral.apply_mask(spectrum, mask), renormalize=renormalize)


def _op_spectrum_view(img: np.ndarray, log: bool) -> np.ndarray:
    return spectral.spectrum_magnitude_view(spectral.forward_spectrum(img), log_scale=log)


OPS: dict[str, OpSpec] = {}


def _register(name: str, inputs: tuple[str, ...], params: dict[str, Param], fn, summary: str):
    OPS[name] = OpSpec(name=name, inputs=inputs, params=params, fn=fn, summary=summary)


_register("grayscale", ("img",), {}, _op_grayscale, "pass-through grayscale conversion")
_register(
    "threshold_binary",
    ("img",),
    {"t": Param("float", lo=0.0, hi=1.0)},
    lambda img, t: raster.threshold_binary(img, t),
    "binarize at a fixed threshold",
)
_register("otsu", ("img",), {}, _op_otsu, "binarize at the Otsu threshold")
_register(
    "dipole_edge_map",
    ("img",),
    {"radius": Param("int", default=2, lo=1, hi=64)},
    lambda img, radius: edges.dipole_edge_map(img, radius),
    "dipole-moment edge magnitudes",
)
_register(
    "edge_threshold",
    ("img",),
    {"t": Param("float", default=0.25, lo=0.0, hi=1.0)},
    lambda img, t: edges.edge_threshold(img, t),
    "binarize an edge map",
)
_register(
    "blend",
    ("a", "b"),
    {
        "mode": Param("str", default="alpha", choices=compose.BLEND_MODES),
        "alpha": Param("float", default=0.5, lo=0.0, hi=1.0),
    },
    lambda a, b, mode, alpha: compose.blend(a, b, mode, alpha),
    "mix two images",
)
_register(
    "overlay_edges",
    ("img", "edges"),
    {"gain": Param("float", default=0.8, lo=0.0)},
    lambda img, edge_map, gain: compose.overlay_edges(img, edge_map, gain),
    "darken an image along an edge map",
)
_register(
    "bas_relief",
    ("img",),
    {
        "dx": Param("int", default=1, lo=-compose.MAX_RELIEF_OFFSET, hi=compose.MAX_RELIEF_OFFSET),
        "dy": Param("int", default=1, lo=-compose.MAX_RELIEF_OFFSET, hi=compose.MAX_RELIEF_OFFSET),
        "depth": Param("float", default=1.0, lo=0.0),
        "bias": Param("float", default=0.5, lo=0.0, hi=1.0),
    },
    lambda img, dx, dy, depth, bias: compose.bas_relief(img, dx, dy, depth, bias),
    "relief rendering from a directional difference",
)
_register(
    "enhance_text",
    ("img",),
    {
        "t": Param("float_or_null", default=None, lo=0.0, hi=1.0),
        "radius": Param("int", default=2, lo=1, hi=64),
        "edge_gain": Param("float", default=1.0, lo=0.0),
        "mix": Param("float", default=0.9, lo=0.0, hi=1.0),
    },
    lambda img, t, radius, edge_gain, mix: compose.enhance_text(img, t, radius, edge_gain, mix),
    "threshold + edge restoration preset",
)
_register(
    "highpass",
    ("img",),
    {
        "cutoff": Param("float", lo=0.0),
        "softness": Param("float", default=0.0, lo=0.0),
        "renormalize": Param("bool", default=True),
    },
    _op_highpass,
    "radial high-pass Fourier filter",
)
_register(
    "notch",
    ("img",),
    {
        "half_width": Param("float", default=1.0, lo=0.0),
        "guard_radius": Param("float", default=4.0, lo=0.0),
        "renormalize": Param("bool", default=True),
    },
    _op_notch,
    "horizontal-axis notch filter (removes vertical line texture)",
)
_register(
    "fourier_filter",
    ("img", "mask"),
    {"renormalize": Param("bool", default=True)},
    lambda img, mask, renormalize: spectral.fourier_filter(img, mask, renormalize=renormalize),
    "filter through a mask image of the padded spectrum dimensions",
)
_register(
    "normalize",
    ("img",),
    {
        "lo": Param("float", default=0.0, lo=0.0, hi=1.0),
        "hi": Param("float", default=1.0, lo=0.0, hi=1.0),
    },
    lambda img, lo, hi: raster.normalize_range(img, lo, hi),
    "stretch intensities onto [lo, hi]",
)
_register(
    "spectrum_view",
    ("img",),
    {"log": Param("bool", default=True)},
    _op_spectrum_view,
    "magnitude view of the Fourier spectrum",
)
