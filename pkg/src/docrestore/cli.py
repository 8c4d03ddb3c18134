"""Command-line front door: `restore run|validate|spectrum|enhance|filter`.

Exit codes: 0 success, 1 validation error (bad flags or bad pipeline
document), 2 runtime error (I/O or operation failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import compose, spectral
from .ops import OPS, validate_params
from .pipeline import PipelineValidationError, parse_pipeline, run_pipeline
from .raster import DecodeError, decode_image, encode_image

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    # usage problems are validation errors, not runtime errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="restore", description="Digital restoration of scanned documents.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="execute a pipeline document")
    p_run.add_argument("spec", help="pipeline JSON file")
    p_run.add_argument("--workdir", default=".", help="directory paths are resolved against")

    p_val = sub.add_parser("validate", help="parse and validate a pipeline document")
    p_val.add_argument("spec", help="pipeline JSON file")

    p_spec = sub.add_parser("spectrum", help="write the Fourier magnitude view of an image")
    p_spec.add_argument("input")
    p_spec.add_argument("output")
    p_spec.add_argument("--log", action="store_true", help="log-scale the magnitudes")

    p_enh = sub.add_parser("enhance", help="text-enhancement preset (threshold + edge overlay)")
    p_enh.add_argument("input")
    p_enh.add_argument("output")
    group = p_enh.add_mutually_exclusive_group()
    group.add_argument("--threshold", type=float, help="manual binarization threshold in [0, 1]")
    group.add_argument("--auto", action="store_true", help="Otsu threshold (default)")
    p_enh.add_argument("--radius", type=int, default=2, help="edge window radius (default 2)")
    p_enh.add_argument("--gain", type=float, default=1.0, help="edge darkening gain (default 1.0)")
    p_enh.add_argument("--mix", type=float, default=0.9, help="blend weight of the result (default 0.9)")

    p_fil = sub.add_parser("filter", help="Fourier filtering shortcuts")
    p_fil.add_argument("input")
    p_fil.add_argument("output")
    which = p_fil.add_mutually_exclusive_group(required=True)
    which.add_argument("--mask", help="mask PNG of the padded spectrum dimensions")
    which.add_argument("--highpass", metavar="CUTOFF[,SOFT]", help="radial high-pass filter")
    which.add_argument("--notch", metavar="HALFWIDTH,GUARD", help="horizontal-axis notch filter")
    return parser


def _parse_floats(text: str, count_min: int, count_max: int, flag: str) -> list[float]:
    parts = text.split(",")
    if not count_min <= len(parts) <= count_max:
        raise ValueError(f"{flag} expects {count_min}-{count_max} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"{flag} expects numbers, got {text!r}") from None


def _read_raster(path: str):
    return decode_image(Path(path).read_bytes())


def _write_raster(path: str, raster) -> None:
    suffix = Path(path).suffix.lower()
    fmt = {".png": "png", ".pgm": "pgm"}.get(suffix)
    if fmt is None:
        raise ValueError(f"output path must end in .png or .pgm, got {path!r}")
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(encode_image(raster, fmt))


def _cmd_run(args) -> int:
    try:
        spec = parse_pipeline(Path(args.spec).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except PipelineValidationError as exc:
        for problem in exc.errors:
            print(f"invalid pipeline: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    report = run_pipeline(spec, workdir=args.workdir)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["ok"] else EXIT_RUNTIME


def _cmd_validate(args) -> int:
    try:
        parse_pipeline(Path(args.spec).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except PipelineValidationError as exc:
        for problem in exc.errors:
            print(f"invalid pipeline: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    print("ok")
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    view = spectral.spectrum_magnitude_view(
        spectral.forward_spectrum(_read_raster(args.input)), log_scale=args.log
    )
    _write_raster(args.output, view)
    return EXIT_OK


def _cmd_enhance(args) -> int:
    params = {
        "t": None if (args.auto or args.threshold is None) else args.threshold,
        "radius": args.radius,
        "edge_gain": args.gain,
        "mix": args.mix,
    }
    normalized, errors = validate_params(OPS["enhance_text"], params)
    if errors:
        for problem in errors:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    out = compose.enhance_text(
        _read_raster(args.input),
        t=normalized["t"],
        radius=normalized["radius"],
        edge_gain=normalized["edge_gain"],
        mix=normalized["mix"],
    )
    _write_raster(args.output, out)
    return EXIT_OK


def _cmd_filter(args) -> int:
    img = _read_raster(args.input)
    spectrum = spectral.forward_spectrum(img)
    if args.mask is not None:
        mask = spectral.mask_from_raster(_read_raster(args.mask), spectrum)
    elif args.highpass is not None:
        cutoff, *rest = _parse_floats(args.highpass, 1, 2, "--highpass")
        softness = rest[0] if rest else 0.0
        mask = spectral.make_highpass_mask(spectrum.width, spectrum.height, cutoff, softness)
    else:
        half_width, guard = _parse_floats(args.notch, 2, 2, "--notch")
        mask = spectral.make_axis_notch_mask(spectrum.width, spectrum.height, half_width, guard)
    out = spectral.inverse_spectrum(spectral.apply_mask(spectrum, mask), renormalize=True)
    _write_raster(args.output, out)
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "spectrum": _cmd_spectrum,
    "enhance": _cmd_enhance,
    "filter": _cmd_filter,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
