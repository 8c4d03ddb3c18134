"""Declarative restoration pipelines: parse, validate, run.

A pipeline document is a single JSON object:

    {
      "version": 1,
      "inputs":  {"src": "scan.png"},
      "steps":   [{"op": "dipole_edge_map", "in": "src", "out": "edges",
                   "params": {"radius": 2}}, ...],
      "outputs": {"edges": "edges.png"}
    }

Dataflow is over names: each step consumes names produced earlier (or
declared inputs) and produces a new name; outputs may reference any
defined name. Steps run sequentially in document order and identical
documents plus identical input bytes yield bit-identical output bytes.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .ops import OPS, validate_params
from .raster import decode_image, encode_image

PIPELINE_VERSION = 1

_OUTPUT_FORMATS = {".png": "png", ".pgm": "pgm"}


class PipelineValidationError(ValueError):
    """Raised with the complete list of validation problems."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class PipelineStep:
    op: str
    inputs: tuple[str, ...]
    out: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class PipelineSpec:
    version: int
    inputs: dict[str, str]
    steps: tuple[PipelineStep, ...]
    outputs: dict[str, str]

    def to_document(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "inputs": dict(self.inputs),
            "steps": [
                {
                    "op": s.op,
                    "in": s.inputs[0] if len(s.inputs) == 1 else list(s.inputs),
                    "out": s.out,
                    "params": dict(s.params),
                }
                for s in self.steps
            ],
            "outputs": dict(self.outputs),
        }


def _validate_name_map(doc: dict, key: str, errors: list[str]) -> dict[str, str]:
    value = doc.get(key)
    if value is None:
        errors.append(f"missing '{key}' object")
        return {}
    if not isinstance(value, dict):
        errors.append(f"'{key}' must be an object mapping names to file paths")
        return {}
    clean = {}
    for name, path in value.items():
        if not isinstance(name, str) or not name:
            errors.append(f"{key}: names must be non-empty strings, got {name!r}")
        elif not isinstance(path, str) or not path:
            errors.append(f"{key}: path for '{name}' must be a non-empty string")
        else:
            clean[name] = path
    return clean


def validate_pipeline(doc: Any) -> tuple[PipelineSpec | None, list[str]]:
    """Validate a parsed document, returning the spec or every problem found."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        return None, [f"pipeline document must be a JSON object, got {type(doc).__name__}"]

    version = doc.get("version")
    if version != PIPELINE_VERSION:
        errors.append(f"unsupported version {version!r} (expected {PIPELINE_VERSION})")

    inputs = _validate_name_map(doc, "inputs", errors)
    outputs = _validate_name_map(doc, "outputs", errors)

    for key in doc:
        if key not in ("version", "inputs", "steps", "outputs"):
            errors.append(f"unknown top-level key '{key}'")

    raw_steps = doc.get("steps")
    if raw_steps is None:
        errors.append("missing 'steps' list")
        raw_steps = []
    elif not isinstance(raw_steps, list):
        errors.append("'steps' must be a list")
        raw_steps = []

    defined = set(inputs)
    steps: list[PipelineStep] = []
    for idx, raw in enumerate(raw_steps):
        label = f"step {idx}"
        if not isinstance(raw, dict):
            errors.append(f"{label}: must be an object")
            continue
        op_name = raw.get("op")
        if not isinstance(op_name, str) or op_name not in OPS:
            errors.append(f"{label}: unknown op {op_name!r}")
            continue
        label = f"step {idx} ({op_name})"
        op = OPS[op_name]

        for key in raw:
            if key not in ("op", "in", "out", "params"):
                errors.append(f"{label}: unknown key '{key}'")

        raw_in = raw.get("in")
        if isinstance(raw_in, str):
            in_names = [raw_in]
        elif isinstance(raw_in, list) and all(isinstance(n, str) for n in raw_in):
            in_names = list(raw_in)
        else:
            errors.append(f"{label}: 'in' must be a name or list of names")
            in_names = []
        if in_names and len(in_names) != len(op.inputs):
            errors.append(
                f"{label}: expects {len(op.inputs)} input(s) ({', '.join(op.inputs)}), got {len(in_names)}"
            )
        for name in in_names:
            if name not in defined:
                errors.append(f"{label}: input name '{name}' is not produced by any earlier step or input")

        params, param_errors = validate_params(op, raw.get("params", {}))
        errors.extend(f"{label}: {e}" for e in param_errors)

        out = raw.get("out")
        if not isinstance(out, str) or not out:
            errors.append(f"{label}: missing output name")
            continue
        if out in defined:
            errors.append(f"{label}: name '{out}' is already defined (names bind once)")
            continue
        defined.add(out)
        steps.append(PipelineStep(op=op_name, inputs=tuple(in_names), out=out, params=params))

    for name, path in outputs.items():
        if name not in defined:
            errors.append(f"outputs: name '{name}' is never produced")
        suffix = Path(path).suffix.lower()
        if suffix not in _OUTPUT_FORMATS:
            errors.append(f"outputs: path for '{name}' must end in .png or .pgm, got {path!r}")

    if errors:
        return None, errors
    return (
        PipelineSpec(version=PIPELINE_VERSION, inputs=inputs, steps=tuple(steps), outputs=outputs),
        [],
    )


def parse_pipeline(text: str | bytes) -> PipelineSpec:
    """Parse and validate a pipeline document; raises with all problems."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineValidationError([f"invalid JSON: {exc}"]) from exc
    spec, errors = validate_pipeline(doc)
    if errors:
        raise PipelineValidationError(errors)
    return spec


def run_pipeline(spec: PipelineSpec, workdir: str | Path = ".") -> dict[str, Any]:
    """Execute a validated pipeline; returns the execution report.

    Output files are written as soon as their producing step finishes, so
    a failing step leaves earlier outputs on disk. The report carries a
    SHA-256 checksum per written file.
    """
    workdir = Path(workdir)
    report: dict[str, Any] = {"ok": True, "error": None, "failed_step": None, "steps": [], "outputs": {}}
    values: dict[str, Any] = {}

    def write_outputs(name: str) -> None:
        for out_name, rel_path in spec.outputs.items():
            if out_name != name:
                continue
            path = workdir / rel_path
            path.parent.mkdir(parents=True, exist_ok=True)
            data = encode_image(values[name], _OUTPUT_FORMATS[Path(rel_path).suffix.lower()])
            path.write_bytes(data)
            report["outputs"][out_name] = {
                "path": str(path),
                "sha256": hashlib.sha256(data).hexdigest(),
            }

    for name, rel_path in spec.inputs.items():
        try:
            values[name] = decode_image((workdir / rel_path).read_bytes())
        except (OSError, ValueError) as exc:
            report.update(ok=False, error=f"input '{name}': {exc}", failed_step="inputs")
            return report
        write_outputs(name)

    for idx, step in enumerate(spec.steps):
        started = time.perf_counter()
        try:
            values[step.out] = OPS[step.op].fn(*(values[n] for n in step.inputs), **step.params)
            write_outputs(step.out)
        except (ValueError, OSError) as exc:
            report.update(ok=False, error=f"step {idx} ({step.op}): {exc}", failed_step=idx)
            return report
        report["steps"].append(
            {"index": idx, "op": step.op, "out": step.out, "seconds": time.perf_counter() - started}
        )
    return report
