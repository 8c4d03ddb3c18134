"""Workbench HTTP service: image sessions, spectrum views, mask filtering.

A thin JSON-over-HTTP facade on the core library. Sessions live in a
synchronized in-memory map of immutable images; every operation creates a
new image whose provenance records the step that produced it, so any
session image can be exported as a pipeline document and replayed
bit-exactly with the CLI. Mask and root images are spilled to disk
content-addressed so exported pipelines stay runnable.
"""

from __future__ import annotations

import argparse
import hashlib
import tempfile
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from fastapi import FastAPI, File, Request, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .ops import OPS, validate_params
from .raster import DecodeError, decode_image, encode_image
from .spectral import forward_spectrum, mask_from_raster, padded_size, spectrum_magnitude_view

DEFAULT_MAX_DIM = 4096
DEFAULT_MAX_IMAGES = 1024


@dataclass
class ServiceConfig:
    max_dim: int = DEFAULT_MAX_DIM
    max_images: int = DEFAULT_MAX_IMAGES
    spill_dir: Path | None = None
    ui_dir: Path | None = None


@dataclass(frozen=True)
class SessionImage:
    id: str
    seq: int
    raster: np.ndarray
    parents: tuple[str, ...] = ()
    step: dict[str, Any] | None = None  # op + params; None for uploaded roots
    kind: str = "upload"  # upload | mask | op
    # original container bytes for roots; replay must decode exactly what the
    # session decoded, and re-encoding the raster loses the source colorspace
    source: bytes | None = None


class SessionStore:
    """Synchronized map of immutable session images."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._images: dict[str, SessionImage] = {}
        self._seq = 0

    def add(self, raster: np.ndarray, *, parents=(), step=None, kind="upload", source=None) -> SessionImage:
        with self._lock:
            self._seq += 1
            image = SessionImage(
                id=uuid.uuid4().hex,
                seq=self._seq,
                raster=raster,
                parents=tuple(parents),
                step=step,
                kind=kind,
                source=source,
            )
            self._images[image.id] = image
            return image

    def get(self, image_id: str) -> SessionImage | None:
        with self._lock:
            return self._images.get(image_id)

    def count(self) -> int:
        with self._lock:
            return len(self._images)

    def ancestry(self, image_id: str) -> list[SessionImage]:
        """All ancestors of an image (itself included), oldest first."""
        with self._lock:
            seen: dict[str, SessionImage] = {}
            stack = [image_id]
            while stack:
                node = self._images[stack.pop()]
                if node.id in seen:
                    continue
                seen[node.id] = node
                stack.extend(node.parents)
            return sorted(seen.values(), key=lambda img: img.seq)


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    if config.spill_dir is None:
        config.spill_dir = Path(tempfile.mkdtemp(prefix="docrestore-session-"))
    spill_dir = Path(config.spill_dir)
    spill_dir.mkdir(parents=True, exist_ok=True)

    app = FastAPI(title="docrestore workbench", version="0.1.0")
    store = SessionStore()
    app.state.store = store
    app.state.config = config

    def spill_input(image: SessionImage) -> str:
        """Write a root image content-addressed under the spill dir."""
        data = image.source if image.source is not None else encode_image(image.raster, "png")
        ext = "pgm" if data[:2] == b"P5" else "png"
        digest = hashlib.sha256(data).hexdigest()[:16]
        rel = f"inputs/{digest}.{ext}"
        path = spill_dir / rel
        if not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
        return rel

    @app.get("/api/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/v1/images")
    async def upload_image(request: Request):
        data = await request.body()
        try:
            raster = decode_image(data)
        except DecodeError as exc:
            return _error(400, str(exc))
        h, w = raster.shape
        if max(w, h) > config.max_dim:
            return _error(413, f"image is {w}x{h}; the configured limit is {config.max_dim}")
        if store.count() >= config.max_images:
            return _error(413, f"session holds {config.max_images} images already")
        image = store.add(raster, kind="upload", source=data)
        return {"id": image.id, "width": w, "height": h}

    @app.get("/api/v1/images/{image_id}")
    def fetch_image(image_id: str, format: str = "png"):
        image = store.get(image_id)
        if image is None:
            return _error(404, f"unknown image id {image_id!r}")
        if format not in ("png", "pgm"):
            return _error(422, f"unsupported format {format!r}")
        media = "image/png" if format == "png" else "image/x-portable-graymap"
        return Response(content=encode_image(image.raster, format), media_type=media)

    @app.get("/api/v1/images/{image_id}/spectrum")
    def fetch_spectrum(image_id: str, log: int = 1):
        image = store.get(image_id)
        if image is None:
            return _error(404, f"unknown image id {image_id!r}")
        spectrum = forward_spectrum(image.raster)
        view = spectrum_magnitude_view(spectrum, log_scale=bool(log))
        return Response(
            content=encode_image(view, "png"),
            media_type="image/png",
            headers={
                "X-Spectrum-Width": str(spectrum.width),
                "X-Spectrum-Height": str(spectrum.height),
            },
        )

    def run_registered_op(image: SessionImage, op_name: str, params: dict, extra_ids: dict):
        """Validate and execute one step; returns (SessionImage, error response)."""
        if store.count() >= config.max_images:
            return None, _error(413, f"session holds {config.max_images} images already")
        if not isinstance(op_name, str) or op_name not in OPS:
            return None, _error(422, f"unknown op {op_name!r}")
        op = OPS[op_name]
        normalized, errors = validate_params(op, params)
        if errors:
            return None, _error(422, "; ".join(errors))
        rasters = [image.raster]
        parents = [image.id]
        for slot in op.inputs[1:]:
            ref = extra_ids.get(slot)
            if ref is None:
                return None, _error(422, f"op '{op_name}' needs input '{slot}' (pass its image id)")
            other = store.get(ref)
            if other is None:
                return None, _error(422, f"input '{slot}': unknown image id {ref!r}")
            rasters.append(other.raster)
            parents.append(other.id)
        try:
            result = op.fn(*rasters, **normalized)
        except ValueError as exc:
            return None, _error(422, str(exc))
        step = {"op": op_name, "params": normalized}
        return store.add(result, parents=parents, step=step, kind="op"), None

    @app.post("/api/v1/images/{image_id}/ops")
    async def apply_op(image_id: str, request: Request):
        image = store.get(image_id)
        if image is None:
            return _error(404, f"unknown image id {image_id!r}")
        try:
            body = await request.json()
        except Exception:
            return _error(422, "body must be a JSON object like {op, params, inputs}")
        if not isinstance(body, dict):
            return _error(422, "body must be a JSON object like {op, params, inputs}")
        params = body.get("params", {})
        extra = body.get("inputs", {})
        if not isinstance(extra, dict):
            return _error(422, "'inputs' must map input slots to image ids")
        result, failure = run_registered_op(image, body.get("op"), params, extra)
        if failure is not None:
            return failure
        return {"id": result.id}

    @app.post("/api/v1/images/{image_id}/fourier-filter")
    async def fourier_filter_endpoint(image_id: str, mask: UploadFile = File(...), renormalize: bool = True):
        image = store.get(image_id)
        if image is None:
            return _error(404, f"unknown image id {image_id!r}")
        mask_bytes = await mask.read()
        try:
            mask_raster = decode_image(mask_bytes)
        except DecodeError as exc:
            return _error(422, f"mask: {exc}")
        h, w = image.raster.shape
        expected = (padded_size(h), padded_size(w))
        if mask_raster.shape != expected:
            return _error(
                422,
                f"mask is {mask_raster.shape[1]}x{mask_raster.shape[0]} but the spectrum "
                f"is {expected[1]}x{expected[0]}; paint on the dimensions from the spectrum headers",
            )
        mask_image = store.add(mask_from_raster(mask_raster), kind="mask", source=mask_bytes)
        result, failure = run_registered_op(
            image, "fourier_filter", {"renormalize": renormalize}, {"mask": mask_image.id}
        )
        if failure is not None:
            return failure
        return {"id": result.id}

    @app.get("/api/v1/images/{image_id}/pipeline")
    def export_pipeline(image_id: str):
        image = store.get(image_id)
        if image is None:
            return _error(404, f"unknown image id {image_id!r}")
        chain = store.ancestry(image_id)
        names: dict[str, str] = {}
        inputs: dict[str, str] = {}
        steps: list[dict[str, Any]] = []
        upload_n = mask_n = 0
        for node in chain:
            if node.step is None:
                if node.kind == "mask":
                    name = f"mask{mask_n}"
                    mask_n += 1
                else:
                    name = f"in{upload_n}"
                    upload_n += 1
                names[node.id] = name
                inputs[name] = spill_input(node)
            else:
                name = "result" if node.id == image_id else f"s{len(steps)}"
                names[node.id] = name
                in_names = [names[parent] for parent in node.parents]
                steps.append(
                    {
                        "op": node.step["op"],
                        "in": in_names[0] if len(in_names) == 1 else in_names,
                        "out": name,
                        "params": node.step["params"],
                    }
                )
        return {
            "version": 1,
            "inputs": inputs,
            "steps": steps,
            "outputs": {names[image_id]: "result.png"},
        }

    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

    return app


def main(argv: list[str] | None = None) -> int:
    import os

    env = os.environ.get
    parser = argparse.ArgumentParser(prog="restore-workbench", description="Interactive restoration workbench service.")
    parser.add_argument(
        "--listen",
        default=env("RESTORE_WORKBENCH_LISTEN", "127.0.0.1:8601"),
        help="host:port to bind (default 127.0.0.1:8601)",
    )
    parser.add_argument(
        "--max-dim",
        type=int,
        default=int(env("RESTORE_WORKBENCH_MAX_DIM", str(DEFAULT_MAX_DIM))),
        help="largest accepted image dimension",
    )
    parser.add_argument(
        "--max-images",
        type=int,
        default=int(env("RESTORE_WORKBENCH_MAX_IMAGES", str(DEFAULT_MAX_IMAGES))),
        help="cap on session images held in memory",
    )
    parser.add_argument(
        "--spill-dir",
        default=env("RESTORE_WORKBENCH_SPILL_DIR"),
        help="directory for session inputs/masks (default: temp dir)",
    )
    parser.add_argument(
        "--ui-dir",
        default=env("RESTORE_WORKBENCH_UI_DIR"),
        help="static directory with the built workbench UI",
    )
    args = parser.parse_args(argv)

    host, _, port = args.listen.rpartition(":")
    config = ServiceConfig(
        max_dim=args.max_dim,
        max_images=args.max_images,
        spill_dir=Path(args.spill_dir) if args.spill_dir else None,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    import uvicorn

    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
