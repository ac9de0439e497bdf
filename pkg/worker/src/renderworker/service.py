"""HTTP surface of the render worker.

Speaks the shared wire contract: composition plans come in as JSON matching
wire/plan.schema.json and answers match wire/render_response.schema.json.
The worker knows nothing about scene graphs or layout solving; it only
paints plans.
"""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict, Field

from .config import WorkerConfig, find_wire_dir
from .stub_model import StubModel, encode_png, instance_detail, mask_to_png

MAX_SEED = 2**32 - 1


class BoxBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: int
    y: int
    width: int
    height: int


class CanvasBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    width: int = Field(ge=1, le=4096)
    height: int = Field(ge=1, le=4096)


class InstanceBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    species: str = Field(min_length=1)
    attributes: tuple[str, ...] = ()
    bbox: BoxBody
    canvas: CanvasBody
    seed: int = Field(ge=0, le=MAX_SEED)
    style: str | None = None


def _check_bbox(bbox: BoxBody, canvas: CanvasBody) -> None:
    if bbox.width < 1 or bbox.height < 1:
        raise HTTPException(
            status_code=422,
            detail=f"invalid bbox: extents must be positive, "
            f"got {bbox.width}x{bbox.height}",
        )
    if (
        bbox.x < 0
        or bbox.y < 0
        or bbox.x + bbox.width > canvas.width
        or bbox.y + bbox.height > canvas.height
    ):
        raise HTTPException(
            status_code=422,
            detail="invalid bbox: box extends outside the canvas",
        )


def _load_validator(wire_dir: Path) -> Draft202012Validator:
    schema = json.loads((wire_dir / "plan.schema.json").read_text())
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


def create_app(
    config: WorkerConfig | None = None,
    wire_dir: str | Path | None = None,
) -> FastAPI:
    config = config or WorkerConfig()
    validator = _load_validator(find_wire_dir(wire_dir))
    app = FastAPI(title="render worker")
    app.state.config = config
    app.state.model = StubModel() if config.available else None
    # one in-flight render; the GPU path cannot interleave scenes
    render_lock = threading.Lock()

    def require_model() -> StubModel:
        if app.state.model is None:
            raise HTTPException(
                status_code=503,
                detail=f"model unavailable: {config.model!r} is not loaded",
            )
        return app.state.model

    @app.get("/healthz")
    def healthz() -> dict[str, Any]:
        return {
            "status": "ok" if config.available else "unavailable",
            "model": config.model_id,
            "lora": config.lora_id,
            "lora_weight": config.lora_weight if config.lora_id else None,
        }

    @app.post("/v1/instance")
    def render_instance(body: InstanceBody) -> dict[str, str]:
        model = require_model()
        _check_bbox(body.bbox, body.canvas)
        image, mask = model.instance(
            body.species,
            instance_detail(body.attributes, body.style),
            body.bbox.width,
            body.bbox.height,
            body.seed,
        )
        return {
            "image_png_base64": encode_png(image),
            "mask_png_base64": mask_to_png(mask),
        }

    @app.post("/v1/render_scene")
    def render_scene(payload: dict[str, Any] = Body()) -> dict[str, Any]:
        model = require_model()
        errors = sorted(validator.iter_errors(payload), key=str)
        if errors:
            raise HTTPException(
                status_code=422,
                detail=f"plan does not match schema: {errors[0].message}",
            )
        depths = [inst["z"] for inst in payload["instances"]]
        if any(b >= a for a, b in zip(depths, depths[1:])):
            raise HTTPException(
                status_code=422,
                detail="instances must be ordered back to front "
                "(strictly decreasing z)",
            )
        started = time.perf_counter()
        with render_lock:
            step = "compose"
            try:
                image, masks = model.render_scene(payload)
                step = "encode"
                body = {
                    "image_png_base64": encode_png(image),
                    "width": int(image.shape[1]),
                    "height": int(image.shape[0]),
                    "masks": [
                        {"name": name, "mask_png_base64": mask_to_png(mask)}
                        for name, mask in masks
                    ],
                    "model": model.model_id,
                }
            except Exception as exc:
                raise HTTPException(
                    status_code=500,
                    detail=f"render failed at step {step!r}: {exc}",
                ) from exc
        body["duration_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
        return body

    # the pipeline's client posts plans to /render; same contract, same handler
    app.add_api_route("/render", render_scene, methods=["POST"])

    return app
