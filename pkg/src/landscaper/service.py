"""HTTP JSON API over the studio.

Thin by design: pydantic request bodies, one studio call per route, and a
single exception handler that maps the package's error families to status
codes (404 unknown ids, 422 bad inputs, 502 endpoint or backend trouble).
Benchmarks can run inline or as a polled background job.
"""

from __future__ import annotations

import threading
import uuid
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .benchmark import oracle_generator, run_benchmark
from .compose import StyleParams
from .config import AppConfig
from .errors import (
    INFRASTRUCTURE_ERRORS,
    LandscaperError,
    SessionNotFound,
    StorageError,
    VALIDATION_ERRORS,
)
from .llm import generate_layout
from .model import Layout, SceneGraph
from .studio import Studio


class _Body(BaseModel):
    # misspelled fields should 422, not silently fall back to defaults
    model_config = ConfigDict(extra="forbid")


class CreateSessionBody(_Body):
    description: str


class ConcretizeBody(_Body):
    text: str | None = None
    graph: dict | None = None
    style: dict | None = None


class RenderBody(_Body):
    layout: dict | None = None
    style: dict | None = None
    seed: int = 0


class BenchmarkBody(_Body):
    generator: str = "oracle"
    sample_count: int = Field(default=100, ge=0, le=10000)
    seed: int = 7
    background: bool = False


def _error_status(exc: LandscaperError) -> int:
    if isinstance(exc, SessionNotFound):
        return 404
    if isinstance(exc, VALIDATION_ERRORS):
        return 422
    if isinstance(exc, INFRASTRUCTURE_ERRORS):
        return 502
    return 500


def create_app(config: AppConfig | None = None, studio: Studio | None = None) -> FastAPI:
    studio = studio or Studio(config)
    config = studio.config
    app = FastAPI(title="landscaper", version="0.1.0")
    jobs: dict[str, dict[str, Any]] = {}
    jobs_lock = threading.Lock()

    @app.exception_handler(LandscaperError)
    async def landscaper_error_handler(request: Request, exc: LandscaperError):
        return JSONResponse(
            status_code=_error_status(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/kb")
    def knowledge_base():
        return config.kb.to_json_dict()

    @app.get("/config")
    def public_config():
        return config.public_json_dict()

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session_id = studio.create_session(body.description)
        return {"session_id": session_id}

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": studio.list_sessions()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = studio.session(session_id)
        return {
            "session_id": session.session_id,
            "description": session.description,
            "records": [r.to_json_dict() for r in session.records],
        }

    @app.get("/sessions/{session_id}/history")
    def session_history(session_id: str):
        session = studio.session(session_id)
        return {
            "session_id": session.session_id,
            "records": [r.to_json_dict() for r in session.records],
        }

    @app.post("/sessions/{session_id}/concretize")
    def concretize(session_id: str, body: ConcretizeBody):
        graph = SceneGraph.from_json_dict(body.graph) if body.graph is not None else None
        style = StyleParams.from_json_dict(body.style) if body.style is not None else None
        record = studio.concretize(session_id, text=body.text, graph=graph, style=style)
        return record.to_json_dict()

    @app.post("/sessions/{session_id}/render")
    def render(session_id: str, body: RenderBody):
        layout = Layout.from_json_dict(body.layout) if body.layout is not None else None
        style = StyleParams.from_json_dict(body.style) if body.style is not None else None
        record = studio.render(session_id, layout=layout, style=style, seed=body.seed)
        return record.to_json_dict()

    @app.get("/sessions/{session_id}/replay")
    def replay(session_id: str):
        return studio.replay(session_id).to_json_dict()

    @app.get("/images/{ref}")
    def image(ref: str):
        try:
            path = studio.store.image_path(ref)
        except StorageError as exc:
            raise SessionNotFound(str(exc)) from exc
        return FileResponse(path, media_type="image/png")

    def _benchmark_generator(name: str):
        if name == "oracle":
            return oracle_generator(config.kb, config.canvas)

        def generate(graph, description, sample_seed):
            layout, _ = generate_layout(
                graph, config.endpoint, kb=config.kb, canvas=config.canvas
            )
            return layout

        return generate

    @app.post("/benchmark")
    def benchmark(body: BenchmarkBody):
        if body.generator not in ("oracle", "llm"):
            return JSONResponse(
                status_code=422,
                content={"error": "ConfigError", "detail": f"unknown generator {body.generator!r}"},
            )
        generator, label = _benchmark_generator(body.generator), body.generator
        if not body.background:
            report = run_benchmark(
                generator, seed=body.seed, sample_count=body.sample_count,
                kb=config.kb, canvas=config.canvas, label=label,
            )
            return report.to_json_dict()

        job_id = uuid.uuid4().hex[:12]
        with jobs_lock:
            jobs[job_id] = {
                "status": "running", "done": 0, "total": body.sample_count, "report": None,
            }

        def progress(done: int, total: int) -> None:
            with jobs_lock:
                jobs[job_id]["done"] = done

        def run() -> None:
            try:
                report = run_benchmark(
                    generator, seed=body.seed, sample_count=body.sample_count,
                    kb=config.kb, canvas=config.canvas, label=label, progress=progress,
                )
                with jobs_lock:
                    jobs[job_id]["status"] = "done"
                    jobs[job_id]["report"] = report.to_json_dict()
            except Exception as exc:  # job must always settle
                with jobs_lock:
                    jobs[job_id]["status"] = "failed"
                    jobs[job_id]["report"] = {"error": str(exc)}

        threading.Thread(target=run, daemon=True).start()
        return {"job_id": job_id}

    @app.get("/benchmark/jobs/{job_id}")
    def benchmark_job(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
            if job is None:
                raise SessionNotFound(f"no benchmark job {job_id!r}")
            return dict(job)

    return app
