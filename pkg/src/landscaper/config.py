"""Application configuration: one TOML or JSON file, flat and explicit.

Secrets never live here: the endpoint section names an environment variable
for its API key and nothing else.  Everything has a default, so an empty
config (or none at all) yields a working offline setup with the mock
backend and the rule-based solver.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .knowledge import PlantKnowledgeBase, builtin_knowledge_base
from .llm import LlmEndpointConfig
from .model import DEFAULT_CANVAS, Canvas

BACKENDS = ("mock", "worker")


@dataclass(frozen=True)
class AppConfig:
    canvas: Canvas = DEFAULT_CANVAS
    kb: PlantKnowledgeBase = field(default_factory=builtin_knowledge_base)
    endpoint: LlmEndpointConfig = field(default_factory=LlmEndpointConfig)
    backend: str = "mock"
    worker_url: str = "http://127.0.0.1:8601"
    fallback_oracle: bool = True
    frozen_fraction: float = 0.5
    data_dir: Path = Path("data")

    def validate(self) -> None:
        self.canvas.validate()
        self.kb.validate()
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend {self.backend!r} not in {BACKENDS}")
        if not (0.0 <= self.frozen_fraction <= 1.0):
            raise ConfigError(f"frozen fraction {self.frozen_fraction} not in [0, 1]")
        # Endpoint settings are checked lazily, when a transport is built:
        # offline use (solver layouts, mock renders) never needs them.

    def public_json_dict(self) -> dict:
        return {
            "canvas": {"width": self.canvas.width, "height": self.canvas.height},
            "backend": self.backend,
            "worker_url": self.worker_url,
            "fallback_oracle": self.fallback_oracle,
            "frozen_fraction": self.frozen_fraction,
            "data_dir": str(self.data_dir),
            "endpoint": self.endpoint.to_json_dict(),
        }


def _load_raw(path: Path) -> dict:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        try:
            return json.loads(raw.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        import tomllib  # Python 3.11+
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc


def load_config(path: str | Path | None = None) -> AppConfig:
    """Config from a file, or the defaults when no path is given."""
    if path is None:
        config = AppConfig()
        config.validate()
        return config
    path = Path(path)
    data = _load_raw(path)
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a table at the top level")

    canvas_data = data.get("canvas", {})
    canvas = Canvas(
        int(canvas_data.get("width", DEFAULT_CANVAS.width)),
        int(canvas_data.get("height", DEFAULT_CANVAS.height)),
    )

    app_data = data.get("app", {})
    kb_path = app_data.get("kb_path")
    kb = PlantKnowledgeBase.load(path.parent / kb_path) if kb_path else builtin_knowledge_base()

    endpoint_data = data.get("endpoint", {})
    defaults = LlmEndpointConfig()
    fixture_path = endpoint_data.get("fixture_path")
    if fixture_path:
        fixture_path = str((path.parent / fixture_path).resolve())
    record_path = endpoint_data.get("record_path")
    if record_path:
        record_path = str((path.parent / record_path).resolve())
    endpoint = LlmEndpointConfig(
        base_url=str(endpoint_data.get("base_url", defaults.base_url)),
        model=str(endpoint_data.get("model", defaults.model)),
        mode=str(endpoint_data.get("mode", defaults.mode)),
        temperature=float(endpoint_data.get("temperature", defaults.temperature)),
        max_tokens=int(endpoint_data.get("max_tokens", defaults.max_tokens)),
        timeout=float(endpoint_data.get("timeout", defaults.timeout)),
        fixture_path=fixture_path,
        record_path=record_path,
        api_key_env=str(endpoint_data.get("api_key_env", defaults.api_key_env)),
    )

    try:
        config = AppConfig(
            canvas=canvas,
            kb=kb,
            endpoint=endpoint,
            backend=str(app_data.get("backend", "mock")),
            worker_url=str(app_data.get("worker_url", "http://127.0.0.1:8601")),
            fallback_oracle=bool(app_data.get("fallback_oracle", True)),
            frozen_fraction=float(app_data.get("frozen_fraction", 0.5)),
            data_dir=path.parent / str(app_data.get("data_dir", "data")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config {path} has a malformed value: {exc}") from exc
    config.validate()
    return config
