"""Worker configuration and wire-schema discovery."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

WIRE_DIR_ENV = "RENDERWORKER_WIRE_DIR"


def find_wire_dir(explicit: str | Path | None = None) -> Path:
    """Locate the directory holding the shared JSON schemas.

    The schema files are the single source of truth and live once in the
    repository; resolution order is explicit argument, environment variable,
    then walking up from this package looking for `wire/plan.schema.json`.
    """
    candidates = []
    if explicit is not None:
        candidates.append(Path(explicit))
    env = os.environ.get(WIRE_DIR_ENV)
    if env:
        candidates.append(Path(env))
    here = Path(__file__).resolve()
    candidates.extend(parent / "wire" for parent in here.parents[:6])

    for candidate in candidates:
        if (candidate / "plan.schema.json").is_file():
            return candidate
    raise FileNotFoundError(
        "cannot locate wire/plan.schema.json; pass wire_dir or set "
        f"{WIRE_DIR_ENV}"
    )


@dataclass(frozen=True)
class WorkerConfig:
    """What model the worker should serve.

    Only the deterministic stub ships with this package; configuring any
    other model makes the render routes answer 503 until real weights and
    a GPU runtime are wired in. LoRA fields are carried so /healthz can
    report them and deployments can pre-stage configs.
    """

    model: str = "stub"
    model_path: str | None = None
    lora_path: str | None = None
    lora_weight: float = 0.8

    @property
    def available(self) -> bool:
        return self.model == "stub"

    @property
    def model_id(self) -> str:
        return "stub-1" if self.model == "stub" else self.model

    @property
    def lora_id(self) -> str | None:
        if self.lora_path is None:
            return None
        return Path(self.lora_path).stem
