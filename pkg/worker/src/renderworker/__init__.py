"""Render worker: serves the shared composition-plan wire contract."""

from .config import WorkerConfig, find_wire_dir
from .service import create_app
from .stub_model import StubModel

__version__ = "0.1.0"

__all__ = ["StubModel", "WorkerConfig", "create_app", "find_wire_dir"]
