"""Append-only design sessions and the image store.

A session is one JSONL file: one record per iteration, never rewritten.
Images live next to the sessions as PNG files named by content hash, so a
record's `image_ref` stays valid forever and identical renders share bytes.
Everything here survives a process restart; a fresh store over the same
directory sees every session.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import SessionNotFound, StorageError
from .raster import decode_png, encode_png

RECORD_KINDS = ("created", "concretize", "render")


def _utc_now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


@dataclass(frozen=True)
class IterationRecord:
    """One step of a session: creation, a concretize pass, or a render."""

    index: int
    kind: str
    timestamp: str
    seed: int | None = None
    text: str | None = None
    graph: dict | None = None
    layout: dict | None = None
    style: dict | None = None
    layout_source: str | None = None
    image_ref: str | None = None
    transcripts: dict | None = None
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "timestamp": self.timestamp,
            "seed": self.seed,
            "text": self.text,
            "graph": self.graph,
            "layout": self.layout,
            "style": self.style,
            "layout_source": self.layout_source,
            "image_ref": self.image_ref,
            "transcripts": self.transcripts,
            "error": self.error,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "IterationRecord":
        return cls(
            index=int(data["index"]),
            kind=str(data["kind"]),
            timestamp=str(data["timestamp"]),
            seed=data.get("seed"),
            text=data.get("text"),
            graph=data.get("graph"),
            layout=data.get("layout"),
            style=data.get("style"),
            layout_source=data.get("layout_source"),
            image_ref=data.get("image_ref"),
            transcripts=data.get("transcripts"),
            error=data.get("error"),
        )


@dataclass(frozen=True)
class DesignSession:
    session_id: str
    records: tuple[IterationRecord, ...]

    def latest(self, field_name: str) -> object | None:
        """Most recent non-null value of a record field, newest first."""
        for record in reversed(self.records):
            value = getattr(record, field_name)
            if value is not None:
                return value
        return None

    @property
    def description(self) -> str:
        for record in self.records:
            if record.kind == "created" and record.text:
                return record.text
        return ""


class SessionStore:
    """Sessions under `<root>/sessions`, images under `<root>/images`."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.images_dir = self.root / "images"
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
            self.images_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot prepare session store at {self.root}: {exc}") from exc

    def _session_path(self, session_id: str) -> Path:
        if not session_id.isalnum():
            raise SessionNotFound(f"no session {session_id!r}")
        return self.sessions_dir / f"{session_id}.jsonl"

    def create(self, description: str) -> str:
        session_id = uuid.uuid4().hex[:12]
        record = IterationRecord(
            index=0, kind="created", timestamp=_utc_now(), text=description
        )
        self._append_line(self._session_path(session_id), record)
        return session_id

    def exists(self, session_id: str) -> bool:
        try:
            return self._session_path(session_id).exists()
        except SessionNotFound:
            return False

    def append(self, session_id: str, record: IterationRecord) -> None:
        path = self._session_path(session_id)
        if not path.exists():
            raise SessionNotFound(f"no session {session_id!r}")
        self._append_line(path, record)

    def _append_line(self, path: Path, record: IterationRecord) -> None:
        line = json.dumps(record.to_json_dict(), sort_keys=True)
        try:
            with path.open("a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
        except OSError as exc:
            raise StorageError(f"cannot append to {path}: {exc}") from exc

    def load(self, session_id: str) -> DesignSession:
        path = self._session_path(session_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise SessionNotFound(f"no session {session_id!r}") from None
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from exc
        records = []
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append(IterationRecord.from_json_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise StorageError(f"corrupt record at {path}:{line_no}: {exc}") from exc
        return DesignSession(session_id=session_id, records=tuple(records))

    def list_sessions(self) -> list[dict]:
        sessions = []
        for path in sorted(self.sessions_dir.glob("*.jsonl")):
            session = self.load(path.stem)
            sessions.append(
                {
                    "session_id": session.session_id,
                    "created": session.records[0].timestamp if session.records else None,
                    "description": session.description,
                    "records": len(session.records),
                }
            )
        return sessions

    # -- images -----------------------------------------------------------

    def save_image(self, image: np.ndarray) -> str:
        data = encode_png(image)
        ref = hashlib.sha256(data).hexdigest()[:32]
        path = self.images_dir / f"{ref}.png"
        if not path.exists():
            try:
                path.write_bytes(data)
            except OSError as exc:
                raise StorageError(f"cannot write image {path}: {exc}") from exc
        return ref

    def image_path(self, ref: str) -> Path:
        if not (ref.isalnum() and len(ref) == 32):
            raise StorageError(f"invalid image ref {ref!r}")
        path = self.images_dir / f"{ref}.png"
        if not path.exists():
            raise StorageError(f"no image {ref!r}")
        return path

    def load_image(self, ref: str) -> np.ndarray:
        try:
            return decode_png(self.image_path(ref).read_bytes())
        except OSError as exc:
            raise StorageError(f"cannot read image {ref!r}: {exc}") from exc
