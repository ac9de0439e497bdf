"""Session orchestration: the loop of concretize, render, inspect, edit.

The Studio owns a config, a session store, and one lock per session.  Each
step appends an immutable record: concretize turns text (or an edited
graph) into a graph plus layout, render turns the current layout into an
image.  Failed generations are recorded and re-raised; invalid *inputs*
are rejected before anything is written.

`replay` re-executes a session from its own records: generation steps rerun
against the recorded transcripts, renders rerun against the configured
backend, and every recomputed artifact must match the stored one exactly.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass

from .compose import StyleParams, plan_composition, render_scene
from .config import AppConfig
from .errors import LandscaperError, SessionStateError
from .llm import ReplayTransport, Transport, generate_layout, generate_scene_graph, request_hash
from .mock_backend import MockBackend
from .model import Layout, SceneGraph
from .session import DesignSession, IterationRecord, SessionStore, _utc_now
from .solver import solve
from .worker_client import WorkerClient


@dataclass(frozen=True)
class ReplayEntry:
    index: int
    kind: str
    status: str  # "match", "mismatch: ...", or "skipped: ..."


@dataclass(frozen=True)
class ReplayReport:
    session_id: str
    entries: tuple[ReplayEntry, ...]

    @property
    def ok(self) -> bool:
        return all(not e.status.startswith("mismatch") for e in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "ok": self.ok,
            "entries": [
                {"index": e.index, "kind": e.kind, "status": e.status}
                for e in self.entries
            ],
        }


class Studio:
    def __init__(
        self,
        config: AppConfig | None = None,
        store: SessionStore | None = None,
        transport: Transport | None = None,
    ):
        self.config = config or AppConfig()
        self.config.validate()
        self.store = store or SessionStore(self.config.data_dir)
        self._transport = transport  # None: built from config per call
        self._locks: defaultdict[str, threading.Lock] = defaultdict(threading.Lock)

    # -- session lifecycle --------------------------------------------------

    def create_session(self, description: str) -> str:
        if not description or not description.strip():
            raise SessionStateError("a session needs a non-empty description")
        return self.store.create(description.strip())

    def session(self, session_id: str) -> DesignSession:
        return self.store.load(session_id)

    def list_sessions(self) -> list[dict]:
        return self.store.list_sessions()

    # -- steps ---------------------------------------------------------------

    def concretize(
        self,
        session_id: str,
        text: str | None = None,
        graph: SceneGraph | None = None,
        style: StyleParams | None = None,
    ) -> IterationRecord:
        """Produce a graph (generated or provided) and a layout for it.

        An invalid provided graph raises before anything is appended.  A
        failed generation is appended as an error record and re-raised.
        When layout generation fails and the config allows it, the
        rule-based solver supplies the layout instead.
        """
        with self._locks[session_id]:
            session = self.store.load(session_id)
            if style is not None:
                style.validate()
            else:
                style = self._latest_style(session)
            if graph is not None:
                graph.validate()
                for node in graph.nodes:
                    self.config.kb.get(node.species)  # unknown species fail early
            index = len(session.records)

            transcripts: dict = {}
            if graph is None:
                source_text = text or session.description
                if not source_text:
                    raise SessionStateError("nothing to concretize: no text available")
                try:
                    graph, graph_transcript = generate_scene_graph(
                        source_text,
                        self.config.endpoint,
                        kb=self.config.kb,
                        transport=self._transport,
                    )
                    transcripts["graph"] = graph_transcript
                except LandscaperError as exc:
                    self._append_error(session_id, index, "concretize", text=source_text, error=exc)
                    raise
            else:
                source_text = text

            layout_source = "generated"
            try:
                layout, layout_transcript = generate_layout(
                    graph,
                    self.config.endpoint,
                    kb=self.config.kb,
                    canvas=self.config.canvas,
                    transport=self._transport,
                )
                transcripts["layout"] = layout_transcript
                error = None
            except LandscaperError as exc:
                if not self.config.fallback_oracle:
                    self._append_error(
                        session_id, index, "concretize",
                        text=source_text, graph=graph.to_json_dict(), error=exc,
                    )
                    raise
                layout = solve(graph, self.config.kb, self.config.canvas)
                layout_source = "oracle"
                error = f"layout generation failed ({type(exc).__name__}: {exc}); oracle layout used"

            record = IterationRecord(
                index=index,
                kind="concretize",
                timestamp=_utc_now(),
                text=source_text,
                graph=graph.to_json_dict(),
                layout=layout.to_json_dict(),
                style=style.to_json_dict(),
                layout_source=layout_source,
                transcripts=transcripts or None,
                error=error,
            )
            self.store.append(session_id, record)
            return record

    def render(
        self,
        session_id: str,
        layout: Layout | None = None,
        style: StyleParams | None = None,
        seed: int = 0,
    ) -> IterationRecord:
        """Render the session's current layout (or a provided override)."""
        with self._locks[session_id]:
            session = self.store.load(session_id)
            graph = self._latest_graph(session)
            if graph is None:
                raise SessionStateError("nothing to render: concretize first")
            if layout is None:
                layout_doc = session.latest("layout")
                if layout_doc is None:
                    raise SessionStateError("nothing to render: no layout yet")
                layout = Layout.from_json_dict(layout_doc)  # type: ignore[arg-type]
            layout.validate()
            if style is not None:
                style.validate()
            else:
                style = self._latest_style(session)

            index = len(session.records)
            plan = plan_composition(
                graph, layout, style, seed, self.config.frozen_fraction
            )
            try:
                image = self._render_plan(plan)
            except LandscaperError as exc:
                self._append_error(
                    session_id, index, "render",
                    graph=graph.to_json_dict(), layout=layout.to_json_dict(),
                    style=style.to_json_dict(), seed=seed, error=exc,
                )
                raise
            ref = self.store.save_image(image)
            record = IterationRecord(
                index=index,
                kind="render",
                timestamp=_utc_now(),
                seed=seed,
                graph=graph.to_json_dict(),
                layout=layout.to_json_dict(),
                style=style.to_json_dict(),
                image_ref=ref,
            )
            self.store.append(session_id, record)
            return record

    # -- replay ---------------------------------------------------------------

    def replay(self, session_id: str) -> ReplayReport:
        """Recompute every successful step and compare against the log."""
        session = self.store.load(session_id)
        entries = []
        for record in session.records:
            if record.kind == "created":
                entries.append(ReplayEntry(record.index, record.kind, "skipped: nothing to recompute"))
            elif record.error is not None and record.layout_source != "oracle":
                entries.append(ReplayEntry(record.index, record.kind, "skipped: recorded failure"))
            elif record.kind == "concretize":
                entries.append(self._replay_concretize(record))
            elif record.kind == "render":
                entries.append(self._replay_render(record))
            else:
                entries.append(ReplayEntry(record.index, record.kind, "skipped: unknown kind"))
        return ReplayReport(session_id=session_id, entries=tuple(entries))

    def _replay_concretize(self, record: IterationRecord) -> ReplayEntry:
        try:
            transcripts = record.transcripts or {}
            fixtures = {}
            for exchanges in transcripts.values():
                for exchange in exchanges:
                    fixtures[request_hash(exchange["request"])] = exchange["response"]
            transport = ReplayTransport(fixtures)

            if "graph" in transcripts:
                graph, _ = generate_scene_graph(
                    record.text or "", self.config.endpoint, kb=self.config.kb,
                    transport=transport,
                )
            else:
                graph = SceneGraph.from_json_dict(record.graph or {})
            if graph.to_json_dict() != record.graph:
                return ReplayEntry(record.index, record.kind, "mismatch: graph diverged")

            if record.layout_source == "oracle":
                layout = solve(graph, self.config.kb, self.config.canvas)
            else:
                layout, _ = generate_layout(
                    graph, self.config.endpoint, kb=self.config.kb,
                    canvas=self.config.canvas, transport=transport,
                )
            if layout.to_json_dict() != record.layout:
                return ReplayEntry(record.index, record.kind, "mismatch: layout diverged")
            return ReplayEntry(record.index, record.kind, "match")
        except LandscaperError as exc:
            return ReplayEntry(
                record.index, record.kind, f"mismatch: replay failed ({type(exc).__name__}: {exc})"
            )

    def _replay_render(self, record: IterationRecord) -> ReplayEntry:
        try:
            graph = SceneGraph.from_json_dict(record.graph or {})
            layout = Layout.from_json_dict(record.layout or {})
            style = StyleParams.from_json_dict(record.style or {})
            plan = plan_composition(
                graph, layout, style, record.seed or 0, self.config.frozen_fraction
            )
            image = self._render_plan(plan)
            ref = self.store.save_image(image)
            if ref != record.image_ref:
                return ReplayEntry(
                    record.index, record.kind,
                    f"mismatch: image {ref} differs from recorded {record.image_ref}",
                )
            return ReplayEntry(record.index, record.kind, "match")
        except LandscaperError as exc:
            return ReplayEntry(
                record.index, record.kind, f"mismatch: replay failed ({type(exc).__name__}: {exc})"
            )

    # -- helpers ----------------------------------------------------------------

    def _render_plan(self, plan):
        if self.config.backend == "worker":
            image, _ = WorkerClient(self.config.worker_url).render(plan)
            return image
        return render_scene(plan, MockBackend(self.config.kb)).image

    def _latest_graph(self, session: DesignSession) -> SceneGraph | None:
        doc = session.latest("graph")
        if doc is None:
            return None
        return SceneGraph.from_json_dict(doc)  # type: ignore[arg-type]

    def _latest_style(self, session: DesignSession) -> StyleParams:
        doc = session.latest("style")
        if doc is None:
            return StyleParams()
        return StyleParams.from_json_dict(doc)  # type: ignore[arg-type]

    def _append_error(
        self,
        session_id: str,
        index: int,
        kind: str,
        text: str | None = None,
        graph: dict | None = None,
        layout: dict | None = None,
        style: dict | None = None,
        seed: int | None = None,
        error: LandscaperError | None = None,
    ) -> None:
        self.store.append(
            session_id,
            IterationRecord(
                index=index,
                kind=kind,
                timestamp=_utc_now(),
                seed=seed,
                text=text,
                graph=graph,
                layout=layout,
                style=style,
                error=f"{type(error).__name__}: {error}" if error else "unknown error",
            ),
        )
