"""Chat-completion client for the two concretization calls.

Talks to any OpenAI-style `/chat/completions` endpoint over HTTP, or to a
JSONL fixture file in replay mode.  Replay never opens a socket; it looks
responses up by a canonical hash of the request, so a recorded session
replays byte for byte.  A recording wrapper captures live traffic into the
same fixture format.

Each generate call parses the model's answer, and on a parse or validation
failure sends one follow-up reminder quoting the problem before giving up
with ParseFailedAfterRetry.  The returned transcript carries every
request/response pair verbatim for session logging.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx

from .errors import (
    ConfigError,
    EndpointError,
    LandscaperError,
    NameMismatch,
    ParseFailedAfterRetry,
)
from .knowledge import PlantKnowledgeBase, builtin_knowledge_base
from .model import DEFAULT_CANVAS, Canvas, Layout, SceneGraph
from .prompts import RETRY_REMINDER, build_graph_prompt, build_layout_prompt
from .textform import parse_layout, parse_triples

MODES = ("live", "replay")


@dataclass(frozen=True)
class LlmEndpointConfig:
    base_url: str = "http://127.0.0.1:8080/v1"
    model: str = "gpt-4"
    mode: str = "replay"
    temperature: float = 0.0
    max_tokens: int = 2048
    timeout: float = 30.0
    fixture_path: str | None = None
    record_path: str | None = None
    api_key_env: str = "LANDSCAPER_API_KEY"

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode {self.mode!r} not in {MODES}")
        if self.mode == "replay" and not self.fixture_path:
            raise ConfigError("replay mode needs a fixture path")
        if self.temperature < 0:
            raise ConfigError(f"temperature {self.temperature} must be >= 0")
        if self.max_tokens <= 0:
            raise ConfigError(f"max tokens {self.max_tokens} must be positive")

    def to_json_dict(self) -> dict:
        return {
            "base_url": self.base_url,
            "model": self.model,
            "mode": self.mode,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "timeout": self.timeout,
            "fixture_path": self.fixture_path,
            "record_path": self.record_path,
            "api_key_env": self.api_key_env,
        }


def request_hash(request: dict) -> str:
    canonical = json.dumps(request, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Transport(Protocol):
    def send(self, request: dict) -> dict: ...


class HttpTransport:
    """Live POSTs to `{base_url}/chat/completions`."""

    def __init__(self, config: LlmEndpointConfig):
        self.config = config

    def send(self, request: dict) -> dict:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        try:
            response = httpx.post(
                url, json=request, headers=headers, timeout=self.config.timeout
            )
            response.raise_for_status()
            return response.json()
        except httpx.HTTPStatusError as exc:
            raise EndpointError(
                f"endpoint returned {exc.response.status_code} for {url}"
            ) from exc
        except httpx.HTTPError as exc:
            raise EndpointError(f"cannot reach endpoint {url}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise EndpointError(f"endpoint returned non-JSON from {url}") from exc


class ReplayTransport:
    """Answers from a JSONL fixture, keyed by request hash.  Never networks."""

    def __init__(self, fixtures: dict[str, dict]):
        self.fixtures = fixtures

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "ReplayTransport":
        fixtures: dict[str, dict] = {}
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise EndpointError(f"cannot read fixture file {path}: {exc}") from exc
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                fixtures[str(entry["request_hash"])] = entry["response"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise EndpointError(f"bad fixture line {line_no} in {path}: {exc}") from exc
        return cls(fixtures)

    def send(self, request: dict) -> dict:
        key = request_hash(request)
        response = self.fixtures.get(key)
        if response is None:
            raise EndpointError(f"no recorded response for request hash {key[:12]}...")
        return response


class RecordingTransport:
    """Wraps another transport and appends every exchange to a JSONL file."""

    def __init__(self, inner: Transport, path: str | Path):
        self.inner = inner
        self.path = Path(path)

    def send(self, request: dict) -> dict:
        response = self.inner.send(request)
        entry = {
            "request_hash": request_hash(request),
            "request": request,
            "response": response,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
        return response


def transport_for(config: LlmEndpointConfig) -> Transport:
    config.validate()
    transport: Transport
    if config.mode == "replay":
        transport = ReplayTransport.from_jsonl(config.fixture_path)
    else:
        transport = HttpTransport(config)
    if config.record_path:
        transport = RecordingTransport(transport, config.record_path)
    return transport


def _build_request(messages: list[dict], config: LlmEndpointConfig) -> dict:
    return {
        "model": config.model,
        "messages": messages,
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }


def _content_of(response: dict) -> str:
    try:
        content = response["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError) as exc:
        raise EndpointError(f"malformed completion payload: {exc}") from exc
    if not isinstance(content, str):
        raise EndpointError("completion content is not text")
    return content


def _generate_with_retry(
    prompt: str,
    parse: Callable[[str], object],
    config: LlmEndpointConfig,
    transport: Transport,
) -> tuple[object, list[dict]]:
    """One call, one reminder on a bad answer, then give up.

    If the reminder call itself cannot be served (typically replay fixtures
    that only recorded the first exchange), the original parse error is the
    more useful signal and is re-raised.
    """
    messages = [{"role": "user", "content": prompt}]
    request = _build_request(messages, config)
    response = transport.send(request)
    transcript = [{"request": request, "response": response}]
    content = _content_of(response)
    try:
        return parse(content), transcript
    except (EndpointError, ParseFailedAfterRetry):
        raise
    except LandscaperError as first_error:
        retry_messages = messages + [
            {"role": "assistant", "content": content},
            {"role": "user", "content": RETRY_REMINDER.format(error=first_error)},
        ]
        retry_request = _build_request(retry_messages, config)
        try:
            retry_response = transport.send(retry_request)
        except EndpointError:
            raise first_error
        transcript.append({"request": retry_request, "response": retry_response})
        retry_content = _content_of(retry_response)
        try:
            return parse(retry_content), transcript
        except LandscaperError as second_error:
            raise ParseFailedAfterRetry(
                f"unusable answers after retry: first {first_error}; then {second_error}",
                raw_responses=[content, retry_content],
            ) from second_error


def generate_scene_graph(
    description: str,
    config: LlmEndpointConfig,
    kb: PlantKnowledgeBase | None = None,
    transport: Transport | None = None,
    demonstrations: tuple[tuple[str, str], ...] | None = None,
) -> tuple[SceneGraph, list[dict]]:
    """Description to validated scene graph, plus the raw transcript."""
    kb = kb or builtin_knowledge_base()
    transport = transport or transport_for(config)
    prompt = build_graph_prompt(description, kb, demonstrations).render()

    def parse(content: str) -> SceneGraph:
        graph = parse_triples(content)
        graph.validate()
        return graph

    graph, transcript = _generate_with_retry(prompt, parse, config, transport)
    return graph, transcript  # type: ignore[return-value]


def generate_layout(
    graph: SceneGraph,
    config: LlmEndpointConfig,
    kb: PlantKnowledgeBase | None = None,
    canvas: Canvas = DEFAULT_CANVAS,
    transport: Transport | None = None,
    demonstrations: tuple[tuple[str, str], ...] | None = None,
    include_knowledge: bool = True,
) -> tuple[Layout, list[dict]]:
    """Scene graph to validated layout whose names match the graph exactly."""
    kb = kb or builtin_knowledge_base()
    transport = transport or transport_for(config)
    graph.validate()
    prompt = build_layout_prompt(
        graph, kb, canvas, demonstrations, include_knowledge
    ).render()
    node_ids = set(graph.node_ids())

    def parse(content: str) -> Layout:
        layout = parse_layout(content, canvas)
        names = {el.name for el in layout.elements}
        if names != node_ids:
            raise NameMismatch(
                f"layout names diverge from the graph: missing "
                f"{sorted(node_ids - names) or 'none'}, extra {sorted(names - node_ids) or 'none'}"
            )
        return layout

    layout, transcript = _generate_with_retry(prompt, parse, config, transport)
    return layout, transcript  # type: ignore[return-value]
