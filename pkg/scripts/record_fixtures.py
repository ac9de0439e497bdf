"""Build the replay fixtures checked in under fixtures/.

No live endpoint is available in this environment, so the recorded
"responses" are synthesized: the answer a well-behaved model should give is
computed from the package's own serializers and solver, wrapped in a little
prose to make the replay path exercise the lenient parsers.  The request
side is built exactly the way the client builds it, so replay hashes match.

Run from the repo root:  python scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from landscaper.knowledge import builtin_knowledge_base
from landscaper.llm import LlmEndpointConfig, request_hash
from landscaper.model import DEFAULT_CANVAS, RelationKind, SceneEdge, SceneGraph, SceneNode
from landscaper.prompts import build_graph_prompt, build_layout_prompt
from landscaper.solver import solve
from landscaper.textform import linearize_graph, serialize_layout

DESCRIPTION = (
    "A realistic landscape design with a dogwood covered in pink flowers, "
    "a daisy, and a white tulip. The daisy sits below the dogwood, and the "
    "white tulip is placed to the right of the daisy."
)

GRAPH = SceneGraph(
    nodes=(
        SceneNode("dogwood", "dogwood", ("pink flowers",)),
        SceneNode("daisy", "daisy"),
        SceneNode("white tulip", "white tulip"),
    ),
    edges=(
        SceneEdge("daisy", RelationKind.BOTTOM, "dogwood"),
        SceneEdge("white tulip", RelationKind.RIGHT, "daisy"),
    ),
)


def chat_request(prompt: str, config: LlmEndpointConfig) -> dict:
    return {
        "model": config.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }


def completion(content: str) -> dict:
    return {
        "object": "chat.completion",
        "model": "fixture",
        "choices": [
            {"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}
        ],
    }


def main() -> None:
    config = LlmEndpointConfig()  # request shape only; mode is irrelevant here
    kb = builtin_knowledge_base()
    out_path = Path(__file__).resolve().parents[1] / "fixtures" / "dogwood_daisy.jsonl"
    out_path.parent.mkdir(parents=True, exist_ok=True)

    graph_prompt = build_graph_prompt(DESCRIPTION, kb).render()
    graph_answer = (
        "Here is the scene graph:\n\n" + linearize_graph(GRAPH) + "\n\nDone."
    )

    layout = solve(GRAPH, kb, DEFAULT_CANVAS)
    layout_prompt = build_layout_prompt(GRAPH, kb, DEFAULT_CANVAS).render()
    layout_answer = (
        "Placing the boxes as requested:\n\n" + serialize_layout(layout) + "\n"
    )

    entries = []
    for prompt, answer in ((graph_prompt, graph_answer), (layout_prompt, layout_answer)):
        request = chat_request(prompt, config)
        entries.append(
            {
                "request_hash": request_hash(request),
                "request": request,
                "response": completion(answer),
                "timestamp": "2026-08-16T00:00:00+00:00",
            }
        )

    with out_path.open("w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    print(f"wrote {out_path} ({len(entries)} exchanges)")


if __name__ == "__main__":
    main()
