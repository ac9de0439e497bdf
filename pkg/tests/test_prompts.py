"""Prompt assembly and the built-in demonstrations."""

from __future__ import annotations

import pytest

from landscaper import builtin_knowledge_base, evaluate, parse_layout, parse_triples, solve
from landscaper.model import DEFAULT_CANVAS, Canvas
from landscaper.prompts import (
    RETRY_REMINDER,
    build_graph_prompt,
    build_layout_prompt,
    default_graph_demos,
    default_layout_demos,
    demo_graphs,
    knowledge_rules,
)

from conftest import mk_graph

KB = builtin_knowledge_base()


def test_render_section_order():
    text = build_graph_prompt("a daisy next to a rose").render()
    markers = [
        "Work step by step:",
        "Hard constraints:",
        "Landscape knowledge:",
        "Example 1:",
        "Now the real task.",
    ]
    positions = [text.index(marker) for marker in markers]
    assert positions == sorted(positions)
    assert text.endswith("Output:")
    assert "a daisy next to a rose" in text


def test_graph_prompt_lists_the_palette_once():
    text = build_graph_prompt("anything", kb=KB).render()
    palette_line = next(
        line for line in text.splitlines() if "Available plant palette" in line
    )
    for species in KB.species_names():
        assert palette_line.count(species) == 1


def test_graph_prompt_mentions_node_budget():
    text = build_graph_prompt("anything", max_nodes=4).render()
    assert "at most 4 plants" in text


def test_layout_prompt_embeds_graph_and_canvas():
    graph = mk_graph(["pine", "rose"], [("rose", "left", "pine")])
    bundle = build_layout_prompt(graph, kb=KB, canvas=Canvas(640, 480))
    assert bundle.question == "<pine>\n<rose>\n<rose, left, pine>"
    text = bundle.render()
    assert "640x480" in text
    assert "Landscape knowledge:" in text


def test_layout_prompt_can_drop_knowledge():
    graph = mk_graph(["pine"])
    text = build_layout_prompt(graph, kb=KB, include_knowledge=False).render()
    assert "Landscape knowledge:" not in text
    assert "Species table" not in text


def test_knowledge_rules_scale_heights_to_canvas():
    full = knowledge_rules(KB, DEFAULT_CANVAS)
    half = knowledge_rules(KB, Canvas(256, 256))
    assert "pine 0.6/220" in full[-1]
    assert "pine 0.6/110" in half[-1]
    assert any("0.8" in rule for rule in full)


def test_demo_graphs_validate():
    graphs = demo_graphs()
    assert len(graphs) == 5
    for graph in graphs:
        graph.validate()
        for node in graph.nodes:
            assert node.species in KB


def test_graph_demo_answers_parse_back_to_the_demo():
    demos = default_graph_demos()
    assert len(demos) == 5
    for (description, answer), graph in zip(demos, demo_graphs()):
        assert parse_triples(answer) == graph
        for node in graph.nodes:
            assert node.species in description.lower()


def test_layout_demo_answers_are_solver_layouts():
    from landscaper import linearize_graph

    demos = default_layout_demos(KB, DEFAULT_CANVAS)
    for (question, answer), graph in zip(demos, demo_graphs()):
        assert question == linearize_graph(graph)
        layout = parse_layout(answer, DEFAULT_CANVAS)
        assert layout == solve(graph, KB, DEFAULT_CANVAS)
        results = evaluate(graph, solve(graph, KB, DEFAULT_CANVAS), layout, KB)
        assert all(result.passed for result in results.values())


def test_retry_reminder_carries_the_error():
    message = RETRY_REMINDER.format(error="expected 1 or 3 fields")
    assert "expected 1 or 3 fields" in message
    assert "only the required lines" in message


def test_prompt_build_is_deterministic():
    graph = mk_graph(["pine", "rose"], [("rose", "left", "pine")])
    assert build_layout_prompt(graph, kb=KB).render() == build_layout_prompt(graph, kb=KB).render()
    assert (
        build_graph_prompt("two roses", kb=KB).render()
        == build_graph_prompt("two roses", kb=KB).render()
    )
