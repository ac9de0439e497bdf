"""Layout metrics.

Boundary cases are constructed by hand with integer boxes whose errors land
just inside and just outside the tolerance, so the strict-inequality
behavior is pinned exactly.
"""

from __future__ import annotations

import pytest

from landscaper import (
    Canvas,
    MetricConfig,
    MetricResult,
    RelationKind,
    SceneEdge,
    builtin_knowledge_base,
    evaluate,
    extract_relations,
    solve,
)
from landscaper.errors import NameMismatch, UnknownSpecies
from landscaper.metrics import (
    METRIC_NAMES,
    metric_aspect_ratio,
    metric_relative_areas,
    metric_relative_positions,
    metric_scaling_rule,
)

from conftest import mk_graph, mk_layout

KB = builtin_knowledge_base()
BIG = Canvas(1000, 1000)


# -- aspect ratio ----------------------------------------------------------------


def test_aspect_ratio_identical_passes():
    ref = mk_layout(BIG, [("a", 0, 0, 800, 1000, 0)])
    result = metric_aspect_ratio(ref, ref)
    assert result.passed
    assert "0.0000" in result.detail


def test_aspect_ratio_boundary():
    # Reference ratio 0.8; tolerance 0.05 is strict.
    ref = mk_layout(BIG, [("a", 0, 0, 800, 1000, 0)])
    near = mk_layout(BIG, [("a", 0, 0, 849, 1000, 0)])  # error 0.049
    over = mk_layout(BIG, [("a", 0, 0, 851, 1000, 0)])  # error 0.051
    assert metric_aspect_ratio(ref, near).passed
    assert not metric_aspect_ratio(ref, over).passed


def test_aspect_ratio_exact_tolerance_fails():
    config = MetricConfig(aspect_tolerance=0.25)
    ref = mk_layout(BIG, [("a", 0, 0, 100, 100, 0)])
    gen = mk_layout(BIG, [("a", 0, 0, 125, 100, 0)])  # error exactly 0.25
    assert not metric_aspect_ratio(ref, gen, config).passed


def test_aspect_ratio_takes_worst_plant():
    ref = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 200, 200, 100, 100, 1)])
    gen = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 200, 200, 160, 100, 1)])
    result = metric_aspect_ratio(ref, gen)
    assert not result.passed
    assert "b" in result.detail


def test_aspect_ratio_name_mismatch():
    ref = mk_layout(BIG, [("a", 0, 0, 10, 10, 0)])
    gen = mk_layout(BIG, [("b", 0, 0, 10, 10, 0)])
    with pytest.raises(NameMismatch):
        metric_aspect_ratio(ref, gen)


# -- relative areas ----------------------------------------------------------------


def test_relative_areas_boundary():
    ref = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 300, 300, 100, 200, 1)])
    near = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 300, 300, 100, 210, 1)])
    over = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 300, 300, 100, 211, 1)])
    assert metric_relative_areas(ref, near).passed  # error 0.0476
    assert not metric_relative_areas(ref, over).passed  # error 0.0521


def test_relative_areas_uniform_rescale_passes():
    ref = mk_layout(BIG, [("a", 0, 0, 50, 60, 0), ("b", 300, 300, 120, 90, 1)])
    gen = mk_layout(BIG, [("a", 0, 0, 100, 120, 0), ("b", 600, 600, 240, 180, 1)])
    result = metric_relative_areas(ref, gen)
    assert result.passed
    assert "0.0000" in result.detail


def test_relative_areas_single_element_trivially_passes():
    ref = mk_layout(BIG, [("a", 0, 0, 10, 10, 0)])
    gen = mk_layout(BIG, [("a", 0, 0, 400, 10, 0)])
    assert metric_relative_areas(ref, gen).passed


# -- relative positions ----------------------------------------------------------------


def test_positions_disjoint_horizontal():
    graph = mk_graph(["a", "b"], [("a", "left", "b")])
    good = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 300, 0, 100, 100, 1)])
    bad = mk_layout(BIG, [("a", 300, 0, 100, 100, 0), ("b", 0, 0, 100, 100, 1)])
    assert metric_relative_positions(graph, good).passed
    result = metric_relative_positions(graph, bad)
    assert not result.passed
    assert "reads back" in result.detail


def test_positions_non_canonical_spelling_matches():
    graph = mk_graph(["a", "b"], [("b", "right", "a")])
    layout = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 300, 0, 100, 100, 1)])
    assert metric_relative_positions(graph, layout).passed


def test_positions_vertical():
    graph = mk_graph(["a", "b"], [("a", "top", "b")])
    good = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 0, 300, 100, 100, 1)])
    assert metric_relative_positions(graph, good).passed


def test_positions_axis_tie_reads_horizontal():
    # Equal center offsets on both axes: the horizontal reading wins.
    graph_h = mk_graph(["a", "b"], [("a", "left", "b")])
    graph_v = mk_graph(["a", "b"], [("a", "top", "b")])
    layout = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 200, 200, 100, 100, 1)])
    assert metric_relative_positions(graph_h, layout).passed
    assert not metric_relative_positions(graph_v, layout).passed


def test_positions_overlap_reads_as_depth():
    graph = mk_graph(["a", "b"], [("a", "behind", "b")])
    good = mk_layout(BIG, [("a", 0, 0, 100, 100, 1), ("b", 50, 50, 100, 100, 0)])
    flipped = mk_layout(BIG, [("a", 0, 0, 100, 100, 0), ("b", 50, 50, 100, 100, 1)])
    disjoint = mk_layout(BIG, [("a", 0, 0, 100, 100, 1), ("b", 500, 0, 100, 100, 0)])
    assert metric_relative_positions(graph, good).passed
    assert not metric_relative_positions(graph, flipped).passed
    assert not metric_relative_positions(graph, disjoint).passed


def test_positions_missing_node():
    graph = mk_graph(["a", "b"], [("a", "left", "b")])
    layout = mk_layout(BIG, [("a", 0, 0, 10, 10, 0)])
    with pytest.raises(NameMismatch):
        metric_relative_positions(graph, layout)


def _mirrored(layout):
    rows = [
        (el.name, layout.canvas.width - el.x - el.width, el.y, el.width, el.height, el.z)
        for el in layout.elements
    ]
    return mk_layout(layout.canvas, rows)


def test_positions_mirror_flips_horizontal_relations_only():
    graph = mk_graph(
        ["a", "b", "c", "d"],
        [("a", "left", "b"), ("c", "top", "d")],
    )
    layout = mk_layout(
        BIG,
        [
            ("a", 50, 100, 100, 100, 0),
            ("b", 400, 100, 100, 100, 1),
            ("c", 450, 400, 100, 100, 2),
            ("d", 450, 700, 100, 100, 3),
        ],
    )
    assert metric_relative_positions(graph, layout).passed
    mirrored = _mirrored(layout)
    assert not metric_relative_positions(graph, mirrored).passed
    # The vertical pair alone survives the mirror.
    vertical_only = mk_graph(["c", "d"], [("c", "top", "d")])
    vertical_layout = mk_layout(
        BIG, [("c", 450, 400, 100, 100, 0), ("d", 450, 700, 100, 100, 1)]
    )
    assert metric_relative_positions(vertical_only, _mirrored(vertical_layout)).passed


# -- scaling rule ----------------------------------------------------------------


def test_scaling_rule_pass_and_equality_fails():
    graph = mk_graph(["pine", "rose"], [("pine", "behind", "rose")])
    # Canonical height ratio pine/rose is 220/100.
    shrunk = mk_layout(BIG, [("pine", 0, 0, 106, 176, 1), ("rose", 40, 60, 70, 100, 0)])
    exact = mk_layout(BIG, [("pine", 0, 0, 132, 220, 1), ("rose", 40, 60, 70, 100, 0)])
    assert metric_scaling_rule(graph, shrunk, KB).passed
    result = metric_scaling_rule(graph, exact, KB)
    assert not result.passed
    assert "not below" in result.detail


def test_scaling_rule_reversed_spelling():
    graph = mk_graph(["pine", "rose"], [("rose", "front", "pine")])
    shrunk = mk_layout(BIG, [("pine", 0, 0, 106, 176, 1), ("rose", 40, 60, 70, 100, 0)])
    assert metric_scaling_rule(graph, shrunk, KB).passed


def test_scaling_rule_ignores_planar_relations():
    graph = mk_graph(["pine", "rose"], [("pine", "left", "rose")])
    grown = mk_layout(BIG, [("pine", 0, 0, 132, 640, 0), ("rose", 300, 0, 70, 100, 1)])
    assert metric_scaling_rule(graph, grown, KB).passed


def test_scaling_rule_unknown_species():
    graph = mk_graph([("x", "cactus"), "rose"], [("x", "behind", "rose")])
    layout = mk_layout(BIG, [("x", 0, 0, 10, 10, 1), ("rose", 5, 5, 10, 10, 0)])
    with pytest.raises(UnknownSpecies):
        metric_scaling_rule(graph, layout, KB)


# -- extract_relations ----------------------------------------------------------------


def test_extract_relations_counts_all_pairs():
    layout = mk_layout(
        BIG,
        [("a", 0, 0, 10, 10, 0), ("b", 100, 0, 10, 10, 1), ("c", 0, 100, 10, 10, 2)],
    )
    assert len(extract_relations(layout)) == 3


def test_extract_relations_canonical_readings():
    layout = mk_layout(
        BIG,
        [("back", 0, 0, 100, 100, 1), ("front", 50, 50, 100, 100, 0), ("east", 600, 40, 80, 80, 2)],
    )
    edges = set(extract_relations(layout))
    assert SceneEdge("back", RelationKind.BEHIND, "front") in edges
    assert SceneEdge("back", RelationKind.LEFT, "east") in edges
    assert SceneEdge("front", RelationKind.LEFT, "east") in edges


# -- evaluate ----------------------------------------------------------------


def test_evaluate_keys_and_truthiness():
    graph = mk_graph(
        ["dogwood", "daisy", "white tulip"],
        [("daisy", "bottom", "dogwood"), ("white tulip", "right", "daisy")],
    )
    reference = solve(graph, KB)
    results = evaluate(graph, reference, reference, KB)
    assert tuple(results) == METRIC_NAMES
    for name, result in results.items():
        assert isinstance(result, MetricResult)
        assert result.name == name
        assert result.passed and bool(result)


def test_evaluate_scale_invariance():
    graph = mk_graph(
        ["dogwood", "daisy", "rose"],
        [("daisy", "bottom", "dogwood"), ("rose", "right", "daisy")],
    )
    reference = solve(graph, KB)
    doubled = mk_layout(
        Canvas(reference.canvas.width * 2, reference.canvas.height * 2),
        [
            (el.name, el.x * 2, el.y * 2, el.width * 2, el.height * 2, el.z)
            for el in reference.elements
        ],
    )
    results = evaluate(graph, reference, doubled, KB)
    assert all(result.passed for result in results.values())
