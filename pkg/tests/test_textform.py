"""Parsing and serialization of the two text forms.

Golden cases are written out by hand first; the round-trip and fuzz
properties come after and never look at parser internals.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from landscaper import (
    Canvas,
    RelationKind,
    linearize_graph,
    parse_layout,
    parse_triples,
    serialize_layout,
)
from landscaper.errors import (
    LandscaperError,
    MalformedTriple,
    MalformedTuple,
    OutOfCanvas,
    UnknownRelation,
)

from conftest import mk_graph, mk_layout, random_graph, random_layout

CANVAS = Canvas(512, 512)


def same_layout(a, b):
    """Equal boxes and ranks, element order aside."""
    return a.canvas == b.canvas and a.element_map() == b.element_map()


# -- golden parses -----------------------------------------------------------


GOLDEN_GRAPH_TEXT = """\
<dogwood [pink flowers]>
<daisy>
<white tulip>
<daisy, bottom, dogwood>
<white tulip, right, daisy>
"""


def test_parse_triples_golden():
    graph = parse_triples(GOLDEN_GRAPH_TEXT)
    assert [n.id for n in graph.nodes] == ["dogwood", "daisy", "white tulip"]
    assert graph.node_map()["dogwood"].attributes == ("pink flowers",)
    assert graph.node_map()["daisy"].attributes == ()
    assert [(e.source, e.relation, e.target) for e in graph.edges] == [
        ("daisy", RelationKind.BOTTOM, "dogwood"),
        ("white tulip", RelationKind.RIGHT, "daisy"),
    ]


def test_parse_triples_tolerates_prose():
    wrapped = (
        "Sure, here is the scene.\n"
        "First the plants: <dogwood [pink flowers]> and <daisy> and <white tulip>.\n"
        "Relations: <daisy, bottom, dogwood>, then <white tulip, right, daisy>.\n"
        "Hope this helps!"
    )
    assert parse_triples(wrapped) == parse_triples(GOLDEN_GRAPH_TEXT)


def test_parse_triples_accepts_bytes():
    assert parse_triples(GOLDEN_GRAPH_TEXT.encode("utf-8")) == parse_triples(GOLDEN_GRAPH_TEXT)


def test_parse_triples_implicit_nodes_from_edges():
    graph = parse_triples("<pine, behind, rose>")
    assert {n.id for n in graph.nodes} == {"pine", "rose"}


def test_parse_triples_attribute_merge_on_redeclaration():
    graph = parse_triples("<rose [red]>\n<rose [climbing]>")
    assert graph.node_map()["rose"].attributes == ("red", "climbing")


def test_parse_triples_duplicate_attribute_kept_once():
    graph = parse_triples("<rose [red]>\n<rose [red]>")
    assert graph.node_map()["rose"].attributes == ("red",)


def test_parse_triples_dedupes_canonical_equal_edges():
    graph = parse_triples("<a, left, b>\n<b, right, a>\n<a, left, b>")
    assert len(graph.edges) == 1
    assert graph.edges[0].canonical() == parse_triples("<a, left, b>").edges[0].canonical()


def test_parse_triples_alias_spellings():
    graph = parse_triples("<a, above, b>\n<c, in front, a>")
    kinds = {(e.source, e.target): e.relation for e in graph.edges}
    assert kinds[("a", "b")] is RelationKind.TOP
    assert kinds[("c", "a")] is RelationKind.IN_FRONT_OF


def test_parse_triples_errors():
    with pytest.raises(MalformedTriple, match="no triples"):
        parse_triples("just prose, no angle brackets")
    with pytest.raises(MalformedTriple):
        parse_triples("<a, left>")
    with pytest.raises(MalformedTriple):
        parse_triples("<a, left, b, c>")
    with pytest.raises(MalformedTriple):
        parse_triples("<, left, b>")
    with pytest.raises(UnknownRelation):
        parse_triples("<a, beside, b>")


def test_parse_triples_rejects_conflicting_pair():
    from landscaper.errors import GraphInvariantError

    with pytest.raises(GraphInvariantError):
        parse_triples("<a, left, b>\n<a, behind, b>")


GOLDEN_LAYOUT_TEXT = """\
[dogwood, [116, 96, 266, 280], 1]
[daisy, [200, 400, 80, 100], 0]
"""


def test_parse_layout_golden():
    layout = parse_layout(GOLDEN_LAYOUT_TEXT, CANVAS)
    by_name = layout.element_map()
    assert (by_name["dogwood"].x, by_name["dogwood"].y) == (116, 96)
    assert (by_name["dogwood"].width, by_name["dogwood"].height) == (266, 280)
    assert by_name["dogwood"].z == 1
    assert by_name["daisy"].z == 0


def test_parse_layout_tolerates_prose():
    wrapped = (
        "The arrangement:\n"
        "[dogwood, [116, 96, 266, 280], 1] for the tree, and\n"
        "[daisy, [200, 400, 80, 100], 0] near the front."
    )
    assert same_layout(parse_layout(wrapped, CANVAS), parse_layout(GOLDEN_LAYOUT_TEXT, CANVAS))


def test_parse_layout_infers_ranks_back_to_front():
    # No z column: listing order is back to front.
    layout = parse_layout("[a, [0, 0, 10, 10]]\n[b, [20, 20, 10, 10]]", CANVAS)
    assert layout.element_map()["a"].z == 1
    assert layout.element_map()["b"].z == 0


def test_parse_layout_all_or_none_ranks():
    with pytest.raises(MalformedTuple, match="every tuple or on none"):
        parse_layout("[a, [0, 0, 10, 10], 1]\n[b, [20, 20, 10, 10]]", CANVAS)


def test_parse_layout_duplicate_name_last_wins_first_slot():
    text = (
        "[a, [0, 0, 10, 10]]\n"
        "[b, [20, 20, 10, 10]]\n"
        "[a, [40, 40, 8, 8]]"
    )
    layout = parse_layout(text, CANVAS)
    assert [el.name for el in layout.elements] == ["a", "b"]
    assert (layout.element_map()["a"].x, layout.element_map()["a"].width) == (40, 8)


def test_parse_layout_rounds_half_up():
    layout = parse_layout("[a, [10.5, 10.4, 2.5, 9.6], 0]", CANVAS)
    el = layout.elements[0]
    assert (el.x, el.y, el.width, el.height) == (11, 10, 3, 10)


def test_parse_layout_small_negative_rounds_to_zero():
    el = parse_layout("[a, [-0.4, 0, 10, 10], 0]", CANVAS).elements[0]
    assert el.x == 0


def test_parse_layout_errors():
    with pytest.raises(MalformedTuple):
        parse_layout("no tuples here", CANVAS)
    with pytest.raises(MalformedTuple):
        parse_layout("[a, [1, 2, 3], 0]", CANVAS)
    with pytest.raises(MalformedTuple):
        parse_layout("[a, [x, y, w, h], 0]", CANVAS)
    with pytest.raises(OutOfCanvas):
        parse_layout("[a, [500, 0, 30, 10], 0]", CANVAS)
    with pytest.raises(LandscaperError):
        parse_layout("[a, [0, 0, 10, 10], 0]\n[b, [1, 1, 10, 10], 5]", CANVAS)


# -- serialization -------------------------------------------------------------


def test_linearize_golden():
    graph = mk_graph(
        [("dogwood", "dogwood", ("pink flowers",)), "daisy"],
        [("daisy", "bottom", "dogwood")],
    )
    assert linearize_graph(graph) == (
        "<dogwood [pink flowers]>\n<daisy>\n<daisy, bottom, dogwood>"
    )


def test_serialize_layout_golden():
    layout = mk_layout((512, 512), [("a", 1, 2, 3, 4, 0), ("b", 5, 6, 7, 8, 1)])
    assert serialize_layout(layout) == "[a, [1, 2, 3, 4], 0]\n[b, [5, 6, 7, 8], 1]"


def test_serialize_layout_without_ranks_lists_back_to_front():
    layout = mk_layout((512, 512), [("front", 1, 2, 3, 4, 0), ("back", 5, 6, 7, 8, 1)])
    text = serialize_layout(layout, include_z=False)
    assert text == "[back, [5, 6, 7, 8]]\n[front, [1, 2, 3, 4]]"


# -- round trips ---------------------------------------------------------------


@pytest.mark.parametrize("seed", range(50))
def test_graph_round_trip(seed):
    graph = random_graph(seed)
    assert parse_triples(linearize_graph(graph)) == graph


@pytest.mark.parametrize("seed", range(50))
def test_layout_round_trip(seed):
    graph = random_graph(seed)
    layout = random_layout(seed, CANVAS, [n.id for n in graph.nodes])
    assert parse_layout(serialize_layout(layout), CANVAS) == layout
    # Without explicit ranks the listing order carries the depth.
    assert same_layout(
        parse_layout(serialize_layout(layout, include_z=False), CANVAS), layout
    )


# -- fuzz ----------------------------------------------------------------------


def test_fuzz_parsers_raise_only_library_errors():
    rng = random.Random(1234)
    for _ in range(2000):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(60)))
        for parse in (lambda t: parse_triples(t), lambda t: parse_layout(t, CANVAS)):
            try:
                parse(blob)
            except LandscaperError:
                pass


@given(st.binary(max_size=80))
def test_parsers_never_crash_on_binary(blob):
    for parse in (lambda t: parse_triples(t), lambda t: parse_layout(t, CANVAS)):
        try:
            parse(blob)
        except LandscaperError:
            pass


@given(st.text(max_size=120))
def test_parsers_never_crash_on_text(text):
    for parse in (lambda t: parse_triples(t), lambda t: parse_layout(t, CANVAS)):
        try:
            parse(text)
        except LandscaperError:
            pass
