"""Text forms used to exchange graphs and layouts with language models.

Scene graphs linearize to one angle-bracket token per node followed by one
triple per relation:

    <dogwood [pink flowers]>
    <daisy>
    <daisy, bottom, dogwood>

Layouts serialize to one bracketed tuple per element:

    [dogwood, [116, 96, 266, 280], 1]

The trailing depth rank is optional on input; when absent, listing order is
read back to front (first tuple farthest).  Parsers are deliberately lenient
about surrounding prose: they scan for the bracketed spans and ignore the
rest, because model output rarely arrives bare.
"""

from __future__ import annotations

import math
import re

from .errors import MalformedTriple, MalformedTuple
from .model import (
    Canvas,
    Layout,
    PlacedElement,
    RelationKind,
    SceneEdge,
    SceneGraph,
    SceneNode,
    species_for_id,
)

_SPAN_RE = re.compile(r"<([^<>]*)>")
_TUPLE_RE = re.compile(
    r"\[\s*([^][,]+?)\s*,\s*\[([^][]*)\]\s*(?:,\s*([-+]?\d+(?:\.\d+)?)\s*)?\]"
)
_NUMBER_RE = re.compile(r"^[-+]?\d+(?:\.\d+)?$")

_NAME_FORBIDDEN = set("<>[],;")


def _format_token(node: SceneNode) -> str:
    if node.attributes:
        return f"{node.id} [{'; '.join(node.attributes)}]"
    return node.id


def _parse_token(token: str) -> tuple[str, tuple[str, ...]]:
    """Split `name [attr; attr]` into the name and its attributes."""
    token = token.strip()
    attrs: tuple[str, ...] = ()
    match = re.fullmatch(r"(.*?)\s*\[([^][]*)\]", token)
    if match:
        token = match.group(1).strip()
        attrs = tuple(a.strip() for a in match.group(2).split(";") if a.strip())
    if not token:
        raise MalformedTriple("empty name in triple")
    if any(ch in _NAME_FORBIDDEN for ch in token):
        raise MalformedTriple(f"invalid characters in name {token!r}")
    return token, attrs


def linearize_graph(graph: SceneGraph) -> str:
    """Render a graph as node tokens followed by relation triples.

    The output is line-oriented, deterministic, and preserves node and edge
    order, so `parse_triples` inverts it exactly.
    """
    lines = [f"<{_format_token(node)}>" for node in graph.nodes]
    lines.extend(
        f"<{edge.source}, {edge.relation.value}, {edge.target}>"
        for edge in graph.edges
    )
    return "\n".join(lines)


def _split_top_level(body: str) -> list[str]:
    """Split on commas that are not inside square brackets."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_triples(text: str | bytes) -> SceneGraph:
    """Parse node tokens and relation triples out of arbitrary text.

    Tolerates prose around the angle-bracket spans.  Exact restatements of
    a triple (including the flipped spelling) collapse to one edge; genuine
    contradictions are left for graph validation to reject.  Raises
    MalformedTriple when no spans are present at all, since that means the
    text carries no scene description.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    nodes: dict[str, SceneNode] = {}
    edges: list[SceneEdge] = []
    seen_canonical: set[tuple[str, RelationKind, str]] = set()

    def declare(name: str, attrs: tuple[str, ...]) -> None:
        prior = nodes.get(name)
        if prior is None:
            nodes[name] = SceneNode(id=name, species=species_for_id(name), attributes=attrs)
        elif attrs:
            merged = prior.attributes + tuple(a for a in attrs if a not in prior.attributes)
            nodes[name] = SceneNode(id=name, species=prior.species, attributes=merged)

    spans = _SPAN_RE.findall(text)
    if not spans:
        raise MalformedTriple("no triples found in text")

    for body in spans:
        parts = _split_top_level(body)
        if len(parts) == 1:
            name, attrs = _parse_token(parts[0])
            declare(name, attrs)
        elif len(parts) == 3:
            source, source_attrs = _parse_token(parts[0])
            relation = RelationKind.from_text(parts[1].strip())
            target, target_attrs = _parse_token(parts[2])
            declare(source, source_attrs)
            declare(target, target_attrs)
            edge = SceneEdge(source, relation, target)
            canon = edge.canonical()
            key = (canon.source, canon.relation, canon.target)
            if key in seen_canonical:
                continue
            seen_canonical.add(key)
            edges.append(edge)
        else:
            raise MalformedTriple(f"expected 1 or 3 fields in <{body}>")

    graph = SceneGraph(nodes=tuple(nodes.values()), edges=tuple(edges))
    graph.validate()
    return graph


def serialize_layout(layout: Layout, include_z: bool = True) -> str:
    """Render one tuple per element: `[name, [x, y, width, height], z]`.

    With `include_z=False` the depth rank column is dropped and elements are
    listed back to front instead, which is the order the rank inference in
    `parse_layout` assumes.
    """
    elements = layout.elements if include_z else layout.by_depth()
    lines = []
    for el in elements:
        box = f"[{el.x}, {el.y}, {el.width}, {el.height}]"
        if include_z:
            lines.append(f"[{el.name}, {box}, {el.z}]")
        else:
            lines.append(f"[{el.name}, {box}]")
    return "\n".join(lines)


def _round_px(value: float) -> int:
    return int(math.floor(value + 0.5))


def parse_layout(text: str | bytes, canvas: Canvas) -> Layout:
    """Parse layout tuples out of arbitrary text and validate the result.

    Numbers may be floats; they round to the nearest pixel.  Depth ranks are
    all-or-none: either every tuple carries one, or none does and listing
    order is read back to front.  When the same name appears twice the last
    tuple wins.  Raises MalformedTuple when nothing parseable is found, and
    layout validation errors (extents, bounds, rank permutation) otherwise.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    order: list[str] = []
    boxes: dict[str, tuple[int, int, int, int]] = {}
    ranks: dict[str, int | None] = {}

    for match in _TUPLE_RE.finditer(text):
        name = match.group(1).strip()
        if not name:
            raise MalformedTuple("empty element name")
        numbers = [part.strip() for part in match.group(2).split(",")]
        if len(numbers) != 4 or not all(_NUMBER_RE.match(n) for n in numbers):
            raise MalformedTuple(f"expected [x, y, width, height] in {match.group(0)!r}")
        x, y, w, h = (_round_px(float(n)) for n in numbers)
        z_text = match.group(3)
        if name not in boxes:
            order.append(name)
        boxes[name] = (x, y, w, h)
        ranks[name] = _round_px(float(z_text)) if z_text is not None else None

    if not order:
        raise MalformedTuple("no layout tuples found in text")

    rank_values = [ranks[name] for name in order]
    with_rank = sum(1 for r in rank_values if r is not None)
    if with_rank not in (0, len(order)):
        raise MalformedTuple("depth ranks must appear on every tuple or on none")

    elements = []
    for i, name in enumerate(order):
        x, y, w, h = boxes[name]
        z = ranks[name] if with_rank else len(order) - 1 - i
        elements.append(PlacedElement(name=name, x=x, y=y, width=w, height=h, z=z))

    layout = Layout(canvas=canvas, elements=tuple(elements))
    layout.validate()
    return layout
