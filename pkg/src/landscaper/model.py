"""Core value types: relations, scene graphs, canvases, and box layouts.

A scene graph holds plant instances and pairwise spatial relations.  A
layout assigns each instance an axis-aligned integer box plus a depth rank.
Everything here is an immutable value; mutation means building a new one.
Validation is explicit: constructors accept whatever they are given, and
`validate()` raises when an invariant is broken.  The parsing, solving, and
service layers always validate before handing a value to anyone else.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    CyclicDepth,
    GraphInvariantError,
    LayoutInvariantError,
    NonPositiveExtent,
    OutOfCanvas,
    UnknownRelation,
)


class RelationKind(enum.Enum):
    """The six supported pairwise relations.

    LEFT/RIGHT and TOP/BOTTOM speak about picture-plane positions of box
    centers; BEHIND and IN_FRONT_OF speak about scene depth.  `<a, left, b>`
    reads "a is to the left of b", and likewise for the others.
    """

    LEFT = "left"
    RIGHT = "right"
    TOP = "top"
    BOTTOM = "bottom"
    BEHIND = "behind"
    IN_FRONT_OF = "in front of"

    @classmethod
    def from_text(cls, token: str) -> "RelationKind":
        normalized = " ".join(token.lower().split())
        # Accept a few close synonyms seen in model output.
        aliases = {
            "above": "top",
            "below": "bottom",
            "front": "in front of",
            "in front": "in front of",
        }
        normalized = aliases.get(normalized, normalized)
        for kind in cls:
            if kind.value == normalized:
                return kind
        raise UnknownRelation(f"unsupported relation {token!r}")

    @property
    def inverse(self) -> "RelationKind":
        return _INVERSES[self]

    @property
    def is_depth(self) -> bool:
        return self in (RelationKind.BEHIND, RelationKind.IN_FRONT_OF)

    @property
    def is_horizontal(self) -> bool:
        return self in (RelationKind.LEFT, RelationKind.RIGHT)

    @property
    def is_vertical(self) -> bool:
        return self in (RelationKind.TOP, RelationKind.BOTTOM)


_INVERSES = {
    RelationKind.LEFT: RelationKind.RIGHT,
    RelationKind.RIGHT: RelationKind.LEFT,
    RelationKind.TOP: RelationKind.BOTTOM,
    RelationKind.BOTTOM: RelationKind.TOP,
    RelationKind.BEHIND: RelationKind.IN_FRONT_OF,
    RelationKind.IN_FRONT_OF: RelationKind.BEHIND,
}

# Canonical orientation used when two edge spellings mean the same thing.
_CANONICAL = (RelationKind.LEFT, RelationKind.TOP, RelationKind.BEHIND)


def species_for_id(node_id: str) -> str:
    """Recover the species from an instance id; `daisy#2` -> `daisy`."""
    head, _, tail = node_id.rpartition("#")
    if head and tail.isdigit():
        return head
    return node_id


@dataclass(frozen=True)
class SceneNode:
    """One plant instance.

    `id` is unique within a graph; repeat instances of a species get ids
    like `daisy#2`.  `attributes` carries free-text qualifiers such as
    "pink flowers".
    """

    id: str
    species: str
    attributes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))


@dataclass(frozen=True)
class SceneEdge:
    """A directed relation between two node ids: `<source, relation, target>`."""

    source: str
    relation: RelationKind
    target: str

    def canonical(self) -> "SceneEdge":
        """Rewrite to the LEFT/TOP/BEHIND orientation, flipping if needed."""
        if self.relation in _CANONICAL:
            return self
        return SceneEdge(self.target, self.relation.inverse, self.source)


@dataclass(frozen=True)
class SceneGraph:
    """Plant instances plus their pairwise relations.

    Node and edge order is preserved from construction; serialization and
    layout inherit it, which keeps every downstream step deterministic.
    """

    nodes: tuple[SceneNode, ...] = ()
    edges: tuple[SceneEdge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    def node_map(self) -> dict[str, SceneNode]:
        return {node.id: node for node in self.nodes}

    def node_ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes)

    def validate(self) -> None:
        """Raise GraphInvariantError (or a subclass) on any broken invariant."""
        seen: set[str] = set()
        for node in self.nodes:
            if not node.id or not node.id.strip():
                raise GraphInvariantError("node id must be non-empty")
            if not node.species or not node.species.strip():
                raise GraphInvariantError(f"node {node.id!r} has empty species")
            if node.id in seen:
                raise GraphInvariantError(f"duplicate node id {node.id!r}")
            seen.add(node.id)

        pair_relations: dict[frozenset[str], SceneEdge] = {}
        for edge in self.edges:
            if edge.source not in seen:
                raise GraphInvariantError(f"edge references unknown node {edge.source!r}")
            if edge.target not in seen:
                raise GraphInvariantError(f"edge references unknown node {edge.target!r}")
            if edge.source == edge.target:
                raise GraphInvariantError(f"self relation on {edge.source!r}")
            pair = frozenset((edge.source, edge.target))
            prior = pair_relations.get(pair)
            if prior is not None:
                # One relation per pair: the dominant-axis reading of a box
                # pair yields a single relation, so a second edge is either
                # redundant or contradictory.  Redundant duplicates are
                # collapsed by the parser; anything left here is an error.
                raise GraphInvariantError(
                    f"conflicting relations between {edge.source!r} and "
                    f"{edge.target!r}: {prior.relation.value!r} vs {edge.relation.value!r}"
                )
            pair_relations[pair] = edge

        derive_depths(self)  # raises CyclicDepth on a depth cycle

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n.id, "species": n.species, "attributes": list(n.attributes)}
                for n in self.nodes
            ],
            "edges": [
                {"source": e.source, "relation": e.relation.value, "target": e.target}
                for e in self.edges
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SceneGraph":
        try:
            nodes = tuple(
                SceneNode(
                    id=str(n["id"]),
                    species=str(n["species"]),
                    attributes=tuple(str(a) for a in n.get("attributes", ())),
                )
                for n in data.get("nodes", ())
            )
            edges = tuple(
                SceneEdge(
                    source=str(e["source"]),
                    relation=RelationKind.from_text(str(e["relation"])),
                    target=str(e["target"]),
                )
                for e in data.get("edges", ())
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise GraphInvariantError(f"malformed graph document: {exc}") from exc
        return cls(nodes=nodes, edges=edges)


def derive_depths(graph: SceneGraph) -> dict[str, int]:
    """Depth index per node: 0 is frontmost, +1 per hop farther back.

    Both depth relations contribute arcs pointing from the farther node to
    the nearer one; a node's depth is the longest such chain below it.
    Nodes with no depth relations sit at depth 0.  Raises CyclicDepth when
    the arcs contain a cycle.
    """
    arcs: dict[str, set[str]] = {node.id: set() for node in graph.nodes}
    for edge in graph.edges:
        if edge.relation is RelationKind.BEHIND:
            arcs[edge.source].add(edge.target)
        elif edge.relation is RelationKind.IN_FRONT_OF:
            arcs[edge.target].add(edge.source)

    # Kahn ordering; processing nodes back to front lets depth be a simple
    # longest-path accumulation without recursion.
    incoming = {nid: 0 for nid in arcs}
    for nid, targets in arcs.items():
        for target in targets:
            incoming[target] += 1
    ready = [nid for nid, count in incoming.items() if count == 0]
    order: list[str] = []
    while ready:
        nid = ready.pop()
        order.append(nid)
        for target in arcs[nid]:
            incoming[target] -= 1
            if incoming[target] == 0:
                ready.append(target)
    if len(order) != len(arcs):
        cyclic = sorted(nid for nid, count in incoming.items() if count > 0)
        raise CyclicDepth(f"depth relations form a cycle involving {cyclic}")

    depths = {nid: 0 for nid in arcs}
    for nid in reversed(order):
        for target in arcs[nid]:
            depths[nid] = max(depths[nid], depths[target] + 1)
    return depths


def depth_ranks(graph: SceneGraph) -> dict[str, int]:
    """Strict per-node z ranks: a permutation of 0..n-1, 0 frontmost.

    Ties in depth break by node order in the graph, so ranks are stable.
    """
    depths = derive_depths(graph)
    index = {node.id: i for i, node in enumerate(graph.nodes)}
    ordered = sorted(graph.node_ids(), key=lambda nid: (depths[nid], index[nid]))
    return {nid: rank for rank, nid in enumerate(ordered)}


@dataclass(frozen=True)
class Canvas:
    width: int
    height: int

    def validate(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise LayoutInvariantError(
                f"canvas must have positive extents, got {self.width}x{self.height}"
            )


DEFAULT_CANVAS = Canvas(512, 512)


@dataclass(frozen=True)
class PlacedElement:
    """One placed box: top-left corner, extents, and depth rank z.

    z is 0 for the frontmost element and grows toward the back; within a
    layout the z values form a permutation of 0..n-1.
    """

    name: str
    x: int
    y: int
    width: int
    height: int
    z: int = 0

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def aspect_ratio(self) -> float:
        return self.width / self.height

    def overlap_area(self, other: "PlacedElement") -> int:
        dx = min(self.x + self.width, other.x + other.width) - max(self.x, other.x)
        dy = min(self.y + self.height, other.y + other.height) - max(self.y, other.y)
        if dx <= 0 or dy <= 0:
            return 0
        return dx * dy


@dataclass(frozen=True)
class Layout:
    """A canvas plus one placed box per scene node."""

    canvas: Canvas
    elements: tuple[PlacedElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    def element_map(self) -> dict[str, PlacedElement]:
        return {el.name: el for el in self.elements}

    def validate(self) -> None:
        self.canvas.validate()
        names: set[str] = set()
        for el in self.elements:
            if not el.name or not el.name.strip():
                raise LayoutInvariantError("element name must be non-empty")
            if el.name in names:
                raise LayoutInvariantError(f"duplicate element name {el.name!r}")
            names.add(el.name)
            if el.width <= 0 or el.height <= 0:
                raise NonPositiveExtent(
                    f"{el.name!r} has extents {el.width}x{el.height}"
                )
            if (
                el.x < 0
                or el.y < 0
                or el.x + el.width > self.canvas.width
                or el.y + el.height > self.canvas.height
            ):
                raise OutOfCanvas(
                    f"{el.name!r} at ({el.x}, {el.y}) size {el.width}x{el.height} "
                    f"leaves the {self.canvas.width}x{self.canvas.height} canvas"
                )
        zs = sorted(el.z for el in self.elements)
        if zs != list(range(len(self.elements))):
            raise LayoutInvariantError(
                f"z values must be a permutation of 0..{len(self.elements) - 1}, got {zs}"
            )

    def by_depth(self, back_to_front: bool = True) -> tuple[PlacedElement, ...]:
        return tuple(sorted(self.elements, key=lambda el: -el.z if back_to_front else el.z))

    def to_json_dict(self) -> dict:
        return {
            "canvas": {"width": self.canvas.width, "height": self.canvas.height},
            "elements": [
                {
                    "name": el.name,
                    "x": el.x,
                    "y": el.y,
                    "width": el.width,
                    "height": el.height,
                    "z": el.z,
                }
                for el in self.elements
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Layout":
        try:
            canvas = Canvas(int(data["canvas"]["width"]), int(data["canvas"]["height"]))
            elements = tuple(
                PlacedElement(
                    name=str(el["name"]),
                    x=int(el["x"]),
                    y=int(el["y"]),
                    width=int(el["width"]),
                    height=int(el["height"]),
                    z=int(el["z"]),
                )
                for el in data.get("elements", ())
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutInvariantError(f"malformed layout document: {exc}") from exc
        return cls(canvas=canvas, elements=elements)


def scene_to_json_dict(graph: SceneGraph, layout: Layout | None) -> dict:
    """Combined wire document: {nodes, edges, elements, canvas}."""
    doc = graph.to_json_dict()
    if layout is not None:
        doc.update(layout.to_json_dict())
    else:
        doc.update({"canvas": None, "elements": None})
    return doc


def scene_from_json_dict(data: dict) -> tuple[SceneGraph, Layout | None]:
    graph = SceneGraph.from_json_dict(data)
    if data.get("elements") is None or data.get("canvas") is None:
        return graph, None
    return graph, Layout.from_json_dict(data)
