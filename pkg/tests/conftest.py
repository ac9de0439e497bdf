"""Shared fixtures and small builders used across the suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import settings

from landscaper import (
    Canvas,
    Layout,
    LlmEndpointConfig,
    PlacedElement,
    RelationKind,
    SceneEdge,
    SceneGraph,
    SceneNode,
    builtin_knowledge_base,
)

settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_PATH = REPO_ROOT / "fixtures" / "dogwood_daisy.jsonl"

# Must match the description the fixture file was recorded against.
DOGWOOD_DESCRIPTION = (
    "A realistic landscape design with a dogwood covered in pink flowers, "
    "a daisy, and a white tulip. The daisy sits below the dogwood, and the "
    "white tulip is placed to the right of the daisy."
)


@pytest.fixture(scope="session")
def kb():
    return builtin_knowledge_base()


@pytest.fixture(scope="session")
def replay_endpoint():
    return LlmEndpointConfig(mode="replay", fixture_path=str(FIXTURE_PATH))


def mk_graph(nodes, edges=()):
    """Graph from ('id',), ('id', 'species') or ('id', 'species', attrs) rows."""
    built = []
    for row in nodes:
        if isinstance(row, str):
            row = (row,)
        nid = row[0]
        species = row[1] if len(row) > 1 else nid.rpartition("#")[0] or nid
        attrs = tuple(row[2]) if len(row) > 2 else ()
        built.append(SceneNode(id=nid, species=species, attributes=attrs))
    built_edges = tuple(
        SceneEdge(source=s, relation=RelationKind.from_text(r), target=t)
        for s, r, t in edges
    )
    return SceneGraph(nodes=tuple(built), edges=built_edges)


def mk_layout(canvas, rows):
    """Layout from (name, x, y, width, height, z) rows."""
    if isinstance(canvas, tuple):
        canvas = Canvas(*canvas)
    elements = tuple(
        PlacedElement(name=n, x=x, y=y, width=w, height=h, z=z)
        for n, x, y, w, h, z in rows
    )
    return Layout(canvas=canvas, elements=elements)


_SPECIES_POOL = (
    "dogwood",
    "daisy",
    "white tulip",
    "pine",
    "boxwood",
    "rose",
    "house",
    "lavender",
    "azalea",
    "hydrangea",
)

_ATTR_POOL = ("pink flowers", "dense foliage", "tall", "white blossoms")


def random_graph(seed: int, max_nodes: int = 6) -> SceneGraph:
    """Arbitrary valid graph, unconstrained by layout feasibility.

    Depth edges follow a random permutation so the behind-order is acyclic.
    """
    rng = random.Random(seed)
    count = rng.randint(1, max_nodes)
    species = rng.sample(_SPECIES_POOL, count)
    nodes = []
    for i, sp in enumerate(species):
        nid = sp if rng.random() < 0.7 else f"{sp}#{rng.randint(2, 9)}"
        attrs = tuple(rng.sample(_ATTR_POOL, rng.randint(1, 2))) if rng.random() < 0.4 else ()
        nodes.append(SceneNode(id=nid, species=sp, attributes=attrs))
    order = list(range(count))
    rng.shuffle(order)
    rank = {nodes[nid].id: pos for pos, nid in enumerate(order)}
    edges = []
    pairs = [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]
    rng.shuffle(pairs)
    for a, b in pairs[: rng.randint(0, len(pairs))]:
        kind = rng.choice(list(RelationKind))
        source, target = (a.id, b.id) if rng.random() < 0.5 else (b.id, a.id)
        if kind.is_depth:
            farther, nearer = sorted((a.id, b.id), key=lambda n: rank[n])
            if kind is RelationKind.BEHIND:
                source, target = farther, nearer
            else:
                source, target = nearer, farther
        edges.append(SceneEdge(source=source, relation=kind, target=target))
    graph = SceneGraph(nodes=tuple(nodes), edges=tuple(edges))
    graph.validate()
    return graph


def random_layout(seed: int, canvas: Canvas, names) -> Layout:
    """Random in-canvas boxes with a random depth-rank permutation."""
    rng = random.Random(seed)
    names = list(names)
    zs = list(range(len(names)))
    rng.shuffle(zs)
    rows = []
    for name, z in zip(names, zs):
        w = rng.randint(1, max(1, canvas.width // 2))
        h = rng.randint(1, max(1, canvas.height // 2))
        x = rng.randint(0, canvas.width - w)
        y = rng.randint(0, canvas.height - h)
        rows.append((name, x, y, w, h, z))
    layout = mk_layout(canvas, rows)
    layout.validate()
    return layout
