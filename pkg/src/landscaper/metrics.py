"""Layout quality metrics.

Four pass/fail checks per generated layout, each judged against the scene
graph, the knowledge base, or a reference layout:

* aspect ratio: per-plant |ratio difference| stays under a tolerance,
* relative areas: pairwise area ratios match the reference within a
  relative tolerance,
* relative positions: relations read back off the generated boxes match the
  graph's relations,
* scaling rule: a plant behind another has a strictly smaller realized
  height ratio than their canonical ratio.

Relations are read off boxes by a fixed rule: an overlapping pair is a
depth pair ordered by z; otherwise the dominant center offset axis picks
left/right versus above/below.  One relation per pair, always.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NameMismatch
from .knowledge import PlantKnowledgeBase
from .model import Layout, PlacedElement, RelationKind, SceneEdge, SceneGraph


@dataclass(frozen=True)
class MetricConfig:
    aspect_tolerance: float = 0.05
    area_tolerance: float = 0.05


@dataclass(frozen=True)
class MetricResult:
    name: str
    passed: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


METRIC_NAMES = ("aspect_ratio", "relative_areas", "relative_positions", "scaling_rule")


def extract_relations(layout: Layout) -> tuple[SceneEdge, ...]:
    """One canonical relation per unordered element pair.

    Overlapping boxes form a depth pair: the element with the larger z is
    behind.  Disjoint boxes compare center offsets; the axis with the larger
    magnitude wins, with the horizontal axis taking exact ties.
    """
    edges = []
    els = layout.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            edges.append(_pair_relation(els[i], els[j]))
    return tuple(edges)


def _pair_relation(a: PlacedElement, b: PlacedElement) -> SceneEdge:
    if a.overlap_area(b) > 0:
        if a.z > b.z:
            return SceneEdge(a.name, RelationKind.BEHIND, b.name)
        return SceneEdge(b.name, RelationKind.BEHIND, a.name)
    (ax, ay), (bx, by) = a.center, b.center
    dx, dy = bx - ax, by - ay
    if abs(dx) >= abs(dy):
        if dx > 0:
            return SceneEdge(a.name, RelationKind.LEFT, b.name)
        return SceneEdge(b.name, RelationKind.LEFT, a.name)
    if dy > 0:
        return SceneEdge(a.name, RelationKind.TOP, b.name)
    return SceneEdge(b.name, RelationKind.TOP, a.name)


def _matched(reference: Layout, generated: Layout) -> list[tuple[PlacedElement, PlacedElement]]:
    gen_map = generated.element_map()
    missing = [el.name for el in reference.elements if el.name not in gen_map]
    extra = [name for name in gen_map if name not in reference.element_map()]
    if missing or extra:
        raise NameMismatch(
            f"layout names diverge: missing {missing or 'none'}, extra {extra or 'none'}"
        )
    return [(el, gen_map[el.name]) for el in reference.elements]


def metric_aspect_ratio(
    reference: Layout, generated: Layout, config: MetricConfig = MetricConfig()
) -> MetricResult:
    """Every plant keeps its reference width-to-height ratio within tolerance."""
    worst = 0.0
    worst_name = ""
    for ref_el, gen_el in _matched(reference, generated):
        err = abs(gen_el.aspect_ratio - ref_el.aspect_ratio)
        if err > worst:
            worst, worst_name = err, ref_el.name
    passed = worst < config.aspect_tolerance
    return MetricResult(
        "aspect_ratio",
        passed,
        f"worst |ratio error| {worst:.4f} ({worst_name or 'n/a'}), "
        f"tolerance {config.aspect_tolerance}",
    )


def metric_relative_areas(
    reference: Layout, generated: Layout, config: MetricConfig = MetricConfig()
) -> MetricResult:
    """Pairwise area ratios match the reference within relative tolerance.

    Ratio-based, so a uniform rescale of the whole layout passes untouched.
    """
    pairs = _matched(reference, generated)
    worst = 0.0
    worst_pair = ""
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            ref_ratio = pairs[i][0].area / pairs[j][0].area
            gen_ratio = pairs[i][1].area / pairs[j][1].area
            err = abs(gen_ratio - ref_ratio) / ref_ratio
            if err > worst:
                worst = err
                worst_pair = f"{pairs[i][0].name}/{pairs[j][0].name}"
    passed = worst < config.area_tolerance
    return MetricResult(
        "relative_areas",
        passed,
        f"worst relative ratio error {worst:.4f} ({worst_pair or 'n/a'}), "
        f"tolerance {config.area_tolerance}",
    )


def metric_relative_positions(graph: SceneGraph, generated: Layout) -> MetricResult:
    """Relations read off the generated boxes match the graph's relations."""
    gen_map = generated.element_map()
    missing = [nid for nid in graph.node_ids() if nid not in gen_map]
    if missing:
        raise NameMismatch(f"layout is missing graph nodes: {missing}")
    failures = []
    for edge in graph.edges:
        want = edge.canonical()
        got = _pair_relation(gen_map[want.source], gen_map[want.target])
        if got != want:
            failures.append(
                f"<{edge.source}, {edge.relation.value}, {edge.target}> "
                f"reads back as <{got.source}, {got.relation.value}, {got.target}>"
            )
    return MetricResult(
        "relative_positions",
        not failures,
        "; ".join(failures) if failures else f"all {len(graph.edges)} relations hold",
    )


def metric_scaling_rule(
    graph: SceneGraph, generated: Layout, kb: PlantKnowledgeBase
) -> MetricResult:
    """Depth-related pairs shrink: realized height ratio < canonical ratio.

    For `a behind b` the realized ratio height(a)/height(b) must be strictly
    below the canonical ratio of their species' heights; equality means the
    perspective rule was ignored.
    """
    gen_map = generated.element_map()
    node_map = graph.node_map()
    missing = [nid for nid in graph.node_ids() if nid not in gen_map]
    if missing:
        raise NameMismatch(f"layout is missing graph nodes: {missing}")
    failures = []
    for edge in graph.edges:
        if not edge.relation.is_depth:
            continue
        canon = edge.canonical()  # canon.source is behind canon.target
        back, front = canon.source, canon.target
        canonical_ratio = (
            kb.get(node_map[back].species).canonical_height
            / kb.get(node_map[front].species).canonical_height
        )
        realized_ratio = gen_map[back].height / gen_map[front].height
        if not realized_ratio < canonical_ratio:
            failures.append(
                f"{back!r} behind {front!r}: realized height ratio "
                f"{realized_ratio:.4f} not below canonical {canonical_ratio:.4f}"
            )
    return MetricResult(
        "scaling_rule",
        not failures,
        "; ".join(failures) if failures else "all depth pairs shrink",
    )


def evaluate(
    graph: SceneGraph,
    reference: Layout,
    generated: Layout,
    kb: PlantKnowledgeBase,
    config: MetricConfig = MetricConfig(),
) -> dict[str, MetricResult]:
    """All four metrics keyed by name."""
    return {
        "aspect_ratio": metric_aspect_ratio(reference, generated, config),
        "relative_areas": metric_relative_areas(reference, generated, config),
        "relative_positions": metric_relative_positions(graph, generated),
        "scaling_rule": metric_scaling_rule(graph, generated, kb),
    }
