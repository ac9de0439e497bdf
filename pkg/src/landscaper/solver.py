"""Deterministic rule-based layout solver.

Given a validated scene graph and a plant knowledge base, the solver
produces a box layout that satisfies every relation by construction:

* sizes come straight from the knowledge rules (canonical height, fixed
  aspect ratio, constant shrink per depth step),
* positions come from a greedy placement pass with per-node heuristic
  targets, retried under seeded jitter when the first guess collides.

The solver is pure: same graph, same knowledge, same canvas, same output.
It doubles as the reference generator for the layout benchmark, so its
internal acceptance margins are deliberately stricter than the checks the
metrics apply; a layout that passes here passes there with room to spare.
"""

from __future__ import annotations

import math
import random

from .errors import Unsatisfiable
from .knowledge import PlantKnowledgeBase
from .model import (
    DEFAULT_CANVAS,
    Canvas,
    Layout,
    PlacedElement,
    RelationKind,
    SceneEdge,
    SceneGraph,
    depth_ranks,
    derive_depths,
)

# Reference canvas edge for which canonical heights are stated.
_REFERENCE_EDGE = 512

# Placement margins.  _AXIS_MARGIN keeps the dominant axis dominant with
# slack, so pixel-level perturbations of a solved layout cannot flip a
# relation; _DEPTH_OVERLAP is the minimum overlap fraction of the smaller
# box for a depth-related pair.
_GAP = 12.0
_AXIS_MARGIN = 4.0
_DEPTH_OVERLAP = 0.12
_BEHIND_LIFT = 0.3

_JITTER_ROUNDS = 50
_RESTART_ATTEMPTS = 10


def _round_px(value: float) -> int:
    return int(math.floor(value + 0.5))


def assign_sizes(
    graph: SceneGraph, kb: PlantKnowledgeBase, canvas: Canvas = DEFAULT_CANVAS
) -> dict[str, tuple[int, int]]:
    """Box extents per node id, honoring all three sizing rules.

    Height is the species' canonical height scaled to the canvas and then
    shrunk once per depth step; width is height times the species' aspect
    ratio.  Rounding to whole pixels happens last.
    """
    depths = derive_depths(graph)
    canvas_scale = min(canvas.width, canvas.height) / _REFERENCE_EDGE
    sizes: dict[str, tuple[int, int]] = {}
    for node in graph.nodes:
        spec = kb.get(node.species)
        height = spec.canonical_height * canvas_scale * kb.depth_scale ** depths[node.id]
        width = height * spec.aspect_ratio
        sizes[node.id] = (max(1, _round_px(width)), max(1, _round_px(height)))
    return sizes


def _overlap(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> int:
    dx = min(a[0] + a[2], b[0] + b[2]) - max(a[0], b[0])
    dy = min(a[1] + a[3], b[1] + b[3]) - max(a[1], b[1])
    if dx <= 0 or dy <= 0:
        return 0
    return dx * dy


def _center(box: tuple[int, int, int, int]) -> tuple[float, float]:
    return (box[0] + box[2] / 2.0, box[1] + box[3] / 2.0)


def _edge_satisfied(
    edge: SceneEdge, source_box: tuple[int, int, int, int], target_box: tuple[int, int, int, int]
) -> bool:
    """Check one canonical edge with the solver's slack margins."""
    overlap = _overlap(source_box, target_box)
    if edge.relation is RelationKind.BEHIND:
        smaller = min(source_box[2] * source_box[3], target_box[2] * target_box[3])
        return overlap >= max(1.0, _DEPTH_OVERLAP * smaller)

    if overlap > 0:
        return False
    (sx, sy), (tx, ty) = _center(source_box), _center(target_box)
    dx, dy = tx - sx, ty - sy
    if edge.relation is RelationKind.LEFT:
        return dx >= _AXIS_MARGIN and abs(dx) >= abs(dy) + _AXIS_MARGIN
    if edge.relation is RelationKind.TOP:
        return dy >= _AXIS_MARGIN and abs(dy) >= abs(dx) + _AXIS_MARGIN
    raise AssertionError(f"non-canonical edge {edge!r}")


def _pair_edges(graph: SceneGraph) -> dict[frozenset[str], SceneEdge]:
    return {
        frozenset((e.source, e.target)): e.canonical()
        for e in graph.edges
    }


def _candidate_ok(
    nid: str,
    box: tuple[int, int, int, int],
    placed: dict[str, tuple[int, int, int, int]],
    pair_edges: dict[frozenset[str], SceneEdge],
) -> bool:
    for other, other_box in placed.items():
        edge = pair_edges.get(frozenset((nid, other)))
        if edge is None:
            # Unrelated plants must not collide; keeps relation extraction
            # unambiguous and the rendering readable.
            if _overlap(box, other_box) > 0:
                return False
        else:
            boxes = {nid: box, other: other_box}
            if not _edge_satisfied(edge, boxes[edge.source], boxes[edge.target]):
                return False
    return True


def _anticipatory_center(
    nid: str,
    sizes: dict[str, tuple[int, int]],
    pair_edges: dict[frozenset[str], SceneEdge],
    canvas: Canvas,
) -> tuple[float, float]:
    """Starting center for a node placed before any of its partners.

    Shifts away from the canvas center by half the room its future partners
    will need, so a chain of constraints still fits on the canvas.
    """
    cx, cy = canvas.width / 2.0, canvas.height / 2.0
    w, h = sizes[nid]
    for pair, edge in pair_edges.items():
        if nid not in pair:
            continue
        other = next(iter(pair - {nid}))
        ow, oh = sizes[other]
        if edge.relation is RelationKind.LEFT:
            offset = ((w + ow) / 2.0 + _GAP) / 2.0
            cx += offset if edge.target == nid else -offset
        elif edge.relation is RelationKind.TOP:
            offset = ((h + oh) / 2.0 + _GAP) / 2.0
            cy += offset if edge.target == nid else -offset
        else:
            offset = _BEHIND_LIFT * (h + oh) / 4.0
            cy += -offset if edge.source == nid else offset
    return (cx, cy)


def _heuristic_center(
    nid: str,
    size: tuple[int, int],
    anchors: list[tuple[SceneEdge, tuple[int, int, int, int]]],
    canvas: Canvas,
) -> tuple[float, float]:
    """Target center for a node given its already-placed relation partners."""
    w, h = size
    targets = []
    for edge, partner_box in anchors:
        px, py = _center(partner_box)
        pw, ph = partner_box[2], partner_box[3]
        offset_x = (w + pw) / 2.0 + _GAP
        offset_y = (h + ph) / 2.0 + _GAP
        lift = _BEHIND_LIFT * (h + ph) / 2.0
        if edge.relation is RelationKind.LEFT:
            sign = -1.0 if edge.source == nid else 1.0
            targets.append((px + sign * offset_x, py))
        elif edge.relation is RelationKind.TOP:
            sign = -1.0 if edge.source == nid else 1.0
            targets.append((px, py + sign * offset_y))
        else:  # BEHIND: farther node sits higher on the picture plane
            sign = -1.0 if edge.source == nid else 1.0
            targets.append((px, py + sign * lift))
    cx = sum(t[0] for t in targets) / len(targets)
    cy = sum(t[1] for t in targets) / len(targets)
    return (cx, cy)


def _clamp_box(
    cx: float, cy: float, size: tuple[int, int], canvas: Canvas
) -> tuple[int, int, int, int]:
    w, h = size
    x = min(max(0, _round_px(cx - w / 2.0)), canvas.width - w)
    y = min(max(0, _round_px(cy - h / 2.0)), canvas.height - h)
    return (x, y, w, h)


def assign_positions(
    graph: SceneGraph,
    sizes: dict[str, tuple[int, int]],
    canvas: Canvas,
    jitter_rounds: int = _JITTER_ROUNDS,
    attempts: int = _RESTART_ATTEMPTS,
) -> dict[str, tuple[int, int]]:
    """Greedy placement in node order with seeded jitter retries.

    Each node first tries the heuristic target implied by its already-placed
    partners (or an anticipatory spot when none are placed yet), then jitters
    around it.  When some node runs out of retries the whole placement
    restarts with a fresh jitter key, since early placements may have boxed
    it in.  Deterministic: the jitter stream is keyed only on node id,
    attempt, and round number.  Raises Unsatisfiable when every attempt
    fails.
    """
    pair_edges = _pair_edges(graph)
    for nid, size in sizes.items():
        if size[0] > canvas.width or size[1] > canvas.height:
            raise Unsatisfiable(f"{nid!r} ({size[0]}x{size[1]}) exceeds the canvas")

    for attempt in range(attempts):
        placed = _try_placement(graph, sizes, canvas, pair_edges, attempt, jitter_rounds)
        if placed is not None:
            return {nid: (box[0], box[1]) for nid, box in placed.items()}
    raise Unsatisfiable(
        f"no placement satisfies all {len(graph.edges)} relations "
        f"after {attempts} attempts"
    )


def _try_placement(
    graph: SceneGraph,
    sizes: dict[str, tuple[int, int]],
    canvas: Canvas,
    pair_edges: dict[frozenset[str], SceneEdge],
    attempt: int,
    jitter_rounds: int,
) -> dict[str, tuple[int, int, int, int]] | None:
    placed: dict[str, tuple[int, int, int, int]] = {}
    for node in graph.nodes:
        size = sizes[node.id]
        anchors = []
        for pair, edge in pair_edges.items():
            if node.id in pair:
                other = next(iter(pair - {node.id}))
                if other in placed:
                    anchors.append((edge, placed[other]))

        if anchors:
            cx, cy = _heuristic_center(node.id, size, anchors, canvas)
        else:
            cx, cy = _anticipatory_center(node.id, sizes, pair_edges, canvas)
        if attempt > 0:
            shake = random.Random(f"{node.id}:a{attempt}")
            cx += shake.uniform(-40.0 * attempt, 40.0 * attempt)
            cy += shake.uniform(-40.0 * attempt, 40.0 * attempt)

        chosen = None
        for round_no in range(jitter_rounds + 1):
            if round_no == 0:
                candidate = _clamp_box(cx, cy, size, canvas)
            else:
                rng = random.Random(f"{node.id}:{attempt}:{round_no}")
                if anchors:
                    spread = 10.0 + 9.0 * round_no
                    candidate = _clamp_box(
                        cx + rng.uniform(-spread, spread),
                        cy + rng.uniform(-spread, spread),
                        size,
                        canvas,
                    )
                else:
                    candidate = _clamp_box(
                        rng.uniform(size[0] / 2.0, canvas.width - size[0] / 2.0),
                        rng.uniform(size[1] / 2.0, canvas.height - size[1] / 2.0),
                        size,
                        canvas,
                    )
            if _candidate_ok(node.id, candidate, placed, pair_edges):
                chosen = candidate
                break
        if chosen is None:
            return None
        placed[node.id] = chosen
    return placed


def solve(
    graph: SceneGraph,
    kb: PlantKnowledgeBase,
    canvas: Canvas = DEFAULT_CANVAS,
    jitter_rounds: int = _JITTER_ROUNDS,
    attempts: int = _RESTART_ATTEMPTS,
) -> Layout:
    """Sizes plus positions plus depth ranks, as a validated layout.

    Elements come out in graph node order.
    """
    graph.validate()
    canvas.validate()
    sizes = assign_sizes(graph, kb, canvas)
    positions = assign_positions(graph, sizes, canvas, jitter_rounds, attempts)
    ranks = depth_ranks(graph)
    elements = tuple(
        PlacedElement(
            name=node.id,
            x=positions[node.id][0],
            y=positions[node.id][1],
            width=sizes[node.id][0],
            height=sizes[node.id][1],
            z=ranks[node.id],
        )
        for node in graph.nodes
    )
    layout = Layout(canvas=canvas, elements=elements)
    layout.validate()
    return layout
