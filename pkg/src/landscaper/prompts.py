"""Prompt assembly for the two concretization calls.

Both calls share one shape: a task statement, step-by-step reasoning
instructions, hard output constraints, a block of landscape knowledge, a
handful of worked demonstrations, and finally the actual question.  The
knowledge block carries the same three sizing rules the layout solver
enforces, with the species table inlined, so a prompted model and the
solver are judged against identical facts.

Rendering is pure string building: same inputs, same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .knowledge import PlantKnowledgeBase, builtin_knowledge_base
from .model import (
    DEFAULT_CANVAS,
    Canvas,
    RelationKind,
    SceneEdge,
    SceneGraph,
    SceneNode,
)
from .textform import linearize_graph, serialize_layout

DEFAULT_MAX_NODES = 6


@dataclass(frozen=True)
class PromptBundle:
    """One prompt, kept in sections until the final render."""

    task: str
    cot_steps: tuple[str, ...]
    constraints: tuple[str, ...]
    context: tuple[str, ...]
    demonstrations: tuple[tuple[str, str], ...]
    question: str

    def render(self) -> str:
        parts = [self.task]
        if self.cot_steps:
            lines = [f"{i + 1}. {step}" for i, step in enumerate(self.cot_steps)]
            parts.append("Work step by step:\n" + "\n".join(lines))
        if self.constraints:
            parts.append("Hard constraints:\n" + "\n".join(f"- {c}" for c in self.constraints))
        if self.context:
            parts.append("Landscape knowledge:\n" + "\n".join(f"- {c}" for c in self.context))
        for i, (question, answer) in enumerate(self.demonstrations):
            parts.append(f"Example {i + 1}:\nInput: {question}\nOutput:\n{answer}")
        parts.append(f"Now the real task.\nInput: {self.question}\nOutput:")
        return "\n\n".join(parts)


def knowledge_rules(kb: PlantKnowledgeBase, canvas: Canvas = DEFAULT_CANVAS) -> tuple[str, ...]:
    """The three sizing rules plus the species table, as context bullets."""
    scale = min(canvas.width, canvas.height) / 512
    table = ", ".join(
        f"{spec.species} {spec.aspect_ratio:g}/{round(spec.canonical_height * scale)}"
        for spec in kb.entries
    )
    return (
        "Every plant box keeps its species' width-to-height ratio.",
        "At equal depth, plant heights follow the canonical heights below.",
        f"Each step farther back multiplies a plant's height by {kb.depth_scale:g}.",
        f"Species table (ratio/height in px): {table}.",
    )


def _palette(kb: PlantKnowledgeBase) -> str:
    return ", ".join(kb.species_names())


def build_graph_prompt(
    description: str,
    kb: PlantKnowledgeBase | None = None,
    demonstrations: tuple[tuple[str, str], ...] | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> PromptBundle:
    """Prompt that turns a scene description into node tokens and triples."""
    kb = kb or builtin_knowledge_base()
    if demonstrations is None:
        demonstrations = default_graph_demos()
    return PromptBundle(
        task=(
            "You are an experienced landscape designer. Read the scene "
            "description and write it as a scene graph: the plants, and the "
            "spatial relations between them."
        ),
        cot_steps=(
            "List every plant instance; repeated species get ids like daisy#2.",
            "Attach descriptive attributes to the plant they qualify.",
            "Decide the relation for each constrained pair of plants.",
            "Write one <name> or <name [attributes]> line per plant, then one "
            "<a, relation, b> line per relation.",
        ),
        constraints=(
            "Use only these relations: left, right, top, bottom, behind, in front of.",
            f"Use at most {max_nodes} plants; keep the most important ones.",
            "Give each pair of plants at most one relation.",
            "The final answer must contain only the angle-bracket lines.",
        ),
        context=(f"Available plant palette: {_palette(kb)}.",),
        demonstrations=demonstrations,
        question=description,
    )


def build_layout_prompt(
    graph: SceneGraph,
    kb: PlantKnowledgeBase | None = None,
    canvas: Canvas = DEFAULT_CANVAS,
    demonstrations: tuple[tuple[str, str], ...] | None = None,
    include_knowledge: bool = True,
) -> PromptBundle:
    """Prompt that turns a scene graph into one box tuple per plant."""
    kb = kb or builtin_knowledge_base()
    if demonstrations is None:
        demonstrations = default_layout_demos(kb, canvas)
    return PromptBundle(
        task=(
            f"You are an experienced landscape designer. Place every plant of "
            f"the scene graph on a {canvas.width}x{canvas.height} canvas as an "
            f"axis-aligned box."
        ),
        cot_steps=(
            "Derive each plant's depth rank from the behind/in front of "
            "relations; plants without depth relations sit in front.",
            "Size each box: height from the species table scaled by depth, "
            "width from height times the ratio.",
            "Choose positions so every relation holds: left/right and "
            "top/bottom compare box centers on the dominant axis, and depth "
            "pairs overlap.",
            "Write one [name, [x, y, width, height], z] line per plant, "
            "farthest plant first.",
        ),
        constraints=(
            "All coordinates are integer pixels; boxes stay fully on the canvas.",
            "Boxes of unrelated plants must not overlap.",
            "z is the depth rank: 0 is the nearest plant, larger is farther.",
            "The final answer must contain only the bracketed tuple lines.",
        ),
        context=knowledge_rules(kb, canvas) if include_knowledge else (),
        demonstrations=demonstrations,
        question=linearize_graph(graph),
    )


RETRY_REMINDER = (
    "Your previous answer could not be used: {error}. "
    "Answer again with only the required lines and nothing else."
)


def demo_graphs() -> tuple[SceneGraph, ...]:
    """Five hand-picked scenes reused by both demo sets."""
    left = RelationKind.LEFT
    right = RelationKind.RIGHT
    bottom = RelationKind.BOTTOM
    behind = RelationKind.BEHIND
    front = RelationKind.IN_FRONT_OF
    return (
        SceneGraph(
            nodes=(
                SceneNode("dogwood", "dogwood", ("pink flowers",)),
                SceneNode("daisy", "daisy"),
                SceneNode("white tulip", "white tulip"),
            ),
            edges=(
                SceneEdge("daisy", bottom, "dogwood"),
                SceneEdge("white tulip", right, "daisy"),
            ),
        ),
        SceneGraph(
            nodes=(
                SceneNode("pine", "pine"),
                SceneNode("boxwood", "boxwood"),
                SceneNode("rose", "rose"),
            ),
            edges=(
                SceneEdge("pine", behind, "boxwood"),
                SceneEdge("boxwood", left, "rose"),
            ),
        ),
        SceneGraph(
            nodes=(
                SceneNode("house", "house"),
                SceneNode("banyan", "banyan"),
                SceneNode("lavender", "lavender"),
            ),
            edges=(
                SceneEdge("banyan", left, "house"),
                SceneEdge("lavender", front, "banyan"),
            ),
        ),
        SceneGraph(
            nodes=(
                SceneNode("cherry tree", "cherry tree"),
                SceneNode("azalea", "azalea"),
                SceneNode("daisy", "daisy"),
                SceneNode("garden arch", "garden arch"),
            ),
            edges=(
                SceneEdge("azalea", bottom, "cherry tree"),
                SceneEdge("daisy", right, "azalea"),
                SceneEdge("garden arch", behind, "cherry tree"),
            ),
        ),
        SceneGraph(
            nodes=(
                SceneNode("weeping willow", "weeping willow", ("golden leaves",)),
                SceneNode("hydrangea", "hydrangea"),
            ),
            edges=(SceneEdge("hydrangea", front, "weeping willow"),),
        ),
    )


_DEMO_DESCRIPTIONS = (
    "A sunny garden bed with a pink-flowering dogwood, a daisy, and a white "
    "tulip. The daisy sits below the dogwood, and the white tulip stands to "
    "the right of the daisy.",
    "A quiet corner: a tall pine rises behind a boxwood hedge, and the "
    "boxwood is to the left of a rose.",
    "A cottage scene with a banyan to the left of the house and lavender "
    "growing in front of the banyan.",
    "A spring yard: an azalea under a cherry tree, a daisy to the right of "
    "the azalea, and a garden arch behind the cherry tree.",
    "A weeping willow with golden leaves, with a hydrangea in front of it.",
)


def default_graph_demos() -> tuple[tuple[str, str], ...]:
    return tuple(
        (description, linearize_graph(graph))
        for description, graph in zip(_DEMO_DESCRIPTIONS, demo_graphs())
    )


def default_layout_demos(
    kb: PlantKnowledgeBase | None = None, canvas: Canvas = DEFAULT_CANVAS
) -> tuple[tuple[str, str], ...]:
    """Graph-to-layout demonstrations, solved by the rule-based solver."""
    from .solver import solve  # local import to avoid a cycle at module load

    kb = kb or builtin_knowledge_base()
    demos = []
    for graph in demo_graphs():
        layout = solve(graph, kb, canvas)
        demos.append((linearize_graph(graph), serialize_layout(layout)))
    return tuple(demos)
