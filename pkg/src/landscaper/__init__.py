"""Iterative landscape design: text to scene graph to box layout to image.

The pipeline has two halves.  Concretization turns a scene description into
a validated scene graph and then into a box layout, either through a
chat-completion endpoint or through the deterministic rule-based solver.
Illustration turns a layout into an image by generating each plant alone
and composing the instances back to front.  Around them sit the layout
metrics, a seeded benchmark, an SSIM implementation for style-consistency
reporting, and an append-only session log with byte-exact replay.
"""

from .benchmark import BenchmarkReport, describe_graph, random_scene, run_benchmark
from .compose import (
    CompositionPlan,
    InstanceSpec,
    RenderResult,
    StyleParams,
    plan_composition,
    render_scene,
)
from .config import AppConfig, load_config
from .errors import LandscaperError
from .knowledge import PlantKnowledgeBase, PlantSpec, builtin_knowledge_base
from .llm import LlmEndpointConfig, generate_layout, generate_scene_graph
from .metrics import MetricConfig, MetricResult, evaluate, extract_relations
from .mock_backend import MockBackend
from .model import (
    DEFAULT_CANVAS,
    Canvas,
    Layout,
    PlacedElement,
    RelationKind,
    SceneEdge,
    SceneGraph,
    SceneNode,
    derive_depths,
)
from .session import DesignSession, IterationRecord, SessionStore
from .solver import assign_sizes, solve
from .ssim import group_mean_ssim, ssim
from .studio import Studio
from .textform import linearize_graph, parse_layout, parse_triples, serialize_layout

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "BenchmarkReport",
    "Canvas",
    "CompositionPlan",
    "DEFAULT_CANVAS",
    "DesignSession",
    "InstanceSpec",
    "IterationRecord",
    "LandscaperError",
    "Layout",
    "LlmEndpointConfig",
    "MetricConfig",
    "MetricResult",
    "MockBackend",
    "PlacedElement",
    "PlantKnowledgeBase",
    "PlantSpec",
    "RelationKind",
    "RenderResult",
    "SceneEdge",
    "SceneGraph",
    "SceneNode",
    "SessionStore",
    "Studio",
    "StyleParams",
    "assign_sizes",
    "builtin_knowledge_base",
    "derive_depths",
    "describe_graph",
    "evaluate",
    "extract_relations",
    "generate_layout",
    "generate_scene_graph",
    "group_mean_ssim",
    "linearize_graph",
    "load_config",
    "parse_layout",
    "parse_triples",
    "plan_composition",
    "random_scene",
    "render_scene",
    "run_benchmark",
    "serialize_layout",
    "solve",
    "ssim",
]
