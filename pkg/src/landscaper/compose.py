"""Layout-guided composition: from a graph plus layout to a rendered scene.

Rendering is instance-based: every plant is generated alone, segmented,
encoded, and overlaid back to front into the scene canvas, and a final
composition pass blends the result over a background while the plant
regions stay pinned.  The six-step recipe lives in `render_scene`; the
image-producing primitives live behind the RenderBackend protocol so the
same plan drives the deterministic mock backend, the HTTP render worker,
or a real latent-diffusion stack.

A CompositionPlan is the wire contract between planner and backend: it is
self-contained (per-instance prompts and seeds included) and serializes to
the JSON shape shared with the render worker and the web UI.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .errors import (
    BackendError,
    ConfigError,
    LandscaperError,
    LayoutInvariantError,
    MaskEmpty,
    NameMismatch,
)
from .model import Canvas, Layout, SceneGraph

SEASONS = ("spring", "summer", "autumn", "winter")
TIMES_OF_DAY = ("morning", "noon", "dusk", "night")
STYLES = ("realistic", "watercolor", "oil painting", "ink sketch")

DEFAULT_FROZEN_FRACTION = 0.5


@dataclass(frozen=True)
class StyleParams:
    season: str = "summer"
    time_of_day: str = "noon"
    style: str = "realistic"

    def validate(self) -> None:
        if self.season not in SEASONS:
            raise ConfigError(f"season {self.season!r} not in {SEASONS}")
        if self.time_of_day not in TIMES_OF_DAY:
            raise ConfigError(f"time of day {self.time_of_day!r} not in {TIMES_OF_DAY}")
        if self.style not in STYLES:
            raise ConfigError(f"style {self.style!r} not in {STYLES}")

    def to_json_dict(self) -> dict:
        return {"season": self.season, "time_of_day": self.time_of_day, "style": self.style}

    @classmethod
    def from_json_dict(cls, data: dict) -> "StyleParams":
        params = cls(
            season=str(data.get("season", "summer")),
            time_of_day=str(data.get("time_of_day", "noon")),
            style=str(data.get("style", "realistic")),
        )
        params.validate()
        return params


def instance_prompt(species: str, attributes: tuple[str, ...], style: StyleParams) -> str:
    qualifiers = f" with {', '.join(attributes)}" if attributes else ""
    return (
        f"{style.style} photo of a single {species}{qualifiers}, "
        f"{style.season}, {style.time_of_day} light, isolated on a plain backdrop"
    )


def background_prompt(style: StyleParams) -> str:
    return (
        f"{style.style} wide view of an empty landscape garden in {style.season}, "
        f"{style.time_of_day} light, open ground, no plants"
    )


def instance_seed(plan_seed: int, name: str) -> int:
    """Stable per-instance seed derived from the plan seed and the name."""
    return (plan_seed * 1_000_003 + zlib.crc32(name.encode("utf-8"))) % 2**32


@dataclass(frozen=True)
class InstanceSpec:
    """Everything a backend needs to generate and place one plant."""

    name: str
    species: str
    attributes: tuple[str, ...]
    prompt: str
    x: int
    y: int
    width: int
    height: int
    z: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "species": self.species,
            "attributes": list(self.attributes),
            "prompt": self.prompt,
            "x": self.x,
            "y": self.y,
            "width": self.width,
            "height": self.height,
            "z": self.z,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "InstanceSpec":
        try:
            return cls(
                name=str(data["name"]),
                species=str(data["species"]),
                attributes=tuple(str(a) for a in data.get("attributes", ())),
                prompt=str(data["prompt"]),
                x=int(data["x"]),
                y=int(data["y"]),
                width=int(data["width"]),
                height=int(data["height"]),
                z=int(data["z"]),
                seed=int(data["seed"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutInvariantError(f"malformed instance document: {exc}") from exc


@dataclass(frozen=True)
class CompositionPlan:
    """Self-contained render request: canvas, background, ordered instances.

    Instances are listed back to front (strictly decreasing z); backends may
    rely on that order instead of re-sorting.
    """

    canvas: Canvas
    background: str
    seed: int
    frozen_fraction: float
    style: StyleParams
    instances: tuple[InstanceSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))

    def validate(self) -> None:
        self.canvas.validate()
        self.style.validate()
        if not (0.0 <= self.frozen_fraction <= 1.0):
            raise ConfigError(f"frozen fraction {self.frozen_fraction} not in [0, 1]")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        names = set()
        previous_z = None
        for inst in self.instances:
            if inst.name in names:
                raise LayoutInvariantError(f"duplicate instance name {inst.name!r}")
            names.add(inst.name)
            if inst.width <= 0 or inst.height <= 0:
                raise LayoutInvariantError(f"{inst.name!r} has non-positive extents")
            if (
                inst.x < 0
                or inst.y < 0
                or inst.x + inst.width > self.canvas.width
                or inst.y + inst.height > self.canvas.height
            ):
                raise LayoutInvariantError(f"{inst.name!r} leaves the canvas")
            if previous_z is not None and inst.z >= previous_z:
                raise LayoutInvariantError(
                    "instances must be ordered back to front (strictly decreasing z)"
                )
            previous_z = inst.z

    def to_json_dict(self) -> dict:
        return {
            "canvas": {"width": self.canvas.width, "height": self.canvas.height},
            "background_prompt": self.background,
            "seed": self.seed,
            "frozen_fraction": self.frozen_fraction,
            "style": self.style.to_json_dict(),
            "instances": [inst.to_json_dict() for inst in self.instances],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CompositionPlan":
        try:
            plan = cls(
                canvas=Canvas(int(data["canvas"]["width"]), int(data["canvas"]["height"])),
                background=str(data["background_prompt"]),
                seed=int(data["seed"]),
                frozen_fraction=float(data["frozen_fraction"]),
                style=StyleParams.from_json_dict(data.get("style", {})),
                instances=tuple(
                    InstanceSpec.from_json_dict(inst) for inst in data["instances"]
                ),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise LayoutInvariantError(f"malformed plan document: {exc}") from exc
        plan.validate()
        return plan


def plan_composition(
    graph: SceneGraph,
    layout: Layout,
    style: StyleParams = StyleParams(),
    seed: int = 0,
    frozen_fraction: float = DEFAULT_FROZEN_FRACTION,
) -> CompositionPlan:
    """Order layout boxes back to front and attach prompts and seeds.

    Layout names must match graph node ids one to one; species and
    attributes come from the graph.
    """
    graph.validate()
    layout.validate()
    style.validate()
    node_map = graph.node_map()
    missing = [nid for nid in node_map if nid not in layout.element_map()]
    extra = [el.name for el in layout.elements if el.name not in node_map]
    if missing or extra:
        raise NameMismatch(
            f"layout does not cover the graph: missing {missing or 'none'}, "
            f"extra {extra or 'none'}"
        )

    instances = []
    for el in layout.by_depth(back_to_front=True):
        node = node_map[el.name]
        instances.append(
            InstanceSpec(
                name=el.name,
                species=node.species,
                attributes=node.attributes,
                prompt=instance_prompt(node.species, node.attributes, style),
                x=el.x,
                y=el.y,
                width=el.width,
                height=el.height,
                z=el.z,
                seed=instance_seed(seed, el.name),
            )
        )
    plan = CompositionPlan(
        canvas=layout.canvas,
        background=background_prompt(style),
        seed=seed,
        frozen_fraction=frozen_fraction,
        style=style,
        instances=tuple(instances),
    )
    plan.validate()
    return plan


@dataclass(frozen=True)
class Layer:
    """One generated instance ready for composition."""

    instance: InstanceSpec
    image: np.ndarray
    mask: np.ndarray
    latent: np.ndarray


class RenderBackend(Protocol):
    """Image-producing primitives behind the composition recipe."""

    def generate_instance(self, instance: InstanceSpec) -> np.ndarray: ...

    def segment(self, image: np.ndarray, instance: InstanceSpec) -> np.ndarray: ...

    def encode(self, image: np.ndarray) -> np.ndarray: ...

    def compose(
        self,
        canvas: Canvas,
        background_prompt: str,
        layers: tuple[Layer, ...],
        seed: int,
        frozen_fraction: float,
    ) -> np.ndarray: ...


@dataclass(frozen=True)
class RenderResult:
    image: np.ndarray
    masks: dict[str, np.ndarray]  # canvas-space, pre-occlusion


def render_scene(plan: CompositionPlan, backend: RenderBackend) -> RenderResult:
    """Run the full composition recipe over a validated plan.

    Per instance, back to front: generate alone, segment, encode.  Then hand
    the ordered layers to the backend's composition pass, which paints them
    over the background and keeps the plant regions pinned for the final
    `frozen_fraction` of its schedule.  Backend exceptions come back wrapped
    in BackendError naming the step; an all-background instance raises
    MaskEmpty.
    """
    plan.validate()
    layers = []
    canvas_masks: dict[str, np.ndarray] = {}
    for instance in plan.instances:
        try:
            image = np.asarray(backend.generate_instance(instance))
        except LandscaperError:
            raise
        except Exception as exc:
            raise BackendError("generate", f"{instance.name!r}: {exc}") from exc
        if image.shape[:2] != (instance.height, instance.width):
            raise BackendError(
                "generate",
                f"{instance.name!r}: got {image.shape[:2]}, "
                f"expected {(instance.height, instance.width)}",
            )

        try:
            mask = np.asarray(backend.segment(image, instance), dtype=bool)
        except LandscaperError:
            raise
        except Exception as exc:
            raise BackendError("segment", f"{instance.name!r}: {exc}") from exc
        if mask.shape != image.shape[:2]:
            raise BackendError(
                "segment", f"{instance.name!r}: mask shape {mask.shape} mismatches image"
            )
        if not mask.any():
            raise MaskEmpty(f"instance {instance.name!r} segmented to nothing")

        try:
            latent = backend.encode(image)
        except LandscaperError:
            raise
        except Exception as exc:
            raise BackendError("encode", f"{instance.name!r}: {exc}") from exc

        layers.append(Layer(instance=instance, image=image, mask=mask, latent=latent))
        full = np.zeros((plan.canvas.height, plan.canvas.width), dtype=bool)
        full[
            instance.y : instance.y + instance.height,
            instance.x : instance.x + instance.width,
        ] = mask
        canvas_masks[instance.name] = full

    try:
        image = backend.compose(
            plan.canvas, plan.background, tuple(layers), plan.seed, plan.frozen_fraction
        )
    except LandscaperError:
        raise
    except Exception as exc:
        raise BackendError("compose", str(exc)) from exc
    image = np.asarray(image)
    if image.shape != (plan.canvas.height, plan.canvas.width, 3):
        raise BackendError(
            "compose", f"got shape {image.shape}, expected "
            f"{(plan.canvas.height, plan.canvas.width, 3)}"
        )
    return RenderResult(image=image.astype(np.uint8, copy=False), masks=canvas_masks)
