"""Composition planning and instance-based rendering.

The occlusion tests build their expected image with an independent painter
pass over public backend primitives: generate each instance alone, paste
masked pixels back to front onto the backend's own empty-scene background.
The renderer must reproduce that byte for byte, whatever the z order.
"""

from __future__ import annotations

import itertools
import zlib

import numpy as np
import pytest

from landscaper import (
    Canvas,
    CompositionPlan,
    InstanceSpec,
    MockBackend,
    StyleParams,
    builtin_knowledge_base,
    plan_composition,
    render_scene,
)
from landscaper.compose import background_prompt, instance_prompt, instance_seed
from landscaper.errors import (
    BackendError,
    ConfigError,
    LayoutInvariantError,
    MaskEmpty,
    NameMismatch,
    UnknownSpecies,
)

from conftest import mk_graph, mk_layout

KB = builtin_knowledge_base()


def paste_reference(plan: CompositionPlan, backend) -> np.ndarray:
    """Independent painter pass used as the oracle for composition."""
    empty = CompositionPlan(
        canvas=plan.canvas,
        background=plan.background,
        seed=plan.seed,
        frozen_fraction=plan.frozen_fraction,
        style=plan.style,
        instances=(),
    )
    image = render_scene(empty, backend).image.copy()
    for inst in plan.instances:  # already back to front
        alone = backend.generate_instance(inst)
        mask = backend.segment(alone, inst)
        region = image[inst.y : inst.y + inst.height, inst.x : inst.x + inst.width]
        region[mask] = alone[mask]
    return image


# -- style and prompts ------------------------------------------------------------


def test_style_validate():
    StyleParams().validate()
    StyleParams("winter", "dusk", "watercolor").validate()
    with pytest.raises(ConfigError):
        StyleParams(season="monsoon").validate()
    with pytest.raises(ConfigError):
        StyleParams(time_of_day="midnight").validate()
    with pytest.raises(ConfigError):
        StyleParams(style="cubist").validate()


def test_style_round_trip():
    style = StyleParams("autumn", "morning", "ink sketch")
    assert StyleParams.from_json_dict(style.to_json_dict()) == style


def test_instance_prompt_content():
    style = StyleParams("spring", "dusk", "watercolor")
    prompt = instance_prompt("dogwood", ("pink flowers",), style)
    for needle in ("watercolor", "single dogwood", "pink flowers", "spring", "dusk"):
        assert needle in prompt
    bare = instance_prompt("dogwood", (), style)
    assert "with" not in bare.split(",")[0]


def test_background_prompt_content():
    prompt = background_prompt(StyleParams("winter", "night", "realistic"))
    for needle in ("winter", "night", "no plants"):
        assert needle in prompt


def test_instance_seed_formula_and_stability():
    assert instance_seed(7, "daisy") == (7 * 1_000_003 + zlib.crc32(b"daisy")) % 2**32
    assert instance_seed(7, "daisy") != instance_seed(7, "rose")
    assert instance_seed(7, "daisy") != instance_seed(8, "daisy")


# -- planning -----------------------------------------------------------------------


def scene_for_planning():
    graph = mk_graph(
        [("dogwood", "dogwood", ("pink flowers",)), "daisy", "white tulip"],
        [("daisy", "bottom", "dogwood"), ("white tulip", "right", "daisy")],
    )
    layout = mk_layout(
        (512, 512),
        [
            ("dogwood", 171, 93, 171, 180, 0),
            ("daisy", 221, 285, 72, 90, 1),
            ("white tulip", 305, 283, 52, 95, 2),
        ],
    )
    return graph, layout


def test_plan_orders_instances_back_to_front():
    graph, layout = scene_for_planning()
    plan = plan_composition(graph, layout, seed=5)
    assert [inst.name for inst in plan.instances] == ["white tulip", "daisy", "dogwood"]
    assert [inst.z for inst in plan.instances] == [2, 1, 0]
    plan.validate()


@pytest.mark.parametrize("zs", list(itertools.permutations(range(3))))
def test_plan_ordering_for_every_rank_permutation(zs):
    graph = mk_graph(["a", "b", "c"])
    layout = mk_layout(
        (100, 100),
        [("a", 0, 0, 10, 10, zs[0]), ("b", 30, 30, 10, 10, zs[1]), ("c", 60, 60, 10, 10, zs[2])],
    )
    plan = plan_composition(graph, layout)
    assert [inst.z for inst in plan.instances] == sorted(zs, reverse=True)
    assert {inst.name for inst in plan.instances} == {"a", "b", "c"}


def test_plan_carries_species_prompts_and_seeds():
    graph, layout = scene_for_planning()
    style = StyleParams("autumn", "morning", "oil painting")
    plan = plan_composition(graph, layout, style=style, seed=11, frozen_fraction=0.25)
    by_name = {inst.name: inst for inst in plan.instances}
    assert by_name["dogwood"].species == "dogwood"
    assert by_name["dogwood"].attributes == ("pink flowers",)
    assert by_name["dogwood"].prompt == instance_prompt("dogwood", ("pink flowers",), style)
    assert by_name["daisy"].seed == instance_seed(11, "daisy")
    assert plan.background == background_prompt(style)
    assert plan.frozen_fraction == 0.25
    assert plan.canvas == layout.canvas
    assert plan.seed == 11


def test_plan_name_mismatch():
    graph, layout = scene_for_planning()
    extra = mk_layout(
        (512, 512),
        [(el.name, el.x, el.y, el.width, el.height, el.z) for el in layout.elements]
        + [("rogue", 0, 0, 5, 5, 3)],
    )
    with pytest.raises(NameMismatch, match="extra"):
        plan_composition(graph, extra)
    missing = mk_layout((512, 512), [("dogwood", 171, 93, 171, 180, 0)])
    with pytest.raises(NameMismatch, match="missing"):
        plan_composition(graph, missing)


def test_plan_validate_rejects_misordered_instances():
    good = plan_composition(*scene_for_planning())
    shuffled = CompositionPlan(
        canvas=good.canvas,
        background=good.background,
        seed=good.seed,
        frozen_fraction=good.frozen_fraction,
        style=good.style,
        instances=tuple(reversed(good.instances)),
    )
    with pytest.raises(LayoutInvariantError, match="back to front"):
        shuffled.validate()


def test_plan_validate_rejects_bad_geometry():
    base = dict(species="daisy", attributes=(), prompt="p", seed=0)
    plan = CompositionPlan(
        canvas=Canvas(50, 50),
        background="bg",
        seed=0,
        frozen_fraction=0.5,
        style=StyleParams(),
        instances=(InstanceSpec(name="a", x=45, y=0, width=10, height=10, z=0, **base),),
    )
    with pytest.raises(LayoutInvariantError, match="leaves the canvas"):
        plan.validate()
    plan = CompositionPlan(
        canvas=Canvas(50, 50),
        background="bg",
        seed=0,
        frozen_fraction=1.5,
        style=StyleParams(),
        instances=(),
    )
    with pytest.raises(ConfigError):
        plan.validate()


def test_plan_json_round_trip():
    plan = plan_composition(*scene_for_planning(), seed=3)
    doc = plan.to_json_dict()
    assert doc["background_prompt"] == plan.background
    assert CompositionPlan.from_json_dict(doc) == plan


def test_plan_from_json_rejects_misordered_document():
    plan = plan_composition(*scene_for_planning())
    doc = plan.to_json_dict()
    doc["instances"] = list(reversed(doc["instances"]))
    with pytest.raises(LayoutInvariantError):
        CompositionPlan.from_json_dict(doc)


def test_plan_from_json_rejects_malformed_document():
    with pytest.raises(LayoutInvariantError, match="malformed"):
        CompositionPlan.from_json_dict({"canvas": {"width": 10}})


# -- rendering ---------------------------------------------------------------------


def test_render_matches_painter_reference():
    graph, layout = scene_for_planning()
    plan = plan_composition(graph, layout, seed=9)
    backend = MockBackend(KB)
    result = render_scene(plan, backend)
    assert result.image.shape == (512, 512, 3)
    assert result.image.dtype == np.uint8
    assert np.array_equal(result.image, paste_reference(plan, backend))


def test_render_is_deterministic():
    plan = plan_composition(*scene_for_planning(), seed=2)
    backend = MockBackend(KB)
    a = render_scene(plan, backend)
    b = render_scene(plan, backend)
    assert np.array_equal(a.image, b.image)


def test_render_masks_are_canvas_space_pre_occlusion():
    graph, layout = scene_for_planning()
    plan = plan_composition(graph, layout, seed=9)
    backend = MockBackend(KB)
    result = render_scene(plan, backend)
    assert set(result.masks) == {"dogwood", "daisy", "white tulip"}
    for inst in plan.instances:
        full = result.masks[inst.name]
        assert full.shape == (512, 512)
        alone = backend.generate_instance(inst)
        local = backend.segment(alone, inst)
        window = full[inst.y : inst.y + inst.height, inst.x : inst.x + inst.width]
        assert np.array_equal(window, local)
        outside = full.copy()
        outside[inst.y : inst.y + inst.height, inst.x : inst.x + inst.width] = False
        assert not outside.any()


def overlapping_trio(zs):
    graph = mk_graph([("a", "boxwood"), ("b", "boxwood"), ("c", "boxwood")])
    layout = mk_layout(
        (96, 96),
        [
            ("a", 10, 10, 50, 50, zs[0]),
            ("b", 30, 20, 50, 50, zs[1]),
            ("c", 20, 30, 50, 50, zs[2]),
        ],
    )
    return plan_composition(graph, layout, seed=6)


@pytest.mark.parametrize("zs", list(itertools.permutations(range(3))))
def test_occlusion_front_always_wins(zs):
    backend = MockBackend(KB)
    plan = overlapping_trio(zs)
    result = render_scene(plan, backend)

    # Painter reference built independently of render_scene's compositor.
    assert np.array_equal(result.image, paste_reference(plan, backend))

    # In the region every instance covers, the pixels are exactly the
    # frontmost instance's own shaded pixels.
    triple = np.logical_and.reduce([result.masks[n] for n in ("a", "b", "c")])
    assert triple.any()
    front = min(plan.instances, key=lambda inst: inst.z)
    alone = backend.generate_instance(front)
    canvas_pixels = np.zeros_like(result.image)
    canvas_pixels[
        front.y : front.y + front.height, front.x : front.x + front.width
    ] = alone
    assert np.array_equal(result.image[triple], canvas_pixels[triple])


def test_render_empty_plan_is_just_background():
    backend = MockBackend(KB)
    plan = plan_composition(mk_graph([]), mk_layout((64, 48), []))
    result = render_scene(plan, backend)
    assert result.image.shape == (48, 64, 3)
    assert result.masks == {}


# -- backend failure handling --------------------------------------------------------


class FlakyBackend(MockBackend):
    def __init__(self, fail_step=None, bad_shape_step=None, empty_mask=False):
        super().__init__()
        self.fail_step = fail_step
        self.bad_shape_step = bad_shape_step
        self.empty_mask = empty_mask

    def generate_instance(self, instance):
        if self.fail_step == "generate":
            raise ValueError("synthetic failure")
        if self.bad_shape_step == "generate":
            return np.zeros((1, 1, 3), dtype=np.uint8)
        return super().generate_instance(instance)

    def segment(self, image, instance):
        if self.fail_step == "segment":
            raise ValueError("synthetic failure")
        if self.bad_shape_step == "segment":
            return np.zeros((1, 1), dtype=bool)
        if self.empty_mask:
            return np.zeros(image.shape[:2], dtype=bool)
        return super().segment(image, instance)

    def encode(self, image):
        if self.fail_step == "encode":
            raise ValueError("synthetic failure")
        return super().encode(image)

    def compose(self, canvas, background_prompt, layers, seed, frozen_fraction):
        if self.fail_step == "compose":
            raise ValueError("synthetic failure")
        if self.bad_shape_step == "compose":
            return np.zeros((1, 1, 3), dtype=np.uint8)
        return super().compose(canvas, background_prompt, layers, seed, frozen_fraction)


@pytest.mark.parametrize("step", ["generate", "segment", "encode", "compose"])
def test_backend_exceptions_are_wrapped_with_the_step_name(step):
    plan = plan_composition(*scene_for_planning())
    with pytest.raises(BackendError) as err:
        render_scene(plan, FlakyBackend(fail_step=step))
    assert err.value.step == step
    assert str(err.value).startswith(step)


@pytest.mark.parametrize("step", ["generate", "segment", "compose"])
def test_shape_violations_are_backend_errors(step):
    plan = plan_composition(*scene_for_planning())
    with pytest.raises(BackendError) as err:
        render_scene(plan, FlakyBackend(bad_shape_step=step))
    assert err.value.step == step


def test_empty_mask_raises_mask_empty():
    plan = plan_composition(*scene_for_planning())
    with pytest.raises(MaskEmpty, match="dogwood|daisy|white tulip"):
        render_scene(plan, FlakyBackend(empty_mask=True))


def test_library_errors_pass_through_unwrapped():
    class Hostile(MockBackend):
        def generate_instance(self, instance):
            raise UnknownSpecies("no such plant")

    plan = plan_composition(*scene_for_planning())
    with pytest.raises(UnknownSpecies):
        render_scene(plan, Hostile())
