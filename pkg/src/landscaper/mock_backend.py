"""Deterministic render backend for tests, demos, and offline work.

Instances are flat-colored category silhouettes (canopy-and-trunk for
trees, dome for shrubs, bloom-and-stem for flowers, gable box for
structures) over an exact background sentinel, with seeded pixel noise so
different seeds give visibly different but structurally identical output.
Composition is a painter's pass over a seeded sky-to-ground gradient.  No
latents are involved, `encode` is the identity, and the frozen fraction has
nothing to pin, so it is accepted and ignored.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .compose import Canvas, InstanceSpec, Layer
from .knowledge import PlantKnowledgeBase, builtin_knowledge_base

# Exact fill behind every silhouette; segmentation keys on it.
BACKGROUND_SENTINEL = (7, 11, 13)

_NOISE_SPAN = 18


def species_color(species: str, attributes: tuple[str, ...] = ()) -> tuple[int, int, int]:
    """Stable, well-separated base color per species, tinted by attributes."""
    digest = hashlib.sha256(species.encode("utf-8")).digest()
    color = [40 + digest[i] % 176 for i in range(3)]
    if attributes:
        tint = hashlib.sha256("; ".join(attributes).encode("utf-8")).digest()
        color = [
            int(np.clip(c + (tint[i] % 61) - 30, 30, 225))
            for i, c in enumerate(color)
        ]
    return tuple(color)


def _ellipse(height: int, width: int, cy: float, cx: float, ry: float, rx: float) -> np.ndarray:
    ys = (np.arange(height, dtype=np.float64)[:, None] + 0.5 - cy) / max(ry, 1e-6)
    xs = (np.arange(width, dtype=np.float64)[None, :] + 0.5 - cx) / max(rx, 1e-6)
    return ys**2 + xs**2 <= 1.0


def category_silhouette(category: str, height: int, width: int) -> np.ndarray:
    """Boolean plant shape filling a comfortable share of its box."""
    mask = np.zeros((height, width), dtype=bool)
    h, w = float(height), float(width)
    if category == "tree":
        mask |= _ellipse(height, width, 0.36 * h, 0.5 * w, 0.38 * h, 0.48 * w)
        x0, x1 = int(0.44 * w), max(int(0.44 * w) + 1, int(0.56 * w))
        mask[int(0.55 * h) :, x0:x1] = True
    elif category == "flower":
        mask |= _ellipse(height, width, 0.30 * h, 0.5 * w, 0.28 * h, 0.45 * w)
        x0, x1 = int(0.47 * w), max(int(0.47 * w) + 1, int(0.53 * w))
        mask[int(0.45 * h) :, x0:x1] = True
        mask |= _ellipse(height, width, 0.78 * h, 0.32 * w, 0.10 * h, 0.16 * w)
    elif category == "structure":
        mask[int(0.45 * h) :, int(0.08 * w) : max(int(0.08 * w) + 1, int(0.92 * w))] = True
        # Gable: rows widen linearly from the apex down to the body.
        apex_y, base_y = 0.08 * h, 0.45 * h
        for row in range(int(apex_y), int(base_y)):
            t = (row - apex_y) / max(base_y - apex_y, 1e-6)
            half = 0.42 * w * t
            x0, x1 = int(0.5 * w - half), int(0.5 * w + half) + 1
            mask[row, max(0, x0) : min(width, x1)] = True
    else:  # shrub and anything unknown: a ground-hugging dome
        mask |= _ellipse(height, width, 0.95 * h, 0.5 * w, 0.90 * h, 0.50 * w)
    if not mask.any():
        mask[height // 2, width // 2] = True  # degenerate 1px boxes still render
    return mask


class MockBackend:
    """RenderBackend over plain pixels; same inputs, same bytes, every time."""

    def __init__(self, kb: PlantKnowledgeBase | None = None):
        self.kb = kb or builtin_knowledge_base()

    def _category(self, species: str) -> str:
        if species in self.kb:
            return self.kb.get(species).category
        return "shrub"

    def generate_instance(self, instance: InstanceSpec) -> np.ndarray:
        h, w = instance.height, instance.width
        image = np.empty((h, w, 3), dtype=np.uint8)
        image[:] = BACKGROUND_SENTINEL
        mask = category_silhouette(self._category(instance.species), h, w)
        base = np.array(species_color(instance.species, instance.attributes), dtype=np.int16)
        rng = np.random.default_rng(instance.seed)
        noise = rng.integers(-_NOISE_SPAN, _NOISE_SPAN + 1, size=(h, w, 3), dtype=np.int16)
        shaded = np.clip(base[None, None, :] + noise, 0, 255).astype(np.uint8)
        image[mask] = shaded[mask]
        return image

    def segment(self, image: np.ndarray, instance: InstanceSpec) -> np.ndarray:
        sentinel = np.array(BACKGROUND_SENTINEL, dtype=np.uint8)
        return np.any(image != sentinel[None, None, :], axis=2)

    def encode(self, image: np.ndarray) -> np.ndarray:
        return np.array(image, copy=True)

    def compose(
        self,
        canvas: Canvas,
        background_prompt: str,
        layers: tuple[Layer, ...],
        seed: int,
        frozen_fraction: float,
    ) -> np.ndarray:
        del frozen_fraction  # nothing to pin without a denoising schedule
        image = self._background(canvas, background_prompt, seed)
        for layer in layers:  # back to front; later paint wins
            inst = layer.instance
            region = image[inst.y : inst.y + inst.height, inst.x : inst.x + inst.width]
            region[layer.mask] = layer.latent[layer.mask]
        return image

    def _background(self, canvas: Canvas, prompt: str, seed: int) -> np.ndarray:
        digest = hashlib.sha256(prompt.encode("utf-8")).digest()
        sky = np.array([110 + digest[0] % 40, 150 + digest[1] % 40, 190 + digest[2] % 40])
        ground = np.array([60 + digest[3] % 30, 100 + digest[4] % 30, 50 + digest[5] % 30])
        t = np.linspace(0.0, 1.0, canvas.height)[:, None, None]
        gradient = (1.0 - t) * sky[None, None, :] + t * ground[None, None, :]
        rng = np.random.default_rng(seed)
        noise = rng.integers(-6, 7, size=(canvas.height, canvas.width, 3))
        return np.clip(gradient + noise, 0, 255).astype(np.uint8)
