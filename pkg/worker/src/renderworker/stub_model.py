"""Deterministic placeholder model.

Stands in for the diffusion runtime so the HTTP contract can be exercised
and frozen without GPU weights. Every byte of output is a pure function of
the request, which is what lets golden responses stay byte-exact.
"""

from __future__ import annotations

import base64
import hashlib
import io
from typing import Sequence

import numpy as np
from PIL import Image

MODEL_ID = "stub-1"

_TEXTURE_SPAN = 18
_BACKDROP = 231


def encode_png(array: np.ndarray) -> str:
    buffer = io.BytesIO()
    Image.fromarray(array).save(buffer, format="PNG")
    return base64.b64encode(buffer.getvalue()).decode("ascii")


def decode_png(data: str) -> np.ndarray:
    image = Image.open(io.BytesIO(base64.b64decode(data)))
    return np.asarray(image)


def _digest(text: str) -> bytes:
    return hashlib.sha256(text.encode("utf-8")).digest()


def _rng(seed: int, *keys: str) -> np.random.Generator:
    # sha256 keeps the stream stable across interpreter hash randomization
    entropy = [seed]
    for key in keys:
        entropy.append(int.from_bytes(_digest(key)[:4], "big"))
    return np.random.default_rng(entropy)


def _base_color(species: str) -> np.ndarray:
    digest = _digest(species)
    # clamp away from black and white so masks stay visually obvious
    return np.array([48 + digest[i] % 160 for i in range(3)], dtype=np.int16)


def _detail_shift(detail: str) -> np.ndarray:
    if not detail:
        return np.zeros(3, dtype=np.int16)
    digest = _digest(detail)
    return np.array([digest[i] % 41 - 20 for i in range(3)], dtype=np.int16)


def _silhouette(height: int, width: int) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    cy = (height - 1) / 2.0
    cx = (width - 1) / 2.0
    ry = max(height / 2.0, 0.5)
    rx = max(width / 2.0, 0.5)
    return ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0


class StubModel:
    """Paints flat elliptical plants over gradient backdrops."""

    model_id = MODEL_ID

    def instance(
        self,
        species: str,
        detail: str,
        width: int,
        height: int,
        seed: int,
    ) -> tuple[np.ndarray, np.ndarray]:
        """One plant alone on a neutral backdrop, plus its mask."""
        mask = _silhouette(height, width)
        color = np.clip(_base_color(species) + _detail_shift(detail), 0, 255)
        rng = _rng(seed, species, detail)
        texture = rng.integers(
            -_TEXTURE_SPAN, _TEXTURE_SPAN + 1, size=(height, width, 3)
        )
        image = np.full((height, width, 3), _BACKDROP, dtype=np.int16)
        image[mask] = color
        image = np.clip(image + texture * mask[..., None], 0, 255)
        return image.astype(np.uint8), mask

    def background(
        self, prompt: str, width: int, height: int, seed: int
    ) -> np.ndarray:
        """Vertical gradient keyed on the prompt, lightly dithered."""
        digest = _digest(prompt)
        top = np.array([64 + digest[i] % 128 for i in range(3)], dtype=np.float64)
        bottom = np.array(
            [64 + digest[i + 3] % 128 for i in range(3)], dtype=np.float64
        )
        span = np.linspace(0.0, 1.0, num=height)[:, None, None]
        field = top[None, None, :] * (1.0 - span) + bottom[None, None, :] * span
        rng = _rng(seed, prompt)
        noise = rng.integers(-6, 7, size=(height, width, 3))
        return np.clip(field + noise, 0, 255).astype(np.uint8)

    def render_scene(
        self, plan: dict
    ) -> tuple[np.ndarray, list[tuple[str, np.ndarray]]]:
        """Compose a full plan back to front.

        Returns the canvas image and one pre-occlusion canvas-space mask
        per instance, in plan order. frozen_fraction is accepted for wire
        compatibility and ignored: the stub has no denoising schedule.
        """
        width = plan["canvas"]["width"]
        height = plan["canvas"]["height"]
        style_key = _style_key(plan.get("style"))
        canvas = self.background(
            plan["background_prompt"] + style_key, width, height, plan["seed"]
        )
        masks: list[tuple[str, np.ndarray]] = []
        for inst in plan["instances"]:
            patch, patch_mask = self.instance(
                inst["species"],
                inst["prompt"] + style_key,
                inst["width"],
                inst["height"],
                inst["seed"],
            )
            placed = _place(canvas, patch, patch_mask, inst["x"], inst["y"])
            masks.append((inst["name"], placed))
        return canvas, masks


def _style_key(style: dict | None) -> str:
    if not style:
        return ""
    parts = [f"{key}={style[key]}" for key in sorted(style)]
    return "|" + ",".join(parts)


def _place(
    canvas: np.ndarray,
    patch: np.ndarray,
    patch_mask: np.ndarray,
    x: int,
    y: int,
) -> np.ndarray:
    """Paint patch onto canvas in place; return the canvas-space mask."""
    height, width = canvas.shape[:2]
    ph, pw = patch_mask.shape
    placed = np.zeros((height, width), dtype=bool)
    # clip to the canvas; plans normally fit but the wire form allows overhang
    x0, y0 = max(x, 0), max(y, 0)
    x1, y1 = min(x + pw, width), min(y + ph, height)
    if x0 >= x1 or y0 >= y1:
        return placed
    window = patch_mask[y0 - y : y1 - y, x0 - x : x1 - x]
    canvas[y0:y1, x0:x1][window] = patch[y0 - y : y1 - y, x0 - x : x1 - x][window]
    placed[y0:y1, x0:x1] = window
    return placed


def mask_to_png(mask: np.ndarray) -> str:
    return encode_png(mask.astype(np.uint8) * 255)


def instance_detail(attributes: Sequence[str], style: str | None) -> str:
    """Stable paint key for the single-instance route."""
    parts = list(attributes)
    if style:
        parts.append(f"style={style}")
    return ", ".join(parts)
