"""Small PNG helpers around Pillow; arrays in, bytes out, deterministically."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DimensionMismatch


def encode_png(image: np.ndarray) -> bytes:
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        arr = np.clip(arr, 0, 255).astype(np.uint8)
    if arr.ndim == 2:
        mode = "L"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        mode = "RGB"
    else:
        raise DimensionMismatch(f"cannot encode image of shape {arr.shape}")
    buffer = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buffer, format="PNG")
    return buffer.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8).copy()


def save_png(path: str | Path, image: np.ndarray) -> None:
    Path(path).write_bytes(encode_png(image))


def load_png(path: str | Path) -> np.ndarray:
    return decode_png(Path(path).read_bytes())
