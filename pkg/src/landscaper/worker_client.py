"""HTTP client for the render worker.

The worker receives a full composition plan as JSON and answers with a
base64 PNG plus per-instance masks; this client hides the transport and
returns arrays.  Any transport or protocol problem surfaces as
BackendError("worker", ...).
"""

from __future__ import annotations

import base64
from typing import Callable

import httpx
import numpy as np

from .compose import CompositionPlan
from .errors import BackendError
from .raster import decode_png


class WorkerClient:
    def __init__(
        self,
        base_url: str,
        timeout: float = 120.0,
        post: Callable[..., httpx.Response] | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self._post = post or httpx.post

    def render(self, plan: CompositionPlan) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        url = f"{self.base_url}/render"
        try:
            response = self._post(url, json=plan.to_json_dict(), timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except httpx.HTTPStatusError as exc:
            detail = ""
            try:
                detail = f": {exc.response.json().get('detail', '')}"
            except Exception:
                pass
            raise BackendError(
                "worker", f"render returned {exc.response.status_code}{detail}"
            ) from exc
        except httpx.HTTPError as exc:
            raise BackendError("worker", f"cannot reach worker at {url}: {exc}") from exc
        except ValueError as exc:
            raise BackendError("worker", f"non-JSON response from {url}") from exc

        try:
            image = decode_png(base64.b64decode(payload["image_png_base64"]))
            masks = {
                entry["name"]: decode_png(base64.b64decode(entry["mask_png_base64"]))[..., 0] > 127
                for entry in payload.get("masks", [])
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("worker", f"malformed render response: {exc}") from exc

        expected = (plan.canvas.height, plan.canvas.width, 3)
        if image.shape != expected:
            raise BackendError(
                "worker", f"image shape {image.shape} does not match plan {expected}"
            )
        return image, masks

    def healthy(self) -> bool:
        try:
            response = httpx.get(f"{self.base_url}/healthz", timeout=5.0)
            return response.status_code == 200
        except httpx.HTTPError:
            return False
