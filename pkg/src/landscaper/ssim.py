"""Structural similarity between images, and the group-mean variant.

Classic windowed SSIM: an 11x11 Gaussian window (sigma 1.5), stabilizers
K1=0.01 and K2=0.03 on a dynamic range of 255.  The local statistics are
computed at every pixel position; at the borders the window is truncated to
the image and its Gaussian weights renormalized, so small images (down to a
couple of pixels) are handled without padding artifacts.  Color images are
reduced to luminance first.

`group_mean_ssim` averages SSIM over all unordered pairs of a group; higher
means the group is more visually uniform.  Style-locked renders of one
layout score visibly above renders of unrelated layouts, which is the
property the app's consistency report relies on.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, TooFewImages

WINDOW_SIZE = 11
SIGMA = 1.5
K1 = 0.01
K2 = 0.03
DYNAMIC_RANGE = 255.0

_C1 = (K1 * DYNAMIC_RANGE) ** 2
_C2 = (K2 * DYNAMIC_RANGE) ** 2


def _gaussian_window() -> np.ndarray:
    half = WINDOW_SIZE // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    one_d = np.exp(-(coords**2) / (2.0 * SIGMA**2))
    window = np.outer(one_d, one_d)
    return window / window.sum()


_WINDOW = _gaussian_window()


def to_luminance(image: np.ndarray) -> np.ndarray:
    """Image as float64 luminance in 0..255; accepts grayscale or RGB."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 3:
        arr = arr[..., 0] * 0.299 + arr[..., 1] * 0.587 + arr[..., 2] * 0.114
    elif arr.ndim != 2:
        raise DimensionMismatch(f"expected HxW or HxWx3 image, got shape {arr.shape}")
    return arr


def ssim(image_a: np.ndarray, image_b: np.ndarray) -> float:
    """Mean structural similarity of two equally sized images, in [-1, 1]."""
    a = to_luminance(image_a)
    b = to_luminance(image_b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"image shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise DimensionMismatch("images are empty")

    height, width = a.shape
    half = WINDOW_SIZE // 2

    weight_sum = np.zeros_like(a)
    sum_a = np.zeros_like(a)
    sum_b = np.zeros_like(a)
    sum_aa = np.zeros_like(a)
    sum_bb = np.zeros_like(a)
    sum_ab = np.zeros_like(a)

    # Accumulate the window one offset at a time: each (dy, dx) contributes
    # its Gaussian weight to every position whose shifted neighbor exists.
    # This is exact truncated-window SSIM, vectorized over the image.
    for dy in range(-half, half + 1):
        row_lo, row_hi = max(0, -dy), height - max(0, dy)
        if row_lo >= row_hi:
            continue
        for dx in range(-half, half + 1):
            col_lo, col_hi = max(0, -dx), width - max(0, dx)
            if col_lo >= col_hi:
                continue
            weight = _WINDOW[dy + half, dx + half]
            dst = (slice(row_lo, row_hi), slice(col_lo, col_hi))
            src = (slice(row_lo + dy, row_hi + dy), slice(col_lo + dx, col_hi + dx))
            weight_sum[dst] += weight
            sum_a[dst] += weight * a[src]
            sum_b[dst] += weight * b[src]
            sum_aa[dst] += weight * a[src] * a[src]
            sum_bb[dst] += weight * b[src] * b[src]
            sum_ab[dst] += weight * a[src] * b[src]

    mu_a = sum_a / weight_sum
    mu_b = sum_b / weight_sum
    var_a = sum_aa / weight_sum - mu_a * mu_a
    var_b = sum_bb / weight_sum - mu_b * mu_b
    cov = sum_ab / weight_sum - mu_a * mu_b

    numerator = (2.0 * mu_a * mu_b + _C1) * (2.0 * cov + _C2)
    denominator = (mu_a * mu_a + mu_b * mu_b + _C1) * (var_a + var_b + _C2)
    return float(np.mean(numerator / denominator))


def group_mean_ssim(images: list[np.ndarray]) -> float:
    """Mean SSIM over all unordered image pairs; needs at least two images."""
    if len(images) < 2:
        raise TooFewImages(f"need at least 2 images, got {len(images)}")
    total = 0.0
    pairs = 0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            total += ssim(images[i], images[j])
            pairs += 1
    return total / pairs
