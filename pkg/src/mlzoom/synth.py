"""Deterministic synthetic grayscale scenes for demos, tests, and the bundled corpus.

Everything here is a pure function of its arguments (seeded PCG64 for the
random scenes), so regenerated images are bit-identical across runs.
"""

from __future__ import annotations

import numpy as np

from mlzoom.image import GrayImage, quantize_u8


def radial_gradient(size: int = 256) -> GrayImage:
    """Bright-center radial gradient covering the full 0..255 range."""
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    r = np.hypot(yy - c, xx - c)
    return GrayImage(quantize_u8(255.0 * (1.0 - r / r.max())))


def smooth_scene(seed: int, size: int = 256, n_blobs: int = 12) -> GrayImage:
    """Smooth random scene: soft blobs over a gentle ramp, full dynamic range.

    Built from infinitely smooth components (Gaussians, one low-frequency
    sinusoid, a linear ramp), then normalized to [0, 255].
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64) / (size - 1)

    gx, gy = rng.uniform(-1.0, 1.0, size=2)
    field = 0.6 * (gx * xx + gy * yy)

    for _ in range(n_blobs):
        amp = rng.uniform(-1.0, 1.0)
        cx, cy = rng.uniform(0.0, 1.0, size=2)
        sigma = rng.uniform(0.08, 0.35)
        field += amp * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * sigma * sigma))

    fx, fy = rng.uniform(0.5, 2.0, size=2)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    field += 0.25 * np.sin(2.0 * np.pi * (fx * xx + fy * yy) + phase)

    field -= field.min()
    peak = field.max()
    if peak > 0.0:
        field /= peak
    return GrayImage(quantize_u8(255.0 * field))
