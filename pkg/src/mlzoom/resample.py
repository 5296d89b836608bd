"""Classical resamplers: nearest/bilinear/bicubic upscaling and area downsampling.

All methods share the half-pixel-center coordinate convention: output pixel X
samples the source at (X + 0.5) / factor - 0.5. Bicubic uses the Catmull-Rom
cubic (a = -0.5) with edge-clamped sampling. Area downsampling computes exact
fractional pixel coverage with integer boundary arithmetic, so results do not
depend on floating-point boundary rounding.
"""

from __future__ import annotations

import numpy as np

from mlzoom.errors import DegenerateImageError
from mlzoom.image import GrayImage, quantize_u8

RESAMPLE_METHODS = ("nearest", "bilinear", "bicubic")


def resample_baseline(img: GrayImage, factor: int, method: str) -> GrayImage:
    """Upscale by an integer factor >= 2 with a classical interpolator."""
    if not isinstance(factor, (int, np.integer)) or factor < 2:
        raise ValueError(f"factor must be an integer >= 2, got {factor!r}")
    if method not in RESAMPLE_METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {RESAMPLE_METHODS}")
    if method == "nearest":
        return GrayImage(np.repeat(np.repeat(img.pixels, factor, axis=0), factor, axis=1))

    if method == "bilinear":
        idx_x, w_x = _linear_taps(img.width, factor)
        idx_y, w_y = _linear_taps(img.height, factor)
    else:
        idx_x, w_x = _cubic_taps(img.width, factor)
        idx_y, w_y = _cubic_taps(img.height, factor)

    src = img.pixels.astype(np.float64)
    tmp = np.zeros((img.height, idx_x.shape[0]), dtype=np.float64)
    for k in range(idx_x.shape[1]):
        tmp += w_x[:, k] * src[:, idx_x[:, k]]
    out = np.zeros((idx_y.shape[0], idx_x.shape[0]), dtype=np.float64)
    for k in range(idx_y.shape[1]):
        out += w_y[:, k][:, None] * tmp[idx_y[:, k], :]
    return GrayImage(quantize_u8(out))


def _sample_coords(n_src: int, factor: int) -> np.ndarray:
    return (np.arange(n_src * factor, dtype=np.float64) + 0.5) / factor - 0.5


def _linear_taps(n_src: int, factor: int):
    t = _sample_coords(n_src, factor)
    i0 = np.floor(t).astype(np.int64)
    f = t - i0
    idx = np.stack([i0, i0 + 1], axis=1)
    w = np.stack([1.0 - f, f], axis=1)
    return np.clip(idx, 0, n_src - 1), w


def _catmull_rom(d: np.ndarray) -> np.ndarray:
    # Keys cubic with a = -0.5; support radius 2.
    d = np.abs(d)
    near = ((1.5 * d - 2.5) * d) * d + 1.0
    far = ((-0.5 * d + 2.5) * d - 4.0) * d + 2.0
    return np.where(d <= 1.0, near, np.where(d <= 2.0, far, 0.0))


def _cubic_taps(n_src: int, factor: int):
    t = _sample_coords(n_src, factor)
    i0 = np.floor(t).astype(np.int64)
    f = t - i0
    idx = np.stack([i0 - 1, i0, i0 + 1, i0 + 2], axis=1)
    w = np.stack(
        [_catmull_rom(f + 1.0), _catmull_rom(f), _catmull_rom(1.0 - f), _catmull_rom(2.0 - f)],
        axis=1,
    )
    return np.clip(idx, 0, n_src - 1), w


def area_downsample(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Downsample to (out_w, out_h) by area averaging (box filter).

    Output pixel j averages the source interval [j*r, (j+1)*r) per axis with
    exact fractional coverage (r = in/out >= 1). For integer ratios this is
    the plain disjoint block mean, with exact rounding ties.
    """
    if out_w < 1 or out_h < 1:
        raise DegenerateImageError(f"output dimensions {out_w}x{out_h} must be >= 1")
    if out_w > img.width or out_h > img.height:
        raise ValueError(
            f"area_downsample cannot enlarge: {img.width}x{img.height} -> {out_w}x{out_h}"
        )
    idx_x, cov_x = _coverage_taps(img.width, out_w)
    idx_y, cov_y = _coverage_taps(img.height, out_h)
    src = img.pixels.astype(np.float64)
    tmp = np.zeros((img.height, out_w), dtype=np.float64)
    for k in range(idx_x.shape[1]):
        tmp += cov_x[:, k] * src[:, idx_x[:, k]]
    acc = np.zeros((out_h, out_w), dtype=np.float64)
    for k in range(idx_y.shape[1]):
        acc += cov_y[:, k][:, None] * tmp[idx_y[:, k], :]
    # coverage weights per output pixel sum to n_in on each axis
    return GrayImage(quantize_u8(acc / (float(img.width) * float(img.height))))


def _coverage_taps(n_in: int, n_out: int):
    # Work in units of 1/n_out of a source pixel: source pixel i spans
    # [i*n_out, (i+1)*n_out), output pixel j spans [j*n_in, (j+1)*n_in).
    # Overlaps are exact integers summing to n_in for every output pixel.
    j = np.arange(n_out, dtype=np.int64)
    first = (j * n_in) // n_out
    last = ((j + 1) * n_in - 1) // n_out
    taps = int((last - first).max()) + 1
    idx = first[:, None] + np.arange(taps, dtype=np.int64)[None, :]
    lo = np.maximum(idx * n_out, (j * n_in)[:, None])
    hi = np.minimum((idx + 1) * n_out, ((j + 1) * n_in)[:, None])
    cov = np.maximum(hi - lo, 0)
    return np.clip(idx, 0, n_in - 1), cov.astype(np.float64)
