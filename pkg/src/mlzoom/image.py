"""Core grayscale image type, block operations, convolution, and quality metrics.

Images are immutable 8-bit single-channel rasters backed by read-only numpy
arrays of shape (height, width). All real-to-8-bit conversions in this package
go through :func:`quantize_u8`, which rounds half away from zero and clamps to
[0, 255], so every pipeline stage is deterministic down to the byte.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from mlzoom.errors import DegenerateImageError, DimensionMismatchError


class GrayImage:
    """Immutable single-channel raster with integer values in [0, 255]."""

    __slots__ = ("_pixels",)

    def __init__(self, pixels) -> None:
        arr = np.asarray(pixels)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D pixel array, got ndim={arr.ndim}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DegenerateImageError("image dimensions must be at least 1x1")
        if arr.dtype == np.uint8:
            arr = arr.copy()
        else:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"pixel values must be integers, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        self._pixels = arr

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "GrayImage":
        """Build an image from a flat row-major sequence of gray values."""
        flat = np.asarray(values)
        if flat.ndim != 1:
            raise ValueError("from_flat expects a flat sequence")
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} values for {width}x{height}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @property
    def pixels(self) -> np.ndarray:
        """Read-only (height, width) uint8 array."""
        return self._pixels

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self._pixels, other._pixels)

    __hash__ = None  # mutable-by-content semantics for ==, not hashable

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


class Kernel:
    """Normalized odd-sized square convolution kernel (weights sum to 1)."""

    __slots__ = ("_weights",)

    def __init__(self, weights) -> None:
        arr = np.asarray(weights, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("kernel weights must form a square 2-D array")
        if arr.shape[0] % 2 == 0 or arr.shape[0] < 1:
            raise ValueError(f"kernel size must be odd and >= 1, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("kernel weights must be finite")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"kernel weights must sum to 1 within 1e-12, got {total!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        self._weights = arr

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def size(self) -> int:
        return self._weights.shape[0]

    def __repr__(self) -> str:
        return f"Kernel({self.size}x{self.size})"


def binomial3() -> Kernel:
    """3x3 binomial low-pass kernel, (1/16) * [[1,2,1],[2,4,2],[1,2,1]]."""
    return Kernel(np.array([[1, 2, 1], [2, 4, 2], [1, 2, 1]], dtype=np.float64) / 16.0)


def round_half_away(x):
    """Round to nearest integer, ties away from zero. Returns float64."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_u8(x) -> np.ndarray:
    """Round half away from zero, clamp to [0, 255], return uint8."""
    return np.clip(round_half_away(x), 0.0, 255.0).astype(np.uint8)


def block_average(img: GrayImage) -> GrayImage:
    """Halve both dimensions by averaging disjoint 2x2 blocks.

    Output pixel (x, y) is the rounded mean of input pixels
    (2x, 2y), (2x+1, 2y), (2x, 2y+1), (2x+1, 2y+1). Both input dimensions
    must be even; crop with :func:`crop_even` first.
    """
    h, w = img.height, img.width
    if h % 2 or w % 2:
        raise ValueError(f"block_average requires even dimensions, got {w}x{h}")
    sums = img.pixels.reshape(h // 2, 2, w // 2, 2).sum(axis=(1, 3), dtype=np.int64)
    return GrayImage(quantize_u8(sums / 4.0))


def crop_even(img: GrayImage) -> GrayImage:
    """Drop the last column/row when width/height is odd; identity otherwise."""
    w = img.width - img.width % 2
    h = img.height - img.height % 2
    if w == 0 or h == 0:
        raise DegenerateImageError(
            f"cropping {img.width}x{img.height} to even dimensions would reach zero"
        )
    if w == img.width and h == img.height:
        return img
    return GrayImage(img.pixels[:h, :w])


def crop_to_multiple(img: GrayImage, factor: int) -> GrayImage:
    """Crop right/bottom edges so both dimensions are multiples of `factor`."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    w = img.width - img.width % factor
    h = img.height - img.height % factor
    if w == 0 or h == 0:
        raise DegenerateImageError(
            f"cropping {img.width}x{img.height} to a multiple of {factor} would reach zero"
        )
    if w == img.width and h == img.height:
        return img
    return GrayImage(img.pixels[:h, :w])


def _reflect_indices(n: int, pad: int) -> np.ndarray:
    # Mirror without repeating the edge pixel: for n >= 2 index sequence has
    # period 2n-2 (e.g. n=4: 3 2 1 | 0 1 2 3 | 2 1 0). A 1-pixel axis maps
    # everything to that pixel.
    idx = np.arange(-pad, n + pad)
    if n == 1:
        return np.zeros_like(idx)
    period = 2 * n - 2
    idx = np.mod(idx, period)
    return np.where(idx < n, idx, period - idx)


def convolve(img: GrayImage, kernel: Kernel, passes: int = 1) -> GrayImage:
    """Convolve `passes` times with reflect padding.

    Each pass accumulates in float64, then rounds half away from zero and
    clamps to [0, 255] before the next pass. Border samples mirror the image
    without repeating the edge pixel. True convolution (the kernel is
    flipped); for the symmetric kernels used in this package this matches
    plain cross-correlation.
    """
    if passes < 1:
        raise ValueError(f"passes must be >= 1, got {passes}")
    k = kernel.size // 2
    flipped = kernel.weights[::-1, ::-1]
    ry = _reflect_indices(img.height, k)
    rx = _reflect_indices(img.width, k)
    out = img.pixels
    for _ in range(passes):
        padded = out[np.ix_(ry, rx)].astype(np.float64)
        windows = sliding_window_view(padded, (kernel.size, kernel.size))
        acc = np.einsum("ijkl,kl->ij", windows, flipped)
        out = quantize_u8(acc)
    return GrayImage(out)


def mse(a: GrayImage, b: GrayImage) -> float:
    """Mean squared pixel difference in real arithmetic."""
    if a.width != b.width or a.height != b.height:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return float(np.mean(diff * diff, dtype=np.float64))


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; +inf when the images are identical."""
    m = mse(a, b)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / m)
