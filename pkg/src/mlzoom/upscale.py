"""End-to-end upscaling: train on the input image itself, expand pixels 2x2,
iterate to the requested zoom, and blur.

Each 2x zoom step replaces every input pixel with the 2x2 block the tree
predicts for its gray value, quantized back to 8 bits so the next step's
queries stay on the trained feature scale. Non-power-of-two factors run the
next power of two and then area-downsample to the exact target size. The
double-pass low-pass filter runs last.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from mlzoom.cart import FitReport, RegressionTree, fit, prediction_table, score_r2
from mlzoom.errors import ResourceLimitError
from mlzoom.image import GrayImage, Kernel, binomial3, convolve, quantize_u8
from mlzoom.pyramid import (
    AUGMENT_TRANSFORMS,
    TrainingSet,
    augment,
    build_pyramid,
    extract_pairs,
)
from mlzoom.resample import area_downsample

ZOOM_STRATEGIES = ("pow2_then_downsample",)


@dataclass(frozen=True)
class UpscaleConfig:
    blur_enabled: bool = True
    blur_passes: int = 2
    blur_kernel: Kernel = field(default_factory=binomial3)
    augment_transforms: tuple[str, ...] = ()
    retrain_per_step: bool = False
    zoom_strategy: str = "pow2_then_downsample"
    pixel_budget: int = 1 << 26

    def __post_init__(self) -> None:
        if self.blur_enabled and self.blur_passes < 1:
            raise ValueError("blur_passes must be >= 1 when blur is enabled")
        if self.zoom_strategy not in ZOOM_STRATEGIES:
            raise ValueError(
                f"unknown zoom_strategy {self.zoom_strategy!r}, expected one of {ZOOM_STRATEGIES}"
            )
        transforms = tuple(self.augment_transforms)
        unknown = set(transforms) - set(AUGMENT_TRANSFORMS)
        if unknown:
            raise ValueError(f"unknown augment transforms {sorted(unknown)}")
        object.__setattr__(self, "augment_transforms", transforms)
        if self.pixel_budget < 1:
            raise ValueError("pixel_budget must be positive")


@dataclass(frozen=True, eq=False)
class ZoomResult:
    image: GrayImage
    factor: int
    steps_applied: int
    fit_report: FitReport
    timing: dict[str, float]
    tree: RegressionTree  # the tree fitted on the input image


def training_set_from_image(img: GrayImage, cfg: UpscaleConfig) -> TrainingSet:
    """Pairs from the image plus its augmented variants, concatenated."""
    variants = augment(img, cfg.augment_transforms)
    return TrainingSet.concat(extract_pairs(build_pyramid(v)) for v in variants)


def train_from_image(img: GrayImage, cfg: UpscaleConfig | None = None):
    """Mine pairs from the image, fit a tree, and score it on its own data.

    Returns (tree, fit_report). Deterministic for identical inputs.
    """
    cfg = cfg or UpscaleConfig()
    ts = training_set_from_image(img, cfg)
    tree = fit(ts)
    return tree, score_r2(tree, ts)


def upscale_once(img: GrayImage, tree: RegressionTree) -> GrayImage:
    """Expand every pixel into its predicted 2x2 block (TL, TR, BL, BR)."""
    table = quantize_u8(prediction_table(tree))
    p = img.pixels
    out = np.empty((img.height * 2, img.width * 2), dtype=np.uint8)
    out[0::2, 0::2] = table[:, 0][p]
    out[0::2, 1::2] = table[:, 1][p]
    out[1::2, 0::2] = table[:, 2][p]
    out[1::2, 1::2] = table[:, 3][p]
    return GrayImage(out)


def postfilter(img: GrayImage, cfg: UpscaleConfig) -> GrayImage:
    """The configured low-pass filter; identity when blur is disabled."""
    if not cfg.blur_enabled:
        return img
    return convolve(img, cfg.blur_kernel, cfg.blur_passes)


def upscale(img: GrayImage, factor: int, cfg: UpscaleConfig | None = None) -> ZoomResult:
    """Upscale by an integer factor >= 2.

    Runs ceil(log2(factor)) tree-prediction doublings, downsamples to the
    exact target size when the factor is not a power of two, then applies the
    post-filter. The tree is trained once on the input unless
    retrain_per_step refits it on each intermediate image.
    """
    cfg = cfg or UpscaleConfig()
    if not isinstance(factor, (int, np.integer)) or factor < 2:
        raise ValueError(f"zoom factor must be an integer >= 2, got {factor!r}")
    factor = int(factor)
    steps = (factor - 1).bit_length()  # ceil(log2(factor))
    peak_pixels = (img.width << steps) * (img.height << steps)
    if peak_pixels > cfg.pixel_budget:
        raise ResourceLimitError(
            f"zoom {factor} on {img.width}x{img.height} needs {peak_pixels} intermediate "
            f"pixels, over the budget of {cfg.pixel_budget}"
        )

    timing: dict[str, float] = {}
    t_total = time.perf_counter()

    t0 = time.perf_counter()
    tree, report = train_from_image(img, cfg)
    input_tree = tree
    timing["train_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    current = img
    for step in range(steps):
        current = upscale_once(current, tree)
        if cfg.retrain_per_step and step < steps - 1:
            tree, _ = train_from_image(current, cfg)
    timing["predict_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if (1 << steps) != factor:
        current = area_downsample(current, img.width * factor, img.height * factor)
    timing["downsample_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    current = postfilter(current, cfg)
    timing["blur_s"] = time.perf_counter() - t0

    timing["total_s"] = time.perf_counter() - t_total
    return ZoomResult(
        image=current,
        factor=factor,
        steps_applied=steps,
        fit_report=report,
        timing=timing,
        tree=input_tree,
    )
