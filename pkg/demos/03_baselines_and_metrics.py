"""
Classical baselines and quality metrics
=======================================

Nearest, bilinear, and Catmull-Rom bicubic resamplers share the library's
half-pixel-center convention, and PSNR/MSE make restoration quality
comparable across methods. Here each method restores an image from its
2x box-downsampled version.
"""

from pathlib import Path

from mlzoom import (
    RESAMPLE_METHODS,
    UpscaleConfig,
    area_downsample,
    load_image,
    postfilter,
    psnr,
    resample_baseline,
    upscale,
)

DATA = Path(__file__).resolve().parent.parent / "data"

img = load_image(DATA / "pond.png")
low = area_downsample(img, img.width // 2, img.height // 2)
print(f"ground truth {img.width}x{img.height}, degraded input {low.width}x{low.height}")
print(f"{'method':<12} {'psnr_db':>8}")

for method in RESAMPLE_METHODS:
    restored = resample_baseline(low, 2, method)
    print(f"{method:<12} {psnr(img, restored):>8.2f}")

raw = upscale(low, 2, UpscaleConfig(blur_enabled=False))
print(f"{'tree':<12} {psnr(img, raw.image):>8.2f}")
smoothed = postfilter(raw.image, UpscaleConfig())
print(f"{'tree+blur':<12} {psnr(img, smoothed):>8.2f}")
