"""Round-trip benchmark harness: tree upscaler vs classical baselines.

Protocol: area-downsample a ground-truth image by the zoom factor, restore it
with each method, and score the restoration against the original. The tree
methods train only on the downsampled input, so the single-image constraint
holds. Quality figures are PSNR/MSE; there is no reference-free mode.

Reports are written deterministically: fixed record ordering (image id, then
factor, then method name) and, by default, zeroed wall-time fields, so a
rerun on unchanged inputs is byte-identical. Pass include_timings=True (CLI:
--timings) to write measured times instead.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from mlzoom.errors import DegenerateImageError, MLZoomError
from mlzoom.image import GrayImage, crop_to_multiple, mse, psnr
from mlzoom.imgio import load_image
from mlzoom.resample import RESAMPLE_METHODS, area_downsample, resample_baseline
from mlzoom.upscale import UpscaleConfig, postfilter, upscale

REPORT_FORMAT_VERSION = 1

# lexicographic; also the record order within one (image, factor) cell
BENCH_METHODS = ("bicubic", "bilinear", "ml", "ml_noblur", "nearest")

_CSV_HEADER = "image_id,method,factor,psnr_db,mse,train_r2,wall_time_s"


@dataclass(frozen=True)
class EvalRecord:
    image_id: str
    method: str
    factor: int
    psnr: float
    mse: float
    train_r2: float | None  # tree methods only; None for classical baselines
    wall_time: float


@dataclass(frozen=True, eq=False)
class EvalReport:
    records: tuple[EvalRecord, ...]
    aggregates: dict
    config: dict
    skipped: tuple[dict, ...]


def roundtrip_eval(img: GrayImage, factor: int, cfg: UpscaleConfig | None = None,
                   image_id: str = "") -> list[EvalRecord]:
    """Score every method on one image at one factor.

    The image dimensions must be divisible by the factor (crop first, e.g.
    with crop_to_multiple). Returns one record per method in BENCH_METHODS
    order.
    """
    cfg = cfg or UpscaleConfig()
    if img.width % factor or img.height % factor:
        raise ValueError(
            f"{img.width}x{img.height} not divisible by factor {factor}; crop first"
        )
    low = area_downsample(img, img.width // factor, img.height // factor)

    by_method: dict[str, EvalRecord] = {}

    t0 = time.perf_counter()
    raw_cfg = _with_blur(cfg, False)
    result = upscale(low, factor, raw_cfg)
    t_raw = time.perf_counter() - t0
    train_r2 = result.fit_report.r2_uniform
    by_method["ml_noblur"] = _record(image_id, "ml_noblur", factor, img, result.image,
                                     train_r2, t_raw)

    t0 = time.perf_counter()
    blurred = postfilter(result.image, _with_blur(cfg, True))
    t_blur = time.perf_counter() - t0
    by_method["ml"] = _record(image_id, "ml", factor, img, blurred, train_r2, t_raw + t_blur)

    for method in RESAMPLE_METHODS:
        t0 = time.perf_counter()
        restored = resample_baseline(low, factor, method)
        elapsed = time.perf_counter() - t0
        by_method[method] = _record(image_id, method, factor, img, restored, None, elapsed)

    return [by_method[m] for m in BENCH_METHODS]


def _with_blur(cfg: UpscaleConfig, enabled: bool) -> UpscaleConfig:
    if cfg.blur_enabled == enabled:
        return cfg
    return replace(cfg, blur_enabled=enabled)


def _record(image_id, method, factor, truth, restored, train_r2, elapsed) -> EvalRecord:
    return EvalRecord(
        image_id=image_id,
        method=method,
        factor=factor,
        psnr=psnr(truth, restored),
        mse=mse(truth, restored),
        train_r2=train_r2,
        wall_time=elapsed,
    )


def run_corpus(corpus_dir, factors, cfg: UpscaleConfig | None = None, *,
               out_json=None, out_csv=None, threads: int = 1,
               include_timings: bool = False) -> EvalReport:
    """Evaluate every loadable .pgm/.png in a directory at every factor.

    Unreadable files and images too small for a factor become skip entries,
    not failures. Record order and file contents are independent of the
    thread count.
    """
    cfg = cfg or UpscaleConfig()
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory {corpus_dir} does not exist")
    factors = [int(f) for f in factors]
    if not factors or any(f < 2 for f in factors):
        raise ValueError(f"factors must all be >= 2, got {factors}")
    paths = sorted(
        (p for p in corpus_dir.iterdir() if p.suffix.lower() in (".pgm", ".png")),
        key=lambda p: p.name,
    )
    if not paths:
        raise MLZoomError(f"no images found in {corpus_dir}")

    def evaluate(path: Path):
        records, skips = [], []
        try:
            img = load_image(path)
        except (MLZoomError, OSError) as exc:
            return [], [{"image_id": path.name, "reason": str(exc)}]
        for factor in factors:
            try:
                cropped = crop_to_multiple(img, factor)
                records.extend(roundtrip_eval(cropped, factor, cfg, image_id=path.name))
            except (DegenerateImageError, ValueError) as exc:
                skips.append({"image_id": path.name, "reason": f"factor {factor}: {exc}"})
        return records, skips

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(evaluate, paths))
    else:
        outcomes = [evaluate(p) for p in paths]

    records = [r for recs, _ in outcomes for r in recs]
    skipped = [s for _, skips in outcomes for s in skips]
    records.sort(key=lambda r: (r.image_id, r.factor, r.method))

    report = EvalReport(
        records=tuple(records),
        aggregates=compute_aggregates(records),
        config=_config_snapshot(cfg, factors),
        skipped=tuple(skipped),
    )
    if out_json is not None:
        write_report_json(report, out_json, include_timings=include_timings)
    if out_csv is not None:
        write_report_csv(report, out_csv, include_timings=include_timings)
    return report


def compute_aggregates(records) -> dict:
    """Per-method mean PSNR for each factor, straight mean over records."""
    means: dict[str, dict[str, float]] = {}
    for method in BENCH_METHODS:
        per_factor: dict[str, float] = {}
        factors = sorted({r.factor for r in records if r.method == method})
        for factor in factors:
            vals = [r.psnr for r in records if r.method == method and r.factor == factor]
            per_factor[str(factor)] = sum(vals) / len(vals)
        if per_factor:
            means[method] = per_factor
    return {"mean_psnr_db": means}


def _config_snapshot(cfg: UpscaleConfig, factors) -> dict:
    # deliberately excludes thread count: it must not affect outputs
    return {
        "blur_enabled": cfg.blur_enabled,
        "blur_passes": cfg.blur_passes,
        "blur_kernel": [[float(v) for v in row] for row in cfg.blur_kernel.weights],
        "augment_transforms": list(cfg.augment_transforms),
        "retrain_per_step": cfg.retrain_per_step,
        "zoom_strategy": cfg.zoom_strategy,
        "factors": list(factors),
        "methods": list(BENCH_METHODS),
    }


def write_report_json(report: EvalReport, path, *, include_timings: bool = False) -> None:
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "config": report.config,
        "records": [
            {
                "image_id": r.image_id,
                "method": r.method,
                "factor": r.factor,
                "psnr_db": r.psnr,
                "mse": r.mse,
                "train_r2": r.train_r2,
                "wall_time_s": r.wall_time if include_timings else 0.0,
            }
            for r in report.records
        ],
        "aggregates": report.aggregates,
        "skipped": list(report.skipped),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="ascii")


def write_report_csv(report: EvalReport, path, *, include_timings: bool = False) -> None:
    lines = [_CSV_HEADER]
    for r in report.records:
        wall = r.wall_time if include_timings else 0.0
        train_r2 = "" if r.train_r2 is None else repr(r.train_r2)
        lines.append(
            f"{r.image_id},{r.method},{r.factor},{r.psnr!r},{r.mse!r},{train_r2},{wall!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
