"""Command-line front end.

Subcommands: upscale, pairs, pyramid, model, bench. Exit codes: 0 success,
1 usage error, 2 runtime/I-O error. Every run is deterministic; file outputs
are byte-identical across reruns and thread counts. Timing fields in report
files are zeroed unless --timings is given (stdout may always show real
times).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from mlzoom.bench import run_corpus
from mlzoom.cart import save_model
from mlzoom.errors import MLZoomError
from mlzoom.imgio import load_image, save_image
from mlzoom.pyramid import AUGMENT_TRANSFORMS, build_pyramid, dump_pairs, extract_pairs
from mlzoom.upscale import UpscaleConfig, train_from_image, upscale

REPORT_FORMAT_VERSION = 1


class _Parser(argparse.ArgumentParser):
    # every flag has exactly one spelling: no prefix abbreviations
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    # usage problems exit 1; argparse's default is 2, reserved here for runtime errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _zoom(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"zoom must be an integer, got {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"zoom must be >= 2, got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _augment_list(text: str) -> tuple[str, ...]:
    names = tuple(n for n in text.split(",") if n)
    unknown = set(names) - set(AUGMENT_TRANSFORMS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown transforms {sorted(unknown)}, choose from {','.join(AUGMENT_TRANSFORMS)}"
        )
    return names


def _factor_list(text: str) -> list[int]:
    try:
        factors = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"factors must be integers, got {text!r}") from None
    if not factors or any(f < 2 for f in factors):
        raise argparse.ArgumentTypeError(f"factors must all be >= 2, got {text!r}")
    return factors


def _default_threads() -> int:
    env = os.environ.get("MLZOOM_THREADS")
    if env is not None:
        try:
            value = int(env)
            if value >= 1:
                return value
        except ValueError:
            pass
        print(f"mlzoom: ignoring invalid MLZOOM_THREADS={env!r}", file=sys.stderr)
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlzoom", description=__doc__)
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="cap worker threads (default: MLZOOM_THREADS or hardware)")
    parser.add_argument("--timings", action="store_true",
                        help="write measured wall times into report files "
                             "(default writes 0.0 so reruns are byte-identical)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    up = sub.add_parser("upscale", help="train on the input image and zoom it")
    up.add_argument("--input", required=True, help="input image (.pgm or .png)")
    up.add_argument("--output", required=True, help="output image path")
    up.add_argument("--zoom", required=True, type=_zoom, help="integer zoom factor >= 2")
    up.add_argument("--no-blur", action="store_true", help="skip the post-filter")
    up.add_argument("--blur-passes", type=_positive_int, default=2)
    up.add_argument("--augment", type=_augment_list, default=(),
                    help=f"comma list from {{{','.join(AUGMENT_TRANSFORMS)}}}")
    up.add_argument("--retrain-per-step", action="store_true",
                    help="refit on each intermediate image between 2x steps")
    up.add_argument("--save-model", help="also write the fitted tree (JSON)")
    up.add_argument("--report", help="also write a JSON fit/timing report")

    pairs = sub.add_parser("pairs", help="dump the training pairs as CSV")
    pairs.add_argument("--input", required=True)
    pairs.add_argument("--out", required=True)

    pyr = sub.add_parser("pyramid", help="dump every pyramid level as PNG")
    pyr.add_argument("--input", required=True)
    pyr.add_argument("--out-dir", required=True)

    model = sub.add_parser("model", help="train on the input image and save the tree")
    model.add_argument("--input", required=True)
    model.add_argument("--out", required=True)

    bench = sub.add_parser("bench", help="round-trip benchmark over an image directory")
    bench.add_argument("--corpus", required=True)
    bench.add_argument("--factors", type=_factor_list, default=[2, 4],
                       help="comma list of zoom factors (default 2,4)")
    bench.add_argument("--out", required=True, help="JSON report path")
    bench.add_argument("--csv", help="optional CSV table path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is None:
        args.threads = _default_threads()
    handler = {
        "upscale": cmd_upscale,
        "pairs": cmd_pairs,
        "pyramid": cmd_pyramid,
        "model": cmd_model,
        "bench": cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except (MLZoomError, OSError, ValueError) as exc:
        print(f"mlzoom: error: {exc}", file=sys.stderr)
        return 2


def cmd_upscale(args) -> int:
    img = load_image(args.input)
    cfg = UpscaleConfig(
        blur_enabled=not args.no_blur,
        blur_passes=args.blur_passes,
        augment_transforms=tuple(args.augment),
        retrain_per_step=args.retrain_per_step,
    )
    result = upscale(img, args.zoom, cfg)
    save_image(result.image, args.output)
    if args.save_model:
        save_model(result.tree, args.save_model)
    report = result.fit_report
    print(
        f"{args.input} {img.width}x{img.height} -> {args.output} "
        f"{result.image.width}x{result.image.height} (zoom {args.zoom}, "
        f"{result.steps_applied} steps, train r2 {report.r2_uniform:.6f})"
    )
    if args.timings:
        pretty = ", ".join(f"{k}={v:.3f}" for k, v in sorted(result.timing.items()))
        print(f"timings: {pretty}")
    if args.report:
        _write_upscale_report(args, img, result)
    return 0


def _write_upscale_report(args, img, result) -> None:
    timing = result.timing if args.timings else {k: 0.0 for k in result.timing}
    report = result.fit_report
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "input": {"path": str(args.input), "width": img.width, "height": img.height},
        "output": {
            "path": str(args.output),
            "width": result.image.width,
            "height": result.image.height,
        },
        "zoom": result.factor,
        "steps_applied": result.steps_applied,
        "train": {
            "n_samples": result.tree.n_samples,
            "n_leaves": report.n_leaves,
            "depth": report.depth,
            "r2_per_output": list(report.r2_per_output),
            "r2_uniform": report.r2_uniform,
        },
        "timings_s": {k: timing[k] for k in sorted(timing)},
    }
    Path(args.report).write_text(json.dumps(doc, indent=2) + "\n", encoding="ascii")


def cmd_pairs(args) -> int:
    img = load_image(args.input)
    ts = extract_pairs(build_pyramid(img))
    dump_pairs(ts, args.out)
    print(f"{args.input}: wrote {len(ts)} pairs to {args.out}")
    return 0


def cmd_pyramid(args) -> int:
    img = load_image(args.input)
    pyr = build_pyramid(img)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for k, level in enumerate(pyr.levels):
        save_image(level, out_dir / f"level_{k:02d}.png")
    print(f"{args.input}: wrote {pyr.n_levels} levels to {out_dir}")
    return 0


def cmd_model(args) -> int:
    img = load_image(args.input)
    tree, report = train_from_image(img, UpscaleConfig())
    save_model(tree, args.out)
    print(
        f"{args.input}: model with {tree.n_leaves} leaves, depth {tree.depth}, "
        f"train r2 {report.r2_uniform:.6f} -> {args.out}"
    )
    return 0


def cmd_bench(args) -> int:
    report = run_corpus(
        args.corpus,
        args.factors,
        UpscaleConfig(),
        out_json=args.out,
        out_csv=args.csv,
        threads=args.threads,
        include_timings=args.timings,
    )
    print(f"{'method':<10} {'factor':>6} {'mean_psnr_db':>14}")
    means = report.aggregates["mean_psnr_db"]
    for method in sorted(means):
        for factor in sorted(means[method], key=int):
            print(f"{method:<10} {factor:>6} {means[method][factor]:>14.4f}")
    if report.skipped:
        print(f"skipped {len(report.skipped)} inputs", file=sys.stderr)
        for entry in report.skipped:
            print(f"  {entry['image_id']}: {entry['reason']}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
