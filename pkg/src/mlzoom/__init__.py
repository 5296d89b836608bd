"""mlzoom: self-trained decision-tree upscaler for 8-bit grayscale images.

The library mines training data from the input image itself (an averaging
pyramid pairs every coarse pixel with the 2x2 block it averages), fits a
multi-output regression tree on those pairs, and zooms by expanding each
pixel into its predicted 2x2 block. Classical resamplers and a round-trip
benchmark harness are included for comparison.
"""

from mlzoom.bench import (
    BENCH_METHODS,
    EvalRecord,
    EvalReport,
    compute_aggregates,
    roundtrip_eval,
    run_corpus,
    write_report_csv,
    write_report_json,
)
from mlzoom.cart import FitReport, RegressionTree, load_model, prediction_table, save_model, score_r2
from mlzoom.errors import (
    DegenerateImageError,
    DimensionMismatchError,
    ImageFormatError,
    MLZoomError,
    ModelFormatError,
    ResourceLimitError,
)
from mlzoom.image import (
    GrayImage,
    Kernel,
    binomial3,
    block_average,
    convolve,
    crop_even,
    crop_to_multiple,
    mse,
    psnr,
    quantize_u8,
    round_half_away,
)
from mlzoom.imgio import load_image, save_image
from mlzoom.pyramid import (
    AUGMENT_TRANSFORMS,
    AveragingPyramid,
    TrainingSet,
    TrainPair,
    augment,
    build_pyramid,
    dump_pairs,
    extract_pairs,
    load_pairs,
)
from mlzoom.resample import RESAMPLE_METHODS, area_downsample, resample_baseline
from mlzoom.upscale import (
    UpscaleConfig,
    ZoomResult,
    postfilter,
    train_from_image,
    training_set_from_image,
    upscale,
    upscale_once,
)

__version__ = "0.1.0"

__all__ = [
    "AUGMENT_TRANSFORMS",
    "AveragingPyramid",
    "BENCH_METHODS",
    "DegenerateImageError",
    "DimensionMismatchError",
    "EvalRecord",
    "EvalReport",
    "FitReport",
    "GrayImage",
    "ImageFormatError",
    "Kernel",
    "MLZoomError",
    "ModelFormatError",
    "RESAMPLE_METHODS",
    "RegressionTree",
    "ResourceLimitError",
    "TrainPair",
    "TrainingSet",
    "UpscaleConfig",
    "ZoomResult",
    "area_downsample",
    "augment",
    "binomial3",
    "block_average",
    "build_pyramid",
    "compute_aggregates",
    "convolve",
    "crop_even",
    "crop_to_multiple",
    "dump_pairs",
    "extract_pairs",
    "load_image",
    "load_model",
    "load_pairs",
    "mse",
    "postfilter",
    "prediction_table",
    "psnr",
    "quantize_u8",
    "resample_baseline",
    "round_half_away",
    "roundtrip_eval",
    "run_corpus",
    "save_image",
    "save_model",
    "score_r2",
    "train_from_image",
    "training_set_from_image",
    "upscale",
    "upscale_once",
    "write_report_csv",
    "write_report_json",
]
