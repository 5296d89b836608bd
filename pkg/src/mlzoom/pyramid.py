"""Averaging pyramid construction and training-pair extraction.

A pyramid repeatedly halves an image by 2x2 block averaging (dropping a
trailing odd row/column first) until one dimension reaches a single pixel.
Every coarse pixel, at every level, pairs with the 2x2 fine-level block it
averages: that parent gray value plus its four children is one training
sample, and the full set of them is the training data mined from the image.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from mlzoom.errors import DegenerateImageError
from mlzoom.image import GrayImage, block_average, crop_even

AUGMENT_TRANSFORMS = ("flip_h", "flip_v", "rot90", "rot180", "rot270")

_PAIR_CSV_HEADER = ["feature", "tl", "tr", "bl", "br", "level"]


@dataclass(frozen=True)
class AveragingPyramid:
    """Level 0 is the source image; level k+1 = block_average(crop_even(level k))."""

    levels: tuple[GrayImage, ...]
    source_width: int
    source_height: int

    @property
    def n_levels(self) -> int:
        return len(self.levels)


class TrainPair(NamedTuple):
    feature: int
    labels: tuple[int, int, int, int]  # TL, TR, BL, BR (row-major in the 2x2 block)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Columnar store of training pairs plus the coarse level each came from."""

    features: np.ndarray  # (n,) uint8
    labels: np.ndarray  # (n, 4) uint8, columns TL, TR, BL, BR
    levels: np.ndarray  # (n,) int32, coarse (feature) level index

    def __len__(self) -> int:
        return int(self.features.size)

    def __iter__(self) -> Iterator[TrainPair]:
        for f, row in zip(self.features, self.labels):
            yield TrainPair(int(f), tuple(int(v) for v in row))

    @classmethod
    def concat(cls, sets) -> "TrainingSet":
        sets = list(sets)
        if not sets:
            raise ValueError("nothing to concatenate")
        return cls(
            features=np.concatenate([s.features for s in sets]),
            labels=np.concatenate([s.labels for s in sets]),
            levels=np.concatenate([s.levels for s in sets]),
        )


def build_pyramid(img: GrayImage) -> AveragingPyramid:
    """Average down to a minimal level; requires both dimensions >= 2."""
    if min(img.width, img.height) < 2:
        raise DegenerateImageError(
            f"cannot build a pyramid from a {img.width}x{img.height} image"
        )
    levels = [img]
    while min(levels[-1].width, levels[-1].height) >= 2:
        levels.append(block_average(crop_even(levels[-1])))
    return AveragingPyramid(
        levels=tuple(levels), source_width=img.width, source_height=img.height
    )


def extract_pairs(pyramid: AveragingPyramid) -> TrainingSet:
    """Emit one (parent -> 4 children) pair per coarse pixel, all levels.

    Pairs are ordered by coarse level ascending, then row-major over the
    coarse pixels. Children come from the even-cropped finer level, so pixels
    dropped by cropping are never referenced.
    """
    features = []
    labels = []
    level_ids = []
    for k in range(pyramid.n_levels - 1):
        fine = crop_even(pyramid.levels[k]).pixels
        coarse = pyramid.levels[k + 1].pixels
        features.append(coarse.ravel())
        labels.append(
            np.stack(
                [
                    fine[0::2, 0::2].ravel(),
                    fine[0::2, 1::2].ravel(),
                    fine[1::2, 0::2].ravel(),
                    fine[1::2, 1::2].ravel(),
                ],
                axis=1,
            )
        )
        level_ids.append(np.full(coarse.size, k + 1, dtype=np.int32))
    return TrainingSet(
        features=np.concatenate(features),
        labels=np.concatenate(labels),
        levels=np.concatenate(level_ids),
    )


_TRANSFORM_FNS = {
    "flip_h": np.fliplr,
    "flip_v": np.flipud,
    "rot90": lambda p: np.rot90(p, 1),
    "rot180": lambda p: np.rot90(p, 2),
    "rot270": lambda p: np.rot90(p, 3),
}


def augment(img: GrayImage, transforms=()) -> list[GrayImage]:
    """Return the image plus one exact-permutation copy per requested transform.

    Transforms are applied in the fixed order flip_h, flip_v, rot90, rot180,
    rot270 regardless of how the set is spelled, so output order is stable.
    """
    requested = set(transforms)
    unknown = requested - set(AUGMENT_TRANSFORMS)
    if unknown:
        raise ValueError(
            f"unknown transforms {sorted(unknown)}, expected subset of {AUGMENT_TRANSFORMS}"
        )
    out = [img]
    for name in AUGMENT_TRANSFORMS:
        if name in requested:
            out.append(GrayImage(np.ascontiguousarray(_TRANSFORM_FNS[name](img.pixels))))
    return out


def dump_pairs(ts: TrainingSet, path) -> None:
    """Write the pair CSV: header feature,tl,tr,bl,br,level, one row per pair."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_PAIR_CSV_HEADER)
        for f, row, lvl in zip(ts.features, ts.labels, ts.levels):
            writer.writerow([int(f), int(row[0]), int(row[1]), int(row[2]), int(row[3]), int(lvl)])


def load_pairs(path) -> TrainingSet:
    """Parse a CSV written by :func:`dump_pairs` back into a TrainingSet."""
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _PAIR_CSV_HEADER:
            raise ValueError(f"{path}: unexpected pair CSV header {header!r}")
        rows = [[int(v) for v in row] for row in reader]
    arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), 6)
    return TrainingSet(
        features=arr[:, 0].astype(np.uint8),
        labels=arr[:, 1:5].astype(np.uint8),
        levels=arr[:, 5].astype(np.int32),
    )
