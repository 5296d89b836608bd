"""
Mining training data from a single image
========================================

An averaging pyramid repeatedly halves an image by taking the mean of each
disjoint 2x2 block. Walking back up, every coarse pixel is the average of
the 2x2 block below it, so each one yields a ready-made supervised sample
(parent gray value -> the four child values). One 256x256 image produces
21845 such pairs without any external dataset.
"""

from pathlib import Path

import numpy as np

from mlzoom import build_pyramid, dump_pairs, extract_pairs, load_image

DATA = Path(__file__).resolve().parent.parent / "data"
OUT = Path("demo_out")
OUT.mkdir(exist_ok=True)

img = load_image(DATA / "dunes.png")
print(f"source image: {img.width}x{img.height}")

# pyramid levels halve until a single row/column remains
pyr = build_pyramid(img)
for k, level in enumerate(pyr.levels):
    print(f"  level {k}: {level.width}x{level.height}")

ts = extract_pairs(pyr)
print(f"training pairs: {len(ts)}")
print(f"pairs per coarse level: {np.bincount(ts.levels)[1:]}")

# every parent is the rounded mean of its four children by construction
means = ts.labels.astype(np.int64).sum(axis=1) / 4.0
assert np.array_equal(np.floor(means + 0.5).astype(np.uint8), ts.features)
print("verified: every feature equals the rounded mean of its labels")

dump_pairs(ts, OUT / "dunes_pairs.csv")
print(f"wrote {OUT / 'dunes_pairs.csv'}")
