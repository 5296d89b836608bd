#!/usr/bin/env python3
"""Regenerate the bundled smooth grayscale corpus under data/.

The corpus is procedurally generated (seeded, deterministic), so the PNGs
checked into data/ can always be reproduced bit-exactly by rerunning this
script.
"""

from pathlib import Path

from mlzoom.imgio import save_image
from mlzoom.synth import smooth_scene

SCENES = {
    "blobs.png": 11,
    "dunes.png": 23,
    "nebula.png": 37,
    "pond.png": 41,
    "terrain.png": 53,
    "vignette.png": 67,
}


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "data"
    out_dir.mkdir(exist_ok=True)
    for name, seed in sorted(SCENES.items()):
        save_image(smooth_scene(seed, size=256), out_dir / name)
        print(f"wrote data/{name} (seed {seed})")


if __name__ == "__main__":
    main()
