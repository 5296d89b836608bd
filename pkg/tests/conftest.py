from pathlib import Path

import numpy as np
import pytest

from mlzoom.image import GrayImage
from mlzoom.synth import radial_gradient

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    assert DATA_DIR.is_dir(), "bundled corpus missing; run tools/generate_corpus.py"
    return DATA_DIR


@pytest.fixture(scope="session")
def gradient256() -> GrayImage:
    return radial_gradient(256)


def random_image(rng: np.random.Generator, width: int, height: int) -> GrayImage:
    return GrayImage(rng.integers(0, 256, size=(height, width)).astype(np.uint8))
