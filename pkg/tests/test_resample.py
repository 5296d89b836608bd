from fractions import Fraction

import numpy as np
import pytest

from mlzoom.errors import DegenerateImageError
from mlzoom.image import GrayImage, block_average, quantize_u8
from mlzoom.resample import area_downsample, resample_baseline

from conftest import random_image


def area_downsample_oracle(pixels: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Exact-rational area averaging, quantized the same way as the library."""
    h, w = pixels.shape
    ry, rx = Fraction(h, out_h), Fraction(w, out_w)
    out = np.zeros((out_h, out_w), dtype=np.uint8)
    for j in range(out_h):
        for i in range(out_w):
            acc = Fraction(0)
            y0, y1 = j * ry, (j + 1) * ry
            x0, x1 = i * rx, (i + 1) * rx
            for y in range(int(y0), int(np.ceil(float(y1)))):
                for x in range(int(x0), int(np.ceil(float(x1)))):
                    cov_y = min(Fraction(y + 1), y1) - max(Fraction(y), y0)
                    cov_x = min(Fraction(x + 1), x1) - max(Fraction(x), x0)
                    if cov_y > 0 and cov_x > 0:
                        acc += cov_y * cov_x * int(pixels[y, x])
            mean = acc / (rx * ry)
            out[j, i] = quantize_u8(float(mean))
    return out


class TestNearest:
    def test_each_pixel_becomes_a_block(self):
        img = GrayImage.from_flat(1, 2, [0, 255])
        out = resample_baseline(img, 2, "nearest")
        assert out.width == 2 and out.height == 4
        assert out.pixels.ravel().tolist() == [0, 0, 0, 0, 255, 255, 255, 255]

    def test_matches_repeat_oracle(self):
        rng = np.random.default_rng(21)
        for factor in (2, 3, 5):
            img = random_image(rng, 7, 4)
            out = resample_baseline(img, factor, "nearest")
            expected = np.repeat(np.repeat(img.pixels, factor, axis=0), factor, axis=1)
            assert np.array_equal(out.pixels, expected)


class TestLinearAndCubic:
    @pytest.mark.parametrize("method", ["nearest", "bilinear", "bicubic"])
    @pytest.mark.parametrize("factor", [2, 3, 4])
    def test_constant_image(self, method, factor):
        img = GrayImage(np.full((5, 3), 119, dtype=np.uint8))
        out = resample_baseline(img, factor, method)
        assert out.width == 3 * factor and out.height == 5 * factor
        assert np.all(out.pixels == 119)

    @pytest.mark.parametrize("method", ["bilinear", "bicubic"])
    def test_horizontal_ramp_reproduced_within_one(self, method):
        ramp = GrayImage(np.tile(np.arange(0, 160, 10, dtype=np.uint8), (4, 1)))
        for factor in (2, 4):
            out = resample_baseline(ramp, factor, method)
            # the ideal continuation of the ramp at half-pixel-centre coords
            t = (np.arange(out.width) + 0.5) / factor - 0.5
            ideal = np.clip(10.0 * t, 0, 150)
            err = np.abs(out.pixels.astype(float) - ideal[None, :])
            assert err.max() <= 1.0

    def test_bicubic_interior_value_frozen(self):
        # one row 0,10,...,70 upscaled 2x: output column 3 sits at source
        # coordinate 1.25 and Catmull-Rom reproduces the ramp value 12.5
        # exactly, which rounds half away from zero to 13.
        ramp = GrayImage(np.tile(np.arange(0, 80, 10, dtype=np.uint8), (2, 1)))
        out = resample_baseline(ramp, 2, "bicubic")
        assert out.pixels[0, 3] == 13

    def test_values_clamped_after_overshoot(self):
        # a step edge makes Catmull-Rom overshoot both ways; column 9 sits at
        # source coordinate 1.875 where the raw value is 255*W(1.125) = -12.2
        # (clamps to 0) and column 14 at 3.125 undershoots the top (267.2,
        # clamps to 255); a missing clamp would wrap the uint8 cast instead
        img = GrayImage.from_flat(6, 2, [0, 0, 0, 255, 255, 255] * 2)
        out = resample_baseline(img, 4, "bicubic")
        assert out.pixels[0, 9] == 0
        assert out.pixels[0, 14] == 255

    def test_rejects_bad_args(self):
        img = GrayImage.from_flat(1, 1, [0])
        with pytest.raises(ValueError):
            resample_baseline(img, 1, "bicubic")
        with pytest.raises(ValueError):
            resample_baseline(img, 2, "lanczos")


class TestAreaDownsample:
    def test_identity(self):
        rng = np.random.default_rng(31)
        img = random_image(rng, 6, 5)
        assert area_downsample(img, 6, 5) == img

    def test_factor_two_equals_block_average(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            img = random_image(rng, 2 * int(rng.integers(1, 10)), 2 * int(rng.integers(1, 10)))
            halved = area_downsample(img, img.width // 2, img.height // 2)
            assert halved == block_average(img)

    def test_matches_rational_oracle_for_fractional_ratios(self):
        rng = np.random.default_rng(33)
        for out_w, out_h, w, h in [(2, 2, 3, 3), (3, 3, 4, 4), (3, 2, 7, 5), (5, 4, 6, 6)]:
            img = random_image(rng, w, h)
            out = area_downsample(img, out_w, out_h)
            assert np.array_equal(out.pixels, area_downsample_oracle(img.pixels, out_w, out_h))

    def test_constant_fixed_point(self):
        img = GrayImage(np.full((9, 7), 200, dtype=np.uint8))
        out = area_downsample(img, 5, 4)
        assert np.all(out.pixels == 200)

    def test_rejects_enlargement(self):
        img = GrayImage.from_flat(2, 2, [1, 2, 3, 4])
        with pytest.raises(ValueError):
            area_downsample(img, 3, 2)

    def test_rejects_zero_output(self):
        img = GrayImage.from_flat(2, 2, [1, 2, 3, 4])
        with pytest.raises(DegenerateImageError):
            area_downsample(img, 0, 1)
