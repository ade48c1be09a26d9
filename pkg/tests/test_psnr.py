import numpy as np
import pytest

from qtopt.codec import PSNR_CAP, PixelImage, psnr


def _img(value, shape=(4, 4, 3)):
    return PixelImage(np.full(shape, value, dtype=np.uint8))


def test_identical_images_hit_the_cap():
    assert psnr(_img(77), _img(77)) == PSNR_CAP


def test_one_off_everywhere_is_48_13_db():
    a = _img(100)
    b = _img(101)
    # MSE = 1 -> 10*log10(255^2) = 48.1308...
    assert psnr(a, b) == pytest.approx(48.13080361, abs=1e-6)


def test_maximal_difference_is_zero_db():
    assert psnr(_img(0), _img(255)) == pytest.approx(0.0, abs=1e-12)


def test_symmetry():
    rng = np.random.default_rng(8)
    a = PixelImage(rng.integers(0, 256, size=(5, 7, 3)).astype(np.uint8))
    b = PixelImage(rng.integers(0, 256, size=(5, 7, 3)).astype(np.uint8))
    assert psnr(a, b) == psnr(b, a)


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        psnr(_img(0, (4, 4, 3)), _img(0, (4, 5, 3)))
    with pytest.raises(ValueError):
        psnr(_img(0, (4, 4, 3)), _img(0, (4, 4, 1)))


def test_pixel_image_validation():
    with pytest.raises(ValueError):
        PixelImage(np.zeros((0, 4, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        PixelImage(np.zeros((4, 4, 2), dtype=np.uint8))
    img = PixelImage(np.zeros((2, 3), dtype=np.uint8))  # 2-d promotes to 1 channel
    assert img.channels == 1
    assert img.samples.shape == (6,)
