import numpy as np

from qtopt.codec import PixelImage, rgb_to_ycbcr, ycbcr_to_rgb


def _one_pixel(r, g, b):
    return PixelImage(np.array([[[r, g, b]]], dtype=np.uint8))


def test_gray_is_achromatic_fixed_point():
    y, cb, cr = rgb_to_ycbcr(_one_pixel(128, 128, 128))
    assert (y[0, 0], cb[0, 0], cr[0, 0]) == (128, 128, 128)


def test_black_has_zero_luma_neutral_chroma():
    y, cb, cr = rgb_to_ycbcr(_one_pixel(0, 0, 0))
    assert (y[0, 0], cb[0, 0], cr[0, 0]) == (0, 128, 128)


def test_pure_red():
    # By hand: Y = 0.299*255 = 76.245 -> 76; Cb = 128 - 0.168736*255 = 84.97
    # -> 85; Cr = 128 + 0.5*255 = 255.5 -> clamps to 255.
    y, cb, cr = rgb_to_ycbcr(_one_pixel(255, 0, 0))
    assert (y[0, 0], cb[0, 0], cr[0, 0]) == (76, 85, 255)


def test_grayscale_passes_through_with_neutral_chroma():
    img = PixelImage(np.arange(12, dtype=np.uint8).reshape(3, 4, 1))
    y, cb, cr = rgb_to_ycbcr(img)
    assert np.array_equal(y, img.pixels[:, :, 0])
    assert np.all(cb == 128) and np.all(cr == 128)


def test_round_trip_is_close():
    rng = np.random.default_rng(42)
    img = PixelImage(rng.integers(0, 256, size=(16, 16, 3)).astype(np.uint8))
    rgb = ycbcr_to_rgb(*rgb_to_ycbcr(img))
    # both directions round to integers, so allow the usual +-1 wobble
    assert np.max(np.abs(rgb.astype(int) - img.pixels.astype(int))) <= 2
    assert rgb.dtype == np.uint8
