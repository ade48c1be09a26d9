"""RGB <-> YCbCr conversion (full-range BT.601, as used by JFIF)."""

import numpy as np

from .image import PixelImage


def _round_u8(x: np.ndarray) -> np.ndarray:
    # Half-up rounding, then clamp to the 8-bit range.
    return np.clip(np.floor(x + 0.5), 0, 255).astype(np.uint8)


def rgb_to_ycbcr(image: PixelImage) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an image into full-range Y, Cb, Cr planes (each (h, w) uint8).

    Grayscale input passes through as Y with neutral (128) chroma planes.
    """
    px = image.pixels
    if image.channels == 1:
        y = px[:, :, 0].copy()
        neutral = np.full_like(y, 128)
        return y, neutral, neutral.copy()
    r = px[:, :, 0].astype(np.float64)
    g = px[:, :, 1].astype(np.float64)
    b = px[:, :, 2].astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b
    return _round_u8(y), _round_u8(cb), _round_u8(cr)


def ycbcr_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    """Recombine Y, Cb, Cr planes into an (h, w, 3) uint8 RGB array."""
    yf = np.asarray(y, dtype=np.float64)
    cbf = np.asarray(cb, dtype=np.float64) - 128.0
    crf = np.asarray(cr, dtype=np.float64) - 128.0
    r = yf + 1.402 * crf
    g = yf - 0.344136 * cbf - 0.714136 * crf
    b = yf + 1.772 * cbf
    return np.stack([_round_u8(r), _round_u8(g), _round_u8(b)], axis=-1)
