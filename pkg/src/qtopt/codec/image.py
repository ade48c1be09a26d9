"""Pixel containers and image quality measurement."""

from dataclasses import dataclass

import numpy as np

# Cap used in place of infinity when two images are identical, so that
# downstream objective values stay finite.
PSNR_CAP = 400.0


@dataclass(frozen=True)
class PixelImage:
    """An 8-bit image, grayscale (1 channel) or RGB (3 channels).

    ``pixels`` is a (height, width, channels) uint8 array; row-major.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim == 2:
            px = px[:, :, np.newaxis]
        if px.ndim != 3 or px.shape[2] not in (1, 3):
            raise ValueError(f"expected (h, w, 1|3) pixel array, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        if px.dtype != np.uint8:
            if np.any((px < 0) | (px > 255)):
                raise ValueError("samples must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def samples(self) -> np.ndarray:
        """Flat row-major sample vector (length width*height*channels)."""
        return self.pixels.reshape(-1)


def psnr(original: PixelImage, decoded: PixelImage) -> float:
    """Peak signal-to-noise ratio in dB, pooled over all channels and pixels.

    Identical images return the finite sentinel ``PSNR_CAP`` instead of +inf.
    """
    if original.pixels.shape != decoded.pixels.shape:
        raise ValueError(
            f"shape mismatch: {original.pixels.shape} vs {decoded.pixels.shape}"
        )
    a = original.pixels.astype(np.float64)
    b = decoded.pixels.astype(np.float64)
    mse = np.mean((a - b) ** 2)
    if mse == 0.0:
        return PSNR_CAP
    return 10.0 * np.log10(255.0**2 / mse)
