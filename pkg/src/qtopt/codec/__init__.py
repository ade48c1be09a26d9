"""Baseline JPEG codec with externally supplied quantisation tables."""

from .color import rgb_to_ycbcr, ycbcr_to_rgb
from .dct import forward_dct, forward_dct_blocks, inverse_dct, inverse_dct_blocks
from .image import PSNR_CAP, PixelImage, psnr
from .jfif import (
    EncodedJpeg,
    EncoderSession,
    JpegFormatError,
    decode_component_planes,
    decode_image,
    encode_image,
    encode_with_reconstruction,
)
from .quant import STD_CHROMA_QT, STD_LUMA_QT, QuantTable, dequantise, quantise, scale_tables
from .zigzag import ZIGZAG_ORDER, inverse_zigzag, zigzag

__all__ = [
    "PSNR_CAP",
    "PixelImage",
    "psnr",
    "rgb_to_ycbcr",
    "ycbcr_to_rgb",
    "forward_dct",
    "forward_dct_blocks",
    "inverse_dct",
    "inverse_dct_blocks",
    "EncodedJpeg",
    "EncoderSession",
    "JpegFormatError",
    "decode_component_planes",
    "decode_image",
    "encode_image",
    "encode_with_reconstruction",
    "QuantTable",
    "STD_LUMA_QT",
    "STD_CHROMA_QT",
    "quantise",
    "dequantise",
    "scale_tables",
    "ZIGZAG_ORDER",
    "zigzag",
    "inverse_zigzag",
]
