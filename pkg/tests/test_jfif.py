import io

import numpy as np
import pytest
from PIL import Image

from qtopt.codec import (
    EncodedJpeg,
    JpegFormatError,
    PixelImage,
    QuantTable,
    STD_CHROMA_QT,
    STD_LUMA_QT,
    decode_component_planes,
    decode_image,
    encode_image,
    encode_with_reconstruction,
)

LQT = QuantTable(STD_LUMA_QT)
CQT = QuantTable(STD_CHROMA_QT)
ALL16 = QuantTable(np.full((8, 8), 16, dtype=np.int64))


def _textured(rng, h=64, w=64):
    base = rng.integers(0, 256, size=(h // 8, w // 8, 3))
    arr = np.kron(base, np.ones((8, 8, 1))) + rng.normal(0, 15, (h, w, 3))
    return PixelImage(np.clip(arr, 0, 255).astype(np.uint8))


def test_stream_is_framed_by_soi_and_eoi():
    img = PixelImage(np.full((8, 8, 3), 128, dtype=np.uint8))
    enc = encode_image(img, LQT, CQT, 50)
    assert enc.data[:2] == b"\xff\xd8"
    assert enc.data[-2:] == b"\xff\xd9"
    assert enc.size_bytes == len(enc.data)


def test_uniform_gray_survives_round_trip_exactly():
    img = PixelImage(np.full((8, 8, 3), 128, dtype=np.uint8))
    enc = encode_image(img, ALL16, ALL16, 50)
    out = decode_image(enc)
    assert np.array_equal(out.pixels, img.pixels)


def test_encode_is_deterministic():
    rng = np.random.default_rng(21)
    img = _textured(rng)
    a = encode_image(img, LQT, CQT, 66)
    b = encode_image(img, LQT, CQT, 66)
    assert a.data == b.data


def test_higher_quality_is_bigger_on_textured_image():
    rng = np.random.default_rng(22)
    img = _textured(rng, 256, 256)
    hi = encode_image(img, LQT, CQT, 90)
    lo = encode_image(img, LQT, CQT, 10)
    assert hi.size_bytes > lo.size_bytes


def test_reconstruction_equals_full_decode():
    rng = np.random.default_rng(23)
    img = _textured(rng)
    for qf in (5, 50, 95):
        enc, recon = encode_with_reconstruction(img, LQT, CQT, qf)
        assert np.array_equal(recon.pixels, decode_image(enc).pixels)


def test_pillow_accepts_and_roughly_agrees():
    rng = np.random.default_rng(24)
    img = _textured(rng)
    enc = encode_image(img, LQT, CQT, 75)
    pil = Image.open(io.BytesIO(enc.data))
    assert pil.size == (img.width, img.height)
    # component-plane comparison: both decoders reconstruct the same coded
    # samples, so they must agree to within one count
    pil.draft("YCbCr", pil.size)
    ref = np.asarray(pil.convert("YCbCr")).astype(int)
    ours = np.stack(decode_component_planes(enc), axis=-1).astype(int)
    assert np.abs(ours - ref).max() <= 1


def test_grayscale_single_component_stream():
    rng = np.random.default_rng(25)
    img = PixelImage(rng.integers(0, 256, size=(24, 40, 1)).astype(np.uint8))
    enc, recon = encode_with_reconstruction(img, LQT, CQT, 60)
    out = decode_image(enc)
    assert out.channels == 1
    assert np.array_equal(out.pixels, recon.pixels)
    pil = Image.open(io.BytesIO(enc.data))
    assert pil.mode == "L"
    assert np.abs(np.asarray(pil).astype(int) - out.pixels[:, :, 0].astype(int)).max() <= 1


def test_non_multiple_of_eight_dimensions():
    rng = np.random.default_rng(26)
    img = PixelImage(rng.integers(0, 256, size=(37, 53, 3)).astype(np.uint8))
    enc = encode_image(img, LQT, CQT, 50)
    out = decode_image(enc)
    assert (out.height, out.width) == (37, 53)
    pil = Image.open(io.BytesIO(enc.data))
    assert pil.size == (53, 37)


def test_dqt_carries_the_scaled_tables():
    img = PixelImage(np.full((8, 8, 3), 90, dtype=np.uint8))
    enc = encode_image(img, QuantTable(np.full((8, 8), 16)), QuantTable(np.full((8, 8), 40)), 75)
    # qf 75 halves entries: 16 -> 8 and 40 -> 20
    data = enc.data
    at = data.find(bytes([0xFF, 0xDB]))
    segment = data[at + 4 :]
    assert segment[0] == 0  # table id 0
    assert set(segment[1:65]) == {8}
    assert segment[65] == 1
    assert set(segment[66:130]) == {20}


def test_qf_out_of_range_rejected():
    img = PixelImage(np.full((8, 8, 3), 90, dtype=np.uint8))
    with pytest.raises(ValueError):
        encode_image(img, LQT, CQT, 0)
    with pytest.raises(ValueError):
        encode_image(img, LQT, CQT, 100)


def test_truncated_stream_is_a_parse_error():
    img = PixelImage(np.full((16, 16, 3), 128, dtype=np.uint8))
    enc = encode_image(img, LQT, CQT, 50)
    with pytest.raises(JpegFormatError):
        decode_image(enc.data[:-2])  # EOI removed
    with pytest.raises(JpegFormatError):
        decode_image(enc.data[: len(enc.data) // 2])
    with pytest.raises(JpegFormatError):
        decode_image(b"not a jpeg at all")


def test_progressive_marker_is_named_in_error():
    img = PixelImage(np.full((8, 8, 3), 128, dtype=np.uint8))
    data = bytearray(encode_image(img, LQT, CQT, 50).data)
    at = data.find(bytes([0xFF, 0xC0]))
    data[at + 1] = 0xC2  # rewrite SOF0 to SOF2
    with pytest.raises(JpegFormatError, match="SOF2"):
        decode_image(bytes(data))


def test_decode_accepts_encoded_jpeg_or_bytes():
    img = PixelImage(np.full((8, 8, 3), 200, dtype=np.uint8))
    enc = encode_image(img, ALL16, ALL16, 50)
    a = decode_image(enc)
    b = decode_image(enc.data)
    assert np.array_equal(a.pixels, b.pixels)
    assert isinstance(enc, EncodedJpeg)


def test_decodes_a_foreign_baseline_stream():
    # Pillow-encoded 4:4:4 baseline file goes through our decoder
    rng = np.random.default_rng(27)
    arr = rng.integers(0, 256, size=(32, 32, 3)).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="JPEG", quality=80, subsampling=0)
    ours = decode_image(buf.getvalue())
    ref = np.asarray(Image.open(buf).convert("RGB")).astype(int)
    assert ours.pixels.shape == (32, 32, 3)
    assert np.abs(ours.pixels.astype(int) - ref).max() <= 3
