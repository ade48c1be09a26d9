import numpy as np
import pytest

from qtopt.codec import forward_dct, forward_dct_blocks, inverse_dct, inverse_dct_blocks


def brute_force_dct(block):
    """Independent double-sum evaluation of the 8x8 DCT definition."""
    block = np.asarray(block, dtype=np.float64)
    out = np.zeros((8, 8))
    for u in range(8):
        for v in range(8):
            cu = 1 / np.sqrt(2) if u == 0 else 1.0
            cv = 1 / np.sqrt(2) if v == 0 else 1.0
            s = 0.0
            for x in range(8):
                for y in range(8):
                    s += (
                        block[x, y]
                        * np.cos((2 * x + 1) * u * np.pi / 16)
                        * np.cos((2 * y + 1) * v * np.pi / 16)
                    )
            out[u, v] = 0.25 * cu * cv * s
    return out


def test_constant_block_is_dc_only():
    c = 37.0
    coeffs = forward_dct(np.full((8, 8), c))
    assert coeffs[0, 0] == pytest.approx(8 * c, abs=1e-10)
    coeffs[0, 0] = 0.0
    assert np.max(np.abs(coeffs)) < 1e-10


def test_zero_block_maps_to_zero():
    assert np.all(forward_dct(np.zeros((8, 8))) == 0)
    assert np.all(inverse_dct(np.zeros((8, 8))) == 0)


def test_matches_brute_force_oracle():
    rng = np.random.default_rng(1234)
    for _ in range(50):
        block = rng.uniform(-128, 127, size=(8, 8))
        got = forward_dct(block)
        want = brute_force_dct(block)
        assert np.max(np.abs(got - want)) < 1e-10


def test_dc_only_inverse_is_constant():
    coeffs = np.zeros((8, 8))
    coeffs[0, 0] = 8 * 55.0
    block = inverse_dct(coeffs)
    assert np.max(np.abs(block - 55.0)) < 1e-10


def test_round_trip_1000_random_blocks():
    rng = np.random.default_rng(99)
    blocks = rng.uniform(-128, 127, size=(1000, 8, 8))
    back = inverse_dct_blocks(forward_dct_blocks(blocks))
    assert np.max(np.abs(back - blocks)) < 1e-9


def test_batched_agrees_with_single():
    rng = np.random.default_rng(5)
    blocks = rng.uniform(-128, 127, size=(16, 8, 8))
    stacked = forward_dct_blocks(blocks)
    for i in range(16):
        assert np.allclose(stacked[i], forward_dct(blocks[i]), atol=1e-12)


def test_rejects_wrong_shape():
    with pytest.raises(ValueError):
        forward_dct(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        inverse_dct(np.zeros((8, 7)))
