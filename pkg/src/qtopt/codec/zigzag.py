"""Zigzag reordering of 8x8 blocks for entropy coding."""

import numpy as np


def _scan_order() -> np.ndarray:
    # Walk the anti-diagonals; odd diagonals run top-right to bottom-left,
    # even ones the other way.  Element k of the result is the raster index
    # of the k-th zigzag position.
    order = []
    for s in range(15):
        cells = [(r, s - r) for r in range(8) if 0 <= s - r < 8]
        if s % 2 == 0:
            cells.reverse()
        order.extend(r * 8 + c for r, c in cells)
    return np.array(order, dtype=np.intp)


ZIGZAG_ORDER = _scan_order()

INVERSE_ZIGZAG_ORDER = np.empty(64, dtype=np.intp)
INVERSE_ZIGZAG_ORDER[ZIGZAG_ORDER] = np.arange(64)


def zigzag(block: np.ndarray) -> np.ndarray:
    """Flatten an 8x8 block into the 64-element zigzag sequence (DC first)."""
    b = np.asarray(block)
    if b.shape != (8, 8):
        raise ValueError(f"expected an 8x8 block, got {b.shape}")
    return b.reshape(64)[ZIGZAG_ORDER]


def inverse_zigzag(seq: np.ndarray) -> np.ndarray:
    """Rebuild the 8x8 block from its zigzag sequence."""
    s = np.asarray(seq)
    if s.shape != (64,):
        raise ValueError(f"expected a 64-element sequence, got {s.shape}")
    return s[INVERSE_ZIGZAG_ORDER].reshape(8, 8)
