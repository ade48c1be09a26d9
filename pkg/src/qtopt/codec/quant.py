"""Quantisation tables, quality-factor scaling, and (de)quantisation."""

from dataclasses import dataclass

import numpy as np

# Example luminance/chrominance tables from the JPEG standard (Annex K),
# raster order.  Used as documented defaults, never as hidden state.
STD_LUMA_QT = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)

STD_CHROMA_QT = np.array(
    [
        [17, 18, 24, 47, 99, 99, 99, 99],
        [18, 21, 26, 66, 99, 99, 99, 99],
        [24, 26, 56, 99, 99, 99, 99, 99],
        [47, 66, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
        [99, 99, 99, 99, 99, 99, 99, 99],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class QuantTable:
    """An 8x8 table of integer quantiser step sizes, each in [1, 255]."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.shape != (8, 8):
            raise ValueError(f"expected an 8x8 table, got {e.shape}")
        if np.any((e < 1) | (e > 255)):
            raise ValueError("table entries must lie in [1, 255]")
        object.__setattr__(self, "entries", e)


def scale_tables(lqt: QuantTable, cqt: QuantTable, qf: int) -> tuple[QuantTable, QuantTable]:
    """Scale both tables by a quality factor using the IJG convention.

    S = 200 - 2*qf for qf >= 50, else 5000/qf, and each entry becomes
    floor((S*Q + 50) / 100) clamped to [1, 255].  qf = 50 is the identity.
    """
    qf = int(qf)
    if not 1 <= qf <= 99:
        raise ValueError(f"quality factor must lie in [1, 99], got {qf}")
    s = 200 - 2 * qf if qf >= 50 else 5000 // qf
    out = []
    for table in (lqt, cqt):
        scaled = (s * table.entries + 50) // 100
        out.append(QuantTable(np.clip(scaled, 1, 255)))
    return out[0], out[1]


def quantise(coeffs: np.ndarray, qt: QuantTable) -> np.ndarray:
    """Divide coefficients by the table, rounding half away from zero."""
    c = np.asarray(coeffs, dtype=np.float64)
    q = qt.entries.astype(np.float64)
    return (np.sign(c) * np.floor(np.abs(c) / q + 0.5)).astype(np.int64)


def dequantise(levels: np.ndarray, qt: QuantTable) -> np.ndarray:
    """Approximate the original coefficients as level * step size."""
    return np.asarray(levels, dtype=np.float64) * qt.entries
