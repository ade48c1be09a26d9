"""Fixed baseline Huffman tables (JPEG standard Annex K) and code machinery.

Tables are kept in the (BITS, HUFFVAL) form used by DHT segments; canonical
codes are derived from counts exactly as a decoder would rebuild them.
"""

import numpy as np

# (number of codes of length 1..16, symbol values)
DC_LUMA_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
DC_LUMA_VALS = tuple(range(12))

DC_CHROMA_BITS = (0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0)
DC_CHROMA_VALS = tuple(range(12))

AC_LUMA_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7D)
AC_LUMA_VALS = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
    0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08,
    0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0, 0x24, 0x33, 0x62, 0x72,
    0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45,
    0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75,
    0x76, 0x77, 0x78, 0x79, 0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3,
    0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
    0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9,
    0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4,
    0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA,
)

AC_CHROMA_BITS = (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77)
AC_CHROMA_VALS = (
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41,
    0x51, 0x07, 0x61, 0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
    0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33, 0x52, 0xF0, 0x15, 0x62, 0x72, 0xD1,
    0x0A, 0x16, 0x24, 0x34, 0xE1, 0x25, 0xF1, 0x17, 0x18, 0x19, 0x1A, 0x26,
    0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44,
    0x45, 0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
    0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74,
    0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
    0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A,
    0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4,
    0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7,
    0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA,
    0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF2, 0xF3, 0xF4,
    0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA,
)


def build_code_table(bits, vals) -> tuple[np.ndarray, np.ndarray]:
    """Derive canonical (code, length) arrays indexed by symbol value.

    Codes of the same length are assigned in symbol-list order; the running
    code doubles when moving to the next length.
    """
    codes = np.zeros(256, dtype=np.int32)
    lengths = np.zeros(256, dtype=np.int32)
    code = 0
    k = 0
    for length, count in enumerate(bits, start=1):
        for _ in range(count):
            sym = vals[k]
            codes[sym] = code
            lengths[sym] = length
            code += 1
            k += 1
        code <<= 1
    return codes, lengths


def build_decode_lut(bits, vals) -> tuple[np.ndarray, np.ndarray]:
    """Build 16-bit-prefix lookup tables: symbol and code length per prefix.

    A length of 0 marks prefixes that match no code.
    """
    sym_lut = np.zeros(1 << 16, dtype=np.int16)
    len_lut = np.zeros(1 << 16, dtype=np.uint8)
    code = 0
    k = 0
    for length, count in enumerate(bits, start=1):
        for _ in range(count):
            base = code << (16 - length)
            span = 1 << (16 - length)
            sym_lut[base : base + span] = vals[k]
            len_lut[base : base + span] = length
            code += 1
            k += 1
        code <<= 1
    return sym_lut, len_lut


# Bit length of the magnitude (the JPEG "category"); index by |value|.
# DC differences never exceed 2047 in magnitude for 8-bit baseline data.
MAGNITUDE_BITS = np.zeros(4096, dtype=np.int32)
for _n in range(1, 4096):
    MAGNITUDE_BITS[_n] = _n.bit_length()

DC_LUMA_CODES = build_code_table(DC_LUMA_BITS, DC_LUMA_VALS)
DC_CHROMA_CODES = build_code_table(DC_CHROMA_BITS, DC_CHROMA_VALS)
AC_LUMA_CODES = build_code_table(AC_LUMA_BITS, AC_LUMA_VALS)
AC_CHROMA_CODES = build_code_table(AC_CHROMA_BITS, AC_CHROMA_VALS)
