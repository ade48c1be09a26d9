"""Baseline JFIF encoder and decoder with externally supplied tables.

Encoder output is deterministic: fixed Annex K Huffman tables, 4:4:4
sampling, and the quality-scaled quantisation tables embedded in the DQT
segments, so the byte length reported here is exactly what any external
decoder sees.  The marker layout is documented in docs/format.md.
"""

from dataclasses import dataclass

import numpy as np

from . import huffman
from .color import rgb_to_ycbcr, ycbcr_to_rgb
from .dct import forward_dct_blocks, inverse_dct_blocks
from .image import PixelImage
from .quant import QuantTable, quantise, scale_tables
from .zigzag import INVERSE_ZIGZAG_ORDER, ZIGZAG_ORDER

M_SOI = 0xD8
M_EOI = 0xD9
M_SOS = 0xDA
M_DQT = 0xDB
M_DHT = 0xC4
M_SOF0 = 0xC0
M_APP0 = 0xE0
M_COM = 0xFE
M_DRI = 0xDD

_MARKER_NAMES = {
    0xC0: "SOF0", 0xC1: "SOF1", 0xC2: "SOF2", 0xC3: "SOF3", 0xC4: "DHT",
    0xC5: "SOF5", 0xC6: "SOF6", 0xC7: "SOF7", 0xC9: "SOF9", 0xCA: "SOF10",
    0xCB: "SOF11", 0xCC: "DAC", 0xCD: "SOF13", 0xCE: "SOF14", 0xCF: "SOF15",
    0xD8: "SOI", 0xD9: "EOI", 0xDA: "SOS", 0xDB: "DQT", 0xDD: "DRI",
    0xFE: "COM",
}


def _marker_name(m: int) -> str:
    if 0xD0 <= m <= 0xD7:
        return f"RST{m - 0xD0}"
    if 0xE0 <= m <= 0xEF:
        return f"APP{m - 0xE0}"
    return _MARKER_NAMES.get(m, f"0x{m:02X}")


class JpegFormatError(ValueError):
    """Raised for malformed or unsupported streams; carries marker/offset."""

    def __init__(self, message: str, marker: int | None = None, offset: int | None = None):
        detail = message
        if marker is not None:
            detail += f" (marker {_marker_name(marker)})"
        if offset is not None:
            detail += f" at offset {offset}"
        super().__init__(detail)
        self.marker = marker
        self.offset = offset


@dataclass(frozen=True)
class EncodedJpeg:
    """A complete JFIF byte stream (SOI..EOI)."""

    data: bytes

    @property
    def size_bytes(self) -> int:
        return len(self.data)


# ---------------------------------------------------------------------------
# encoding


def _blockify(plane: np.ndarray) -> np.ndarray:
    """Split a (h, w) float plane into (B, 8, 8) blocks, edge-padding to 8."""
    h, w = plane.shape
    ph, pw = (-h) % 8, (-w) % 8
    if ph or pw:
        plane = np.pad(plane, ((0, ph), (0, pw)), mode="edge")
    hh, ww = plane.shape
    return (
        plane.reshape(hh // 8, 8, ww // 8, 8).swapaxes(1, 2).reshape(-1, 8, 8)
    )


def _unblockify(blocks: np.ndarray, width: int, height: int) -> np.ndarray:
    bh, bw = (height + 7) // 8, (width + 7) // 8
    full = blocks.reshape(bh, bw, 8, 8).swapaxes(1, 2).reshape(bh * 8, bw * 8)
    return full[:height, :width]


def _segment(marker: int, payload: bytes) -> bytes:
    return bytes([0xFF, marker]) + (len(payload) + 2).to_bytes(2, "big") + payload


def _headers(width, height, scaled_qts, ncomp) -> bytes:
    out = [bytes([0xFF, M_SOI])]
    out.append(
        _segment(M_APP0, b"JFIF\x00" + bytes([1, 1, 0]) + (1).to_bytes(2, "big") * 2 + bytes([0, 0]))
    )
    dqt = b""
    for tq, qt in enumerate(scaled_qts):
        dqt += bytes([tq]) + bytes(qt.entries.reshape(64)[ZIGZAG_ORDER].astype(np.uint8))
    out.append(_segment(M_DQT, dqt))

    sof = bytes([8]) + height.to_bytes(2, "big") + width.to_bytes(2, "big") + bytes([ncomp])
    for ci in range(ncomp):
        tq = 0 if ci == 0 else 1
        sof += bytes([ci + 1, 0x11, tq])
    out.append(_segment(M_SOF0, sof))

    dht = b""
    tables = [(0, 0, huffman.DC_LUMA_BITS, huffman.DC_LUMA_VALS),
              (1, 0, huffman.AC_LUMA_BITS, huffman.AC_LUMA_VALS)]
    if ncomp == 3:
        tables += [(0, 1, huffman.DC_CHROMA_BITS, huffman.DC_CHROMA_VALS),
                   (1, 1, huffman.AC_CHROMA_BITS, huffman.AC_CHROMA_VALS)]
    for tc, th, bits, vals in tables:
        dht += bytes([(tc << 4) | th]) + bytes(bits) + bytes(vals)
    out.append(_segment(M_DHT, dht))

    sos = bytes([ncomp])
    for ci in range(ncomp):
        th = 0 if ci == 0 else 1
        sos += bytes([ci + 1, (th << 4) | th])
    sos += bytes([0, 63, 0])
    out.append(_segment(M_SOS, sos))
    return b"".join(out)


def _amplitude(values: np.ndarray, cats: np.ndarray) -> np.ndarray:
    # Negative values are stored as value + 2^cat - 1 (one's-complement form).
    offset = np.left_shift(np.int32(1), cats) - np.int32(1)
    return np.where(values >= 0, values, values + offset).astype(np.int32)


# Emission slots inside one block: DC code, DC amplitude, then for each
# nonzero AC at zigzag position p the slots p*8+[0..3] (ZRL padding),
# p*8+4 (run/size code) and p*8+5 (amplitude), with end-of-block last.
_SEQ_EOB = 8 * 64
_SEQ_SPAN = _SEQ_EOB + 2


def _component_symbols(zz, comp_idx, ncomp, dc_table, ac_table):
    """Emit (orderkey, value, nbits) arrays for one component's blocks.

    The order key encodes (mcu, component, within-block sequence) so that a
    single sort interleaves all components into scan order.
    """
    dc_codes, dc_lens = dc_table
    ac_codes, ac_lens = ac_table
    nblocks = len(zz)
    blocks = np.arange(nblocks, dtype=np.int32)
    key0 = (blocks * ncomp + comp_idx) * _SEQ_SPAN
    parts = []

    def emit(block_key, seq, value, nbits):
        parts.append((block_key + seq, value, nbits))

    diff = np.diff(zz[:, 0], prepend=0).astype(np.int32)
    cat = huffman.MAGNITUDE_BITS[np.abs(diff)]
    emit(key0, 0, dc_codes[cat], dc_lens[cat])
    emit(key0, 1, _amplitude(diff, cat), cat)

    ac = zz[:, 1:]
    bidx, pz = np.nonzero(ac)
    if len(bidx):
        vals = ac[bidx, pz].astype(np.int32)
        pos = (pz + 1).astype(np.int32)
        nzkey = key0[bidx]
        first = np.r_[True, bidx[1:] != bidx[:-1]]
        prev = np.where(first, np.int32(0), np.r_[np.int32(0), pos[:-1]])
        run = pos - prev - 1
        nzrl = run >> 4
        cat = huffman.MAGNITUDE_BITS[np.abs(vals)]
        sym = ((run & 15) << 4) | cat

        total_zrl = int(nzrl.sum())
        if total_zrl:
            intra = np.arange(total_zrl, dtype=np.int32) - np.repeat(
                np.cumsum(nzrl, dtype=np.int32) - nzrl, nzrl
            )
            zkey = np.repeat(nzkey + pos * 8, nzrl) + intra
            parts.append((
                zkey,
                np.broadcast_to(np.int32(ac_codes[0xF0]), zkey.shape),
                np.broadcast_to(np.int32(ac_lens[0xF0]), zkey.shape),
            ))
        emit(nzkey, pos * 8 + 4, ac_codes[sym], ac_lens[sym])
        emit(nzkey, pos * 8 + 5, _amplitude(vals, cat), cat)

        last = np.r_[bidx[1:] != bidx[:-1], True]
        last_pos = np.zeros(nblocks, dtype=np.int32)
        last_pos[bidx[last]] = pos[last]
        eob_keys = key0[last_pos < 63]
    else:
        eob_keys = key0
    emit(
        eob_keys,
        _SEQ_EOB,
        np.broadcast_to(np.int32(ac_codes[0x00]), eob_keys.shape),
        np.broadcast_to(np.int32(ac_lens[0x00]), eob_keys.shape),
    )
    return parts


def _pack_scan(values: np.ndarray, nbits: np.ndarray) -> bytes:
    """Pack big-endian bit fields into bytes, pad with 1s, stuff 0xFF."""
    keep = nbits > 0
    values, nbits = values[keep], nbits[keep]
    total = int(nbits.sum(dtype=np.int64))
    nbytes = (total + 7) // 8
    buf = np.zeros(nbytes + 3, dtype=np.uint8)
    if len(values):
        start = np.cumsum(nbits, dtype=np.int64) - nbits
        base = start >> 3
        # A field spans at most 16 bits, so with a start offset of up to 7
        # bits it always fits a 3-byte (24-bit) window.
        aligned = values.astype(np.int32) << (24 - (start.astype(np.int32) & 7) - nbits)
        np.bitwise_or.at(buf, base, (aligned >> 16).astype(np.uint8))
        np.bitwise_or.at(buf, base + 1, (aligned >> 8).astype(np.uint8))
        np.bitwise_or.at(buf, base + 2, aligned.astype(np.uint8))
    if total % 8:
        buf[nbytes - 1] |= (1 << (8 - total % 8)) - 1
    packed = buf[:nbytes]
    stuff_at = np.flatnonzero(packed == 0xFF)
    if len(stuff_at):
        packed = np.insert(packed, stuff_at + 1, 0)
    return packed.tobytes()


class EncoderSession:
    """Repeated encodes of one image with varying tables and quality.

    The colour transform, blocking and forward DCT depend only on the image,
    so they are computed once here; each ``encode`` call then runs
    quantisation, entropy coding and (optionally) the reconstruction.
    """

    def __init__(self, image: PixelImage):
        self.image = image
        y, cb, cr = rgb_to_ycbcr(image)
        planes = [y] if image.channels == 1 else [y, cb, cr]
        self._coeffs = [
            forward_dct_blocks(_blockify(p.astype(np.float64) - 128.0))
            for p in planes
        ]

    def encode(self, lqt, cqt, qf, want_pixels=False):
        image = self.image
        sq_l, sq_c = scale_tables(lqt, cqt, qf)
        if image.channels == 3:
            comp_qts = [sq_l, sq_c, sq_c]
            scaled_qts = (sq_l, sq_c)
        else:
            comp_qts = [sq_l]
            scaled_qts = (sq_l,)

        level_stacks = []
        parts = []
        for ci, (coeffs, qt) in enumerate(zip(self._coeffs, comp_qts)):
            levels = quantise(coeffs, qt)
            level_stacks.append(levels)
            zz = levels.reshape(-1, 64)[:, ZIGZAG_ORDER]
            if ci == 0:
                dc_t, ac_t = huffman.DC_LUMA_CODES, huffman.AC_LUMA_CODES
            else:
                dc_t, ac_t = huffman.DC_CHROMA_CODES, huffman.AC_CHROMA_CODES
            parts.extend(_component_symbols(zz, ci, len(comp_qts), dc_t, ac_t))

        key = np.concatenate([p[0] for p in parts])
        value = np.concatenate([p[1] for p in parts])
        nbits = np.concatenate([p[2] for p in parts])
        # Each part is already key-sorted, so a stable (run-merging) sort is
        # near-linear here.
        order = np.argsort(key, kind="stable")
        scan = _pack_scan(value[order], nbits[order])

        header = _headers(image.width, image.height, scaled_qts, len(comp_qts))
        encoded = EncodedJpeg(header + scan + bytes([0xFF, M_EOI]))
        if not want_pixels:
            return encoded, None
        pixels = _levels_to_pixels(level_stacks, comp_qts, image.width, image.height)
        return encoded, PixelImage(pixels)


def encode_image(image: PixelImage, lqt: QuantTable, cqt: QuantTable, qf: int) -> EncodedJpeg:
    """Encode an image with the given base tables and quality factor.

    Pure function: identical inputs produce byte-identical streams.
    """
    encoded, _ = EncoderSession(image).encode(lqt, cqt, qf, want_pixels=False)
    return encoded


def encode_with_reconstruction(
    image: PixelImage, lqt: QuantTable, cqt: QuantTable, qf: int
) -> tuple[EncodedJpeg, PixelImage]:
    """Encode and also return the image a decoder will reconstruct.

    Entropy coding is lossless, so the reconstruction is computed directly
    from the quantised coefficients; it is sample-identical to
    ``decode_image(encode_image(...))`` and avoids a redundant bitstream
    decode in tight evaluation loops.
    """
    encoded, pixels = EncoderSession(image).encode(lqt, cqt, qf, want_pixels=True)
    return encoded, pixels


def _levels_to_planes(level_stacks, qts, width, height) -> list[np.ndarray]:
    planes = []
    for levels, qt in zip(level_stacks, qts):
        deq = levels.astype(np.float64) * qt.entries
        spatial = inverse_dct_blocks(deq) + 128.0
        plane = _unblockify(spatial, width, height)
        planes.append(np.clip(np.floor(plane + 0.5), 0, 255).astype(np.uint8))
    return planes


def _levels_to_pixels(level_stacks, qts, width, height) -> np.ndarray:
    planes = _levels_to_planes(level_stacks, qts, width, height)
    if len(planes) == 1:
        return planes[0][:, :, np.newaxis]
    return ycbcr_to_rgb(*planes)


# ---------------------------------------------------------------------------
# decoding


def _read_u16(data, pos):
    if pos + 2 > len(data):
        raise JpegFormatError("truncated stream while reading length", offset=pos)
    return (data[pos] << 8) | data[pos + 1]


def _read_segment_length(data, pos, marker):
    length = _read_u16(data, pos)
    if pos + length > len(data):
        raise JpegFormatError("segment extends past end of stream", marker=marker, offset=pos)
    return length


def decode_image(jpeg) -> PixelImage:
    """Decode a baseline 8-bit JFIF stream (4:4:4 or grayscale) to pixels.

    Accepts an ``EncodedJpeg`` or raw bytes.  Malformed input raises
    ``JpegFormatError`` identifying the offending marker and offset.
    """
    planes = decode_component_planes(jpeg)
    if len(planes) == 1:
        return PixelImage(planes[0][:, :, np.newaxis])
    return PixelImage(ycbcr_to_rgb(*planes))


def decode_component_planes(jpeg) -> list[np.ndarray]:
    """Decode to the reconstructed Y (and Cb, Cr) sample planes.

    This is the decoder output before the colour transform, the natural tap
    point for sample-exact comparison against other decoders.
    """
    data = jpeg.data if isinstance(jpeg, EncodedJpeg) else bytes(jpeg)
    if len(data) < 4 or data[0] != 0xFF or data[1] != M_SOI:
        raise JpegFormatError("stream does not start with SOI", offset=0)

    qts: dict[int, np.ndarray] = {}
    dc_luts: dict[int, tuple] = {}
    ac_luts: dict[int, tuple] = {}
    frame = None
    scan_components = None
    pos = 2
    while True:
        if pos + 2 > len(data):
            raise JpegFormatError("truncated stream before SOS", offset=pos)
        if data[pos] != 0xFF:
            raise JpegFormatError(f"expected marker, found 0x{data[pos]:02X}", offset=pos)
        while pos + 1 < len(data) and data[pos + 1] == 0xFF:
            pos += 1  # fill bytes
        marker = data[pos + 1]
        pos += 2
        if marker == M_EOI:
            raise JpegFormatError("EOI before any scan data", marker=marker, offset=pos - 2)
        if marker == M_DQT:
            length = _read_segment_length(data, pos, marker)
            end = pos + length
            p = pos + 2
            while p < end:
                pq, tq = data[p] >> 4, data[p] & 15
                if pq != 0:
                    raise JpegFormatError("only 8-bit quantisation tables supported",
                                          marker=marker, offset=p)
                if p + 65 > end:
                    raise JpegFormatError("truncated DQT payload", marker=marker, offset=p)
                zz = np.frombuffer(data[p + 1 : p + 65], dtype=np.uint8).astype(np.int64)
                qts[tq] = zz[INVERSE_ZIGZAG_ORDER].reshape(8, 8)
                p += 65
            pos = end
        elif marker == M_DHT:
            length = _read_segment_length(data, pos, marker)
            end = pos + length
            p = pos + 2
            while p < end:
                tc, th = data[p] >> 4, data[p] & 15
                bits = tuple(data[p + 1 : p + 17])
                n = sum(bits)
                if p + 17 + n > end:
                    raise JpegFormatError("truncated DHT payload", marker=marker, offset=p)
                vals = tuple(data[p + 17 : p + 17 + n])
                lut = huffman.build_decode_lut(bits, vals)
                (dc_luts if tc == 0 else ac_luts)[th] = lut
                p += 17 + n
            pos = end
        elif marker == M_SOF0:
            length = _read_segment_length(data, pos, marker)
            precision = data[pos + 2]
            if precision != 8:
                raise JpegFormatError("only 8-bit precision supported", marker=marker, offset=pos + 2)
            height = _read_u16(data, pos + 3)
            width = _read_u16(data, pos + 5)
            ncomp = data[pos + 7]
            if ncomp not in (1, 3):
                raise JpegFormatError(f"unsupported component count {ncomp}", marker=marker, offset=pos + 7)
            comps = []
            p = pos + 8
            for _ in range(ncomp):
                cid, sampling, tq = data[p], data[p + 1], data[p + 2]
                if sampling != 0x11:
                    raise JpegFormatError("subsampled streams not supported", marker=marker, offset=p + 1)
                comps.append({"id": cid, "tq": tq})
                p += 3
            frame = {"width": width, "height": height, "components": comps}
            pos += length
        elif marker in (0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF):
            raise JpegFormatError("only baseline (SOF0) streams supported", marker=marker, offset=pos - 2)
        elif marker == M_DRI:
            length = _read_segment_length(data, pos, marker)
            if _read_u16(data, pos + 2) != 0:
                raise JpegFormatError("restart intervals not supported", marker=marker, offset=pos + 2)
            pos += length
        elif 0xE0 <= marker <= 0xEF or marker == M_COM:
            pos += _read_segment_length(data, pos, marker)
        elif marker == M_SOS:
            if frame is None:
                raise JpegFormatError("SOS before SOF0", marker=marker, offset=pos - 2)
            length = _read_segment_length(data, pos, marker)
            ns = data[pos + 2]
            if ns != len(frame["components"]):
                raise JpegFormatError("scan must cover every frame component", marker=marker, offset=pos + 2)
            scan_components = []
            p = pos + 3
            for _ in range(ns):
                cs, tables = data[p], data[p + 1]
                match = [c for c in frame["components"] if c["id"] == cs]
                if not match:
                    raise JpegFormatError(f"scan references unknown component {cs}", marker=marker, offset=p)
                scan_components.append({**match[0], "dc": tables >> 4, "ac": tables & 15})
                p += 2
            pos += length
            break
        else:
            raise JpegFormatError("unexpected marker", marker=marker, offset=pos - 2)

    # entropy-coded segment: collect until the next real marker, unstuffing
    chunks = []
    p = pos
    while True:
        j = data.find(0xFF, p)
        if j < 0 or j + 1 >= len(data):
            raise JpegFormatError("scan data ended without EOI", offset=len(data))
        nxt = data[j + 1]
        if nxt == 0x00:
            chunks.append(data[p : j + 1])
            p = j + 2
            continue
        if 0xD0 <= nxt <= 0xD7:
            raise JpegFormatError("restart markers not supported", marker=nxt, offset=j)
        chunks.append(data[p:j])
        end_marker, end_pos = nxt, j
        break
    if end_marker != M_EOI:
        raise JpegFormatError("expected EOI after scan", marker=end_marker, offset=end_pos)
    scan = b"".join(chunks)

    width, height = frame["width"], frame["height"]
    if width == 0 or height == 0:
        raise JpegFormatError("zero image dimension", marker=M_SOF0)
    blocks_per_comp = ((height + 7) // 8) * ((width + 7) // 8)
    levels = _entropy_decode(scan, scan_components, dc_luts, ac_luts, blocks_per_comp)

    stacks, tables = [], []
    for comp, zz in zip(scan_components, levels):
        if comp["tq"] not in qts:
            raise JpegFormatError(f"missing quantisation table {comp['tq']}", marker=M_SOS)
        raster = zz[:, INVERSE_ZIGZAG_ORDER].reshape(-1, 8, 8)
        stacks.append(raster)
        tables.append(QuantTable(np.clip(qts[comp["tq"]], 1, 255)))
    return _levels_to_planes(stacks, tables, width, height)


def _entropy_decode(scan, components, dc_luts, ac_luts, nblocks):
    arr = np.frombuffer(scan + b"\x00\x00\x00\x00", dtype=np.uint8).astype(np.uint32)
    words = ((arr[:-3] << 24) | (arr[1:-2] << 16) | (arr[2:-1] << 8) | arr[3:]).tolist()
    nbits_total = len(scan) * 8

    tables = []
    for comp in components:
        if comp["dc"] not in dc_luts or comp["ac"] not in ac_luts:
            raise JpegFormatError("scan references undefined Huffman table", marker=M_SOS)
        dsym, dlen = dc_luts[comp["dc"]]
        asym, alen = ac_luts[comp["ac"]]
        tables.append((dsym.tolist(), dlen.tolist(), asym.tolist(), alen.tolist()))

    out = [np.zeros((nblocks, 64), dtype=np.int64) for _ in components]
    pred = [0] * len(components)
    bitpos = 0

    def peek16(bp):
        return (words[bp >> 3] >> (16 - (bp & 7))) & 0xFFFF

    for b in range(nblocks):
        for ci, (dsym, dlen, asym, alen) in enumerate(tables):
            block = out[ci][b]
            if bitpos + 16 > nbits_total + 32:
                raise JpegFormatError("scan data exhausted", offset=len(scan))
            code = peek16(bitpos)
            size = dsym[code]
            ln = dlen[code]
            if ln == 0:
                raise JpegFormatError("invalid DC Huffman code", offset=bitpos // 8)
            bitpos += ln
            if size:
                a = peek16(bitpos) >> (16 - size)
                bitpos += size
                if a < (1 << (size - 1)):
                    a -= (1 << size) - 1
                pred[ci] += a
            block[0] = pred[ci]
            k = 1
            while k < 64:
                code = peek16(bitpos)
                sym = asym[code]
                ln = alen[code]
                if ln == 0:
                    raise JpegFormatError("invalid AC Huffman code", offset=bitpos // 8)
                bitpos += ln
                if sym == 0x00:
                    break
                run, size = sym >> 4, sym & 15
                if size == 0:
                    if run != 15:
                        raise JpegFormatError("invalid AC run/size symbol", offset=bitpos // 8)
                    k += 16
                    continue
                k += run
                if k > 63:
                    raise JpegFormatError("AC coefficient index overrun", offset=bitpos // 8)
                a = peek16(bitpos) >> (16 - size)
                bitpos += size
                if a < (1 << (size - 1)):
                    a -= (1 << size) - 1
                block[k] = a
                k += 1
            if bitpos > nbits_total:
                raise JpegFormatError("scan data exhausted mid-block", offset=len(scan))
    return out
