"""Order-0 Huffman compressor used as the benchmark baseline.

Layout: 256 little-endian uint32 symbol counts (1024 bytes), then the
canonical Huffman payload MSB-first, zero-padded to a byte.  The original
length is the sum of the counts.  A file with one distinct byte has an
empty payload.
"""

from __future__ import annotations

import numpy as np

from .bitio import pack_codes
from .errors import CorruptStreamError
from .huffman import canonical_codes, huffman_lengths

__all__ = ["HEADER_SIZE", "huffman_compress", "huffman_decompress"]

HEADER_SIZE = 256 * 4
_TABLE_BITS = 12


def _code_table(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    present = np.flatnonzero(counts)
    lengths = np.zeros(256, dtype=np.int64)
    values = np.zeros(256, dtype=np.uint64)
    if present.size >= 2:
        lens = huffman_lengths(counts[present].tolist())
        lengths[present] = lens
        values[present] = canonical_codes(lens)
    return lengths, values


def huffman_compress(data: bytes) -> bytes:
    x = np.frombuffer(bytes(data), dtype=np.uint8)
    counts = np.bincount(x, minlength=256).astype(np.int64)
    if counts.max(initial=0) >= 1 << 32:
        raise ValueError("input too large for 32-bit counts")
    lengths, values = _code_table(counts)
    payload = pack_codes(values[x], lengths[x])
    return counts.astype("<u4").tobytes() + payload.data


def huffman_decompress(blob: bytes) -> bytes:
    if len(blob) < HEADER_SIZE:
        raise CorruptStreamError("baseline header truncated")
    counts = np.frombuffer(blob[:HEADER_SIZE], dtype="<u4").astype(np.int64)
    t = int(counts.sum())
    present = np.flatnonzero(counts)
    if present.size == 0:
        return b""
    if present.size == 1:
        return bytes([int(present[0])]) * t
    lengths, values = _code_table(counts)
    width = min(int(lengths.max()), _TABLE_BITS)
    lookup = [-1] * (1 << width)
    slow: dict[tuple[int, int], int] = {}
    for sym in present.tolist():
        n, v = int(lengths[sym]), int(values[sym])
        if n <= width:
            lo, hi = v << (width - n), (v + 1) << (width - n)
            lookup[lo:hi] = [(sym << 8) | n] * (hi - lo)
        else:
            slow[(n, v)] = sym
    slow_lengths = sorted({n for n, _ in slow})
    payload = blob[HEADER_SIZE:]
    nbits = int((counts * lengths).sum())
    if (nbits + 7) // 8 != len(payload):
        raise CorruptStreamError("baseline payload size does not match the counts")
    buf = payload + bytes(16)
    out = bytearray()
    pos = 0
    mask = (1 << width) - 1
    for _ in range(t):
        b0 = pos >> 3
        v = int.from_bytes(buf[b0 : b0 + 8], "big")
        hit = lookup[(v >> (64 - (pos & 7) - width)) & mask]
        if hit >= 0:
            out.append(hit >> 8)
            pos += hit & 0xFF
            continue
        for n in slow_lengths:
            b0 = pos >> 3
            w = int.from_bytes(buf[b0 : b0 + 8], "big")
            sym = slow.get((n, (w >> (64 - (pos & 7) - n)) & ((1 << n) - 1)))
            if sym is not None:
                out.append(sym)
                pos += n
                break
        else:
            raise CorruptStreamError(f"no codeword matches at bit {pos}")
    return bytes(out)
