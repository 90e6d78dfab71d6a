"""MSB-first bit strings, writer and reader."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptStreamError

__all__ = ["Bits", "BitWriter", "BitReader", "pack_codes"]

_CHUNK = 1 << 22


@dataclass(frozen=True)
class Bits:
    """An immutable bit sequence: ``length`` bits packed MSB-first in ``data``.

    Bits past ``length`` in the final byte are zero.
    """

    data: bytes = b""
    length: int = 0

    @classmethod
    def from_str(cls, s: str) -> Bits:
        if s.strip("01"):
            raise ValueError(f"not a bit string: {s!r}")
        arr = np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(np.packbits(arr).tobytes(), len(s))

    @classmethod
    def from_array(cls, bits: np.ndarray) -> Bits:
        return cls(np.packbits(bits.astype(np.uint8, copy=False)).tobytes(), int(bits.size))

    def to_array(self) -> np.ndarray:
        arr = np.unpackbits(np.frombuffer(self.data, dtype=np.uint8))
        return arr[: self.length]

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return (self.to_array() + ord("0")).tobytes().decode("ascii")

    def __add__(self, other: Bits) -> Bits:
        return Bits.from_array(np.concatenate([self.to_array(), other.to_array()]))


def pack_codes(values: np.ndarray, lengths: np.ndarray) -> Bits:
    """Concatenate variable-length codes (``values[i]`` on ``lengths[i]`` bits).

    Zero-length entries contribute nothing.  Lengths must be <= 64.  Each
    code touches at most two 64-bit words; the head parts are OR-reduced per
    word and the (at most one per word) spills are OR-ed in after.
    """
    values = np.asarray(values, dtype=np.uint64)
    lengths = np.asarray(lengths, dtype=np.int64)
    if lengths.size and int(lengths.max()) > 64:
        raise ValueError("codes longer than 64 bits are not supported")
    ends = np.cumsum(lengths)
    total = int(ends[-1]) if ends.size else 0
    if total == 0:
        return Bits()
    words = np.zeros((total + 63) // 64 + 1, dtype=np.uint64)
    for lo in range(0, lengths.size, _CHUNK):
        lens = lengths[lo : lo + _CHUNK]
        keep = lens > 0
        lens = lens[keep]
        if lens.size == 0:
            continue
        vals = values[lo : lo + _CHUNK][keep]
        starts = ends[lo : lo + _CHUNK][keep] - lens
        word = starts >> 6
        shift = 64 - (starts & 63) - lens
        head = np.where(
            shift >= 0,
            vals << np.clip(shift, 0, 63).astype(np.uint64),
            vals >> np.clip(-shift, 0, 63).astype(np.uint64),
        )
        cut = np.concatenate(([0], np.flatnonzero(np.diff(word)) + 1))
        words[word[cut]] |= np.bitwise_or.reduceat(head, cut)
        spill = shift < 0
        if spill.any():
            words[word[spill] + 1] |= vals[spill] << (64 + shift[spill]).astype(np.uint64)
    data = words.astype(">u8").tobytes()[: (total + 7) // 8]
    return Bits(data, total)


class BitWriter:
    """Accumulates fixed-width integers and bit strings, MSB-first."""

    def __init__(self) -> None:
        self._parts: list[np.ndarray] = []
        self._pending: list[int] = []
        self.length = 0

    def write(self, value: int, width: int) -> None:
        if width < 0 or (width < 64 and value >> width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        for k in range(width - 1, -1, -1):
            self._pending.append((value >> k) & 1)
        self.length += width

    def write_bits(self, bits: Bits | str) -> None:
        if isinstance(bits, str):
            bits = Bits.from_str(bits)
        self._flush()
        self._parts.append(bits.to_array())
        self.length += len(bits)

    def write_array(self, arr: np.ndarray) -> None:
        self._flush()
        self._parts.append(np.asarray(arr, dtype=np.uint8))
        self.length += int(arr.size)

    def _flush(self) -> None:
        if self._pending:
            self._parts.append(np.array(self._pending, dtype=np.uint8))
            self._pending = []

    def getbits(self) -> Bits:
        self._flush()
        if not self._parts:
            return Bits()
        return Bits.from_array(np.concatenate(self._parts))

    def getvalue(self) -> bytes:
        return self.getbits().data


class BitReader:
    """Reads fixed-width fields from a byte buffer, MSB-first.

    Reading past the end raises :class:`CorruptStreamError`.
    """

    def __init__(self, data: bytes | Bits, length: int | None = None) -> None:
        if isinstance(data, Bits):
            data, length = data.data, data.length
        self._bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        self.length = len(self._bits) if length is None else length
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self.length - self.pos

    def _take(self, width: int) -> np.ndarray:
        if width < 0 or self.pos + width > self.length:
            raise CorruptStreamError(
                f"truncated stream: need {width} bits at offset {self.pos}, "
                f"{self.remaining} left"
            )
        chunk = self._bits[self.pos : self.pos + width]
        self.pos += width
        return chunk

    def read(self, width: int) -> int:
        value = 0
        for b in self._take(width).tolist():
            value = (value << 1) | b
        return value

    def read_array(self, width: int) -> np.ndarray:
        return self._take(width)

    def read_bits(self, width: int) -> Bits:
        return Bits.from_array(self._take(width))

    def read_bytes(self, count: int) -> bytes:
        return np.packbits(self._take(8 * count)).tobytes()
