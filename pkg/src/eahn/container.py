"""Bit-exact container format.

Every file starts with a 12-byte envelope::

    magic    2 bytes   0xEA 0x48
    version  1 byte    0 raw, 1 v1 (order 1), 2 v2 (any order), 3 online
    order    1 byte
    length   8 bytes   original length t, little-endian

followed by a mode-dependent body.  Bodies are bit fields packed MSB-first;
see FORMAT.md for the field tables and worked hex dumps.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .adaptive_code import BYTES
from .bitio import Bits, BitReader, BitWriter
from .codec import EahnOutput, _groups, eahn_decode, eahn_encode
from .errors import CorruptStreamError, FormatError
from .online import online_decode, online_encode

__all__ = [
    "MAGIC",
    "RAW",
    "V1",
    "V2",
    "ONLINE",
    "Envelope",
    "Field",
    "encode_codeword_fixed",
    "decode_codeword_fixed",
    "serialize_v1",
    "parse_v1",
    "serialize_v2",
    "parse_v2",
    "serialize_raw",
    "parse_raw",
    "serialize_online",
    "parse_online",
    "read_envelope",
    "compress",
    "decompress",
    "inspect_container",
]

MAGIC = b"\xea\x48"
RAW, V1, V2, ONLINE = 0, 1, 2, 3
_ENVELOPE = struct.Struct("<2sBBQ")
ENVELOPE_SIZE = _ENVELOPE.size
_ALPHA = 256
_MAX_ORDER = 255


@dataclass(frozen=True)
class Envelope:
    version: int
    order: int
    length: int


@dataclass(frozen=True)
class Field:
    """One body field as reported by :func:`inspect_container`; offsets in bits."""

    name: str
    offset: int
    width: int
    value: str = ""


def _envelope(version: int, order: int, length: int) -> bytes:
    if not 0 <= order <= _MAX_ORDER:
        raise ValueError(f"order {order} does not fit the envelope")
    return _ENVELOPE.pack(MAGIC, version, order, length)


def read_envelope(blob: bytes) -> Envelope:
    if len(blob) < ENVELOPE_SIZE:
        if blob[:2] != MAGIC[: len(blob[:2])]:
            raise FormatError("bad magic")
        raise CorruptStreamError(f"truncated envelope ({len(blob)} bytes)")
    magic, version, order, length = _ENVELOPE.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic.hex()}")
    if version not in (RAW, V1, V2, ONLINE):
        raise FormatError(f"unknown version {version}")
    return Envelope(version, order, length)


# -- fixed-width codewords ---------------------------------------------------


def encode_codeword_fixed(cw: str, maxlc: int) -> str:
    """Encode a codeword of length 1..maxlc on exactly maxlc + 1 bits.

    The first bit is repeated; shorter codewords are left-filled with its
    complement in between, so the decoder finds the start at the first
    change of bit after position 2.

    >>> encode_codeword_fixed("1", 3)
    '1001'
    """
    if not 1 <= len(cw) <= maxlc:
        raise ValueError(f"codeword length {len(cw)} outside 1..{maxlc}")
    if cw.strip("01"):
        raise ValueError(f"not a bit string: {cw!r}")
    b1 = cw[0]
    fill = ("1" if b1 == "0" else "0") * (maxlc - len(cw))
    return b1 + fill + cw


def decode_codeword_fixed(bits: str) -> str:
    """Inverse of :func:`encode_codeword_fixed`; ``maxlc`` is ``len(bits) - 1``."""
    if len(bits) < 2:
        raise ValueError("need at least 2 bits")
    rest = bits[1:]
    if bits[0] == bits[1]:
        return rest
    j = len(rest) - len(rest.lstrip(rest[0]))
    if j == len(rest):
        return rest
    return rest[j:]


def _fixed_block(y: tuple[str, ...], maxlc: int) -> str:
    return "".join(encode_codeword_fixed(cw, maxlc) for cw in y)


def _read_fixed_block(r: BitReader, count: int, maxlc: int) -> tuple[str, ...]:
    if count and maxlc == 0:
        raise CorruptStreamError("codewords present but MAXLC is 0")
    width = maxlc + 1
    raw = r.read_array(count * width)
    text = (raw + ord("0")).tobytes().decode("ascii")
    return tuple(decode_codeword_fixed(text[i : i + width]) for i in range(0, len(text), width))


def _y_count(pairs: np.ndarray, p: int) -> int:
    starts, ends = _groups(pairs, p)
    sizes = ends - starts
    return int(sizes[sizes >= 2].sum())


def _finish(w: BitWriter) -> bytes:
    """Prepend the pad-count byte and zero padding so the body is whole bytes."""
    pad = (-(8 + w.length)) % 8
    out = BitWriter()
    out.write(pad, 8)
    out.write(0, pad)
    out.write_bits(w.getbits())
    return out.getvalue()


def _read_pad(r: BitReader) -> int:
    pad = r.read(8)
    if pad > 7:
        raise CorruptStreamError(f"pad count {pad} out of range")
    if r.read(pad):
        raise CorruptStreamError("nonzero padding bits")
    return pad


def _check_bytes_output(out: EahnOutput) -> None:
    if out.alphabet != BYTES:
        raise ValueError("containers hold byte-alphabet encodings only")


# -- v1: order 1 --------------------------------------------------------------


def _v1_maps(pairs: np.ndarray):
    ctx = np.unique(pairs // _ALPHA)
    fol = np.unique(pairs % _ALPHA)
    z5 = np.zeros(_ALPHA, dtype=np.uint8)
    z6 = np.zeros(_ALPHA, dtype=np.uint8)
    z5[ctx] = 1
    z6[fol] = 1
    z7 = np.zeros((ctx.size, fol.size), dtype=np.uint8)
    z7[np.searchsorted(ctx, pairs // _ALPHA), np.searchsorted(fol, pairs % _ALPHA)] = 1
    return z5, z6, z7


def serialize_v1(out: EahnOutput) -> bytes:
    """Serialize an order-1 encoding as envelope + fields Z1..Z9."""
    _check_bytes_output(out)
    if out.order != 1:
        raise ValueError("v1 holds order-1 encodings only; use serialize_v2")
    if out.length < 1:
        raise ValueError("v1 needs at least one symbol; use serialize_raw")
    maxlc = out.maxlc
    if maxlc > 255:
        raise ValueError(f"MAXLC {maxlc} does not fit in 8 bits")
    z5, z6, z7 = _v1_maps(out.pairs)
    w = BitWriter()
    w.write(out.prefix[0], 8)  # Z3
    w.write(maxlc, 8)  # Z4
    w.write_array(z5)
    w.write_array(z6)
    w.write_array(z7.reshape(-1))
    w.write_bits(_fixed_block(out.y, maxlc))  # Z8
    w.write_bits(out.z)  # Z9
    return _envelope(V1, 1, out.length) + _finish(w)


def _parse_v1_body(r: BitReader, length: int, fields: list | None = None) -> EahnOutput:
    def mark(name, start, value=""):
        if fields is not None:
            fields.append(Field(name, start, r.pos - start, value))

    start = r.pos
    pad = r.read(8)
    mark("Z1", start, str(pad))
    if pad > 7:
        raise CorruptStreamError(f"pad count {pad} out of range")
    start = r.pos
    if r.read(pad):
        raise CorruptStreamError("nonzero padding bits")
    mark("Z2", start)
    start = r.pos
    x1 = r.read(8)
    mark("Z3", start, f"0x{x1:02x}")
    start = r.pos
    maxlc = r.read(8)
    mark("Z4", start, str(maxlc))
    start = r.pos
    z5 = r.read_array(_ALPHA)
    nc = int(z5.sum())
    mark("Z5", start, f"NC={nc}")
    start = r.pos
    z6 = r.read_array(_ALPHA)
    nl = int(z6.sum())
    mark("Z6", start, f"NL={nl}")
    start = r.pos
    z7 = r.read_array(nc * nl).reshape(nc, nl)
    mark("Z7", start, f"{int(z7.sum())} pairs")
    if nc and (not z7.any(axis=1).all() or not z7.any(axis=0).all()):
        raise CorruptStreamError("Z7 leaves a context or follower without a pair")
    ci, fi = np.nonzero(z7)
    pairs = np.flatnonzero(z5)[ci].astype(np.int64) * _ALPHA + np.flatnonzero(z6)[fi]
    start = r.pos
    y = _read_fixed_block(r, _y_count(pairs, _ALPHA), maxlc)
    mark("Z8", start, f"Len(Y)={len(y)}")
    start = r.pos
    z = r.read_bits(r.remaining)
    mark("Z9", start)
    if length < 1:
        raise CorruptStreamError("v1 container with zero length")
    return EahnOutput(1, BYTES, bytes([x1]), pairs, y, z, length)


def parse_v1(blob: bytes) -> EahnOutput:
    env = read_envelope(blob)
    if env.version != V1:
        raise FormatError(f"expected version {V1}, found {env.version}")
    if env.order != 1:
        raise CorruptStreamError(f"v1 container with order {env.order}")
    return _parse_v1_body(BitReader(blob[ENVELOPE_SIZE:]), env.length)


# -- v2: any order ------------------------------------------------------------


def serialize_v2(out: EahnOutput) -> bytes:
    """Serialize an encoding of any order.

    Body: pad count, padding, prefix (n bytes), context count (32 bits),
    contexts (n bytes each, ascending), one 256-bit follower bitmap per
    context, MAXLC (8 bits), fixed-width codewords, payload.
    """
    _check_bytes_output(out)
    n = out.order
    maxlc = out.maxlc
    if maxlc > 255:
        raise ValueError(f"MAXLC {maxlc} does not fit in 8 bits")
    ctx_keys = out.pairs // _ALPHA
    ctxs, first = np.unique(ctx_keys, return_index=True)
    bitmaps = np.zeros((ctxs.size, _ALPHA), dtype=np.uint8)
    bitmaps[np.searchsorted(ctxs, ctx_keys), out.pairs % _ALPHA] = 1
    ctx_bytes = np.zeros((ctxs.size, n), dtype=np.uint8)
    rest = ctxs.copy()
    for k in range(n - 1, -1, -1):
        ctx_bytes[:, k] = rest % _ALPHA
        rest //= _ALPHA
    w = BitWriter()
    w.write_array(np.unpackbits(np.frombuffer(bytes(out.prefix), dtype=np.uint8)))
    w.write(ctxs.size, 32)
    w.write_array(np.unpackbits(ctx_bytes.reshape(-1)))
    w.write_array(bitmaps.reshape(-1))
    w.write(maxlc, 8)
    w.write_bits(_fixed_block(out.y, maxlc))
    w.write_bits(out.z)
    return _envelope(V2, n, out.length) + _finish(w)


def _parse_v2_body(r: BitReader, n: int, length: int, fields: list | None = None) -> EahnOutput:
    def mark(name, start, value=""):
        if fields is not None:
            fields.append(Field(name, start, r.pos - start, value))

    start = r.pos
    pad = _read_pad(r)
    mark("pad", start, str(pad))
    start = r.pos
    prefix = r.read_bytes(n)
    mark("prefix", start, prefix.hex())
    start = r.pos
    count = r.read(32)
    mark("contexts", start, str(count))
    if count * (8 * n + _ALPHA) > r.remaining:
        raise CorruptStreamError(f"context count {count} exceeds the stream")
    start = r.pos
    raw = np.frombuffer(r.read_bytes(count * n), dtype=np.uint8).reshape(count, n)
    ctxs = np.zeros(count, dtype=np.int64)
    for k in range(n):
        ctxs = ctxs * _ALPHA + raw[:, k]
    mark("context keys", start)
    if count > 1 and not (np.diff(ctxs) > 0).all():
        raise CorruptStreamError("contexts are not strictly ascending")
    start = r.pos
    bitmaps = r.read_array(count * _ALPHA).reshape(count, _ALPHA)
    mark("follower bitmaps", start)
    if count and not bitmaps.any(axis=1).all():
        raise CorruptStreamError("context without followers")
    ci, fi = np.nonzero(bitmaps)
    pairs = ctxs[ci] * _ALPHA + fi
    start = r.pos
    maxlc = r.read(8)
    mark("MAXLC", start, str(maxlc))
    start = r.pos
    y = _read_fixed_block(r, _y_count(pairs, _ALPHA), maxlc)
    mark("codewords", start, f"Len(Y)={len(y)}")
    start = r.pos
    z = r.read_bits(r.remaining)
    mark("payload", start)
    if length < n:
        raise CorruptStreamError(f"length {length} shorter than order {n}")
    return EahnOutput(n, BYTES, prefix, pairs.astype(np.int64), y, z, length)


def parse_v2(blob: bytes) -> EahnOutput:
    env = read_envelope(blob)
    if env.version != V2:
        raise FormatError(f"expected version {V2}, found {env.version}")
    if env.order < 1:
        raise CorruptStreamError("v2 container with order 0")
    return _parse_v2_body(BitReader(blob[ENVELOPE_SIZE:]), env.order, env.length)


# -- raw and online -----------------------------------------------------------


def serialize_raw(data: bytes, order: int = 0) -> bytes:
    return _envelope(RAW, order, len(data)) + bytes(data)


def parse_raw(blob: bytes) -> bytes:
    env = read_envelope(blob)
    if env.version != RAW:
        raise FormatError(f"expected version {RAW}, found {env.version}")
    body = blob[ENVELOPE_SIZE:]
    if len(body) != env.length:
        raise CorruptStreamError(f"raw body has {len(body)} bytes, envelope says {env.length}")
    return bytes(body)


def serialize_online(stream: Bits, order: int, length: int) -> bytes:
    w = BitWriter()
    w.write_bits(stream)
    return _envelope(ONLINE, order, length) + _finish(w)


def parse_online(blob: bytes) -> tuple[Bits, int, int]:
    """Return ``(stream, order, length)``."""
    env = read_envelope(blob)
    if env.version != ONLINE:
        raise FormatError(f"expected version {ONLINE}, found {env.version}")
    r = BitReader(blob[ENVELOPE_SIZE:])
    _read_pad(r)
    return r.read_bits(r.remaining), env.order, env.length


# -- whole-file API -----------------------------------------------------------


def _encode_offline(data: bytes, order: int, threads: int) -> EahnOutput:
    if threads > 1:
        from .parallel import eahn_encode_parallel

        return eahn_encode_parallel(data, order, threads)
    return eahn_encode(data, order, BYTES)


def compress(
    data: bytes,
    order: int = 1,
    mode: str = "offline",
    fmt: str = "auto",
    threads: int = 1,
) -> bytes:
    """Compress ``data`` into a container.

    ``fmt`` is ``v1``, ``v2``, ``auto`` (v1 for order 1, else v2) or ``raw``;
    v1 requested for another order is routed to v2.  Whenever the result
    would be larger than a raw container the raw container is returned.
    """
    data = bytes(data)
    if not 1 <= order <= _MAX_ORDER:
        raise ValueError(f"order must be in 1..{_MAX_ORDER}, got {order}")
    if mode not in ("offline", "online"):
        raise ValueError(f"unknown mode {mode!r}")
    if fmt not in ("auto", "v1", "v2", "raw"):
        raise ValueError(f"unknown format {fmt!r}")
    raw = serialize_raw(data, order)
    if fmt == "raw" or len(data) < order or not data:
        return raw
    if mode == "online":
        blob = serialize_online(online_encode(data, order, BYTES), order, len(data))
    else:
        out = _encode_offline(data, order, threads)
        if order == 1 and fmt in ("auto", "v1"):
            blob = serialize_v1(out)
        else:
            blob = serialize_v2(out)
    return blob if len(blob) <= len(raw) else raw


def decompress(blob: bytes) -> bytes:
    env = read_envelope(blob)
    if env.version == RAW:
        return parse_raw(blob)
    if env.version == V1:
        out = parse_v1(blob)
    elif env.version == V2:
        out = parse_v2(blob)
    else:
        stream, order, length = parse_online(blob)
        if order < 1:
            raise CorruptStreamError("online container with order 0")
        return online_decode(stream, order, length, BYTES, b"")
    data = eahn_decode(out)
    if len(data) != env.length:
        raise CorruptStreamError("decoded length differs from the envelope")
    return data


def inspect_container(blob: bytes) -> tuple[Envelope, list[Field]]:
    """Envelope plus the body's fields with bit offsets (relative to the body) and widths."""
    env = read_envelope(blob)
    body = blob[ENVELOPE_SIZE:]
    r = BitReader(body)
    fields: list[Field] = []
    if env.version == V1:
        _parse_v1_body(r, env.length, fields)
    elif env.version == V2:
        _parse_v2_body(r, env.order, env.length, fields)
    elif env.version == ONLINE:
        start = r.pos
        pad = _read_pad(r)
        fields.append(Field("pad", start, r.pos - start, str(pad)))
        fields.append(Field("stream", r.pos, r.remaining))
    else:
        fields.append(Field("data", 0, 8 * len(body)))
    return env, fields
