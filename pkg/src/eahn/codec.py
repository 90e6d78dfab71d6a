"""Offline EAHn encoder and decoder.

The encoder counts every (context, follower) pair of the input, builds one
canonical Huffman code per context over that context's followers, and
emits the 4-tuple ``(prefix, occurrence, Y, Z)`` plus the input length.
Contexts with a single follower encode it in zero bits.

Internally a context ``u = u_1..u_n`` is the base-``p`` integer of its
symbol indices, and a pair ``(u, s)`` is ``u * p + s``; integer order is
then the ascending lexicographic order of contexts, followers ascending
within each context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .adaptive_code import BYTES, AdaptiveCodeTable, Alphabet, _is_prefix_code
from .bitio import Bits, pack_codes
from .errors import CorruptStreamError
from .huffman import canonical_codes, huffman_lengths

__all__ = [
    "ContextModel",
    "Codebook",
    "EahnOutput",
    "scan_frequencies",
    "build_codebook",
    "eahn_encode",
    "eahn_decode",
]

_DENSE_LIMIT = 1 << 24
_MAX_KEY = 1 << 62
_TABLE_BITS = 12


def _symbol_codes(x, alphabet: Alphabet) -> np.ndarray:
    if isinstance(x, (bytes, bytearray, memoryview)) and alphabet == BYTES:
        return np.frombuffer(bytes(x), dtype=np.uint8).astype(np.int64)
    index = alphabet.index
    return np.fromiter((index(s) for s in x), dtype=np.int64, count=len(x))


def _check_order(n: int, p: int) -> None:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if p ** (n + 1) > _MAX_KEY:
        raise ValueError(f"order {n} is too large for an alphabet of {p} symbols")


def _context_keys(codes: np.ndarray, n: int, p: int) -> np.ndarray:
    """Context integer for every encoded position i = n..t-1 (0-based)."""
    t = codes.size
    ctx = np.zeros(t - n, dtype=np.int64)
    for k in range(n):
        ctx *= p
        ctx += codes[k : t - n + k]
    return ctx


def _scan(codes: np.ndarray, n: int, p: int):
    """Sorted distinct pair keys, their counts, and each position's pair index."""
    keys = _context_keys(codes, n, p) * p + codes[n:]
    space = p ** (n + 1)
    if space <= _DENSE_LIMIT:
        hist = np.bincount(keys, minlength=space)
        pairs = np.flatnonzero(hist)
        counts = hist[pairs]
        where = np.full(space, -1, dtype=np.int64)
        where[pairs] = np.arange(pairs.size)
        inverse = where[keys]
    else:
        pairs, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    return pairs.astype(np.int64), counts.astype(np.int64), inverse.reshape(-1)


def _groups(pairs: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Start/end indices of each context's run of pairs."""
    if pairs.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    ctx = pairs // p
    starts = np.concatenate(([0], np.flatnonzero(np.diff(ctx)) + 1))
    ends = np.concatenate((starts[1:], [pairs.size]))
    return starts, ends


def _decode_context(ctx: int, n: int, p: int) -> list[int]:
    out = []
    for _ in range(n):
        ctx, r = divmod(ctx, p)
        out.append(r)
    return out[::-1]


@dataclass(frozen=True, eq=False)
class ContextModel:
    """Per-context follower counts of an input (only pairs that occur are stored)."""

    order: int
    alphabet: Alphabet
    pairs: np.ndarray
    counts: np.ndarray

    @property
    def p(self) -> int:
        return len(self.alphabet)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def _key(self, symbol, context: Sequence) -> int:
        ctx = tuple(context)
        if len(ctx) != self.order:
            raise ValueError(f"context {ctx!r} must have exactly {self.order} symbols")
        key = 0
        for s in ctx + (symbol,):
            key = key * self.p + self.alphabet.index(s)
        return key

    def _find(self, key: int) -> int:
        i = int(np.searchsorted(self.pairs, key))
        return i if i < self.pairs.size and self.pairs[i] == key else -1

    def count(self, symbol, context: Sequence) -> int:
        """The frequency ``Freq(u s)``; zero for pairs that never occur."""
        i = self._find(self._key(symbol, context))
        return int(self.counts[i]) if i >= 0 else 0

    def occurs(self, symbol, context: Sequence) -> int:
        return int(self._find(self._key(symbol, context)) >= 0)

    def context_symbols(self, ctx: int) -> tuple:
        syms = self.alphabet.symbols
        return tuple(syms[i] for i in _decode_context(ctx, self.order, self.p))

    def contexts(self) -> list[tuple]:
        """Occurring contexts in ascending order."""
        starts, _ = _groups(self.pairs, self.p)
        return [self.context_symbols(int(c)) for c in self.pairs[starts] // self.p]

    def followers(self, context: Sequence) -> tuple:
        base = self._key(self.alphabet.symbols[0], context)
        lo = np.searchsorted(self.pairs, base)
        hi = np.searchsorted(self.pairs, base + self.p)
        syms = self.alphabet.symbols
        return tuple(syms[int(k) % self.p] for k in self.pairs[lo:hi])

    def groups(self) -> Iterator[tuple[tuple, tuple, tuple]]:
        """Yield ``(context, followers, frequencies)`` per occurring context."""
        syms = self.alphabet.symbols
        starts, ends = _groups(self.pairs, self.p)
        keys = self.pairs.tolist()
        counts = self.counts.tolist()
        for s, e in zip(starts.tolist(), ends.tolist()):
            yield (
                self.context_symbols(keys[s] // self.p),
                tuple(syms[k % self.p] for k in keys[s:e]),
                tuple(counts[s:e]),
            )


def scan_frequencies(x, n: int, alphabet: Alphabet | None = None) -> ContextModel:
    """Count every (context, follower) pair at positions n+1..t of ``x``."""
    alphabet = alphabet or Alphabet.of(x)
    _check_order(n, len(alphabet))
    if len(x) < n:
        raise ValueError(f"input of length {len(x)} is shorter than the order {n}")
    pairs, counts, _ = _scan(_symbol_codes(x, alphabet), n, len(alphabet))
    return ContextModel(n, alphabet, pairs, counts)


def _assign_codes(counts: np.ndarray, starts, ends) -> tuple[np.ndarray, np.ndarray]:
    """Huffman lengths and canonical values per pair; length 0 means the empty codeword."""
    lengths = np.zeros(counts.size, dtype=np.int64)
    values = np.zeros(counts.size, dtype=np.uint64)
    multi = np.flatnonzero((ends - starts) >= 2)
    counts_list = counts.tolist()
    for g in multi.tolist():
        s, e = int(starts[g]), int(ends[g])
        lens = huffman_lengths(counts_list[s:e])
        lengths[s:e] = lens
        values[s:e] = canonical_codes(lens)
    return lengths, values


@dataclass(frozen=True, eq=False)
class Codebook:
    """Per-pair codewords produced by :func:`build_codebook`, aligned with ``model.pairs``."""

    model: ContextModel
    lengths: np.ndarray
    values: np.ndarray

    @property
    def maxlc(self) -> int:
        return int(self.lengths.max()) if self.lengths.size else 0

    def codeword(self, symbol, context: Sequence) -> str:
        """The assigned codeword; ``""`` for single-follower contexts."""
        i = self.model._find(self.model._key(symbol, context))
        if i < 0:
            raise KeyError((symbol, tuple(context)))
        n = int(self.lengths[i])
        return format(int(self.values[i]), f"0{n}b") if n else ""

    def y(self) -> tuple[str, ...]:
        return _y_tuple(self.lengths, self.values)

    def table(self) -> AdaptiveCodeTable:
        """Partial adaptive code table holding the nonempty codewords."""
        m = self.model
        entries = {}
        for k, n, v in zip(m.pairs.tolist(), self.lengths.tolist(), self.values.tolist()):
            if n:
                entries[(m.alphabet.symbols[k % m.p], m.context_symbols(k // m.p))] = format(
                    v, f"0{n}b"
                )
        return AdaptiveCodeTable(m.order, m.alphabet, entries)


def _y_tuple(lengths: np.ndarray, values: np.ndarray) -> tuple[str, ...]:
    return tuple(
        bin(v | (1 << n))[3:] for n, v in zip(lengths.tolist(), values.tolist()) if n
    )


def build_codebook(model: ContextModel) -> Codebook:
    starts, ends = _groups(model.pairs, model.p)
    lengths, values = _assign_codes(model.counts, starts, ends)
    return Codebook(model, lengths, values)


@dataclass(frozen=True, eq=False)
class EahnOutput:
    """Encoder output: ``(prefix, occurrence, Y, Z)`` plus the original length.

    ``pairs`` holds the occurrence function as the sorted keys of pairs
    with ``b = 1``.
    """

    order: int
    alphabet: Alphabet
    prefix: Sequence
    pairs: np.ndarray
    y: tuple[str, ...]
    z: Bits
    length: int

    @property
    def p(self) -> int:
        return len(self.alphabet)

    def occurs(self, symbol, context: Sequence) -> int:
        key = 0
        for s in tuple(context) + (symbol,):
            key = key * self.p + self.alphabet.index(s)
        i = int(np.searchsorted(self.pairs, key))
        return int(i < self.pairs.size and self.pairs[i] == key)

    def occurrence(self) -> dict[tuple, int]:
        """``b`` as a mapping ``(symbol, context) -> 1`` over its nonzero entries."""
        syms = self.alphabet.symbols
        return {
            (syms[k % self.p], tuple(syms[i] for i in _decode_context(k // self.p, self.order, self.p))): 1
            for k in self.pairs.tolist()
        }

    @property
    def maxlc(self) -> int:
        return max(map(len, self.y), default=0)

    def __eq__(self, other):
        if not isinstance(other, EahnOutput):
            return NotImplemented
        return (
            self.order == other.order
            and self.alphabet == other.alphabet
            and tuple(self.prefix) == tuple(other.prefix)
            and np.array_equal(self.pairs, other.pairs)
            and self.y == other.y
            and self.z == other.z
            and self.length == other.length
        )

    __hash__ = None


def _emit(prefix, n, alphabet, pairs, lengths, values, inverse, t) -> EahnOutput:
    z = pack_codes(values[inverse], lengths[inverse])
    return EahnOutput(n, alphabet, prefix, pairs, _y_tuple(lengths, values), z, t)


def eahn_encode(x, n: int, alphabet: Alphabet | None = None) -> EahnOutput:
    """Offline EAHn encoding of ``x`` with contexts of ``n`` symbols.

    >>> str(eahn_encode("baabbabab", 2).z)
    '01101'
    """
    alphabet = alphabet or Alphabet.of(x)
    p = len(alphabet)
    _check_order(n, p)
    if len(x) < n:
        raise ValueError(f"input of length {len(x)} is shorter than the order {n}")
    codes = _symbol_codes(x, alphabet)
    pairs, counts, inverse = _scan(codes, n, p)
    starts, ends = _groups(pairs, p)
    lengths, values = _assign_codes(counts, starts, ends)
    return _emit(x[:n], n, alphabet, pairs, lengths, values, inverse, len(x))


def _decoder_tables(out: EahnOutput) -> dict[int, object]:
    """Map context integer -> follower (single) or (bits, lookup, slow) decoder."""
    p = out.p
    starts, ends = _groups(out.pairs, p)
    keys = out.pairs.tolist()
    y = out.y
    k = 0
    tables: dict[int, object] = {}
    for s, e in zip(starts.tolist(), ends.tolist()):
        ctx = keys[s] // p
        followers = [key % p for key in keys[s:e]]
        if len(followers) == 1:
            tables[ctx] = followers[0]
            continue
        words = y[k : k + len(followers)]
        k += len(followers)
        if len(words) < len(followers):
            raise CorruptStreamError("codeword tuple Y is shorter than the occurrence map requires")
        if not all(words) or not _is_prefix_code(list(words)):
            raise CorruptStreamError(f"codewords for context {ctx} are not a prefix code")
        width = min(max(map(len, words)), _TABLE_BITS)
        lookup = [-1] * (1 << width)
        slow: dict[tuple[int, int], int] = {}
        for sym, w in zip(followers, words):
            v = int(w, 2)
            if len(w) <= width:
                lo = v << (width - len(w))
                hi = (v + 1) << (width - len(w))
                lookup[lo:hi] = [(sym << 8) | len(w)] * (hi - lo)
            else:
                lookup[v >> (len(w) - width)] = -2
                slow[(len(w), v)] = sym
        tables[ctx] = (width, lookup, slow, sorted({n for n, _ in slow}))
    if k != len(y):
        raise CorruptStreamError(f"codeword tuple Y has {len(y) - k} unused entries")
    return tables


def _peek(buf: bytes, pos: int, width: int) -> int:
    b0 = pos >> 3
    nbytes = ((pos & 7) + width + 7) >> 3
    v = int.from_bytes(buf[b0 : b0 + nbytes], "big")
    return (v >> (nbytes * 8 - (pos & 7) - width)) & ((1 << width) - 1)


def _decode_codes(out: EahnOutput, prefix_codes: list[int]) -> list[int]:
    n, p, t = out.order, out.p, out.length
    tables = _decoder_tables(out)
    buf = out.z.data + bytes(40)
    nbits = out.z.length
    wrap = p ** (n - 1)
    ctx = 0
    for c in prefix_codes:
        ctx = ctx * p + c
    result = list(prefix_codes)
    append = result.append
    pos = 0
    get = tables.get
    for _ in range(t - n):
        entry = get(ctx)
        if entry is None:
            raise CorruptStreamError(f"context {ctx} has no followers at output position {len(result)}")
        if entry.__class__ is int:
            sym = entry
        else:
            width, lookup, slow, slow_lengths = entry
            b0 = pos >> 3
            v = int.from_bytes(buf[b0 : b0 + 8], "big")
            hit = lookup[(v >> (64 - (pos & 7) - width)) & ((1 << width) - 1)]
            if hit >= 0:
                sym = hit >> 8
                pos += hit & 0xFF
            elif hit == -1:
                raise CorruptStreamError(f"no codeword matches at bit {pos}")
            else:
                for length in slow_lengths:
                    sym = slow.get((length, _peek(buf, pos, length)))
                    if sym is not None:
                        pos += length
                        break
                else:
                    raise CorruptStreamError(f"no codeword matches at bit {pos}")
            if pos > nbits:
                raise CorruptStreamError("payload Z exhausted before the last symbol")
        append(sym)
        ctx = (ctx % wrap) * p + sym
    if pos != nbits:
        raise CorruptStreamError(f"{nbits - pos} bits remain after the last symbol")
    return result


def _restore(codes: list[int], alphabet: Alphabet, like):
    if isinstance(like, (bytes, bytearray)) and alphabet == BYTES:
        return bytes(codes)
    syms = alphabet.symbols
    if isinstance(like, str):
        return "".join(syms[c] for c in codes)
    return [syms[c] for c in codes]


def eahn_decode(out: EahnOutput):
    """Invert :func:`eahn_encode`; returns the same type as the encoded prefix."""
    if len(out.prefix) != out.order or out.length < out.order:
        raise CorruptStreamError("prefix does not match the order / length")
    prefix_codes = [out.alphabet.index(s) for s in out.prefix]
    return _restore(_decode_codes(out, prefix_codes), out.alphabet, out.prefix)
