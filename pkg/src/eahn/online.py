"""Online (streaming) EAHn.

Each symbol is coded with a Huffman code built from the counts its context
has accumulated so far, plus an escape pseudo-symbol of weight 1 that
announces a follower never seen in that context; an escape is followed by
the symbol as an 8-bit literal.  Followers keep first-seen order and the
escape comes last.  The first ``n`` symbols are plain literals.

Encoder and decoder drive the same :class:`OnlineState`, so their tables
stay in lockstep by construction.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .adaptive_code import BYTES, Alphabet
from .bitio import Bits
from .codec import _restore
from .errors import CorruptStreamError
from .huffman import canonical_codes, huffman_lengths

__all__ = ["OnlineState", "online_encode", "online_decode", "LITERAL_BITS"]

LITERAL_BITS = 8
ESCAPE = -1


class OnlineState:
    """Running per-context follower counts for one stream.

    Not safe to share between threads; use one state per stream.
    """

    def __init__(self, order: int) -> None:
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        self.order = order
        # context tuple -> [followers in first-seen order, counts, follower -> slot]
        self.contexts: dict[tuple, list] = {}

    def code(self, context: tuple) -> tuple[list, list[tuple[int, int]]] | None:
        """Current code for ``context`` as (symbols incl. ESCAPE, [(value, length)]).

        ``None`` when the context has no followers yet (a bare literal follows).
        """
        entry = self.contexts.get(context)
        if entry is None:
            return None
        followers, counts, _ = entry
        lengths = huffman_lengths(counts + [1])
        values = canonical_codes(lengths)
        return followers + [ESCAPE], list(zip(values, lengths))

    def update(self, context: tuple, symbol: int) -> None:
        entry = self.contexts.get(context)
        if entry is None:
            self.contexts[context] = [[symbol], [1], {symbol: 0}]
            return
        followers, counts, slot = entry
        i = slot.get(symbol)
        if i is None:
            slot[symbol] = len(followers)
            followers.append(symbol)
            counts.append(1)
        else:
            counts[i] += 1

    def snapshot(self) -> dict[tuple, tuple]:
        return {ctx: tuple(zip(e[0], e[1])) for ctx, e in self.contexts.items()}


class _Writer:
    def __init__(self) -> None:
        self.out = bytearray()
        self.acc = 0
        self.nacc = 0
        self.length = 0

    def put(self, value: int, width: int) -> None:
        self.acc = (self.acc << width) | value
        self.nacc += width
        self.length += width
        while self.nacc >= 8:
            self.nacc -= 8
            self.out.append((self.acc >> self.nacc) & 0xFF)
        self.acc &= (1 << self.nacc) - 1

    def bits(self) -> Bits:
        data = bytes(self.out)
        if self.nacc:
            data += bytes([(self.acc << (8 - self.nacc)) & 0xFF])
        return Bits(data, self.length)


def _literal_codes(x, alphabet: Alphabet) -> list[int]:
    if len(alphabet) > 1 << LITERAL_BITS:
        raise ValueError(f"online mode needs an alphabet of at most {1 << LITERAL_BITS} symbols")
    if isinstance(x, (bytes, bytearray)) and alphabet == BYTES:
        return list(x)
    return [alphabet.index(s) for s in x]


Observer = Callable[[int, tuple, "OnlineState", "tuple | None"], None]


def online_encode(
    x: Sequence, n: int, alphabet: Alphabet | None = None, observer: Observer | None = None
) -> Bits:
    """Encode ``x`` in one pass.  ``observer(i, context, state, code)`` is called
    before each symbol is coded (for instrumentation)."""
    alphabet = alphabet or Alphabet.of(x)
    codes = _literal_codes(x, alphabet)
    state = OnlineState(n)
    w = _Writer()
    for c in codes[:n]:
        w.put(c, LITERAL_BITS)
    for i in range(n, len(codes)):
        ctx = tuple(codes[i - n : i])
        sym = codes[i]
        code = state.code(ctx)
        if observer is not None:
            observer(i, ctx, state, code)
        if code is None:
            w.put(sym, LITERAL_BITS)
        else:
            followers, words = code
            entry = state.contexts[ctx]
            slot = entry[2].get(sym)
            if slot is None:
                w.put(*words[-1])
                w.put(sym, LITERAL_BITS)
            else:
                w.put(*words[slot])
        state.update(ctx, sym)
    return w.bits()


def online_decode(
    bits: Bits,
    n: int,
    length: int,
    alphabet: Alphabet = BYTES,
    like=b"",
    observer: Observer | None = None,
):
    """Decode ``length`` symbols from ``bits``; the result type follows ``like``."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    buf = bits.data + bytes(16)
    nbits = bits.length
    pos = 0
    p = len(alphabet)

    def literal() -> int:
        nonlocal pos
        if pos + LITERAL_BITS > nbits:
            raise CorruptStreamError(f"truncated literal at bit {pos}")
        b0 = pos >> 3
        v = int.from_bytes(buf[b0 : b0 + 2], "big")
        sym = (v >> (16 - (pos & 7) - LITERAL_BITS)) & 0xFF
        pos += LITERAL_BITS
        if sym >= p:
            raise CorruptStreamError(f"literal {sym} outside the alphabet")
        return sym

    out: list[int] = []
    for _ in range(min(n, length)):
        out.append(literal())
    state = OnlineState(n)
    for i in range(n, length):
        ctx = tuple(out[i - n : i])
        code = state.code(ctx)
        if observer is not None:
            observer(i, ctx, state, code)
        if code is None:
            sym = literal()
        else:
            followers, words = code
            lookup = {(ln, v): s for s, (v, ln) in zip(followers, words)}
            maxlen = max(ln for _, ln in words)
            v = 0
            for ln in range(1, maxlen + 1):
                if pos >= nbits:
                    raise CorruptStreamError("stream exhausted inside a codeword")
                v = (v << 1) | ((buf[pos >> 3] >> (7 - (pos & 7))) & 1)
                pos += 1
                sym = lookup.get((ln, v))
                if sym is not None:
                    break
            else:
                raise CorruptStreamError(f"no codeword matches at bit {pos}")
            if sym == ESCAPE:
                sym = literal()
                if sym in state.contexts[ctx][2]:
                    raise CorruptStreamError("escape used for a follower already seen")
        out.append(sym)
        state.update(ctx, sym)
    if pos != nbits:
        raise CorruptStreamError(f"{nbits - pos} bits remain after the last symbol")
    return _restore(out, alphabet, like)
