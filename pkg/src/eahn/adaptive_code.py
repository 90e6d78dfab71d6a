"""Adaptive variable-length codes of order n as explicit tables.

A code maps each pair ``(symbol, context)`` to a binary codeword, where the
context is the (up to ``order``) symbols preceding the one being encoded.
At the start of the input the context is the literal shorter prefix; there
is no padding symbol.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import MissingCodewordError

__all__ = [
    "Alphabet",
    "AdaptiveCodeTable",
    "encode_extension",
    "verify_prefix_contexts",
    "check_injectivity_bruteforce",
    "parse_table",
    "load_table",
    "format_table",
]

LAMBDA = "-"
BRUTEFORCE_LIMIT = 5_000_000


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbols; index order is ascending symbol value."""

    symbols: tuple

    def __post_init__(self):
        syms = tuple(sorted(set(self.symbols)))
        if len(syms) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if not syms:
            raise ValueError("alphabet must not be empty")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(syms)})

    @classmethod
    def of(cls, data: Iterable[Hashable]) -> Alphabet:
        """The smallest alphabet covering ``data``; bytes always get all 256 values."""
        if isinstance(data, (bytes, bytearray, memoryview)):
            return BYTES
        return cls(tuple(set(data)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self._index[symbol]

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __repr__(self) -> str:
        if self is BYTES or self.symbols == BYTES.symbols:
            return "Alphabet(bytes)"
        return f"Alphabet({self.symbols!r})"


BYTES = Alphabet(tuple(range(256)))


@dataclass(frozen=True)
class AdaptiveCodeTable:
    """Explicit mapping ``(symbol, context) -> codeword``.

    ``entries`` keys are ``(symbol, tuple_of_context_symbols)``; codewords are
    strings over ``"01"``.  Hand-authored tables are total over
    ``alphabet x alphabet^{<=order}``; tables generated by the codec are
    partial, with absent entries meaning the empty codeword.
    """

    order: int
    alphabet: Alphabet
    entries: Mapping[tuple, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        for (sym, ctx), cw in self.entries.items():
            if len(ctx) > self.order:
                raise ValueError(f"context {ctx!r} longer than order {self.order}")
            if cw.strip("01"):
                raise ValueError(f"codeword {cw!r} is not binary")

    def codeword(self, symbol, context: Sequence) -> str:
        try:
            return self.entries[(symbol, tuple(context))]
        except KeyError:
            raise MissingCodewordError(symbol, context) from None

    def contexts(self) -> list[tuple]:
        return sorted({ctx for _, ctx in self.entries}, key=lambda c: (len(c), c))

    def codeword_set(self, context: Sequence) -> list[str]:
        """The codewords ``C_u`` stored for context ``u`` (with multiplicity)."""
        ctx = tuple(context)
        return [cw for (_, c), cw in self.entries.items() if c == ctx]

    def is_total(self) -> bool:
        expected = _count_contexts(len(self.alphabet), self.order) * len(self.alphabet)
        return len(self.entries) == expected


def _count_contexts(p: int, n: int) -> int:
    return sum(p**k for k in range(n + 1))


def encode_extension(table: AdaptiveCodeTable, data: Sequence) -> str:
    """Encode ``data`` symbol by symbol, each in the context of its predecessors.

    >>> t = AdaptiveCodeTable(1, Alphabet(("a", "b")), {
    ...     ("a", ()): "0", ("b", ()): "1",
    ...     ("a", ("a",)): "1", ("b", ("a",)): "0",
    ...     ("a", ("b",)): "0", ("b", ("b",)): "1"})
    >>> encode_extension(t, "aab")
    '010'
    """
    n = table.order
    out = []
    for i, sym in enumerate(data):
        out.append(table.codeword(sym, tuple(data[max(0, i - n) : i])))
    return "".join(out)


def _is_prefix_code(words: list[str]) -> bool:
    words = sorted(words)
    for a, b in zip(words, words[1:]):
        if b.startswith(a):
            return False
    return True


def verify_prefix_contexts(table: AdaptiveCodeTable) -> bool:
    """True iff every per-context codeword set is a prefix code.

    Duplicates and proper prefixes both fail.  This is a sufficient
    condition for the table to be an adaptive code (injective extension).
    """
    by_ctx: dict[tuple, list[str]] = {}
    for (_, ctx), cw in table.entries.items():
        by_ctx.setdefault(ctx, []).append(cw)
    return all(_is_prefix_code(ws) for ws in by_ctx.values())


def check_injectivity_bruteforce(table: AdaptiveCodeTable, max_len: int) -> bool:
    """Check that :func:`encode_extension` is injective on all inputs of length <= ``max_len``.

    Inputs whose encoding would need a missing entry are outside the
    domain and are skipped.  Raises ``ValueError`` if the enumeration would
    exceed ``BRUTEFORCE_LIMIT`` strings.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    p = len(table.alphabet)
    if _count_contexts(p, max_len) > BRUTEFORCE_LIMIT:
        raise ValueError(
            f"enumerating {p}^<= {max_len} inputs exceeds the limit of {BRUTEFORCE_LIMIT}"
        )
    n = table.order
    symbols = table.alphabet.symbols
    seen: dict[str, tuple] = {"": ()}
    # Depth-first over input strings, extending each parent's encoding.
    stack: list[tuple[tuple, str]] = [((), "")]
    while stack:
        prefix, code = stack.pop()
        if len(prefix) == max_len:
            continue
        ctx = prefix[-n:] if prefix else ()
        for sym in symbols:
            cw = table.entries.get((sym, ctx))
            if cw is None:
                continue
            word = prefix + (sym,)
            enc = code + cw
            if enc in seen:
                return False
            seen[enc] = word
            stack.append((word, enc))
    return True


def parse_table(text: str) -> AdaptiveCodeTable:
    """Parse the plain-text table format.

    The first non-comment line lists the context columns (``-`` is the empty
    context); each following line is a symbol followed by one codeword per
    column, ``-`` meaning the entry is absent.  Symbols are single
    characters and a context is written as the concatenation of its symbols.
    """
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValueError("empty table")
    header = [() if c == LAMBDA else tuple(c) for c in rows[0]]
    order = max((len(c) for c in header), default=0)
    entries = {}
    symbols = []
    for row in rows[1:]:
        sym, words = row[0], row[1:]
        if len(words) != len(header):
            raise ValueError(f"row {sym!r} has {len(words)} codewords for {len(header)} contexts")
        symbols.append(sym)
        for ctx, cw in zip(header, words):
            if cw != LAMBDA:
                entries[(sym, ctx)] = cw
    return AdaptiveCodeTable(max(order, 1), Alphabet(tuple(symbols)), entries)


def load_table(path: str | os.PathLike) -> AdaptiveCodeTable:
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh.read())


def format_table(table: AdaptiveCodeTable) -> str:
    ctxs = table.contexts()
    ctxs = [c for c in ctxs if c] + [()]
    header = ["".join(map(str, c)) if c else LAMBDA for c in ctxs]
    lines = [" ".join(header)]
    for sym in table.alphabet:
        words = [table.entries.get((sym, c), LAMBDA) for c in ctxs]
        lines.append(" ".join([str(sym)] + words))
    return "\n".join(lines) + "\n"
