"""Per-context entropy and rate analysis of EAHn encodings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .adaptive_code import Alphabet
from .codec import build_codebook, scan_frequencies
from .huffman import entropy_h, rate_h

__all__ = [
    "ContextEntropyRecord",
    "EntropyReport",
    "compression_rate",
    "eahn_entropy",
    "check_context_bounds",
    "check_global_bounds",
    "SLACK",
]

SLACK = 1e-9


def compression_rate(compressed_bits: int, t: int) -> float:
    """Bits of output per input symbol, ``k / t``."""
    if t <= 0:
        raise ValueError("t must be positive")
    if compressed_bits < 0:
        raise ValueError("compressed size must be non-negative")
    return compressed_bits / t


@dataclass(frozen=True)
class ContextEntropyRecord:
    context: tuple
    followers: tuple
    freqs: tuple[int, ...]
    positions: int
    entropy: float
    lengths: tuple[int, ...]
    rate: float

    @property
    def bits(self) -> int:
        return sum(f * n for f, n in zip(self.freqs, self.lengths))


@dataclass(frozen=True)
class EntropyReport:
    """Per-context records plus global figures.

    ``total_entropy`` is the plain sum of per-context entropies.
    ``weighted_entropy`` weights each context by its number of positions and
    is the one comparable to a per-symbol rate.  ``rate`` divides the payload
    size by the whole input length, ``rate_per_encoded`` by the number of
    encoded positions ``t - n``.
    """

    order: int
    length: int
    records: list[ContextEntropyRecord] = field(default_factory=list)

    @property
    def payload_bits(self) -> int:
        return sum(r.bits for r in self.records)

    @property
    def total_entropy(self) -> float:
        return math.fsum(r.entropy for r in self.records)

    @property
    def weighted_entropy(self) -> float:
        positions = sum(r.positions for r in self.records)
        if not positions:
            return 0.0
        return math.fsum(r.positions * r.entropy for r in self.records) / positions

    @property
    def rate(self) -> float:
        return compression_rate(self.payload_bits, self.length) if self.length else 0.0

    @property
    def rate_per_encoded(self) -> float:
        encoded = self.length - self.order
        return self.payload_bits / encoded if encoded > 0 else 0.0

    def lines(self) -> list[str]:
        """Machine-readable ``context,N,E,R`` lines, context as hex symbol indices."""
        out = ["context,N,E,R"]
        for r in self.records:
            out.append(f"{_ctx_label(r.context)},{r.positions},{r.entropy:.6f},{r.rate:.6f}")
        return out


def _ctx_label(ctx: tuple) -> str:
    if all(isinstance(s, int) for s in ctx):
        return bytes(ctx).hex()
    return "".join(map(str, ctx))


def eahn_entropy(x, n: int, alphabet: Alphabet | None = None) -> EntropyReport:
    """Entropy report for ``x`` with order-``n`` contexts; empty if ``|x| <= n``."""
    if len(x) <= n:
        return EntropyReport(n, len(x))
    model = scan_frequencies(x, n, alphabet)
    lengths = build_codebook(model).lengths.tolist()
    records = []
    i = 0
    for ctx, followers, freqs in model.groups():
        lens = tuple(lengths[i : i + len(freqs)])
        i += len(freqs)
        positions = sum(freqs)
        if len(freqs) == 1:
            records.append(ContextEntropyRecord(ctx, followers, freqs, positions, 0.0, lens, 0.0))
        else:
            records.append(
                ContextEntropyRecord(
                    ctx,
                    followers,
                    freqs,
                    positions,
                    entropy_h(freqs, positions),
                    lens,
                    rate_h(freqs, lens, positions),
                )
            )
    return EntropyReport(n, len(x), records)


def check_context_bounds(report: EntropyReport, slack: float = SLACK) -> list[str]:
    """Contexts violating ``E_i <= R_i <= E_i + 1``; empty when all hold."""
    bad = []
    for r in report.records:
        if len(r.followers) < 2:
            continue
        if not (r.entropy - slack <= r.rate <= r.entropy + 1 + slack):
            bad.append(
                f"context {_ctx_label(r.context)}: E={r.entropy:.6f} R={r.rate:.6f} "
                f"outside [E, E+1]"
            )
    return bad


def check_global_bounds(report: EntropyReport, slack: float = SLACK) -> bool:
    """``sum N_i E_i <= |Z| <= sum N_i (E_i + 1)``."""
    lower = math.fsum(r.positions * r.entropy for r in report.records if len(r.followers) > 1)
    upper = lower + sum(r.positions for r in report.records if len(r.followers) > 1)
    z = report.payload_bits
    return lower - slack * max(1.0, lower) <= z <= upper + slack * max(1.0, upper)
