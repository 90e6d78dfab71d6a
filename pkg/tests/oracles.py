"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from collections import Counter


def optimal_prefix_cost(freqs) -> int:
    """Minimum sum f*l over all length vectors obeying Kraft (exhaustive)."""
    h = len(freqs)
    best = None
    for lengths in itertools.product(range(1, h), repeat=h):
        if sum(2.0 ** -l for l in lengths) <= 1.0:
            cost = sum(f * l for f, l in zip(freqs, lengths))
            best = cost if best is None else min(best, cost)
    return best


def sliding_tally(x, n) -> Counter:
    """Counter of (context tuple, follower) over positions n..t-1."""
    return Counter((tuple(x[i - n : i]), x[i]) for i in range(n, len(x)))


def pack_bits_str(values, lengths) -> str:
    return "".join(format(int(v), f"0{int(l)}b") if l else "" for v, l in zip(values, lengths))


def context_entropy(freqs) -> float:
    """Entropy of one follower distribution, via natural logs."""
    total = sum(freqs)
    return sum(f * (math.log(total) - math.log(f)) for f in freqs) / total / math.log(2)


def is_prefix_free(words) -> bool:
    return not any(a != b and b.startswith(a) for a in words for b in words) and len(set(words)) == len(words)
