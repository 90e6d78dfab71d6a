"""Deterministic canonical Huffman kernel and the order-0 entropy/rate formulas."""

from __future__ import annotations

import math
from typing import Sequence

__all__ = [
    "huffman_lengths",
    "canonical_codes",
    "build_huffman",
    "entropy_h",
    "rate_h",
    "kraft_sum",
]


def huffman_lengths(freqs: Sequence[int]) -> list[int]:
    """Optimal codeword lengths for ``freqs`` (index-aligned).

    Merge order is fixed: lowest weight first, ties broken by creation
    order with leaves (by index) created before any merged node.
    """
    h = len(freqs)
    if h < 2:
        raise ValueError(f"build_huffman needs at least 2 frequencies, got {h}")
    for f in freqs:
        if f < 1:
            raise ValueError(f"frequencies must be positive, got {f}")

    # Two-queue construction over the leaves sorted by (weight, index) and the
    # merged nodes in creation order.  Merged weights never decrease, so each
    # queue's head is its minimum under (weight, creation order), and a tie
    # goes to the leaf.
    order = sorted(range(h), key=freqs.__getitem__)
    leaf_w = [freqs[k] for k in order]
    merged_w: list[int] = []
    leaf_parent = [0] * h
    merged_parent = [0] * (h - 1)
    i = j = 0
    for k in range(h - 1):
        if i < h and (j == k or leaf_w[i] <= merged_w[j]):
            wa = leaf_w[i]
            leaf_parent[i] = k
            i += 1
        else:
            wa = merged_w[j]
            merged_parent[j] = k
            j += 1
        if i < h and (j == k or leaf_w[i] <= merged_w[j]):
            wb = leaf_w[i]
            leaf_parent[i] = k
            i += 1
        else:
            wb = merged_w[j]
            merged_parent[j] = k
            j += 1
        merged_w.append(wa + wb)

    depth = [0] * (h - 1)
    for k in range(h - 3, -1, -1):
        depth[k] = depth[merged_parent[k]] + 1
    lengths = [0] * h
    for pos, k in enumerate(order):
        lengths[k] = depth[leaf_parent[pos]] + 1
    return lengths


def canonical_codes(lengths: Sequence[int]) -> list[int]:
    """Canonical code values for ``lengths``, assigned in (length, index) order."""
    codes = [0] * len(lengths)
    code = 0
    prev = min(lengths, default=0)
    for n, i in sorted(zip(lengths, range(len(lengths)))):
        code <<= n - prev
        prev = n
        codes[i] = code
        code += 1
    return codes


def build_huffman(freqs: Sequence[int]) -> tuple[str, ...]:
    """Canonical Huffman codewords for ``freqs`` as bit strings.

    >>> build_huffman((3, 1, 1))
    ('0', '10', '11')
    """
    lengths = huffman_lengths(freqs)
    codes = canonical_codes(lengths)
    return tuple(format(c, f"0{n}b") for c, n in zip(codes, lengths))


def kraft_sum(lengths: Sequence[int]) -> float:
    return math.fsum(2.0 ** -n for n in lengths)


def entropy_h(freqs: Sequence[int], t: int) -> float:
    """Order-0 entropy in bits per symbol: ``(1/t) * sum F_i log2(t / F_i)``."""
    if t != sum(freqs):
        raise ValueError(f"t={t} does not equal the frequency total {sum(freqs)}")
    if any(f < 1 for f in freqs):
        raise ValueError("frequencies must be positive")
    return math.fsum(f * math.log2(t / f) for f in freqs) / t


def rate_h(freqs: Sequence[int], lengths: Sequence[int], t: int) -> float:
    """Realized rate ``(1/t) * sum F_i L_i`` in bits per symbol."""
    if len(lengths) != len(freqs):
        raise ValueError(f"{len(lengths)} lengths for {len(freqs)} frequencies")
    if t != sum(freqs):
        raise ValueError(f"t={t} does not equal the frequency total {sum(freqs)}")
    return sum(f * n for f, n in zip(freqs, lengths)) / t
