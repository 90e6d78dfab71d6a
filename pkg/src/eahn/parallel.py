"""Fork-join EAHn encoder.

Phases: (1) sequential frequency scan; (2) per-context Huffman builds and
(3) per-context codeword assembly, both spread over workers that each own a
disjoint set of contexts; (4) sequential concatenation of the per-context
codewords in context order and emission of the payload.  The result is
bit-identical to :func:`eahn.codec.eahn_encode`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .adaptive_code import Alphabet
from .codec import EahnOutput, _check_order, _groups, _scan, _symbol_codes
from .bitio import pack_codes
from .huffman import canonical_codes, huffman_lengths

__all__ = ["ContextTask", "eahn_encode_parallel", "default_workers", "THREADS_ENV"]

THREADS_ENV = "EAHN_THREADS"


def default_workers() -> int:
    """Worker count from ``$EAHN_THREADS``, else 1."""
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    n = int(value)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


@dataclass
class ContextTask:
    """One context's slice of follower frequencies and its result slot.

    A task is claimed by exactly one worker; ``claim`` enforces that.
    """

    index: int
    start: int
    freqs: list[int]
    lengths: list[int] | None = None
    values: list[int] | None = None
    words: list[str] = field(default_factory=list)
    owner: int | None = None

    def claim(self, worker: int) -> None:
        if __debug__:
            if self.owner is not None and self.owner != worker:
                raise AssertionError(
                    f"context task {self.index} touched by worker {worker}, owned by {self.owner}"
                )
        self.owner = worker


def _build(worker: int, tasks: list[ContextTask]) -> None:
    for task in tasks:
        task.claim(worker)
        task.lengths = huffman_lengths(task.freqs)
        task.values = canonical_codes(task.lengths)


def _assemble(worker: int, tasks: list[ContextTask]) -> None:
    for task in tasks:
        task.claim(worker)
        task.words = [bin(v | (1 << n))[3:] for v, n in zip(task.values, task.lengths)]


def eahn_encode_parallel(
    x, n: int, workers: int | None = None, alphabet: Alphabet | None = None
) -> EahnOutput:
    """Encode like :func:`eahn.codec.eahn_encode`, building per-context codes on ``workers`` threads."""
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    alphabet = alphabet or Alphabet.of(x)
    p = len(alphabet)
    _check_order(n, p)
    if len(x) < n:
        raise ValueError(f"input of length {len(x)} is shorter than the order {n}")

    pairs, counts, inverse = _scan(_symbol_codes(x, alphabet), n, p)

    starts, ends = _groups(pairs, p)
    counts_list = counts.tolist()
    tasks = [
        ContextTask(g, s, counts_list[s:e])
        for g, (s, e) in enumerate(zip(starts.tolist(), ends.tolist()))
        if e - s >= 2
    ]
    # Round-robin by context index: partitions are disjoint by construction.
    parts = [tasks[w::workers] for w in range(workers)]

    if workers == 1:
        _build(0, parts[0])
        _assemble(0, parts[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(_build, range(workers), parts))
            list(pool.map(_assemble, range(workers), parts))

    lengths = np.zeros(pairs.size, dtype=np.int64)
    values = np.zeros(pairs.size, dtype=np.uint64)
    y: list[str] = []
    for task in tasks:
        s = task.start
        lengths[s : s + len(task.freqs)] = task.lengths
        values[s : s + len(task.freqs)] = task.values
        y.extend(task.words)
    z = pack_codes(values[inverse], lengths[inverse])
    return EahnOutput(n, alphabet, x[:n], pairs, tuple(y), z, len(x))
