"""Corpus benchmark: EAHn against the order-0 Huffman baseline."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .baseline import huffman_compress, huffman_decompress
from .container import compress, decompress

__all__ = ["BenchRow", "bench_file", "run_bench", "aggregate", "write_csv", "format_table", "TOTAL"]

log = logging.getLogger(__name__)

TOTAL = "TOTAL"
CSV_FIELDS = ["file", "order", "mode", "original", "huffman", "eahn", "improvement"]


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchRow:
    file: str
    order: int
    mode: str
    original: int
    huffman: int
    eahn: int

    @property
    def improvement(self) -> float:
        """Percent size reduction relative to the Huffman baseline."""
        if self.huffman == 0:
            return 0.0
        return 100.0 * (1.0 - self.eahn / self.huffman)

    def as_dict(self) -> dict:
        return {
            "file": self.file,
            "order": self.order,
            "mode": self.mode,
            "original": self.original,
            "huffman": self.huffman,
            "eahn": self.eahn,
            "improvement": f"{self.improvement:.2f}",
        }


def bench_file(
    name: str, data: bytes, orders: Iterable[int] = (1,), modes: Iterable[str] = ("offline",),
    verify: bool = True, threads: int = 1,
) -> list[BenchRow]:
    """Rows for one input; with ``verify`` every output is decoded and compared first."""
    base = huffman_compress(data)
    if verify and huffman_decompress(base) != data:
        raise VerificationError(f"{name}: baseline roundtrip mismatch")
    rows = []
    for mode in modes:
        for n in orders:
            blob = compress(data, n, mode=mode, threads=threads)
            if verify and decompress(blob) != data:
                raise VerificationError(f"{name}: order {n} {mode} roundtrip mismatch")
            rows.append(BenchRow(name, n, mode, len(data), len(base), len(blob)))
    return rows


def _inputs(paths: Iterable[Path]) -> list[Path]:
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(q for q in p.iterdir() if q.is_file())
        else:
            files.append(p)
    return sorted(files, key=lambda q: q.name)


def run_bench(
    paths: Iterable[Path], orders: Iterable[int] = (1,), modes: Iterable[str] = ("offline",),
    verify: bool = True, jobs: int = 1, threads: int = 1,
) -> list[BenchRow]:
    """Benchmark every file in ``paths`` (directories are listed one level deep).

    Unreadable files are skipped with a warning.  Rows come back sorted by file
    name whatever ``jobs`` is.
    """
    orders, modes = tuple(orders), tuple(modes)

    def one(path: Path) -> list[BenchRow]:
        try:
            data = path.read_bytes()
        except OSError as e:
            log.warning("skipping %s: %s", path, e)
            return []
        return bench_file(path.name, data, orders, modes, verify, threads)

    files = _inputs(paths)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, files))
    else:
        results = [one(f) for f in files]
    return [row for rows in results for row in rows]


def aggregate(rows: list[BenchRow]) -> list[BenchRow]:
    """One TOTAL row per (order, mode); improvement follows from the summed sizes."""
    totals: dict[tuple[int, str], list[int]] = {}
    for r in rows:
        acc = totals.setdefault((r.order, r.mode), [0, 0, 0])
        acc[0] += r.original
        acc[1] += r.huffman
        acc[2] += r.eahn
    return [BenchRow(TOTAL, n, mode, *acc) for (n, mode), acc in totals.items()]


def write_csv(rows: list[BenchRow], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
    w.writeheader()
    for r in rows:
        w.writerow(r.as_dict())


def format_table(rows: list[BenchRow]) -> str:
    out = io.StringIO()
    out.write(f"{'file':<24}{'n':>3} {'mode':<8}{'original':>12}{'huffman':>12}{'eahn':>12}{'impr %':>9}\n")
    for r in rows:
        out.write(
            f"{r.file:<24}{r.order:>3} {r.mode:<8}{r.original:>12}{r.huffman:>12}"
            f"{r.eahn:>12}{r.improvement:>9.2f}\n"
        )
    out.write("(baseline sizes include its 1024-byte frequency header)\n")
    return out.getvalue()
