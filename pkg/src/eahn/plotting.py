"""Figures for bench and entropy reports (files only, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .bench import TOTAL, BenchRow  # noqa: E402
from .entropy import EntropyReport  # noqa: E402

__all__ = ["plot_bench", "plot_entropy"]


def plot_bench(rows: list[BenchRow], path) -> Path:
    """Grouped bars of baseline vs EAHn size per file."""
    rows = [r for r in rows if r.file != TOTAL]
    labels = [f"{r.file}\nn={r.order} {r.mode}" for r in rows]
    xs = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(rows) + 2), 4))
    ax.bar([x - 0.2 for x in xs], [r.huffman for r in rows], 0.4, label="order-0 Huffman")
    ax.bar([x + 0.2 for x in xs], [r.eahn for r in rows], 0.4, label="EAHn")
    for x, r in zip(xs, rows):
        ax.annotate(f"{r.improvement:.1f}%", (x + 0.2, r.eahn), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("compressed bytes")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_entropy(report: EntropyReport, path) -> Path:
    """Per-context entropy against realized rate, with the E+1 ceiling."""
    recs = [r for r in report.records if len(r.followers) > 1]
    fig, ax = plt.subplots(figsize=(5, 5))
    if recs:
        e = [r.entropy for r in recs]
        ax.scatter(e, [r.rate for r in recs], s=[max(4.0, min(200.0, r.positions ** 0.5)) for r in recs], alpha=0.6)
        hi = max(e) + 1
        ax.plot([0, hi], [0, hi], "k-", lw=0.8, label="R = E")
        ax.plot([0, hi], [1, hi + 1], "k--", lw=0.8, label="R = E + 1")
        ax.legend()
    ax.set_xlabel("context entropy (bits/symbol)")
    ax.set_ylabel("realized rate (bits/symbol)")
    ax.set_title(f"order {report.order}, {len(recs)} coded contexts")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path
