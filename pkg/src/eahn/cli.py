"""Command-line front end: ``eahn compress|decompress|entropy|bench|inspect``.

Exit codes: 0 success, 1 usage, 2 I/O error, 3 corrupt or unrecognised input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from .bench import aggregate, format_table, run_bench, write_csv
from .container import compress, decompress, inspect_container
from .entropy import check_context_bounds, check_global_bounds, compression_rate, eahn_entropy
from .errors import EahnError
from .parallel import default_workers

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_atomic(path: Path, data: bytes | str) -> None:
    """Write to a temp file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data.encode() if isinstance(data, str) else data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _orders(values: list[str] | None) -> list[int]:
    out = []
    for v in values or ["1"]:
        for part in v.split(","):
            try:
                n = int(part)
            except ValueError:
                raise UsageError(f"bad order {part!r}") from None
            if n < 1:
                raise UsageError(f"order must be >= 1, got {n}")
            out.append(n)
    return out


def cmd_compress(args) -> int:
    data = Path(args.input).read_bytes()
    threads = args.threads if args.threads is not None else default_workers()
    try:
        blob = compress(data, args.order, mode=args.mode, fmt=args.format, threads=threads)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write_atomic(Path(args.output), blob)
    rate = compression_rate(8 * len(blob), len(data)) if data else 0.0
    print(f"{args.input}: {len(data)} -> {len(blob)} bytes, {rate:.4f} bits/symbol")
    return EXIT_OK


def cmd_decompress(args) -> int:
    blob = Path(args.input).read_bytes()
    data = decompress(blob)
    _write_atomic(Path(args.output), data)
    print(f"{args.input}: {len(blob)} -> {len(data)} bytes")
    return EXIT_OK


def cmd_entropy(args) -> int:
    data = Path(args.input).read_bytes()
    try:
        report = eahn_entropy(data, args.order)
    except ValueError as e:
        raise UsageError(str(e)) from None
    coded = sum(1 for r in report.records if len(r.followers) > 1)
    print(f"order {report.order}, t={report.length}, {len(report.records)} contexts ({coded} coded)")
    print(f"total entropy (unweighted sum over contexts): {report.total_entropy:.5f}")
    print(f"weighted entropy (bits/symbol):               {report.weighted_entropy:.5f}")
    print(f"payload bits |Z|:                             {report.payload_bits}")
    print(f"rate |Z|/t:                                   {report.rate:.5f}")
    print(f"rate |Z|/(t-n):                               {report.rate_per_encoded:.5f}")
    if args.lines:
        print("\n".join(report.lines()))
    if args.csv:
        _write_atomic(Path(args.csv), "\n".join(report.lines()) + "\n")
    if args.plot:
        from .plotting import plot_entropy

        plot_entropy(report, args.plot)
    if args.verify:
        bad = check_context_bounds(report)
        for line in bad:
            print(line, file=sys.stderr)
        if bad or not check_global_bounds(report):
            print("bound check FAILED", file=sys.stderr)
            return EXIT_CORRUPT
        print("bound check passed")
    return EXIT_OK


def cmd_bench(args) -> int:
    threads = args.threads if args.threads is not None else default_workers()
    rows = run_bench(
        [Path(p) for p in args.paths], _orders(args.order), args.mode or ["offline"],
        verify=True, jobs=args.jobs, threads=threads,
    )
    if not rows:
        print("no readable files", file=sys.stderr)
        return EXIT_IO
    table = rows + aggregate(rows)
    print(format_table(table), end="")
    if args.csv:
        import io

        buf = io.StringIO()
        write_csv(table, buf)
        _write_atomic(Path(args.csv), buf.getvalue())
    if args.plot:
        from .plotting import plot_bench

        plot_bench(table, args.plot)
    return EXIT_OK


def cmd_inspect(args) -> int:
    blob = Path(args.input).read_bytes()
    env, fields = inspect_container(blob)
    names = {0: "raw", 1: "v1", 2: "v2", 3: "online"}
    print(f"version {env.version} ({names.get(env.version, '?')}), order {env.order}, length {env.length}")
    for f in fields:
        value = f"  {f.value}" if f.value is not None else ""
        print(f"{f.name:<18} offset {f.offset:>10}  width {f.width:>10}{value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eahn", description="Order-n adaptive Huffman compressor.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compress", help="compress a file into a container")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--order", "-n", type=int, default=1)
    c.add_argument("--mode", choices=["offline", "online"], default="offline")
    c.add_argument("--threads", type=int, default=None)
    c.add_argument("--format", choices=["auto", "v1", "v2", "raw"], default="auto")
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser("decompress", help="restore the original file")
    d.add_argument("input")
    d.add_argument("output")
    d.set_defaults(func=cmd_decompress)

    e = sub.add_parser("entropy", help="per-context entropy report")
    e.add_argument("input")
    e.add_argument("--order", "-n", type=int, default=1)
    e.add_argument("--verify", action="store_true", help="check the per-context Huffman bounds")
    e.add_argument("--lines", action="store_true", help="print context,N,E,R lines")
    e.add_argument("--csv", help="write context,N,E,R lines to this file")
    e.add_argument("--plot", help="write an entropy-vs-rate figure (PNG, SVG, PDF)")
    e.set_defaults(func=cmd_entropy)

    b = sub.add_parser("bench", help="compare against order-0 Huffman on a corpus")
    b.add_argument("paths", nargs="+", help="files or directories")
    b.add_argument("--order", "-n", action="append", help="order(s), repeatable or comma-separated")
    b.add_argument("--mode", action="append", choices=["offline", "online"])
    b.add_argument("--threads", type=int, default=None)
    b.add_argument("--jobs", type=int, default=1, help="files compressed concurrently")
    b.add_argument("--csv", help="write the table as CSV")
    b.add_argument("--plot", help="write a size comparison figure")
    b.set_defaults(func=cmd_bench)

    i = sub.add_parser("inspect", help="dump container fields")
    i.add_argument("input")
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"eahn: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EahnError as e:
        print(f"eahn: {e}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as e:
        print(f"eahn: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
