"""Command-line front end.

Subcommands: encode, decode, stats, generate, reorder, improve, size, bench.
Every run is reproducible: all randomness flows from --seed (default 0,
never the clock), and rerunning a command on the same input produces a
byte-identical output file. Reports print as aligned text by default or as
line-delimited JSON records with --format records.

Exit codes: 0 success, 2 usage error, 3 data-format error, 4 refusal of a
quadratic heuristic on an oversized input (override with --force).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bench import REGISTRY, characterize_table, median_reductions, render_table, run_benchmark
from .codecs import BLOCK_SIZE, CODEC_NAMES, compress_table
from .datagen import DISTRIBUTIONS, GenSpec, generate
from .heuristics import (
    TableTooLarge,
    improve_ahdo,
    improve_one_reinsertion,
    improve_peephole,
)
from .orders import ORDER_NAMES, sort_rows
from .partition import HEURISTIC_IDS, PartitionPlan, apply_partitioned
from .storage import FormatError, read_csv, read_table, write_csv, write_table
from .table import run_counts

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_GATE = 4


def _emit(args, record: dict, text: str) -> None:
    if args.format == "records":
        print(json.dumps(record))
    else:
        print(text)


def _load(path: str):
    return read_table(path)


def _store(path: str, table) -> None:
    write_table(table, path)


def _cmd_encode(args) -> int:
    table, _ = read_csv(args.input, has_header=args.header)
    _store(args.output, table)
    _emit(
        args,
        {
            "rows": table.row_count,
            "cols": table.col_count,
            "cardinalities": list(table.cardinalities),
            "output": args.output,
        },
        f"encoded {table.row_count} rows x {table.col_count} cols; "
        f"cardinalities {list(table.cardinalities)} -> {args.output}",
    )
    return EXIT_OK


def _cmd_decode(args) -> int:
    table = _load(args.input)
    write_csv(table, args.output)
    _emit(
        args,
        {"rows": table.row_count, "cols": table.col_count, "output": args.output},
        f"decoded {table.row_count} rows -> {args.output}",
    )
    return EXIT_OK


def _cmd_stats(args) -> int:
    table = _load(args.input)
    info = characterize_table(table)
    info["cardinalities"] = list(table.cardinalities)
    info["omega_threshold"] = args.omega_threshold
    info["p0_threshold"] = args.p0_threshold
    flag = info["omega"] > args.omega_threshold and info["p0"] > args.p0_threshold
    info["recommend_reorder"] = bool(flag)
    verdict = (
        "try a reordering heuristic"
        if flag
        else "lexicographic order is likely sufficient"
    )
    info["verdict"] = verdict
    lines = [
        f"rows {info['rows']}  distinct {info['distinct_rows']}  cols {info['cols']}",
        f"cardinalities {info['cardinalities']} (sum {info['sum_cardinalities']})",
        f"omega {info['omega']:.4f}  p0 {info['p0']:.4f}  "
        f"(thresholds {args.omega_threshold}, {args.p0_threshold})",
        f"verdict: {verdict}",
    ]
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def _cmd_generate(args) -> int:
    spec = GenSpec(args.rows, args.cols, args.dist, args.seed)
    table = generate(spec)
    _store(args.output, table)
    _emit(
        args,
        {
            "distribution": args.dist,
            "rows": table.row_count,
            "cols": table.col_count,
            "seed": args.seed,
            "output": args.output,
        },
        f"generated {args.dist} table {table.row_count} x {table.col_count} "
        f"(seed {args.seed}) -> {args.output}",
    )
    return EXIT_OK


def _size_report(args, table) -> None:
    report = compress_table(table, codec=args.codec, block=args.block)
    if args.format == "records":
        for j, bits in enumerate(report.column_bits):
            print(
                json.dumps(
                    {"codec": report.codec, "column": j, "bits": bits}
                )
            )
        print(json.dumps({"codec": report.codec, "total_bits": report.total_bits}))
    else:
        cols = "  ".join(str(b) for b in report.column_bits)
        print(f"codec {report.codec}  per-column bits [{cols}]  total {report.total_bits}")


def _cmd_reorder(args) -> int:
    table = _load(args.input)
    n = table.row_count
    if args.order is not None:
        ordering = sort_rows(
            table,
            args.order,
            column_order=args.column_order,
            memory_budget=args.memory_budget,
        )
    else:
        plan = PartitionPlan(
            partition_size=args.partition if args.partition else max(n, 1),
            base_order="lex" if args.partition else None,
            heuristic=args.heuristic,
            revert_if_worse=args.revert,
            boundary_aware=args.boundary_aware,
            passes=args.passes,
            seed=args.seed,
            threads=args.threads or os.cpu_count() or 1,
            force=args.force,
        )

        def progress(rec):
            if args.format == "records":
                print(
                    json.dumps(
                        {
                            "partition": rec.index,
                            "pass": rec.pass_index,
                            "rows": rec.rows,
                            "runcount_before": rec.runcount_before,
                            "runcount_after": rec.runcount_after,
                            "elapsed_ms": round(rec.elapsed_ms, 3),
                            "cum_bits_before": rec.cum_bits_before,
                            "cum_bits_after": rec.cum_bits_after,
                            "error": rec.error,
                        }
                    )
                )
            return True

        outcome = apply_partitioned(table, plan, progress=progress)
        ordering = outcome.ordering
    reordered = table.reordered(ordering)
    _store(args.output, reordered)
    total, _ = run_counts(reordered)
    _emit(
        args,
        {"rows": n, "runcount": total, "output": args.output},
        f"reordered {n} rows; runcount {total} -> {args.output}",
    )
    if args.codec is not None:
        _size_report(args, reordered)
    return EXIT_OK


def _cmd_improve(args) -> int:
    table = _load(args.input)
    identity = np.arange(table.row_count, dtype=np.int64)
    if args.method == "1r":
        ordering = improve_one_reinsertion(table, identity, force=args.force)
    elif args.method == "ahdo":
        ordering = improve_ahdo(table, identity)
    else:
        ordering = improve_peephole(table, identity, block_size=args.block)
    reordered = table.reordered(ordering)
    _store(args.output, reordered)
    total, _ = run_counts(reordered)
    _emit(
        args,
        {"method": args.method, "runcount": total, "output": args.output},
        f"improved with {args.method}; runcount {total} -> {args.output}",
    )
    return EXIT_OK


def _cmd_size(args) -> int:
    table = _load(args.input)
    _size_report(args, table)
    return EXIT_OK


def _cmd_bench(args) -> int:
    rows = [int(r) for r in args.rows.split(",") if r]
    if args.heuristics == "all":
        names = list(REGISTRY)
    else:
        names = [h for h in args.heuristics.split(",") if h]
    specs = [GenSpec(n, args.cols, args.suite, args.seed) for n in rows]
    results = run_benchmark(
        specs, names, repetitions=args.reps, max_quadratic_rows=args.max_quadratic
    )
    if args.out:
        payload = [vars(r) | {} for r in results]
        with open(args.out, "w") as f:
            json.dump(payload, f, indent=2, default=str)
    if args.format == "records":
        for (h, d, n), med in sorted(median_reductions(results).items()):
            print(
                json.dumps(
                    {"heuristic": h, "distribution": d, "rows": n, "median_reduction": med}
                )
            )
    else:
        print(render_table(results))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rowforge",
        description="Reorder dictionary-encoded tables to shrink run counts.",
    )
    parser.add_argument("--version", action="version", version=f"rowforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        if output:
            p.add_argument("-o", "--output", required=True, help="output path")
        p.add_argument(
            "--format", choices=("text", "records"), default="text",
            help="report style: human text or JSON lines",
        )
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")

    p = sub.add_parser("encode", help="CSV to columnar file with dense dictionaries")
    p.add_argument("input", help="CSV path")
    p.add_argument("--header", action="store_true", help="skip a header line")
    common(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="columnar file back to CSV")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("stats", help="characterize a table and advise on reordering")
    p.add_argument("input")
    p.add_argument("--omega-threshold", type=float, default=3.0)
    p.add_argument("--p0-threshold", type=float, default=0.3)
    common(p, output=False)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("generate", help="write a synthetic benchmark table")
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="zipf")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("reorder", help="sort rows by a comparator or run a heuristic")
    p.add_argument("input")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--order", choices=ORDER_NAMES)
    group.add_argument("--heuristic", choices=HEURISTIC_IDS)
    p.add_argument(
        "--column-order", choices=("native", "cardinality"), default="cardinality",
        help="column comparison order for comparator sorts",
    )
    p.add_argument("--partition", type=int, default=None,
                   help="partition size; enables the lex-base partitioned pipeline")
    p.add_argument("--revert", dest="revert", action="store_true", default=True)
    p.add_argument("--no-revert", dest="revert", action="store_false",
                   help="keep heuristic output even when worse")
    p.add_argument("--boundary-aware", dest="boundary_aware", action="store_true",
                   default=True)
    p.add_argument("--no-boundary-aware", dest="boundary_aware", action="store_false")
    p.add_argument("--passes", type=int, choices=(1, 2), default=1)
    p.add_argument("--threads", type=int, default=None,
                   help="partition workers (default: available parallelism)")
    p.add_argument("--memory-budget", type=int, default=None,
                   help="bytes of key memory for comparator sorts; spills beyond it")
    p.add_argument("--force", action="store_true",
                   help="run quadratic heuristics past the size gate")
    p.add_argument("--codec", choices=CODEC_NAMES, default=None,
                   help="also print a codec size report for the result")
    p.add_argument("--block", type=int, default=BLOCK_SIZE)
    common(p)
    p.set_defaults(func=_cmd_reorder)

    p = sub.add_parser("improve", help="polish the stored order in place")
    p.add_argument("input")
    p.add_argument("--method", choices=("1r", "ahdo", "peephole"), required=True)
    p.add_argument("--block", type=int, default=8, help="peephole block size")
    p.add_argument("--force", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_improve)

    p = sub.add_parser("size", help="codec size report for the stored order")
    p.add_argument("input")
    p.add_argument("--codec", choices=CODEC_NAMES, required=True)
    p.add_argument("--block", type=int, default=BLOCK_SIZE)
    common(p, output=False)
    p.set_defaults(func=_cmd_size)

    p = sub.add_parser("bench", help="reduction benchmark over synthetic tables")
    p.add_argument("--suite", choices=DISTRIBUTIONS, required=True)
    p.add_argument("--rows", default="8192", help="comma-separated row counts")
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--heuristics", default="all", help="'all' or comma-separated ids")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--max-quadratic", type=int, default=8192,
                   help="skip O(n^2) methods above this row count")
    p.add_argument("--out", default=None, help="also dump raw cells as JSON")
    common(p, output=False)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TableTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
