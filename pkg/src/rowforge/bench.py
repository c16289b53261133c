"""Benchmark harness comparing row orderings on synthetic tables.

Each benchmark cell generates a table, reorders it with one method and
reports the RunCount reduction relative to the lexicographic baseline
computed on the same table. Repetitions redraw the table from derived
seeds; medians across repetitions are what the reports quote. Comparator
sorts, construction heuristics and sort-then-polish combinations all run
through the same registry so they are directly comparable.

The quadratic methods are skipped (not failed) above max_quadratic_rows,
which mirrors how large-table reports leave those cells empty. Cell errors
are captured per cell and the run continues.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import heuristics
from .datagen import GenSpec, generate
from .orders import sort_rows
from .table import Table, dispersion_p0, omega_bound, run_count

_QUADRATIC = frozenset(
    {
        "nn",
        "mf",
        "savings",
        "insert-nearest",
        "insert-farthest",
        "insert-random",
        "lex+1r",
        "vortex+1r",
        "fc+1r",
    }
)


def _sorter(order: str, column_order):
    return lambda t, seed: sort_rows(t, order, column_order=column_order)


def _polish(order: str, column_order):
    def run(t, seed):
        base = sort_rows(t, order, column_order=column_order)
        return heuristics.improve_one_reinsertion(t, base, force=True)

    return run


REGISTRY: dict[str, object] = {
    "lex": _sorter("lex", "cardinality"),
    "gray": _sorter("gray", "cardinality"),
    "vortex": _sorter("vortex", "cardinality"),
    "fc": _sorter("fc", None),
    "nn": lambda t, seed: heuristics.nearest_neighbor(t, seed=seed, force=True),
    "ml": lambda t, seed: heuristics.multiple_lists(t, seed=seed),
    "mf": lambda t, seed: heuristics.multiple_fragment(t, force=True),
    "savings": lambda t, seed: heuristics.savings(t, seed=seed, force=True),
    "insert-nearest": lambda t, seed: heuristics.insertion(t, "nearest", seed=seed, force=True),
    "insert-farthest": lambda t, seed: heuristics.insertion(t, "farthest", seed=seed, force=True),
    "insert-random": lambda t, seed: heuristics.insertion(t, "random", seed=seed, force=True),
    "lex+1r": _polish("lex", "cardinality"),
    "vortex+1r": _polish("vortex", "cardinality"),
    "fc+1r": _polish("fc", None),
}


@dataclass(frozen=True)
class BenchResult:
    heuristic: str
    distribution: str
    rows: int
    cols: int
    seed: int
    repetition: int
    runcount: int
    reduction: float
    elapsed_s: float
    error: str | None = None
    skipped: bool = False


def _rep_seed(seed: int, rep: int) -> int:
    return int(np.random.SeedSequence([seed, rep]).generate_state(1)[0])


def run_benchmark(
    specs,
    heuristic_names=None,
    repetitions: int = 5,
    max_quadratic_rows: int = 8192,
) -> list[BenchResult]:
    """All (spec, heuristic, repetition) cells, baseline included.

    The lexicographic row is always present so every report carries its
    baseline; its reduction is exactly 1.0 by construction.
    """
    if heuristic_names is None:
        heuristic_names = list(REGISTRY)
    unknown = [h for h in heuristic_names if h not in REGISTRY]
    if unknown:
        raise ValueError(f"unknown heuristics: {unknown}")
    names = list(dict.fromkeys(["lex", *heuristic_names]))
    results: list[BenchResult] = []
    for spec in specs:
        for rep in range(repetitions):
            seed = _rep_seed(spec.seed, rep)
            table = generate(GenSpec(spec.rows, spec.cols, spec.distribution, seed))
            lex_rc = run_count(table.reordered(REGISTRY["lex"](table, seed)))
            for name in names:
                common = dict(
                    heuristic=name,
                    distribution=spec.distribution,
                    rows=spec.rows,
                    cols=spec.cols,
                    seed=seed,
                    repetition=rep,
                )
                if name in _QUADRATIC and spec.rows > max_quadratic_rows:
                    results.append(
                        BenchResult(
                            **common, runcount=0, reduction=float("nan"),
                            elapsed_s=0.0, skipped=True,
                        )
                    )
                    continue
                t0 = time.perf_counter()
                try:
                    ordering = REGISTRY[name](table, seed)
                    rc = run_count(table.reordered(ordering))
                    results.append(
                        BenchResult(
                            **common, runcount=rc, reduction=lex_rc / rc,
                            elapsed_s=time.perf_counter() - t0,
                        )
                    )
                except Exception as exc:
                    results.append(
                        BenchResult(
                            **common, runcount=0, reduction=float("nan"),
                            elapsed_s=time.perf_counter() - t0,
                            error=f"{type(exc).__name__}: {exc}",
                        )
                    )
    return results


def median_reductions(results) -> dict[tuple[str, str, int], float]:
    """(heuristic, distribution, rows) -> median reduction over repetitions."""
    cells: dict[tuple[str, str, int], list[float]] = {}
    for r in results:
        if r.skipped or r.error is not None:
            continue
        cells.setdefault((r.heuristic, r.distribution, r.rows), []).append(r.reduction)
    return {key: statistics.median(v) for key, v in cells.items()}


def render_table(results) -> str:
    """Aligned text report: one heuristic per row, one (dist, n) per column."""
    medians = median_reductions(results)
    col_keys = sorted(
        {(r.distribution, r.rows) for r in results}, key=lambda k: (k[0], k[1])
    )
    row_keys = list(dict.fromkeys(r.heuristic for r in results))
    name_w = max(len("heuristic"), *(len(n) for n in row_keys))
    headers = [f"{d} n={n}" for d, n in col_keys]
    widths = [max(len(h), 7) for h in headers]
    lines = [
        "  ".join(["heuristic".ljust(name_w), *(h.rjust(w) for h, w in zip(headers, widths))])
    ]
    for name in row_keys:
        cells = []
        for (d, n), w in zip(col_keys, widths):
            med = medians.get((name, d, n))
            cells.append(("-" if med is None else f"{med:.3f}").rjust(w))
        lines.append("  ".join([name.ljust(name_w), *cells]))
    return "\n".join(lines)


OMEGA_THRESHOLD = 3.0
P0_THRESHOLD = 0.3


def characterize_table(table: Table) -> dict:
    """Shape statistics plus the try-a-heuristic recommendation flag.

    Lexicographic sorting is provably within a factor omega of the optimal
    RunCount, so a small omega means little headroom. The flag is raised
    when omega > 3 and p0 > 0.3: enough headroom and enough skew for the
    frequency-driven methods to pay off.
    """
    omega = omega_bound(table)
    p0 = dispersion_p0(table)
    distinct = len(np.unique(table.codes, axis=0))
    return {
        "rows": table.row_count,
        "distinct_rows": distinct,
        "cols": table.col_count,
        "sum_cardinalities": int(sum(table.cardinalities)),
        "omega": omega,
        "p0": p0,
        "recommend_reorder": bool(omega > OMEGA_THRESHOLD and p0 > P0_THRESHOLD),
    }
