"""Partitioned reordering: run an in-memory heuristic per slice of a big table.

The table is first put in a base order (a comparator sort, an explicit
ordering, or left as is). Contiguous fixed-size partitions of that base
order are then reordered independently, which caps the working set of the
quadratic heuristics and parallelizes; the price is that improvements stop
at partition boundaries. Partition start rows, seeds and boundary handoffs
all derive from the base order, so results are identical no matter how many
threads run the partitions.

revert_if_worse is exact rather than per-partition-greedy: once every
partition has finished, a dynamic program picks keep-or-revert per partition
minimizing the full path cost including the boundary edges between
partitions. Keeping nothing reproduces the base order, so the chosen total
never exceeds the base order's. A progress callback sees each partition as
it completes (heuristic outcome, run counts, timing) and may stop the run
early; unfinished partitions then stay in base order, which is the anytime
contract.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import heuristics
from .codecs import rle_size_bits, bits_for
from .orders import ORDER_NAMES, sort_rows
from .table import Table, run_count, validate_ordering

DEFAULT_PARTITION_SIZE = 131072

HEURISTIC_IDS = (
    "nn",
    "ml",
    "mf",
    "savings",
    "insert-nearest",
    "insert-farthest",
    "insert-random",
)


def _resolve_heuristic(name: str, force: bool = False):
    """Adapt every heuristic to a (table, seed, start) call.

    Only nn and ml take a start row, so boundary_aware has no effect on the
    others. force is passed through to the quadratic methods' size gate;
    a refusal propagates out of the whole run instead of reverting one
    partition, since it is a configuration problem, not a data problem.
    """
    if name == "nn":
        return lambda t, seed, start: heuristics.nearest_neighbor(
            t, seed=seed, start=start, force=force
        )
    if name == "ml":
        return lambda t, seed, start: heuristics.multiple_lists(
            t, seed=seed, start=start
        )
    if name == "mf":
        return lambda t, seed, start: heuristics.multiple_fragment(t, force=force)
    if name == "savings":
        return lambda t, seed, start: heuristics.savings(t, seed=seed, force=force)
    if name.startswith("insert-"):
        strategy = name.removeprefix("insert-")
        return lambda t, seed, start: heuristics.insertion(
            t, strategy=strategy, seed=seed, force=force
        )
    raise ValueError(f"unknown heuristic {name!r}; choose from {HEURISTIC_IDS}")


@dataclass(frozen=True)
class PartitionPlan:
    partition_size: int = DEFAULT_PARTITION_SIZE
    base_order: object = "lex"
    base_column_order: object = "cardinality"
    heuristic: str = "ml"
    revert_if_worse: bool = True
    boundary_aware: bool = True
    passes: int = 1
    seed: int = 0
    threads: int = 1
    force: bool = False

    def __post_init__(self):
        if self.partition_size < 1:
            raise ValueError("partition_size must be positive")
        if self.passes not in (1, 2):
            raise ValueError("passes must be 1 or 2")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if isinstance(self.heuristic, str):
            _resolve_heuristic(self.heuristic)


@dataclass(frozen=True)
class PartitionRecord:
    """One finished partition, in assembly order."""

    pass_index: int
    index: int
    rows: int
    runcount_before: int
    runcount_after: int
    elapsed_ms: float
    cum_bits_before: int
    cum_bits_after: int
    kept: bool = False
    error: str | None = None


@dataclass(frozen=True)
class PartitionOutcome:
    ordering: np.ndarray
    records: tuple[PartitionRecord, ...]
    stopped_early: bool = False

    @property
    def kept_partitions(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.records if r.kept)


def _resolve_base(table: Table, plan: PartitionPlan) -> np.ndarray:
    base = plan.base_order
    if base is None:
        return np.arange(table.row_count, dtype=np.int64)
    if isinstance(base, str):
        if base not in ORDER_NAMES:
            raise ValueError(f"unknown base order {base!r}; choose from {ORDER_NAMES}")
        return sort_rows(table, base, column_order=plan.base_column_order)
    return validate_ordering(table.row_count, base)


def _partition_bounds(n: int, size: int, shift: int) -> list[tuple[int, int]]:
    bounds = []
    lo = 0
    first = shift % size if size <= n else 0
    if first:
        bounds.append((0, min(first, n)))
        lo = min(first, n)
    while lo < n:
        bounds.append((lo, min(lo + size, n)))
        lo += size
    return bounds


def _column_runs(codes: np.ndarray) -> np.ndarray:
    if codes.shape[0] == 0:
        return np.zeros(codes.shape[1], dtype=np.int64)
    return 1 + np.count_nonzero(codes[1:] != codes[:-1], axis=0)


def _rle_bits(col_runs: np.ndarray, cardinalities, n: int) -> int:
    return int(
        sum(
            int(r) * (bits_for(card) + 2 * bits_for(n))
            for r, card in zip(col_runs, cardinalities)
        )
    )


def apply_partitioned(
    table: Table, plan: PartitionPlan, progress=None
) -> PartitionOutcome:
    """Run the plan; see the module docstring for the semantics.

    progress, when given, is called with each PartitionRecord as its
    partition completes; returning False stops the run after that partition.
    """
    n = table.row_count
    base = _resolve_base(table, plan)
    records: list[PartitionRecord] = []
    stopped = False
    ordering = base
    for pass_index in range(plan.passes):
        shift = (plan.partition_size // 2) if pass_index else 0
        ordering, stopped = _one_pass(
            table, ordering, plan, pass_index, shift, progress, records
        )
        if stopped:
            break
    return PartitionOutcome(
        ordering=ordering, records=tuple(records), stopped_early=stopped
    )


def _one_pass(table, base, plan, pass_index, shift, progress, records):
    n = table.row_count
    codes = table.codes[base]
    bounds = _partition_bounds(n, plan.partition_size, shift)
    m = len(bounds)
    heuristic = (
        _resolve_heuristic(plan.heuristic, plan.force)
        if isinstance(plan.heuristic, str)
        else plan.heuristic
    )
    seeds = [
        int(s.generate_state(1)[0])
        for s in np.random.SeedSequence([plan.seed, pass_index]).spawn(m)
    ]

    def starts_for(i: int) -> int | None:
        if not plan.boundary_aware or i == 0:
            return None
        lo, hi = bounds[i]
        prev_last = codes[lo - 1]
        dist = np.count_nonzero(codes[lo:hi] != prev_last, axis=1)
        return int(np.argmin(dist))

    def work(i: int):
        lo, hi = bounds[i]
        sub = Table(codes=np.ascontiguousarray(codes[lo:hi]),
                    cardinalities=table.cardinalities)
        t0 = time.perf_counter()
        err = None
        try:
            local = heuristic(sub, seeds[i], starts_for(i))
            local = validate_ordering(hi - lo, local)
        except heuristics.TableTooLarge:
            raise
        except Exception as exc:  # revert on failure, surface the message
            local = np.arange(hi - lo, dtype=np.int64)
            err = f"{type(exc).__name__}: {exc}"
        elapsed = (time.perf_counter() - t0) * 1000.0
        return i, local, err, elapsed

    local_orders: list[np.ndarray | None] = [None] * m
    failed = [False] * m
    stopped = False
    done = 0
    cum_before = 0
    cum_after = 0

    def consume(i, local, err, elapsed):
        nonlocal cum_before, cum_after
        lo, hi = bounds[i]
        sub_codes = codes[lo:hi]
        runs_before = _column_runs(sub_codes)
        runs_after = _column_runs(sub_codes[local])
        cum_before += _rle_bits(runs_before, table.cardinalities, n)
        cum_after += _rle_bits(runs_after, table.cardinalities, n)
        local_orders[i] = local
        failed[i] = err is not None
        rec = PartitionRecord(
            pass_index=pass_index,
            index=i,
            rows=hi - lo,
            runcount_before=int(runs_before.sum()),
            runcount_after=int(runs_after.sum()),
            elapsed_ms=elapsed,
            cum_bits_before=cum_before,
            cum_bits_after=cum_after,
            error=err,
        )
        records.append(rec)
        return progress(rec) is not False if progress else True

    if plan.threads == 1:
        for i in range(m):
            keep_going = consume(*work(i))
            done = i + 1
            if not keep_going:
                stopped = True
                break
    else:
        with ThreadPoolExecutor(max_workers=plan.threads) as pool:
            futures = [pool.submit(work, i) for i in range(m)]
            for i, fut in enumerate(futures):
                if stopped:
                    fut.cancel()
                    continue
                keep_going = consume(*fut.result())
                done = i + 1
                if not keep_going:
                    stopped = True

    for i in range(done, m):
        lo, hi = bounds[i]
        local_orders[i] = np.arange(hi - lo, dtype=np.int64)
        failed[i] = True

    keep = _choose_kept(codes, bounds, local_orders, failed, plan.revert_if_worse)
    for pos in range(len(records) - done, len(records)):
        rec = records[pos]
        records[pos] = replace(rec, kept=keep[rec.index] and not failed[rec.index])

    pieces = []
    for i, (lo, hi) in enumerate(bounds):
        local = local_orders[i]
        if not keep[i]:
            local = np.arange(hi - lo, dtype=np.int64)
        pieces.append(local + lo)
    return base[np.concatenate(pieces)] if pieces else base, stopped


def _choose_kept(codes, bounds, local_orders, failed, revert_if_worse):
    """Exact keep/revert choice per partition by a boundary-aware DP."""
    m = len(bounds)
    if not revert_if_worse:
        return [not failed[i] for i in range(m)]

    def internal(i, kept):
        lo, hi = bounds[i]
        sub = codes[lo:hi] if not kept else codes[lo:hi][local_orders[i]]
        if sub.shape[0] < 2:
            return 0
        return int(np.count_nonzero(sub[1:] != sub[:-1]))

    def endpoint_rows(i, kept):
        lo, hi = bounds[i]
        if kept:
            first = codes[lo + local_orders[i][0]]
            last = codes[lo + local_orders[i][-1]]
        else:
            first, last = codes[lo], codes[hi - 1]
        return first, last

    choices = [
        [False] + ([True] if not failed[i] else []) for i in range(m)
    ]
    cost = {(0, kept): internal(0, kept) for kept in choices[0]}
    back: dict[tuple[int, bool], bool] = {}
    for i in range(1, m):
        nxt = {}
        for kept in choices[i]:
            first, _ = endpoint_rows(i, kept)
            own = internal(i, kept)
            best = None
            best_prev = False
            for pk in choices[i - 1]:
                _, last = endpoint_rows(i - 1, pk)
                edge = int(np.count_nonzero(last != first))
                total = cost[(i - 1, pk)] + edge + own
                if best is None or total < best:
                    best = total
                    best_prev = pk
            nxt[(i, kept)] = best
            back[(i, kept)] = best_prev
        cost.update(nxt)
    keep = [False] * m
    if m:
        last_choices = choices[m - 1]
        keep[m - 1] = min(last_choices, key=lambda kept: cost[(m - 1, kept)])
        for i in range(m - 1, 0, -1):
            keep[i - 1] = back[(i, keep[i])]
    return keep
