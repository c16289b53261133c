"""Total orders on rows and the sorting engine.

Four comparator families are provided. Each is available in two equivalent
forms: a pure pairwise comparison on code tuples (cmp_*) and a vectorized
key transform used by sort_rows, which reduces every order to a stable
numpy lexsort. Tests assert the two forms agree.

lexicographic     first differing component decides.
reflected_gc      mixed-radix reflected Gray-code order. At the first
                  differing position j the comparison is ascending when the
                  sum of the preceding components is even, descending when
                  odd (components read as 0-based codes). Sorting a full
                  product space by this order yields a Gray code: consecutive
                  rows differ in exactly one position.
vortex            each tuple is turned into the pair list (x_1,1)..(x_c,c),
                  the pairs are sorted lexicographically, and two tuples are
                  compared pair by pair with the sense of the comparison
                  alternating: at the first differing pair position i
                  (1-based), the result is (pair_x < pair_y) flipped when i
                  is even. Also a Gray code on full product spaces, and any
                  tuple holding the most frequent rank among its first
                  components sorts toward the outside, which is why rows are
                  frequency-normalized first on real data.
frequent_component each component becomes the triple (frequency, column
                  index, value); the c triples are sorted in reverse
                  lexicographic order (largest triple first) and tuples are
                  compared over the flattened 3c values. Frequent values
                  therefore dominate the comparison.

sort_rows applies any of these through key transforms. When a memory budget
is given and the key material would exceed it, sorted runs are spilled to
disk and merged with a priority queue; the result is identical to the
in-memory path. The spill directory honours the ROWFORGE_TMPDIR environment
variable.
"""

from __future__ import annotations

import heapq
import os
import tempfile
from typing import Callable, Sequence

import numpy as np

from . import storage
from .table import Table, resolve_column_order

ORDER_NAMES = ("lex", "gray", "vortex", "fc")

# external sort: single-level merge unless the run count exceeds this
MAX_MERGE_FANIN = 1024
SPILL_DIR_ENV = "ROWFORGE_TMPDIR"


class SpillError(RuntimeError):
    """I/O failure while spilling or merging external-sort runs."""


def cmp_lexicographic(x: Sequence[int], y: Sequence[int], column_order=None) -> int:
    if len(x) != len(y):
        raise ValueError("tuples must have equal length")
    order = column_order if column_order is not None else range(len(x))
    for i in order:
        if x[i] != y[i]:
            return -1 if x[i] < y[i] else 1
    return 0


def cmp_reflected_gc(x: Sequence[int], y: Sequence[int], column_order=None) -> int:
    """Mixed-radix reflected Gray-code comparison on 0-based code tuples."""
    if len(x) != len(y):
        raise ValueError("tuples must have equal length")
    order = column_order if column_order is not None else range(len(x))
    parity = 0
    for i in order:
        if x[i] != y[i]:
            ascending = parity % 2 == 0
            less = x[i] < y[i]
            return -1 if less == ascending else 1
        parity += int(x[i])
    return 0


def _vortex_pairs(x: Sequence[int]) -> list[tuple[int, int]]:
    return sorted((int(v), i + 1) for i, v in enumerate(x))


def cmp_vortex(x: Sequence[int], y: Sequence[int], column_order=None) -> int:
    """Alternating-lexicographic comparison of sorted (value, column) pairs.

    Callers working on raw tables should renormalize values by frequency
    first (see normalize_by_frequency); the comparison itself is agnostic.
    """
    if len(x) != len(y):
        raise ValueError("tuples must have equal length")
    if column_order is not None:
        x = [x[i] for i in column_order]
        y = [y[i] for i in column_order]
    px = _vortex_pairs(x)
    py = _vortex_pairs(y)
    for i, (a, b) in enumerate(zip(px, py), start=1):
        if a != b:
            less = a < b
            if i % 2 == 0:
                less = not less
            return -1 if less else 1
    return 0


def cmp_frequent_component(
    x: Sequence[int], y: Sequence[int], frequencies: Sequence
) -> int:
    """Compare via per-component (frequency, column, value) triples.

    frequencies[i] maps a column-i code to its occurrence count. The triples
    of each tuple are arranged largest-first before the flat comparison, so
    the most frequent components decide first.
    """
    if len(x) != len(y):
        raise ValueError("tuples must have equal length")
    tx = sorted(
        ((int(frequencies[i][int(v)]), i + 1, int(v)) for i, v in enumerate(x)),
        reverse=True,
    )
    ty = sorted(
        ((int(frequencies[i][int(v)]), i + 1, int(v)) for i, v in enumerate(y)),
        reverse=True,
    )
    if tx < ty:
        return -1
    if tx > ty:
        return 1
    return 0


def frequency_rank_maps(table: Table) -> tuple[np.ndarray, ...]:
    """Per column, an array mapping old code -> frequency rank (0 = most frequent).

    Equal frequencies keep first-occurrence order, matching the tie rule of
    dictionary encoding, so freshly encoded tables map to themselves.
    """
    n = table.row_count
    maps = []
    for i in range(table.col_count):
        col = table.codes[:, i]
        card = table.cardinalities[i]
        counts = np.bincount(col, minlength=card)
        first = np.full(card, n, dtype=np.int64)
        if n:
            # first occurrence position of each code; unused codes keep n
            np.minimum.at(first, col, np.arange(n))
        by_rank = np.lexsort((first, -counts))
        rank = np.empty(card, dtype=np.int64)
        rank[by_rank] = np.arange(card)
        maps.append(rank)
    return tuple(maps)


def normalize_by_frequency(table: Table) -> tuple[Table, tuple[np.ndarray, ...]]:
    """Remap every column so rank 0 is its most frequent value.

    Returns the renormalized table and the per-column old-code -> rank maps.
    Dictionaries are carried through the remapping, so decoding still yields
    the original values.
    """
    maps = frequency_rank_maps(table)
    cols = [maps[i][table.codes[:, i]] for i in range(table.col_count)]
    codes = np.column_stack(cols) if cols else table.codes
    dicts = None
    if table.dictionaries is not None:
        dicts = []
        for i, d in enumerate(table.dictionaries):
            remapped = [None] * len(d)
            for old, new in enumerate(maps[i]):
                remapped[int(new)] = d[old]
            dicts.append(tuple(remapped))
        dicts = tuple(dicts)
    return Table(codes, table.cardinalities, dicts), maps


def _keys_lex(table: Table, order: tuple[int, ...]) -> list[np.ndarray]:
    return [table.codes[:, i].astype(np.int64) for i in order]


def _keys_gray(table: Table, order: tuple[int, ...]) -> list[np.ndarray]:
    digits = table.codes[:, order].astype(np.int64)
    prefix = np.cumsum(digits, axis=1) - digits
    cards = np.asarray([table.cardinalities[i] for i in order], dtype=np.int64)
    keys = np.where(prefix % 2 == 0, digits, cards - 1 - digits)
    return [keys[:, j] for j in range(keys.shape[1])]


def _keys_vortex(table: Table, order: tuple[int, ...]) -> list[np.ndarray]:
    codes = table.codes[:, order].astype(np.int64)
    c = codes.shape[1]
    # pack (value, position) pairs into one orderable scalar per component
    packed = codes * (c + 2) + np.arange(1, c + 1, dtype=np.int64)
    packed.sort(axis=1)
    keys = []
    for j in range(c):
        col = packed[:, j]
        keys.append(col if j % 2 == 0 else -col)
    return keys


class _KeyPlan:
    """Chunkable key transform for one (order, table) pairing.

    Whatever global context the transform needs (cardinalities, frequency
    ranks, histograms) is captured once, after which keys can be built for
    any row slice independently. This is what lets the external sort spill
    fixed-size chunks while producing the same keys as the in-memory path.
    """

    def __init__(self, table: Table, order: str, column_order=None, normalize: bool = True):
        if order not in ORDER_NAMES:
            raise ValueError(f"unknown order {order!r}")
        self.order = order
        self.cols = resolve_column_order(table, column_order)
        self.cards = table.cardinalities
        self.maps = None
        self.freqs = None
        if order == "vortex" and normalize:
            self.maps = frequency_rank_maps(table)
        if order == "fc":
            self.freqs = [
                np.bincount(table.codes[:, i], minlength=table.cardinalities[i]).astype(
                    np.int64
                )
                for i in range(table.col_count)
            ]

    def keys(self, codes: np.ndarray) -> list[np.ndarray]:
        sub = Table(codes, self.cards)
        if self.order == "lex":
            return _keys_lex(sub, self.cols)
        if self.order == "gray":
            return _keys_gray(sub, self.cols)
        if self.order == "vortex":
            if self.maps is not None:
                remapped = np.column_stack(
                    [self.maps[i][codes[:, i]] for i in range(codes.shape[1])]
                )
                sub = Table(remapped, self.cards)
            return _keys_vortex(sub, self.cols)
        c = codes.shape[1]
        f = np.column_stack([self.freqs[i][codes[:, i]] for i in range(c)])
        base_v = max(self.cards)
        packed = (f * (c + 2) + np.arange(1, c + 1, dtype=np.int64)) * base_v + codes.astype(
            np.int64
        )
        if packed.max(initial=0) >= 1 << 62:
            raise OverflowError("table too wide to pack frequency triples")
        packed = -np.sort(-packed, axis=1)
        return [packed[:, j] for j in range(c)]


def sort_keys(table: Table, order: str, column_order=None, normalize: bool = True):
    """Key columns (primary first) whose stable lexsort realizes the order."""
    return _KeyPlan(table, order, column_order, normalize).keys(table.codes)


def _lexsort(keys: list[np.ndarray]) -> np.ndarray:
    return np.lexsort(tuple(reversed(keys)))


def sort_rows(
    table: Table,
    order: str = "lex",
    column_order=None,
    memory_budget: int | None = None,
    normalize: bool = True,
) -> np.ndarray:
    """Stable permutation sorting the rows under the named order.

    Stability means ties keep input order, so duplicate rows always end up
    consecutive and every sort output is a discriminating order. With a
    memory budget (bytes of key material) smaller than the table needs, rows
    are key-transformed in chunks, each chunk is sorted and spilled to disk,
    and the spilled runs are merged through a priority queue; the permutation
    is identical to the in-memory path.
    """
    n = table.row_count
    plan = _KeyPlan(table, order, column_order, normalize)
    if memory_budget is not None:
        bytes_per_row = 8 * (table.col_count + 1)
        chunk_rows = max(1, int(memory_budget) // bytes_per_row)
        if chunk_rows < n:
            return _external_sort(table, plan, chunk_rows)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    return _lexsort(plan.keys(table.codes)).astype(np.int64)


def _external_sort(table: Table, plan: _KeyPlan, chunk_rows: int) -> np.ndarray:
    spill_root = os.environ.get(SPILL_DIR_ENV) or None
    try:
        with tempfile.TemporaryDirectory(prefix="rowforge-sort-", dir=spill_root) as tmp:
            runs = []
            for start in range(0, table.row_count, chunk_rows):
                stop = min(start + chunk_rows, table.row_count)
                keys = plan.keys(table.codes[start:stop])
                perm = _lexsort(keys)
                path = os.path.join(tmp, f"run-{len(runs):06d}.bin")
                with open(path, "wb") as f:
                    storage.write_spill_arrays(
                        f, [k[perm] for k in keys] + [perm.astype(np.int64) + start]
                    )
                runs.append(path)
            width = table.col_count + 1
            merged = _merge_runs(runs, tmp, width)
            out = np.fromiter((row[-1] for row in merged), dtype=np.int64)
        if out.size != table.row_count:
            raise SpillError("merge lost rows")
        return out
    except OSError as exc:
        raise SpillError(f"external sort failed: {exc}") from exc


def _merge_runs(runs: list[str], tmp: str, width: int):
    """Merge spill runs; waves of intermediate runs keep the fan-in bounded."""
    wave = 0
    while len(runs) > MAX_MERGE_FANIN:
        regrouped = []
        for g in range(0, len(runs), MAX_MERGE_FANIN):
            group = runs[g : g + MAX_MERGE_FANIN]
            path = os.path.join(tmp, f"merge-{wave}-{len(regrouped):06d}.bin")
            with open(path, "wb") as f:
                storage.write_spill_rows(
                    f, heapq.merge(*(storage.read_spill_run(r) for r in group)), width
                )
            for r in group:
                os.unlink(r)
            regrouped.append(path)
        runs = regrouped
        wave += 1
    return heapq.merge(*(storage.read_spill_run(r) for r in runs))


def comparator_for(table: Table, order: str, column_order=None) -> Callable:
    """Pairwise comparator over row tuples matching sort_rows' key order.

    The vortex comparator closes over the frequency normalization maps and
    the fc comparator over the column histograms, so both views of the order
    can be checked against each other on the same table.
    """
    cols = resolve_column_order(table, column_order)
    if order == "lex":
        return lambda x, y: cmp_lexicographic(x, y, cols)
    if order == "gray":
        return lambda x, y: cmp_reflected_gc(x, y, cols)
    if order == "vortex":
        maps = frequency_rank_maps(table)

        def cmp(x, y):
            nx = [int(maps[i][int(x[i])]) for i in cols]
            ny = [int(maps[i][int(y[i])]) for i in cols]
            return cmp_vortex(nx, ny)

        return cmp
    if order == "fc":
        freqs = [
            np.bincount(table.codes[:, i], minlength=table.cardinalities[i])
            for i in range(table.col_count)
        ]
        return lambda x, y: cmp_frequent_component(x, y, freqs)
    raise ValueError(f"unknown order {order!r}")
