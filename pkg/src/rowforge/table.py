"""Dictionary-encoded tables and run metrics.

A table is a rectangular block of dense integer codes. Column i draws its
values from [0, N_i) where N_i is the column cardinality. The quantity this
package cares about is run_count: the number of maximal runs of equal values,
summed over all columns. For rows r_1..r_n in a given order,

    run_count = c + sum_k hamming(r_k, r_{k+1})

so shrinking run_count is a minimum Hamiltonian-path problem under the
Hamming distance. This module only measures; the reordering machinery lives
in orders.py and heuristics.py.

Two analytic quantities bound how far plain lexicographic sorting can be from
the unknown optimal ordering. With n distinct rows and n1_j the number of
distinct rows restricted to the first j columns (under the column order the
sort will use):

    omega = (sum_j n1_j) / (n + c - 1)          1 <= omega <= c
    mu    = (sum_j min(n, prod_{k<=j} N_k)) / (n + c - 1)

Lexicographic sorting is omega-optimal, and omega <= mu. The dispersion
measure p0 averages, over columns, the relative frequency of the most
frequent value; together with omega it drives the heuristic-selection
guidance in bench.py.

Codes are 0-based internally and stored as unsigned 32-bit integers. Reports
and CLI output use the original values via the per-column dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

CODE_DTYPE = np.uint32


@dataclass(frozen=True, eq=False)
class Table:
    """Immutable dictionary-encoded table.

    codes is an (n, c) array of dense 0-based codes. cardinalities[i] is the
    number of distinct codes column i may hold; every code in column i lies
    in [0, cardinalities[i]). dictionaries, when present, map code -> original
    value per column (index into the tuple is the code).
    """

    codes: np.ndarray
    cardinalities: tuple[int, ...]
    dictionaries: tuple[tuple, ...] | None = None

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if codes.ndim != 2:
            raise ValueError("codes must be a 2-d array")
        if codes.shape[1] < 1:
            raise ValueError("a table needs at least one column")
        if codes.dtype != CODE_DTYPE:
            if codes.size and codes.min() < 0:
                raise ValueError("codes must be non-negative")
            codes = codes.astype(CODE_DTYPE)
        codes = np.ascontiguousarray(codes)
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        cards = tuple(int(x) for x in self.cardinalities)
        if len(cards) != codes.shape[1]:
            raise ValueError("one cardinality per column required")
        if any(x < 1 for x in cards):
            raise ValueError("cardinalities must be positive")
        if codes.size:
            maxes = codes.max(axis=0)
            for i, (m, card) in enumerate(zip(maxes, cards)):
                if int(m) >= card:
                    raise ValueError(
                        f"column {i} holds code {int(m)} outside [0, {card})"
                    )
        object.__setattr__(self, "cardinalities", cards)
        if self.dictionaries is not None:
            dicts = tuple(tuple(d) for d in self.dictionaries)
            if len(dicts) != codes.shape[1]:
                raise ValueError("one dictionary per column required")
            for i, (d, card) in enumerate(zip(dicts, cards)):
                if len(d) != card:
                    raise ValueError(f"dictionary {i} must have {card} entries")
            object.__setattr__(self, "dictionaries", dicts)

    @property
    def row_count(self) -> int:
        return int(self.codes.shape[0])

    @property
    def col_count(self) -> int:
        return int(self.codes.shape[1])

    @classmethod
    def from_codes(cls, codes, cardinalities: Sequence[int] | None = None) -> "Table":
        """Build a table from raw code values.

        When cardinalities are omitted they default to max+1 per column. No
        frequency ordering is assumed or enforced; use dictionary_encode for
        tables that should carry the frequency-ranked code invariant.
        """
        arr = np.asarray(codes)
        if arr.ndim != 2:
            arr = np.atleast_2d(arr)
        if cardinalities is None:
            if arr.shape[0] == 0:
                cardinalities = (1,) * arr.shape[1]
            else:
                cardinalities = tuple(int(m) + 1 for m in arr.max(axis=0))
        return cls(arr, tuple(cardinalities))

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.codes[i])

    def reordered(self, ordering) -> "Table":
        """Return a copy with rows permuted by the given ordering."""
        perm = validate_ordering(self.row_count, ordering)
        return Table(self.codes[perm], self.cardinalities, self.dictionaries)


def validate_ordering(n: int, ordering) -> np.ndarray:
    perm = np.asarray(ordering, dtype=np.int64)
    if perm.shape != (n,):
        raise ValueError(f"ordering must have exactly {n} entries")
    seen = np.zeros(n, dtype=bool)
    seen[perm] = True
    if not seen.all():
        raise ValueError("ordering is not a permutation")
    return perm


def hamming(row_a: Sequence[int], row_b: Sequence[int]) -> int:
    """Number of positions where the two tuples differ."""
    if len(row_a) != len(row_b):
        raise ValueError("tuples must have equal length")
    return sum(1 for a, b in zip(row_a, row_b) if a != b)


def run_counts(table: Table, ordering=None) -> tuple[int, np.ndarray]:
    """Total and per-column run counts of the table under an ordering.

    A run is a maximal stretch of equal consecutive values within one
    column. A non-empty table has at least one run per column.
    """
    codes = table.codes
    if ordering is not None:
        codes = codes[validate_ordering(table.row_count, ordering)]
    c = table.col_count
    if codes.shape[0] == 0:
        per = np.zeros(c, dtype=np.int64)
        return 0, per
    changes = np.count_nonzero(codes[1:] != codes[:-1], axis=0)
    per = changes.astype(np.int64) + 1
    return int(per.sum()), per


def run_count(table: Table, ordering=None) -> int:
    return run_counts(table, ordering)[0]


@dataclass(frozen=True)
class ColumnStats:
    """Histograms plus the prefix-distinct counts feeding the omega bound.

    histograms are computed on the full table; prefix_distinct and
    distinct_rows are computed on the deduplicated table under column_order.
    """

    histograms: tuple[np.ndarray, ...]
    prefix_distinct: np.ndarray
    distinct_rows: int
    column_order: tuple[int, ...]


def resolve_column_order(table: Table, column_order) -> tuple[int, ...]:
    """Normalize a column-order argument to an explicit permutation.

    None and "native" keep the table's own order; "cardinality" sorts columns
    by non-decreasing cardinality (stable, so ties keep their position).
    """
    c = table.col_count
    if column_order is None or column_order == "native":
        return tuple(range(c))
    if column_order == "cardinality":
        return column_order_by_cardinality(table)
    order = tuple(int(i) for i in column_order)
    if sorted(order) != list(range(c)):
        raise ValueError("column order must be a permutation of the columns")
    return order


def column_order_by_cardinality(table: Table) -> tuple[int, ...]:
    """Columns sorted by non-decreasing cardinality, stable for ties."""
    return tuple(int(i) for i in np.argsort(table.cardinalities, kind="stable"))


def column_stats(table: Table, column_order=None) -> ColumnStats:
    if table.row_count == 0:
        raise ValueError("cannot compute stats of an empty table")
    order = resolve_column_order(table, column_order)
    hists = tuple(
        np.bincount(table.codes[:, i], minlength=table.cardinalities[i])
        for i in range(table.col_count)
    )
    uniq = np.unique(table.codes[:, order], axis=0)
    m = uniq.shape[0]
    if m == 1:
        prefix = np.ones(table.col_count, dtype=np.int64)
    else:
        diffs = uniq[1:] != uniq[:-1]
        changed = np.logical_or.accumulate(diffs, axis=1)
        prefix = changed.sum(axis=0).astype(np.int64) + 1
    return ColumnStats(hists, prefix, int(m), order)


def omega_bound(table: Table, column_order=None) -> float:
    """Optimality factor of lexicographic sorting under the given column order.

    Computed on the deduplicated table: omega = (sum_j n1_j) / (n + c - 1).
    Sorting lexicographically yields at most omega times the optimal
    run_count.
    """
    stats = column_stats(table, column_order)
    n = stats.distinct_rows
    c = table.col_count
    return float(stats.prefix_distinct.sum()) / (n + c - 1)


def mu_bound(row_count_distinct: int, cardinalities: Sequence[int]) -> float:
    """Coarser bound using only cardinality products.

    mu = (sum_j min(n, prod_{k<=j} N_k)) / (n + c - 1), with the
    cardinalities given in the column order the sort will use.
    """
    cards = [int(x) for x in cardinalities]
    if not cards:
        raise ValueError("at least one cardinality required")
    if row_count_distinct < 1:
        raise ValueError("need at least one distinct row")
    n = int(row_count_distinct)
    total = 0
    prod = 1
    for card in cards:
        # cap the running product so huge cardinalities cannot overflow
        prod = min(prod * card, n)
        total += prod
    return total / (n + len(cards) - 1)


def dispersion_p0(table: Table) -> float:
    """Mean relative frequency of each column's most frequent value."""
    if table.row_count == 0:
        raise ValueError("cannot compute dispersion of an empty table")
    top = 0
    for i in range(table.col_count):
        counts = np.bincount(table.codes[:, i])
        top += int(counts.max())
    return top / (table.row_count * table.col_count)


def _encode_column(values: np.ndarray) -> tuple[np.ndarray, tuple]:
    uniq, first, inverse, counts = np.unique(
        values, return_index=True, return_inverse=True, return_counts=True
    )
    # most frequent value gets code 0; equal frequencies keep input order
    by_rank = np.lexsort((first, -counts))
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[by_rank] = np.arange(len(uniq))
    codes = rank[inverse].astype(CODE_DTYPE)
    dictionary = tuple(uniq[by_rank].tolist())
    return codes, dictionary


def dictionary_encode(raw_columns: Sequence[Sequence]) -> Table:
    """Encode raw columns into dense frequency-ranked codes.

    Code 0 is the most frequent value of its column; ties are broken by
    first occurrence in the column. The original values are retained in
    the table's dictionaries.
    """
    if not raw_columns:
        raise ValueError("at least one column required")
    lengths = {len(col) for col in raw_columns}
    if len(lengths) != 1:
        raise ValueError("ragged input: all columns must have the same length")
    n = lengths.pop()
    if n == 0:
        raise ValueError("no rows")
    cols = []
    dicts = []
    for raw in raw_columns:
        codes, dictionary = _encode_column(np.asarray(raw))
        cols.append(codes)
        dicts.append(dictionary)
    codes = np.column_stack(cols)
    cards = tuple(len(d) for d in dicts)
    return Table(codes, cards, tuple(dicts))


def discriminating_order(table: Table, seed: int | None = None) -> np.ndarray:
    """An ordering that lists duplicate rows consecutively.

    Rows are grouped by exact content via hashing; groups appear in first
    occurrence order, or in a seeded random order when a seed is given.
    Any such ordering costs at most c * distinct_rows runs.
    """
    groups: dict[bytes, list[int]] = {}
    codes = np.ascontiguousarray(table.codes)
    for i in range(table.row_count):
        groups.setdefault(codes[i].tobytes(), []).append(i)
    buckets = list(groups.values())
    if seed is not None:
        np.random.default_rng(seed).shuffle(buckets)
    if not buckets:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([np.asarray(b, dtype=np.int64) for b in buckets])
