"""
Run counts and what row order does to them
==========================================

A dictionary-encoded table stores each column as integer codes. Run-length
style codecs pay per run of equal values, so the same table can be cheap or
expensive depending purely on the order of its rows.
"""

import numpy as np

from rowforge import Table, mu_bound, omega_bound, run_count, run_counts, sort_rows
from rowforge.table import column_stats

# a small two-column table, written down in an unhelpful order
rows = np.array(
    [
        [1, 3], [2, 1], [2, 2], [3, 3], [4, 1], [4, 2],
        [5, 3], [6, 1], [6, 2], [7, 4], [8, 3],
    ],
    dtype=np.uint32,
)
table = Table.from_codes(rows)

total, per_column = run_counts(table)
print(f"as written: {total} runs, split {per_column.tolist()} over the columns")

# every ordering pays at least one run per column, so c = 2 is the floor
# for a table of distinct rows the real floor is higher
for order in ("lex", "gray", "vortex"):
    perm = sort_rows(table, order, column_order="native")
    print(f"{order:7s} sort: {run_count(table, perm)} runs")

# the second column only has 4 distinct values, so sorting on it first
# tends to pay off
perm = sort_rows(table, "lex", column_order="cardinality")
print(f"lex, low-cardinality column first: {run_count(table, perm)} runs")

# omega bounds how far lexicographic sorting can be from the optimum.
# It is a statement about the table, computed without solving anything.
stats = column_stats(table)
omega = omega_bound(table)
mu = mu_bound(stats.distinct_rows, table.cardinalities)
print(f"omega = {omega:.4f}  (lex sort is within that factor of optimal)")
print(f"mu    = {mu:.4f}  (weaker bound from cardinalities alone)")

# the best possible order for this table reaches 14 runs, and the bound
# already told us lex at 19 could not be more than omega * 12 = 19 runs
best = np.array([0, 3, 6, 10, 9, 8, 7, 4, 5, 2, 1])
print(f"hand-optimized order: {run_count(table, best)} runs")
