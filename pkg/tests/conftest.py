"""Shared fixtures: the worked-example tables frozen as literals."""

import numpy as np
import pytest

from rowforge.table import Table

# Canonical 11-row, 2-column example used across the reordering walkthroughs.
# Values double as codes (cardinalities come out as max+1).
ELEVEN_ROWS = np.array(
    [
        [1, 3],
        [2, 1],
        [2, 2],
        [3, 3],
        [4, 1],
        [4, 2],
        [5, 3],
        [6, 1],
        [6, 2],
        [7, 4],
        [8, 3],
    ],
    dtype=np.uint32,
)

# A hand-built improvement of the same table reaching 14 runs.
ELEVEN_SOLUTION = np.array(
    [
        [1, 3],
        [3, 3],
        [5, 3],
        [8, 3],
        [7, 4],
        [6, 2],
        [6, 1],
        [4, 1],
        [4, 2],
        [2, 2],
        [2, 1],
    ],
    dtype=np.uint32,
)

# Frequent-component sort of ELEVEN_ROWS.
FC_SOLUTION = [
    (7, 4),
    (2, 1),
    (4, 1),
    (6, 1),
    (2, 2),
    (4, 2),
    (6, 2),
    (1, 3),
    (3, 3),
    (5, 3),
    (8, 3),
]

# Frequency normalization of ELEVEN_ROWS: original value -> 1-based rank.
NORMALIZE_MAPS = (
    {1: 4, 2: 1, 3: 5, 4: 2, 5: 6, 6: 3, 7: 7, 8: 8},
    {1: 2, 2: 3, 3: 1, 4: 4},
)

# Vortex sort of the normalized table, in normalized values.
VORTEX_SOLUTION_NORMALIZED = [
    (1, 3),
    (1, 2),
    (8, 1),
    (6, 1),
    (5, 1),
    (4, 1),
    (2, 3),
    (2, 2),
    (3, 2),
    (3, 3),
    (7, 4),
]

# The full grid {1..4} x {1..4} under three comparator orders.
GRID44_LEX = [(a, b) for a in range(1, 5) for b in range(1, 5)]

GRID44_GRAY = [
    (1, 1), (1, 2), (1, 3), (1, 4),
    (2, 4), (2, 3), (2, 2), (2, 1),
    (3, 1), (3, 2), (3, 3), (3, 4),
    (4, 4), (4, 3), (4, 2), (4, 1),
]

GRID44_VORTEX = [
    (1, 4), (1, 3), (1, 2), (1, 1),
    (4, 1), (3, 1), (2, 1),
    (2, 4), (2, 3), (2, 2),
    (4, 2), (3, 2),
    (3, 4), (3, 3),
    (4, 3), (4, 4),
]


@pytest.fixture
def eleven() -> Table:
    return Table.from_codes(ELEVEN_ROWS)


@pytest.fixture
def grid44() -> Table:
    return grid_table(4, 2)


def grid_table(n_values: int, cols: int) -> Table:
    """Full product {1..N}^c as dense 0-based codes in lexicographic order."""
    grids = np.meshgrid(*[np.arange(n_values)] * cols, indexing="ij")
    codes = np.column_stack([g.ravel() for g in grids]).astype(np.uint32)
    return Table(codes, (n_values,) * cols)


def rows_as_tuples(table: Table, ordering) -> list[tuple[int, ...]]:
    return [tuple(int(v) for v in row) for row in table.codes[ordering]]


def display_rows(table: Table, ordering) -> list[tuple[int, ...]]:
    """Rows under an ordering as 1-based value tuples (code + 1)."""
    return [tuple(int(v) + 1 for v in row) for row in table.codes[ordering]]
