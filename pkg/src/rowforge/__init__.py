"""Row reordering for lightweight columnar compression.

Reorders the rows of dictionary-encoded tables so that columns hold longer
runs of equal values, then measures what that buys under run-oriented
codecs. Sorting-based orders (lexicographic, reflected Gray code, vortex,
frequent-component) scale to large tables; greedy path heuristics under the
Hamming distance trade time for better orderings; a partition driver applies
any of them piecewise with revert and progress semantics.
"""

from .table import (
    Table,
    column_order_by_cardinality,
    dictionary_encode,
    discriminating_order,
    dispersion_p0,
    hamming,
    mu_bound,
    omega_bound,
    run_count,
    run_counts,
)
from .orders import normalize_by_frequency, sort_rows
from .heuristics import (
    TableTooLarge,
    brute_force_path,
    improve_ahdo,
    improve_one_reinsertion,
    improve_peephole,
    insertion,
    multiple_fragment,
    multiple_lists,
    nearest_neighbor,
    savings,
)
from .codecs import CodecReport, compress_table
from .datagen import GenSpec, generate, shuffle_columns_independently
from .partition import PartitionPlan, apply_partitioned
from .bench import characterize_table, run_benchmark

__version__ = "0.1.0"

__all__ = [
    "Table",
    "column_order_by_cardinality",
    "dictionary_encode",
    "discriminating_order",
    "dispersion_p0",
    "hamming",
    "mu_bound",
    "omega_bound",
    "run_count",
    "run_counts",
    "normalize_by_frequency",
    "sort_rows",
    "TableTooLarge",
    "brute_force_path",
    "improve_ahdo",
    "improve_one_reinsertion",
    "improve_peephole",
    "insertion",
    "multiple_fragment",
    "multiple_lists",
    "nearest_neighbor",
    "savings",
    "CodecReport",
    "compress_table",
    "GenSpec",
    "generate",
    "shuffle_columns_independently",
    "PartitionPlan",
    "apply_partitioned",
    "characterize_table",
    "run_benchmark",
    "__version__",
]
