"""Synthetic tables for benchmarking the reordering heuristics.

Both generators draw each column independently with the value domain set to
the row count n: generate_zipf picks value i from {1..n} with probability
proportional to 1/i, generate_uniform picks uniformly. Raw values are then
dictionary-encoded so the resulting codes follow the frequency-ordered
convention of the rest of the package. Column streams derive from
numpy's SeedSequence spawning, so a (spec, seed) pair is reproducible and
columns could be drawn in parallel without changing the output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .table import Table, dictionary_encode

DISTRIBUTIONS = ("zipf", "uniform")


@dataclass(frozen=True)
class GenSpec:
    rows: int
    cols: int
    distribution: str = "zipf"
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}")


def _column_rngs(seed: int, cols: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(cols)]


def generate_zipf(spec: GenSpec) -> Table:
    """Independent columns of 1/i-weighted draws over {1..n}."""
    if spec.distribution != "zipf":
        raise ValueError("spec.distribution must be 'zipf'")
    n = spec.rows
    cum = np.cumsum(1.0 / np.arange(1, n + 1))
    cum /= cum[-1]
    raw = [
        np.searchsorted(cum, rng.random(n), side="right") + 1
        for rng in _column_rngs(spec.seed, spec.cols)
    ]
    return dictionary_encode(raw)


def generate_uniform(spec: GenSpec) -> Table:
    """Independent columns uniform over {1..n}."""
    if spec.distribution != "uniform":
        raise ValueError("spec.distribution must be 'uniform'")
    n = spec.rows
    raw = [
        rng.integers(1, n + 1, size=n) for rng in _column_rngs(spec.seed, spec.cols)
    ]
    return dictionary_encode(raw)


def generate(spec: GenSpec) -> Table:
    if spec.distribution == "zipf":
        return generate_zipf(spec)
    return generate_uniform(spec)


def shuffle_columns_independently(table: Table, seed: int = 0) -> Table:
    """Permute each column on its own, destroying cross-column correlation.

    Per-column histograms are untouched, so single-column statistics and
    dictionaries stay valid while joint row structure is randomized.
    """
    rngs = _column_rngs(seed, table.col_count)
    cols = [
        table.codes[rng.permutation(table.row_count), j]
        for j, rng in enumerate(rngs)
    ]
    return Table(
        codes=np.column_stack(cols).astype(table.codes.dtype),
        cardinalities=table.cardinalities,
        dictionaries=table.dictionaries,
    )
