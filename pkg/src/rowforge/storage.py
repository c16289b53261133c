"""On-disk formats: the binary columnar file and CSV ingestion.

Binary layout, little-endian throughout:

    magic "RFRG" | version u32 | n u64 | c u32 | c x cardinality u64
    c column blocks, each n x u32 codes
    dictionary flag u8 (0 or 1)
    if 1: per column, count u32 then count entries (length u32 + UTF-8 bytes)
          listed in code order

CSV fields are treated as opaque strings; encode_csv dictionary-encodes them
so the most frequent value of each column receives the smallest code.

External-merge spill runs reuse the same idea in a stripped form: a
run-length header (row count u64, key-column count u32) followed by the key
columns and the original row indices as int64 column blocks. read_spill_run
streams the rows back in batches so a merge never holds a full run in memory.
"""

from __future__ import annotations

import csv
import struct
from typing import Iterator, Sequence

import numpy as np

from .table import CODE_DTYPE, Table

MAGIC = b"RFRG"
VERSION = 1


class FormatError(ValueError):
    """Raised when a file does not parse as the binary columnar format."""


def _read_exact(f, count: int, section: str) -> bytes:
    data = f.read(count)
    if len(data) != count:
        raise FormatError(f"truncated file while reading {section}")
    return data


def write_table(table: Table, path) -> None:
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IQI", VERSION, table.row_count, table.col_count))
        f.write(struct.pack(f"<{table.col_count}Q", *table.cardinalities))
        for i in range(table.col_count):
            col = np.ascontiguousarray(table.codes[:, i], dtype="<u4")
            f.write(col.tobytes())
        if table.dictionaries is None:
            f.write(b"\x00")
        else:
            f.write(b"\x01")
            for entries in table.dictionaries:
                f.write(struct.pack("<I", len(entries)))
                for value in entries:
                    raw = str(value).encode("utf-8")
                    f.write(struct.pack("<I", len(raw)))
                    f.write(raw)


def read_table(path) -> Table:
    with open(path, "rb") as f:
        magic = _read_exact(f, 4, "magic")
        if magic != MAGIC:
            raise FormatError("bad magic: not a columnar table file")
        version, n, c = struct.unpack("<IQI", _read_exact(f, 16, "header"))
        if version != VERSION:
            raise FormatError(f"unsupported format version {version}")
        if c < 1:
            raise FormatError("header declares zero columns")
        cards = struct.unpack(f"<{c}Q", _read_exact(f, 8 * c, "cardinalities"))
        codes = np.empty((n, c), dtype=CODE_DTYPE)
        for i in range(c):
            raw = _read_exact(f, 4 * n, f"column block {i}")
            codes[:, i] = np.frombuffer(raw, dtype="<u4")
        flag = _read_exact(f, 1, "dictionary flag")[0]
        dictionaries = None
        if flag not in (0, 1):
            raise FormatError("dictionary flag must be 0 or 1")
        if flag:
            dicts = []
            for i in range(c):
                (count,) = struct.unpack("<I", _read_exact(f, 4, f"dictionary {i} count"))
                entries = []
                for j in range(count):
                    (size,) = struct.unpack(
                        "<I", _read_exact(f, 4, f"dictionary {i} entry {j}")
                    )
                    raw = _read_exact(f, size, f"dictionary {i} entry {j}")
                    entries.append(raw.decode("utf-8"))
                dicts.append(tuple(entries))
            dictionaries = tuple(dicts)
        try:
            return Table(codes, cards, dictionaries)
        except ValueError as exc:
            raise FormatError(f"inconsistent file contents: {exc}") from exc


def read_csv(path, has_header: bool = False) -> tuple[Table, list[str] | None]:
    """Dictionary-encode a CSV file; returns the table and optional header."""
    from .table import dictionary_encode

    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = None
        rows = []
        width = None
        for lineno, row in enumerate(reader, start=1):
            if has_header and header is None:
                header = row
                width = len(row)
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise FormatError(
                    f"line {lineno}: expected {width} fields, found {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise FormatError("no rows")
    columns = [[row[i] for row in rows] for i in range(width)]
    return dictionary_encode(columns), header


def write_csv(table: Table, path, header: Sequence[str] | None = None) -> None:
    """Export rows as CSV, mapping codes back through the dictionaries."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        if header is not None:
            writer.writerow(list(header))
        dicts = table.dictionaries
        for i in range(table.row_count):
            row = table.codes[i]
            if dicts is None:
                writer.writerow([int(x) for x in row])
            else:
                writer.writerow([dicts[j][int(x)] for j, x in enumerate(row)])


def write_spill_arrays(f, columns: Sequence[np.ndarray], group_rows: int = 8192) -> None:
    """Write int64 columns as a sequence of columnar row groups.

    Each group carries its own run-length header (row count, column count)
    so a reader can stream the file group by group.
    """
    n = len(columns[0])
    for start in range(0, n, group_rows):
        stop = min(start + group_rows, n)
        f.write(struct.pack("<QI", stop - start, len(columns)))
        for col in columns:
            f.write(np.ascontiguousarray(col[start:stop], dtype="<i8").tobytes())


def write_spill_rows(f, rows, width: int, group_rows: int = 8192) -> None:
    """Stream row tuples into the row-group spill layout with bounded memory."""
    buf: list[tuple] = []

    def flush():
        cols = list(zip(*buf))
        f.write(struct.pack("<QI", len(buf), width))
        for col in cols:
            f.write(np.asarray(col, dtype="<i8").tobytes())
        buf.clear()

    for row in rows:
        buf.append(row)
        if len(buf) >= group_rows:
            flush()
    if buf:
        flush()


def read_spill_run(path) -> Iterator[tuple]:
    """Yield (key..., index) tuples from a spill run, one row group at a time."""
    with open(path, "rb") as f:
        while True:
            header = f.read(12)
            if not header:
                return
            if len(header) != 12:
                raise FormatError("truncated spill group header")
            count, k = struct.unpack("<QI", header)
            block = []
            for _ in range(k):
                raw = _read_exact(f, 8 * count, "spill group column")
                block.append(np.frombuffer(raw, dtype="<i8").tolist())
            yield from zip(*block)
