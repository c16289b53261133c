"""Compressed-size accounting and reference codecs over dictionary codes.

Sizes are exact bit counts, never estimates: each scheme has a closed-form
size function plus a reference encoder that actually writes the bits, so the
two can be checked against each other. Run-length encoding works on whole
columns; prefix, sparse and indirect coding work on blocks of BLOCK_SIZE
values (short final blocks use their actual length everywhere). Throughout,
a value drawn from a dictionary of size N costs ceil(log2 N) bits, with
ceil(log2 1) = 0.

The LZ estimator is byte-oriented and pluggable. The bundled codec is a
deterministic greedy matcher with a 64 KiB window and 4-byte minimum match,
framed as "RFLZ" + varint original length + (literal run, match) tokens. It
exists to give size comparisons a stable baseline, not to compete with
production compressors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .table import Table, run_counts, validate_ordering

BLOCK_SIZE = 128

CODEC_NAMES = ("runcount", "rle", "prefix", "sparse", "indirect", "lz")


def bits_for(n_values: int) -> int:
    """ceil(log2 n_values), with a single-value domain costing 0 bits."""
    if n_values < 1:
        raise ValueError("domain must hold at least one value")
    return (n_values - 1).bit_length()


class BitWriter:
    """Append-only MSB-first bit buffer."""

    def __init__(self):
        self._acc = 0
        self.bit_length = 0

    def write(self, value: int, width: int) -> None:
        value, width = int(value), int(width)
        if width < 0 or (width == 0 and value != 0):
            raise ValueError("value does not fit the field width")
        if value < 0 or value >> width:
            raise ValueError("value does not fit the field width")
        self._acc = (self._acc << width) | value
        self.bit_length += width

    def getbuffer(self) -> bytes:
        pad = -self.bit_length % 8
        return ((self._acc << pad) & ((1 << (self.bit_length + pad)) - 1)).to_bytes(
            (self.bit_length + pad) // 8, "big"
        )


class BitReader:
    """MSB-first reader matching BitWriter's layout."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def read(self, width: int) -> int:
        end = self._pos + width
        if end > len(self._data) * 8:
            raise ValueError("bit stream exhausted")
        out = 0
        pos = self._pos
        for _ in range(width):
            byte = self._data[pos >> 3]
            out = (out << 1) | (byte >> (7 - (pos & 7)) & 1)
            pos += 1
        self._pos = end
        return out


def _as_column(codes) -> np.ndarray:
    col = np.asarray(codes)
    if col.ndim != 1:
        raise ValueError("expected a one-dimensional code sequence")
    return col.astype(np.int64, copy=False)


def rle_encode(codes) -> list[tuple[int, int, int]]:
    """Maximal runs as (value, start, length) triples."""
    col = _as_column(codes)
    n = len(col)
    if n == 0:
        return []
    starts = np.flatnonzero(np.concatenate(([True], col[1:] != col[:-1])))
    ends = np.append(starts[1:], n)
    return [
        (int(col[s]), int(s), int(e - s)) for s, e in zip(starts.tolist(), ends.tolist())
    ]


def rle_decode(triples, length: int) -> np.ndarray:
    out = np.empty(length, dtype=np.int64)
    covered = 0
    for value, start, run in triples:
        if start != covered or run < 1:
            raise ValueError("triples must tile the column contiguously")
        out[start : start + run] = value
        covered += run
    if covered != length:
        raise ValueError("triples must tile the column contiguously")
    return out


def rle_size_bits(codes, cardinality: int) -> int:
    """runs * (value width + start width + length width) over the column."""
    col = _as_column(codes)
    n = len(col)
    if n == 0:
        return 0
    runs = 1 + int(np.count_nonzero(col[1:] != col[:-1]))
    return runs * (bits_for(cardinality) + 2 * bits_for(n))


def rle_pack_bits(triples, length: int, cardinality: int) -> BitWriter:
    """Reference bit layout: value, start, length-1 per run."""
    w = BitWriter()
    vw, pw = bits_for(cardinality), bits_for(length)
    for value, start, run in triples:
        w.write(value, vw)
        w.write(start, pw)
        w.write(run - 1, pw)
    return w


def rle_unpack_bits(data: bytes, runs: int, length: int, cardinality: int):
    r = BitReader(data)
    vw, pw = bits_for(cardinality), bits_for(length)
    return [
        (r.read(vw), r.read(pw), r.read(pw) + 1) for _ in range(runs)
    ]


def prefix_size_bits(block, cardinality: int) -> int:
    """Leading-run counter plus the remaining values verbatim.

    With the block's first value repeated l times at the head, costs
    ceil(log2 p') + (p' - l + 1) * ceil(log2 N) bits.
    """
    blk = _as_column(block)
    p = len(blk)
    if p == 0:
        return 0
    if p > BLOCK_SIZE:
        raise ValueError(f"block length exceeds {BLOCK_SIZE}")
    lead = int(np.argmin(blk == blk[0])) or p
    return bits_for(p) + (p - lead + 1) * bits_for(cardinality)


def prefix_encode_bits(block, cardinality: int) -> BitWriter:
    blk = _as_column(block)
    p = len(blk)
    w = BitWriter()
    if p == 0:
        return w
    lead = int(np.argmin(blk == blk[0])) or p
    w.write(lead - 1, bits_for(p))
    vw = bits_for(cardinality)
    w.write(int(blk[0]), vw)
    for v in blk[lead:].tolist():
        w.write(v, vw)
    return w


def prefix_decode_bits(data: bytes, length: int, cardinality: int) -> np.ndarray:
    if length == 0:
        return np.empty(0, dtype=np.int64)
    r = BitReader(data)
    lead = r.read(bits_for(length)) + 1
    vw = bits_for(cardinality)
    first = r.read(vw)
    tail = [r.read(vw) for _ in range(length - lead)]
    return np.asarray([first] * lead + tail, dtype=np.int64)


def _block_mode(blk: np.ndarray) -> int:
    """Most frequent value in the block, ties to the lowest code."""
    values, counts = np.unique(blk, return_counts=True)
    return int(values[np.argmax(counts)])


def sparse_size_bits(block, cardinality: int) -> int:
    """Presence bitmap plus the non-modal values verbatim.

    With the in-block most frequent value occurring z times, costs
    (p' - z + 1) * ceil(log2 N) + p' bits.
    """
    blk = _as_column(block)
    p = len(blk)
    if p == 0:
        return 0
    if p > BLOCK_SIZE:
        raise ValueError(f"block length exceeds {BLOCK_SIZE}")
    mode = _block_mode(blk)
    z = int(np.count_nonzero(blk == mode))
    return (p - z + 1) * bits_for(cardinality) + p


def sparse_encode_bits(block, cardinality: int) -> BitWriter:
    blk = _as_column(block)
    w = BitWriter()
    if len(blk) == 0:
        return w
    mode = _block_mode(blk)
    vw = bits_for(cardinality)
    w.write(mode, vw)
    for v in blk.tolist():
        w.write(1 if v == mode else 0, 1)
    for v in blk[blk != mode].tolist():
        w.write(v, vw)
    return w


def sparse_decode_bits(data: bytes, length: int, cardinality: int) -> np.ndarray:
    if length == 0:
        return np.empty(0, dtype=np.int64)
    r = BitReader(data)
    vw = bits_for(cardinality)
    mode = r.read(vw)
    is_mode = [r.read(1) for _ in range(length)]
    return np.asarray(
        [mode if m else r.read(vw) for m in is_mode], dtype=np.int64
    )


INDIRECT_HEADER_BITS = 8


def indirect_size_bits(block, cardinality: int) -> int:
    """Per-block mini dictionary plus narrow indices.

    With N' distinct values in the block, costs N' * ceil(log2 N) +
    p' * ceil(log2 N') + 8 header bits for N' itself.
    """
    blk = _as_column(block)
    p = len(blk)
    if p == 0:
        return 0
    if p > BLOCK_SIZE:
        raise ValueError(f"block length exceeds {BLOCK_SIZE}")
    distinct = len(np.unique(blk))
    return distinct * bits_for(cardinality) + p * bits_for(distinct) + INDIRECT_HEADER_BITS


def indirect_encode_bits(block, cardinality: int) -> BitWriter:
    blk = _as_column(block)
    w = BitWriter()
    if len(blk) == 0:
        return w
    values = np.unique(blk)
    w.write(len(values), INDIRECT_HEADER_BITS)
    vw = bits_for(cardinality)
    for v in values.tolist():
        w.write(v, vw)
    iw = bits_for(len(values))
    for i in np.searchsorted(values, blk).tolist():
        w.write(i, iw)
    return w


def indirect_decode_bits(data: bytes, length: int, cardinality: int) -> np.ndarray:
    if length == 0:
        return np.empty(0, dtype=np.int64)
    r = BitReader(data)
    distinct = r.read(INDIRECT_HEADER_BITS)
    vw = bits_for(cardinality)
    values = [r.read(vw) for _ in range(distinct)]
    iw = bits_for(distinct)
    return np.asarray([values[r.read(iw)] for _ in range(length)], dtype=np.int64)


LZ_MAGIC = b"RFLZ"
_LZ_WINDOW = 1 << 16
_LZ_MIN_MATCH = 4
_LZ_MAX_CHAIN = 32


def _uvarint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_uvarint(data: bytes, pos: int) -> tuple[int, int]:
    out = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise ValueError("truncated varint")
        byte = data[pos]
        pos += 1
        out |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return out, pos
        shift += 7


def lz_compress(data: bytes) -> bytes:
    """Greedy hash-chain LZ with (literal run, match) tokens.

    Matches are at least 4 bytes within a 64 KiB window; a zero match
    length terminates the stream after the final literal run.
    """
    data = bytes(data)
    n = len(data)
    out = bytearray(LZ_MAGIC)
    out += _uvarint(n)
    head: dict[int, int] = {}
    prev = [0] * n
    pos = 0
    lit_start = 0

    def key(i: int) -> int:
        return int.from_bytes(data[i : i + 4], "little")

    while pos < n:
        best_len = 0
        best_off = 0
        if pos + _LZ_MIN_MATCH <= n:
            k = key(pos)
            cand = head.get(k, -1)
            depth = 0
            while cand >= 0 and pos - cand <= _LZ_WINDOW and depth < _LZ_MAX_CHAIN:
                if data[cand : cand + 4] == data[pos : pos + 4]:
                    m = 4
                    while pos + m < n and data[cand + m] == data[pos + m]:
                        m += 1
                    if m > best_len:
                        best_len = m
                        best_off = pos - cand
                cand = prev[cand] - 1
                depth += 1
        if best_len >= _LZ_MIN_MATCH:
            out += _uvarint(pos - lit_start)
            out += data[lit_start:pos]
            out += _uvarint(best_len - _LZ_MIN_MATCH + 1)
            out += _uvarint(best_off - 1)
            end = pos + best_len
            while pos < end and pos + 4 <= n:
                k = key(pos)
                prev[pos] = head.get(k, -1) + 1
                head[k] = pos
                pos += 1
            pos = end
            lit_start = pos
        else:
            if pos + 4 <= n:
                k = key(pos)
                prev[pos] = head.get(k, -1) + 1
                head[k] = pos
            pos += 1
    out += _uvarint(n - lit_start)
    out += data[lit_start:]
    out += _uvarint(0)
    return bytes(out)


def lz_decompress(blob: bytes) -> bytes:
    if blob[:4] != LZ_MAGIC:
        raise ValueError("not an RFLZ stream")
    total, pos = _read_uvarint(blob, 4)
    out = bytearray()
    while True:
        lit, pos = _read_uvarint(blob, pos)
        out += blob[pos : pos + lit]
        pos += lit
        mlen, pos = _read_uvarint(blob, pos)
        if mlen == 0:
            break
        mlen += _LZ_MIN_MATCH - 1
        off, pos = _read_uvarint(blob, pos)
        off += 1
        if off > len(out):
            raise ValueError("match offset outside window")
        for _ in range(mlen):
            out.append(out[-off])
    if len(out) != total:
        raise ValueError("declared length does not match stream")
    return bytes(out)


def lz_size_bytes(codes, codec=None) -> int:
    """Compressed byte count of the column as little-endian 32-bit words."""
    col = _as_column(codes)
    raw = col.astype("<u4").tobytes()
    if codec is None:
        return len(lz_compress(raw))
    return len(codec(raw))


@dataclass(frozen=True)
class CodecReport:
    codec: str
    column_bits: tuple[int, ...]
    block_size: int
    cardinalities: tuple[int, ...]
    row_count: int

    @property
    def total_bits(self) -> int:
        return sum(self.column_bits)


def _blocked(col: np.ndarray, block: int):
    for s in range(0, len(col), block):
        yield col[s : s + block]


def compress_table(
    table: Table, ordering=None, codec: str = "rle", block: int = BLOCK_SIZE
) -> CodecReport:
    """Apply one codec uniformly to every column of the reordered table."""
    if codec not in CODEC_NAMES:
        raise ValueError(f"unknown codec {codec!r}; choose from {CODEC_NAMES}")
    if not 1 <= block <= BLOCK_SIZE:
        raise ValueError(f"block size must lie in [1, {BLOCK_SIZE}]")
    if ordering is not None:
        ordering = validate_ordering(table.row_count, ordering)
        codes = table.codes[ordering]
    else:
        codes = table.codes
    n = table.row_count
    per_col = []
    for j, card in enumerate(table.cardinalities):
        col = codes[:, j]
        if codec == "runcount":
            bits = 0 if n == 0 else 1 + int(np.count_nonzero(col[1:] != col[:-1]))
        elif codec == "rle":
            bits = rle_size_bits(col, card)
        elif codec == "prefix":
            bits = sum(prefix_size_bits(b, card) for b in _blocked(col, block))
        elif codec == "sparse":
            bits = sum(sparse_size_bits(b, card) for b in _blocked(col, block))
        elif codec == "indirect":
            bits = sum(indirect_size_bits(b, card) for b in _blocked(col, block))
        else:
            bits = 8 * lz_size_bytes(col)
        per_col.append(bits)
    return CodecReport(
        codec=codec,
        column_bits=tuple(per_col),
        block_size=block,
        cardinalities=table.cardinalities,
        row_count=n,
    )
