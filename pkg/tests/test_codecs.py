import numpy as np
import pytest

from rowforge.codecs import (
    BLOCK_SIZE,
    BitReader,
    BitWriter,
    CodecReport,
    bits_for,
    compress_table,
    indirect_decode_bits,
    indirect_encode_bits,
    indirect_size_bits,
    lz_compress,
    lz_decompress,
    lz_size_bytes,
    prefix_decode_bits,
    prefix_encode_bits,
    prefix_size_bits,
    rle_decode,
    rle_encode,
    rle_pack_bits,
    rle_size_bits,
    rle_unpack_bits,
    sparse_decode_bits,
    sparse_encode_bits,
    sparse_size_bits,
)
from rowforge.table import Table, run_counts

from conftest import ELEVEN_ROWS, ELEVEN_SOLUTION


def test_bits_for():
    assert bits_for(1) == 0
    assert bits_for(2) == 1
    assert bits_for(3) == 2
    assert bits_for(16) == 4
    assert bits_for(17) == 5
    with pytest.raises(ValueError):
        bits_for(0)


def test_bit_writer_reader_round_trip():
    rng = np.random.default_rng(1)
    fields = [(int(rng.integers(0, 1 << w)), w) for w in rng.integers(1, 24, size=200)]
    w = BitWriter()
    for value, width in fields:
        w.write(value, width)
    assert w.bit_length == sum(width for _, width in fields)
    r = BitReader(w.getbuffer())
    for value, width in fields:
        assert r.read(width) == value


def test_bit_writer_rejects_overflow():
    w = BitWriter()
    with pytest.raises(ValueError):
        w.write(4, 2)
    with pytest.raises(ValueError):
        w.write(-1, 3)
    with pytest.raises(ValueError):
        w.write(1, 0)
    w.write(0, 0)  # zero-width fields hold only zero
    assert w.bit_length == 0


def test_bit_reader_exhaustion():
    r = BitReader(b"\xff")
    r.read(8)
    with pytest.raises(ValueError):
        r.read(1)


def test_rle_encode_triples():
    # a,a,a,a,a,b,c,c with codes a=0, b=1, c=2
    col = [0, 0, 0, 0, 0, 1, 2, 2]
    assert rle_encode(col) == [(0, 0, 5), (1, 5, 1), (2, 6, 2)]
    assert rle_decode(rle_encode(col), len(col)).tolist() == col


def test_rle_decode_rejects_gaps():
    with pytest.raises(ValueError):
        rle_decode([(0, 0, 2), (1, 3, 1)], 4)
    with pytest.raises(ValueError):
        rle_decode([(0, 0, 2)], 4)
    with pytest.raises(ValueError):
        rle_decode([(0, 0, 0)], 0)


def test_rle_size_constant_column():
    col = np.zeros(1 << 20, dtype=np.int64)
    assert rle_size_bits(col, 16) == 44  # 4 value bits + two 20-bit positions


def test_rle_size_alternating_column():
    col = np.tile([0, 1], 512)
    n = len(col)
    assert rle_size_bits(col, 2) == n * (1 + 2 * bits_for(n))


def test_rle_formula_matches_packed_bits():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 300))
        card = int(rng.integers(2, 40))
        col = rng.integers(0, card, size=n)
        triples = rle_encode(col)
        packed = rle_pack_bits(triples, n, card)
        assert packed.bit_length == rle_size_bits(col, card)
        back = rle_unpack_bits(packed.getbuffer(), len(triples), n, card)
        assert back == triples
        assert rle_decode(back, n).tolist() == col.tolist()


def test_prefix_size_examples():
    assert prefix_size_bits(np.zeros(128, dtype=np.int64), 16) == 11
    varied = np.arange(128) % 16  # leading run of length 1
    assert prefix_size_bits(varied, 16) == 519
    assert prefix_size_bits([], 16) == 0
    with pytest.raises(ValueError):
        prefix_size_bits(np.zeros(129, dtype=np.int64), 16)


def test_prefix_worst_case_overhead():
    # never more than the plain dictionary cost plus the counter
    rng = np.random.default_rng(5)
    for _ in range(100):
        p = int(rng.integers(1, 129))
        card = int(rng.integers(2, 64))
        blk = rng.integers(0, card, size=p)
        assert prefix_size_bits(blk, card) <= p * bits_for(card) + bits_for(p)


def test_sparse_size_examples():
    assert sparse_size_bits(np.zeros(128, dtype=np.int64), 16) == 132
    filler = np.arange(28) % 14
    filler[filler >= 7] += 1  # keep the filler clear of the modal value
    blk = np.concatenate([np.full(100, 7), filler])
    assert sparse_size_bits(blk, 16) == 244
    assert sparse_size_bits(np.arange(128), 256) == 1152
    assert sparse_size_bits([], 16) == 0


def test_indirect_size_examples():
    blk = np.arange(128) % 4 + 10
    assert indirect_size_bits(blk, 256) == 296
    assert indirect_size_bits(np.full(128, 3), 256) == bits_for(256) + 8
    # a block drawing every value of its domain is at most twice the
    # dictionary cost plus the header
    full = np.arange(128)
    assert indirect_size_bits(full, 128) <= 2 * 128 * bits_for(128) + 8
    assert indirect_size_bits([], 16) == 0


def test_block_codecs_match_their_encoders():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = int(rng.integers(1, 129))
        card = int(rng.integers(2, 300))
        blk = rng.integers(0, card, size=p)
        for size_fn, enc_fn in (
            (prefix_size_bits, prefix_encode_bits),
            (sparse_size_bits, sparse_encode_bits),
            (indirect_size_bits, indirect_encode_bits),
        ):
            assert size_fn(blk, card) == enc_fn(blk, card).bit_length


def test_block_codecs_round_trip():
    rng = np.random.default_rng(9)
    for _ in range(60):
        p = int(rng.integers(1, 129))
        card = int(rng.integers(2, 300))
        blk = rng.integers(0, card, size=p)
        for enc, dec in (
            (prefix_encode_bits, prefix_decode_bits),
            (sparse_encode_bits, sparse_decode_bits),
            (indirect_encode_bits, indirect_decode_bits),
        ):
            data = enc(blk, card).getbuffer()
            assert dec(data, p, card).tolist() == blk.tolist()


def test_lz_empty_input():
    blob = lz_compress(b"")
    assert len(blob) <= 8
    assert lz_decompress(blob) == b""


def test_lz_identical_codes_stay_small():
    raw256 = np.zeros(256, dtype="<u4").tobytes()
    raw128 = np.zeros(128, dtype="<u4").tobytes()
    s256 = len(lz_compress(raw256))
    s128 = len(lz_compress(raw128))
    assert s256 < 64
    assert s256 - s128 <= 8  # doubling the run costs a few count bytes at most


def test_lz_incompressible_input_expands_boundedly():
    rng = np.random.default_rng(11)
    raw = rng.bytes(4096)
    out = lz_compress(raw)
    assert len(out) >= len(raw)
    assert len(out) <= len(raw) + 16


def test_lz_round_trips():
    rng = np.random.default_rng(13)
    samples = [
        b"",
        b"abcd" * 100,
        bytes(range(256)) * 3,
        rng.bytes(1000),
        np.repeat(rng.integers(0, 5, size=300), rng.integers(1, 9, size=300))
        .astype("<u4")
        .tobytes(),
    ]
    for raw in samples:
        assert lz_decompress(lz_compress(raw)) == raw


def test_lz_overlapping_match_copies():
    raw = b"ab" * 500  # matches reach back into bytes they produce
    assert lz_decompress(lz_compress(raw)) == raw


def test_lz_rejects_corrupt_streams():
    with pytest.raises(ValueError, match="RFLZ"):
        lz_decompress(b"XXXX\x00\x00")
    good = lz_compress(b"hello hello hello hello")
    with pytest.raises(ValueError):
        lz_decompress(good[:-2])
    # a match that reaches before the start of the output
    bad = b"RFLZ" + b"\x04" + b"\x00" + b"\x01" + b"\x00"
    with pytest.raises(ValueError, match="offset"):
        lz_decompress(bad)


def test_lz_size_bytes_uses_words():
    codes = np.array([1, 1, 2], dtype=np.int64)
    assert lz_size_bytes(codes) == len(lz_compress(codes.astype("<u4").tobytes()))
    assert lz_size_bytes(codes, codec=len_aware) == 12


def len_aware(raw: bytes) -> bytes:
    return raw  # stand-in plug-in: identity "compression"


def test_compress_table_runcount_passthrough(eleven):
    report = compress_table(eleven, codec="runcount")
    total, per = run_counts(eleven)
    assert report.column_bits == tuple(per.tolist())
    assert report.total_bits == total


def test_compress_table_constant_table():
    t = Table.from_codes(np.zeros((50, 3), dtype=np.uint32))
    assert compress_table(t, codec="runcount").total_bits == 3
    rle = compress_table(t, codec="rle")
    assert rle.total_bits == sum(
        bits_for(card) + 2 * bits_for(50) for card in t.cardinalities
    )


def test_compress_table_rle_on_worked_example(eleven):
    n = eleven.row_count
    k = [bits_for(card) + 2 * bits_for(n) for card in eleven.cardinalities]
    report = compress_table(eleven, codec="rle")
    assert report.column_bits == (8 * k[0], 11 * k[1])
    solved = Table.from_codes(ELEVEN_SOLUTION)
    report2 = compress_table(solved, codec="rle")
    assert report2.column_bits == (8 * k[0], 6 * k[1])


def test_rle_bits_track_run_counts_at_equal_widths():
    # same code width everywhere makes total bits proportional to total runs
    rng = np.random.default_rng(15)
    codes = rng.integers(0, 8, size=(200, 3)).astype(np.uint32)
    t = Table.from_codes(codes, (8, 8, 8))
    perm = rng.permutation(200)
    bits_a = compress_table(t, codec="rle").total_bits
    bits_b = compress_table(t, ordering=perm, codec="rle").total_bits
    runs_a = run_counts(t)[0]
    runs_b = run_counts(t, perm)[0]
    assert bits_a * runs_b == bits_b * runs_a


def test_compress_table_block_codecs_and_validation(eleven):
    for codec in ("prefix", "sparse", "indirect"):
        report = compress_table(eleven, codec=codec, block=4)
        assert report.total_bits > 0
        assert report.block_size == 4
    with pytest.raises(ValueError):
        compress_table(eleven, codec="zstd")
    with pytest.raises(ValueError):
        compress_table(eleven, codec="prefix", block=0)
    with pytest.raises(ValueError):
        compress_table(eleven, codec="prefix", block=BLOCK_SIZE + 1)


def test_codec_report_totals():
    report = CodecReport("rle", (10, 20, 30), 128, (4, 4, 4), 100)
    assert report.total_bits == 60
