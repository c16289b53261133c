# What a better row order is worth under actual codecs.
#
# Run counts are the abstract currency; this script prices the same table
# in bits under run-length coding, the three 128-value block codecs and a
# byte-oriented LZ pass, before and after reordering.

from rowforge import GenSpec, compress_table, generate, run_count, sort_rows

table = generate(GenSpec(65536, 4, "zipf", 11))
orders = {
    "as generated": None,
    "lex": sort_rows(table, "lex", column_order="cardinality"),
    "vortex": sort_rows(table, "vortex", column_order="cardinality"),
}

codecs = ("rle", "prefix", "sparse", "indirect", "lz")
header = "".join(f"{c:>12s}" for c in codecs)
print(f"{'ordering':14s}{header}{'runs':>10s}")
for name, perm in orders.items():
    sizes = [compress_table(table, perm, codec=c).total_bits for c in codecs]
    cells = "".join(f"{s:12d}" for s in sizes)
    print(f"{name:14s}{cells}{run_count(table, perm):10d}")

print()
baseline = {c: compress_table(table, orders["lex"], codec=c).total_bits for c in codecs}
best = {c: compress_table(table, orders["vortex"], codec=c).total_bits for c in codecs}
for c in codecs:
    print(f"{c:9s} vortex vs lex: {baseline[c] / best[c]:.3f}x")

# the report keeps per-column detail; these columns are drawn from the
# same distribution so the bits split about evenly, on real tables the
# split shows which columns the ordering actually helped
report = compress_table(table, orders["vortex"], codec="rle")
for j, bits in enumerate(report.column_bits):
    print(f"column {j}: cardinality {report.cardinalities[j]:5d}, {bits} bits under RLE")
