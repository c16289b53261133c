"""Greedy path construction and improvement under the Hamming distance.

Minimizing run_count is a minimum Hamiltonian-path problem over the rows
with the Hamming distance as edge weight, so the classics apply: grow a path
from a start row (nearest_neighbor, the insertion family), merge path
fragments cheapest-edge-first (multiple_fragment, savings), or polish an
existing ordering (one-reinsertion, adjacent swaps, exhaustive peephole
blocks). multiple_lists is the scalable one: it restricts the nearest
neighbor search to the adjacent rows in K sorted views of the table, kept as
doubly linked lists so appended rows can be unlinked in O(1) per view.

All stochastic choices flow from an explicit integer seed and every
tie-break is deterministic, so a (table, seed) pair always yields the same
ordering. The quadratic-time heuristics refuse tables beyond GATE_ROWS rows
unless force=True; at that size they stop being a realistic choice and the
refusal keeps pipelines from hanging by accident.
"""

from __future__ import annotations

import numpy as np

from .table import Table, column_order_by_cardinality, validate_ordering

GATE_ROWS = 1 << 20


class TableTooLarge(RuntimeError):
    """Quadratic heuristic refused because the table exceeds GATE_ROWS rows."""


def _gate(n: int, force: bool, what: str) -> None:
    if n > GATE_ROWS and not force:
        raise TableTooLarge(
            f"{what} is quadratic in the row count and {n} rows exceed "
            f"{GATE_ROWS}; pass force=True to run anyway"
        )


def path_cost(table: Table, ordering) -> int:
    """Sum of Hamming distances along the ordering (run_count minus c)."""
    perm = validate_ordering(table.row_count, ordering)
    codes = table.codes[perm]
    if codes.shape[0] < 2:
        return 0
    return int(np.count_nonzero(codes[1:] != codes[:-1]))


def _row_tuples(codes: np.ndarray) -> list[tuple[int, ...]]:
    return [tuple(r) for r in codes.tolist()]


def nearest_neighbor(
    table: Table, seed: int = 0, start: int | None = None, force: bool = False
) -> np.ndarray:
    """Repeatedly append the unused row closest to the last appended one.

    The start row is drawn from the seed unless given; distance ties go to
    the lowest row index. O(n^2).
    """
    n, c = table.codes.shape
    if n == 0:
        return np.empty(0, dtype=np.int64)
    _gate(n, force, "nearest_neighbor")
    codes = table.codes
    if start is None:
        start = int(np.random.default_rng(seed).integers(n))
    order = np.empty(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    cur = int(start)
    order[0] = cur
    alive[cur] = False
    far = c + 1
    for k in range(1, n):
        dist = np.count_nonzero(codes != codes[cur], axis=1)
        dist[~alive] = far
        cur = int(np.argmin(dist))
        order[k] = cur
        alive[cur] = False
    return order


def multiple_lists(
    table: Table,
    k: int | None = None,
    seed: int = 0,
    start: int | None = None,
) -> np.ndarray:
    """Nearest-neighbor walk restricted to neighbors in K sorted views.

    The views are lexicographic sorts under cyclic rotations of the
    non-decreasing-cardinality column order. Appending a row unlinks it from
    every view; the candidates for the next step are the (up to) 2K list
    neighbors the appended row had. Ties prefer the earliest view, and
    within a view the predecessor. O(c^2 n log n) at K=c.
    """
    n, c = table.codes.shape
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if k is None:
        k = c
    if not 1 <= k <= c:
        raise ValueError(f"k must lie in [1, {c}]")
    base = list(column_order_by_cardinality(table))
    lists_nxt = []
    lists_prv = []
    for j in range(k):
        rot = base[c - j :] + base[: c - j] if j else base
        perm = np.lexsort(tuple(table.codes[:, i] for i in reversed(rot)))
        nxt = np.full(n, -1, dtype=np.int64)
        prv = np.full(n, -1, dtype=np.int64)
        nxt[perm[:-1]] = perm[1:]
        prv[perm[1:]] = perm[:-1]
        lists_nxt.append(nxt.tolist())
        lists_prv.append(prv.tolist())
    rows = _row_tuples(table.codes)
    if start is None:
        start = int(np.random.default_rng(seed).integers(n))

    def unlink(r: int) -> None:
        for j in range(k):
            p = lists_prv[j][r]
            q = lists_nxt[j][r]
            if p >= 0:
                lists_nxt[j][p] = q
            if q >= 0:
                lists_prv[j][q] = p

    cur = int(start)
    order = [cur]
    unlink(cur)
    for _ in range(n - 1):
        rc = rows[cur]
        best = -1
        best_d = c + 1
        for j in range(k):
            # the appended row's links are stale on purpose: they still
            # point at its former neighbors, which are alive by construction
            for cand in (lists_prv[j][cur], lists_nxt[j][cur]):
                if cand < 0 or best_d == 0:
                    continue
                d = 0
                for a, b in zip(rc, rows[cand]):
                    if a != b:
                        d += 1
                if d < best_d:
                    best_d = d
                    best = cand
        cur = best
        order.append(cur)
        unlink(cur)
    return np.asarray(order, dtype=np.int64)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        root = a
        while p[root] != root:
            root = p[root]
        while p[a] != root:
            p[a], a = root, p[a]
        return root

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def _fragment_merge(codes: np.ndarray, endpoint_order) -> np.ndarray:
    """Shared engine for multiple_fragment and savings.

    Rows start as singleton path fragments. Distance class h = 0 is handled
    by hashing duplicates together; classes h = 1..c then sweep the live
    fragment endpoints, joining endpoint pairs at Hamming distance exactly h.
    Merging only ever consumes endpoints, so a single sweep per class leaves
    no joinable pair behind. endpoint_order(h, endpoints) decides the sweep
    and candidate priority within a class, which is the only thing that
    distinguishes the two callers.
    """
    n, c = codes.shape
    if n == 0:
        return np.empty(0, dtype=np.int64)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    uf = _UnionFind(n)
    other: dict[int, int] = {}

    groups: dict[bytes, list[int]] = {}
    contig = np.ascontiguousarray(codes)
    for i in range(n):
        groups.setdefault(contig[i].tobytes(), []).append(i)
    for members in groups.values():
        for a, b in zip(members, members[1:]):
            nbrs[a].append(b)
            nbrs[b].append(a)
            uf.union(a, b)
        other[members[0]] = members[-1]
        other[members[-1]] = members[0]
    fragments = len(groups)

    for h in range(1, c + 1):
        if fragments == 1:
            break
        snapshot = endpoint_order(h, sorted(other))
        eps = np.asarray(snapshot, dtype=np.int64)
        ep_codes = codes[eps]
        alive = np.ones(len(eps), dtype=bool)
        pos = {int(e): i for i, e in enumerate(eps)}

        def drop_if_interior(r: int) -> None:
            if r not in other and r in pos:
                alive[pos[r]] = False

        for idx in range(len(eps)):
            if fragments == 1:
                break
            if not alive[idx]:
                continue
            e = int(eps[idx])
            dist = np.count_nonzero(ep_codes != codes[e], axis=1)
            for j in np.flatnonzero((dist == h) & alive):
                if not alive[idx]:
                    break
                b = int(eps[j])
                if b == e or uf.find(b) == uf.find(e):
                    continue
                x = other[e]
                y = other[b]
                del other[e]
                if b in other:
                    del other[b]
                if x == e and y == b:
                    other[e] = b
                    other[b] = e
                elif x == e:
                    other[e] = y
                    other[y] = e
                elif y == b:
                    other[b] = x
                    other[x] = b
                else:
                    other[x] = y
                    other[y] = x
                nbrs[e].append(b)
                nbrs[b].append(e)
                uf.union(e, b)
                fragments -= 1
                drop_if_interior(e)
                drop_if_interior(b)
                if fragments == 1:
                    break

    ends = sorted(other)
    start = ends[0] if ends else 0
    order = np.empty(n, dtype=np.int64)
    prev = -1
    cur = start
    for i in range(n):
        order[i] = cur
        nxt = -1
        for cand in nbrs[cur]:
            if cand != prev:
                nxt = cand
                break
        prev, cur = cur, nxt
    return order


def multiple_fragment(table: Table, force: bool = False) -> np.ndarray:
    """Merge path fragments cheapest-endpoint-pair-first, one distance class
    per pass, sweeping endpoints in row order. O(n^2)."""
    _gate(table.row_count, force, "multiple_fragment")
    return _fragment_merge(table.codes, lambda h, eps: eps)


def savings(table: Table, seed: int = 0, force: bool = False) -> np.ndarray:
    """Hub-based fragment merging in non-increasing savings order.

    With a virtual hub row at distance c from every real row, joining rows a
    and b saves 2c - d(a, b), so descending savings is ascending Hamming
    distance and the fragment engine applies; the order within a distance
    class is drawn from the seed. O(n^2).
    """
    _gate(table.row_count, force, "savings")

    def shuffled(h, eps):
        rng = np.random.default_rng([seed, h])
        eps = list(eps)
        rng.shuffle(eps)
        return eps

    return _fragment_merge(table.codes, shuffled)


_INSERTION_STRATEGIES = ("nearest", "farthest", "random")


def insertion(
    table: Table, strategy: str = "nearest", seed: int = 0, force: bool = False
) -> np.ndarray:
    """Grow a path by inserting rows at their cheapest position.

    strategy picks the next row: nearest to the current path, farthest from
    it, or uniformly at random. The insertion point may be either end or any
    interior gap; ties choose the leftmost position. O(n^2).
    """
    if strategy not in _INSERTION_STRATEGIES:
        raise ValueError(f"strategy must be one of {_INSERTION_STRATEGIES}")
    n, c = table.codes.shape
    if n == 0:
        return np.empty(0, dtype=np.int64)
    _gate(n, force, "insertion")
    codes = table.codes
    rng = np.random.default_rng(seed)
    start = int(rng.integers(n))

    tour = np.empty(n, dtype=np.int64)
    tcodes = np.empty((n, c), dtype=codes.dtype)
    edges = np.empty(max(n - 1, 1), dtype=np.int64)
    tour[0] = start
    tcodes[0] = codes[start]
    t = 1

    remaining = np.ones(n, dtype=bool)
    remaining[start] = False
    min_dist = np.count_nonzero(codes != codes[start], axis=1).astype(np.int64)

    far = np.int64(c + 1)
    for _ in range(n - 1):
        if strategy == "nearest":
            masked = np.where(remaining, min_dist, far)
            x = int(np.argmin(masked))
        elif strategy == "farthest":
            masked = np.where(remaining, min_dist, np.int64(-1))
            x = int(np.argmax(masked))
        else:
            ids = np.flatnonzero(remaining)
            x = int(ids[rng.integers(len(ids))])
        remaining[x] = False

        dxt = np.count_nonzero(tcodes[:t] != codes[x], axis=1).astype(np.int64)
        costs = np.empty(t + 1, dtype=np.int64)
        costs[0] = dxt[0]
        costs[t] = dxt[t - 1]
        if t > 1:
            costs[1:t] = dxt[:-1] + dxt[1:] - edges[: t - 1]
        g = int(np.argmin(costs))

        if g < t:
            tour[g + 1 : t + 1] = tour[g:t].copy()
            tcodes[g + 1 : t + 1] = tcodes[g:t].copy()
        tour[g] = x
        tcodes[g] = codes[x]
        if t > 1:
            if g < t - 1:
                edges[g + 1 : t] = edges[g : t - 1].copy()
        if g > 0:
            edges[g - 1] = dxt[g - 1]
        if g < t:
            edges[g] = dxt[g]
        t += 1

        np.minimum(min_dist, np.count_nonzero(codes != codes[x], axis=1), out=min_dist)
    return tour


def improve_one_reinsertion(
    table: Table, ordering, force: bool = False
) -> np.ndarray:
    """One pass of remove-and-reinsert, keeping only strict improvements.

    Rows are visited in the sequence the input ordering gives them; each is
    pulled out and put back at the position of least cost (ends included).
    The result never costs more than the input. O(n^2).
    """
    perm = validate_ordering(table.row_count, ordering)
    n, c = table.codes.shape
    if n < 3:
        return perm.copy()
    _gate(n, force, "improve_one_reinsertion")
    codes = table.codes
    tour = perm.copy()
    tcodes = codes[tour]
    edges = np.count_nonzero(tcodes[1:] != tcodes[:-1], axis=1).astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[tour] = np.arange(n)

    for x in perm:
        i = int(pos[x])
        if i == 0:
            gain = int(edges[0])
        elif i == n - 1:
            gain = int(edges[n - 2])
        else:
            bridge = int(np.count_nonzero(tcodes[i - 1] != tcodes[i + 1]))
            gain = int(edges[i - 1]) + int(edges[i]) - bridge

        rt = np.delete(tour, i)
        rc = np.delete(tcodes, i, axis=0)
        if i == 0:
            re = edges[1:]
        elif i == n - 1:
            re = edges[:-1]
        else:
            re = np.concatenate((edges[: i - 1], [bridge], edges[i + 1 :]))

        dxt = np.count_nonzero(rc != codes[x], axis=1).astype(np.int64)
        m = n - 1
        costs = np.empty(m + 1, dtype=np.int64)
        costs[0] = dxt[0]
        costs[m] = dxt[m - 1]
        costs[1:m] = dxt[:-1] + dxt[1:] - re
        g = int(np.argmin(costs))
        if int(costs[g]) - gain < 0:
            tour = np.insert(rt, g, x)
            tcodes = np.insert(rc, g, codes[x], axis=0)
            if g == 0:
                edges = np.insert(re, 0, dxt[0])
            elif g == m:
                edges = np.append(re, dxt[m - 1])
            else:
                edges = np.concatenate((re[: g - 1], [dxt[g - 1], dxt[g]], re[g:]))
            pos[tour] = np.arange(n)
    return tour


def improve_ahdo(table: Table, ordering) -> np.ndarray:
    """Swap adjacent rows while it helps; repeat passes until a fixpoint.

    Each applied swap strictly lowers the path cost, so termination is
    guaranteed; the output never costs more than the input.
    """
    perm = list(validate_ordering(table.row_count, ordering))
    n = table.row_count
    if n < 2:
        return np.asarray(perm, dtype=np.int64)
    rows = _row_tuples(table.codes)

    def d(a: int, b: int) -> int:
        ra, rb = rows[a], rows[b]
        return sum(1 for u, v in zip(ra, rb) if u != v)

    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            b, cc = perm[i], perm[i + 1]
            delta = 0
            if i > 0:
                a = perm[i - 1]
                delta += d(a, cc) - d(a, b)
            if i + 2 < n:
                e = perm[i + 2]
                delta += d(b, e) - d(cc, e)
            if delta < 0:
                perm[i], perm[i + 1] = cc, b
                improved = True
    return np.asarray(perm, dtype=np.int64)


def improve_peephole(table: Table, ordering, block_size: int = 8) -> np.ndarray:
    """Exhaustively re-solve non-overlapping blocks with fixed endpoints.

    Within each block the first and last rows stay put and the interior is
    replaced by the optimal arrangement when that is strictly cheaper.
    Factorial in block_size, hence the [3, 12] bound.
    """
    if not 3 <= block_size <= 12:
        raise ValueError("block_size must lie in [3, 12]")
    perm = list(validate_ordering(table.row_count, ordering))
    n = table.row_count
    codes = table.codes
    for s in range(0, n, block_size):
        block = perm[s : s + block_size]
        m = len(block)
        if m < 3:
            continue
        bc = codes[block]
        dm = [
            [int(np.count_nonzero(bc[i] != bc[j])) for j in range(m)]
            for i in range(m)
        ]
        current = sum(dm[i][i + 1] for i in range(m - 1))
        seq = _best_interior(dm, m, current)
        if seq is not None:
            perm[s + 1 : s + m - 1] = [block[i] for i in seq]
    return np.asarray(perm, dtype=np.int64)


def _best_interior(dm: list[list[int]], m: int, bound: int):
    """Branch-and-bound over interior arrangements between fixed endpoints.

    Returns the interior index sequence strictly cheaper than bound, or None
    when the current arrangement is already optimal.
    """
    best_seq = None
    best_cost = bound
    interior = list(range(1, m - 1))
    seq: list[int] = []
    last_col = m - 1

    def rec(last: int, acc: int) -> None:
        nonlocal best_seq, best_cost
        if not interior:
            total = acc + dm[last][last_col]
            if total < best_cost:
                best_cost = total
                best_seq = seq.copy()
            return
        for idx in range(len(interior)):
            nxt = interior[idx]
            nd = acc + dm[last][nxt]
            if nd >= best_cost:
                continue
            interior.pop(idx)
            seq.append(nxt)
            rec(nxt, nd)
            seq.pop()
            interior.insert(idx, nxt)

    rec(0, 0)
    return best_seq


def brute_force_path(table: Table, ends: tuple[int, int] | None = None):
    """Exact minimum Hamiltonian path by dynamic programming over subsets.

    Returns (cost, ordering). With ends=(s, e) the path must start at row s
    and finish at row e. Exponential in n; guarded at 13 rows.
    """
    n, c = table.codes.shape
    if n == 0:
        return 0, np.empty(0, dtype=np.int64)
    if n > 13:
        raise ValueError("exact solver is exponential; n must be <= 13")
    if n == 1:
        return 0, np.zeros(1, dtype=np.int64)
    codes = table.codes
    dm = [
        [int(np.count_nonzero(codes[i] != codes[j])) for j in range(n)]
        for i in range(n)
    ]
    full = (1 << n) - 1
    inf = float("inf")
    dp = [[inf] * n for _ in range(1 << n)]
    parent = [[-1] * n for _ in range(1 << n)]
    if ends is None:
        for i in range(n):
            dp[1 << i][i] = 0
    else:
        s, e = ends
        if not (0 <= s < n and 0 <= e < n) or (s == e and n > 1):
            raise ValueError("invalid endpoints")
        dp[1 << s][s] = 0
    for mask in range(1 << n):
        row = dp[mask]
        for last in range(n):
            cost = row[last]
            if cost == inf or not mask >> last & 1:
                continue
            drow = dm[last]
            for nxt in range(n):
                if mask >> nxt & 1:
                    continue
                nmask = mask | 1 << nxt
                ncost = cost + drow[nxt]
                if ncost < dp[nmask][nxt]:
                    dp[nmask][nxt] = ncost
                    parent[nmask][nxt] = last
    if ends is None:
        last = min(range(n), key=lambda i: dp[full][i])
    else:
        last = ends[1]
    best = dp[full][last]
    order = []
    mask = full
    while last >= 0:
        order.append(last)
        nlast = parent[mask][last]
        mask ^= 1 << last
        last = nlast
    order.reverse()
    return int(best), np.asarray(order, dtype=np.int64)
