"""Difference-set sorting and zero-cost box ordering.

The trick that powers every subquadratic routine here: for elements of the
same blocks, a+b < a'+b' exactly when a-a' < b'-b, and both sides of that
test live in the difference set D of the blocks.  Once D is sorted (paid
for through the ledger, 4-term forms), the sorting permutation of any
block-by-block sum box follows from rank lookups alone.

Tie handling.  Duplicated input values are allowed, so the sorted order is
made strict by a symbolic perturbation: conceptually each element x_i of a
set S is replaced by x_i + i*eps_S, where the infinitesimals are ordered by
the set's `eps_rank` (B before A before C).  Concretely, a difference
entry of set S sorts by the key (value, then i-j in the eps_rank slot).
Cross-set rank comparisons are then always strict, and the induced box
order equals a value sort with ties broken by the participating indices in
eps_rank order.

Accounting.  D is a multiset, but entries with literally identical forms
(the same ordered index pair, or any a-a) need no sign test to order: the
comparison sort runs over the distinct forms, and the multiset expansion
is free bookkeeping.  Every charged comparison is a 4-term form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import countkit
from .core import SumSet
from .ledger import ComparisonLedger, compare_quantities


class MissingRankError(LookupError):
    """A rank lookup for a block that the difference order was not built from."""


@dataclass(frozen=True)
class Block:
    """One block of a partition: global indices (ascending) into its set."""

    set: SumSet
    index: int
    idx: np.ndarray

    def __len__(self):
        return len(self.idx)

    def values(self) -> np.ndarray:
        return self.set.values[self.idx]


class BlockPartition:
    """A set partitioned into blocks of (at most) g consecutive elements.

    The contiguous constructor builds the standard partition; the rfc tree
    also instantiates partitions whose blocks are augmented index sets.
    """

    def __init__(self, s: SumSet, g: int, index_blocks: list[np.ndarray]):
        if g < 1:
            raise ValueError("g must be >= 1")
        self.set = s
        self.g = g
        self.blocks = [Block(s, i, np.asarray(ix, dtype=np.int64)) for i, ix in enumerate(index_blocks)]

    @classmethod
    def contiguous(cls, s: SumSet, g: int) -> "BlockPartition":
        n = len(s)
        idx = np.arange(n, dtype=np.int64)
        return cls(s, g, [idx[i : i + g] for i in range(0, n, g)])

    def __len__(self):
        return len(self.blocks)

    def block(self, i: int) -> Block:
        return self.blocks[i]


_ZERO_KEY = (-1, 0, 0)  # canonical form of every a - a entry


def _entry_forms(parts: list[BlockPartition]):
    """Distinct difference forms over all blocks of all partitions.

    Returns (set_codes, p, q, values, e1, e2, e3) arrays for the distinct
    forms, ordered deterministically by construction key, plus the list of
    (set_code, packed key) needed to build per-block rank matrices.
    """
    keycols = []
    for code, part in enumerate(parts):
        vals = part.set.values
        for blk in part.blocks:
            ix = blk.idx
            p = np.repeat(ix, len(ix))
            q = np.tile(ix, len(ix))
            keep = p != q
            keycols.append(np.stack([np.full(keep.sum(), code, dtype=np.int64), p[keep], q[keep]], axis=1))
    if keycols:
        allkeys = np.concatenate(keycols, axis=0)
    else:
        allkeys = np.empty((0, 3), dtype=np.int64)
    uniq = np.unique(allkeys, axis=0) if len(allkeys) else allkeys
    # prepend the shared zero form
    set_codes = np.concatenate([[-1], uniq[:, 0]]).astype(np.int64)
    p = np.concatenate([[0], uniq[:, 1]]).astype(np.int64)
    q = np.concatenate([[0], uniq[:, 2]]).astype(np.int64)
    values = np.zeros(len(set_codes), dtype=np.int64)
    e = np.zeros((3, len(set_codes)), dtype=np.int64)
    for code, part in enumerate(parts):
        mask = set_codes == code
        if not mask.any():
            continue
        values[mask] = part.set.values[p[mask]] - part.set.values[q[mask]]
        lvl = part.set.eps_rank
        if not 1 <= lvl <= 3:
            raise ValueError("eps_rank must be 1, 2, or 3")
        e[lvl - 1][mask] = p[mask] - q[mask]
    return set_codes, p, q, values, e[0], e[1], e[2]


_PACK = 1 << 21  # global indices stay far below this in every supported run


def _pack_keys(set_codes, p, q):
    return (set_codes.astype(np.int64) + 1) * (_PACK * _PACK) + p * _PACK + q


class DifferenceOrder:
    """Sorted difference forms plus exact rank lookups for block pairs."""

    def __init__(self, parts, set_codes, p, q, ranks):
        self._set_ids = {part.set.set_id: code for code, part in enumerate(parts)}
        self._parts = {part.set.set_id: part for part in parts}
        self.size = len(ranks)
        packed = _pack_keys(set_codes, p, q)
        order = np.argsort(packed)
        self._packed_sorted = packed[order]
        self._key_ranks = ranks[order]
        self._rank_matrices: dict[tuple[str, int], np.ndarray] = {}
        # inverse: form data in rank order, for multiset expansion
        inv = np.empty(self.size, dtype=np.int64)
        inv[ranks] = np.arange(self.size)
        self._by_rank = (set_codes[inv], p[inv], q[inv])

    def _lookup_ranks(self, code: int, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        diag = p == q
        cp = np.where(diag, 0, p)
        cq = np.where(diag, 0, q)
        ccode = np.where(diag, np.int64(-1), np.int64(code))
        wanted = _pack_keys(ccode, cp, cq)
        pos = np.searchsorted(self._packed_sorted, wanted)
        bad = (pos >= self.size) | (self._packed_sorted[np.minimum(pos, self.size - 1)] != wanted)
        if bad.any():
            raise MissingRankError("difference order was not built from these blocks")
        return self._key_ranks[pos]

    def rank_matrix(self, block: Block) -> np.ndarray:
        """Rank of every ordered index pair of the block; cached per block."""
        key = (block.set.set_id, block.index)
        cached = self._rank_matrices.get(key)
        if cached is not None:
            return cached
        code = self._set_ids.get(block.set.set_id)
        if code is None:
            raise MissingRankError(f"set {block.set.set_id!r} not part of this difference order")
        ix = block.idx
        p = np.repeat(ix, len(ix))
        q = np.tile(ix, len(ix))
        mat = self._lookup_ranks(code, p, q).reshape(len(ix), len(ix)).astype(np.int64)
        self._rank_matrices[key] = mat
        return mat

    def multiset_entries(self) -> list[tuple[int, str, int, int, int]]:
        """The full multiset, expanded in sorted order: (value, set_id, block, p, q)."""
        out = []
        id_of = {code: sid for sid, code in self._set_ids.items()}
        for r in range(self.size):
            code = int(self._by_rank[0][r])
            p = int(self._by_rank[1][r])
            q = int(self._by_rank[2][r])
            if code == -1:
                # one zero form stands for every within-block a - a pair
                for sid, part in self._parts.items():
                    for blk in part.blocks:
                        for gidx in blk.idx:
                            out.append((0, sid, blk.index, int(gidx), int(gidx)))
            else:
                sid = id_of[code]
                part = self._parts[sid]
                value = int(part.set.values[p]) - int(part.set.values[q])
                blocks = [b.index for b in part.blocks if p in b.idx and q in b.idx]
                for bi in blocks:
                    out.append((value, sid, bi, p, q))
        return out


def sort_difference_set(
    parts: list[BlockPartition], ledger: ComparisonLedger, engine: str = "np"
) -> DifferenceOrder:
    """Sort the union of all within-block difference sets through the ledger.

    Every charged comparison is of the 4-term shape (a - a') vs (b' - b);
    the phase label is "sort-D".
    """
    set_codes, p, q, values, e1, e2, e3 = _entry_forms(parts)
    m = len(values)
    ranks_key = countkit.rank_keys(values, e1, e2, e3)
    if engine == "np":
        count, (fu, fv) = countkit.merge_sort_count(ranks_key, want_first_pairs=True)
        arity = _sortd_max_arity(set_codes, p, q, ranks_key, fu, fv, count)
        ledger.add_bulk("sort-D", count, arity)
    elif engine == "py":
        quantities = {}

        def qty(i):
            got = quantities.get(i)
            if got is None:
                code = int(set_codes[i])
                if code == -1:
                    part = parts[0]
                    got = part.set.quantity(0) - part.set.quantity(0)
                else:
                    part = parts[code]
                    got = part.set.quantity(int(p[i])) - part.set.quantity(int(q[i]))
                quantities[i] = got
            return got

        eps = np.stack([e1, e2, e3], axis=1)

        def takes_left(i, j):
            s = compare_quantities(ledger, qty(i), qty(j), "sort-D")
            if s != 0:
                return s < 0
            ti, tj = tuple(eps[i]), tuple(eps[j])
            if ti != tj:
                return ti < tj
            return i < j  # identical keys: construction order, free

        countkit.merge_sort_py(m, takes_left)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return DifferenceOrder(parts, set_codes, p, q, ranks_key)


def _sortd_max_arity(set_codes, p, q, ranks, fu, fv, count) -> int:
    """Exact max arity over the comparisons the mergesort executed.

    The first comparison of every merge (the two run minima) is a known
    executed pair; 4 is the structural cap, so finding any disjoint pair
    among those settles the maximum.  The exhaustive fallback replays the
    sort and is only reachable for tiny inputs.
    """
    if count == 0:
        return 0
    best = _pair_arity_max(set_codes, p, q, fu, fv)
    if best >= 4:
        return 4
    pairs_u, pairs_v = _all_compared_pairs(ranks)
    return _pair_arity_max(set_codes, p, q, pairs_u, pairs_v)


def _pair_arity_max(set_codes, p, q, iu, iv) -> int:
    if len(iu) == 0:
        return 0
    su, pu, qu = set_codes[iu], p[iu], q[iu]
    sv, pv, qv = set_codes[iv], p[iv], q[iv]
    du = su == -1
    dv = sv == -1
    base = np.where(du, 0, 2) + np.where(dv, 0, 2)
    same = (su == sv) & ~du & ~dv
    cancel = same & (pu == pv)
    cancel2 = same & (qu == qv)
    merge1 = same & (pu == qv)
    merge2 = same & (qu == pv)
    arity = base - 2 * cancel - 2 * cancel2 - merge1.astype(int) - merge2.astype(int)
    return int(arity.max())


def _all_compared_pairs(ranks):
    """Replay the mergesort, recording every compared pair (small inputs only)."""
    pairs_u: list[int] = []
    pairs_v: list[int] = []

    def takes_left(i, j):
        pairs_u.append(i)
        pairs_v.append(j)
        return ranks[i] < ranks[j]

    countkit.merge_sort_py(len(ranks), takes_left)
    return np.asarray(pairs_u, dtype=np.int64), np.asarray(pairs_v, dtype=np.int64)


@dataclass(frozen=True)
class BoxOrder:
    """Sorting permutation of one sum box: local (row, col) cells, ascending."""

    positions: tuple[tuple[int, int], ...]


def box_order(xblock: Block, yblock: Block, diff: DifferenceOrder, ledger: ComparisonLedger | None = None) -> BoxOrder:
    """Sorting permutation of the box xblock + yblock, by rank lookups only.

    Costs zero ledger comparisons; the ledger argument is accepted so call
    sites can be audited for exactly that.
    """
    before = ledger.total if ledger is not None else None
    rx = diff.rank_matrix(xblock)
    ry = diff.rank_matrix(yblock)
    lx, ly = len(xblock), len(yblock)

    def takes_left(c1, c2):
        p, qq = c1
        pp, q2 = c2
        r1 = rx[p, pp]
        r2 = ry[q2, qq]
        if r1 == r2:
            raise AssertionError("rank comparison must be strict for distinct cells")
        return r1 < r2

    rows: list[list[tuple[int, int]]] = [[(p, qy) for qy in range(ly)] for p in range(lx)]
    while len(rows) > 1:
        merged = []
        for t in range(0, len(rows) - 1, 2):
            u, v = rows[t], rows[t + 1]
            out = []
            i = j = 0
            while i < len(u) and j < len(v):
                if takes_left(u[i], v[j]):
                    out.append(u[i])
                    i += 1
                else:
                    out.append(v[j])
                    j += 1
            out.extend(u[i:])
            out.extend(v[j:])
            merged.append(out)
        if len(rows) % 2:
            merged.append(rows[-1])
        rows = merged
    cells = rows[0] if rows else []
    if ledger is not None and ledger.total != before:
        raise AssertionError("box_order must not execute ledger comparisons")
    return BoxOrder(tuple(cells))


def box_order_values(xblock: Block, yblock: Block):
    """Fast path: the same permutation, via a direct value sort (zero ledger).

    Equality with the rank-lookup route is pinned by tests; large runs use
    this to materialize boxes without per-cell Python work.  Returns
    (sorted values, row positions, col positions) as arrays.
    """
    xv = xblock.values()
    yv = yblock.values()
    lx, ly = len(xv), len(yv)
    sums = (xv[:, None] + yv[None, :]).ravel()
    rowpos = np.repeat(np.arange(lx, dtype=np.int64), ly)
    colpos = np.tile(np.arange(ly, dtype=np.int64), lx)
    xg = xblock.idx[rowpos]
    yg = yblock.idx[colpos]
    if xblock.set.eps_rank < yblock.set.eps_rank:
        order = np.lexsort((yg, xg, sums))
    else:
        order = np.lexsort((xg, yg, sums))
    return sums[order], rowpos[order], colpos[order]
