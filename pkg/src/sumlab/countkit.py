"""Exact comparison-count kernels shared by the vectorized solvers.

The reference solvers charge the ledger one call per executed sign test.
That is the semantic ground truth, but it is far too slow for runs where
the counted comparisons reach hundreds of millions.  The kernels here
compute, for the *same* canonical algorithms (bottom-up mergesort,
two-pointer merge, early-exit binary search), the exact number of
comparisons those algorithms execute on a given input, without running
them step by step.  Equivalence against the per-call route is covered by
tests.

Conventions pinned here and mirrored by the pure-Python references:
  - mergesort is bottom-up with widths 1, 2, 4, ...; a trailing chunk with
    no right sibling is carried without comparisons;
  - merges are stable: on a tie the left run wins (ties are resolved by
    index keys and cost nothing extra, so counts equal comparator calls);
  - binary search probes mid = (lo + hi) // 2 and exits early on sign 0.
"""

from __future__ import annotations

import numpy as np


def rank_keys(*key_arrays) -> np.ndarray:
    """Collapse lexicographic keys (first array most significant) into ranks.

    Returns a dense int64 rank array: distinct values 0..m-1 whose order
    matches the lexicographic order of the given keys, with the element
    index as the final tie-break.
    """
    m = len(key_arrays[0])
    order = np.lexsort((np.arange(m),) + tuple(reversed(key_arrays)))
    ranks = np.empty(m, dtype=np.int64)
    ranks[order] = np.arange(m)
    return ranks


def merge_sort_count(ranks: np.ndarray, want_first_pairs: bool = False):
    """Comparison count of bottom-up mergesort on a distinct-rank array.

    Returns (total, first_pairs) where first_pairs, when requested, is a
    pair of index arrays giving, for every executed merge, the two elements
    compared first (the minima of the two runs).  Those are genuine executed
    comparisons and are used to probe the arity a phase actually reached.
    """
    m = len(ranks)
    if m <= 1:
        return 0, (np.empty(0, np.int64), np.empty(0, np.int64))
    ranks = np.asarray(ranks, dtype=np.int64)
    pos_of = None
    if want_first_pairs:
        # ranks are dense (see rank_keys), so this inverts them
        pos_of = np.empty(m, dtype=np.int64)
        pos_of[ranks] = np.arange(m)

    total = 0
    fp_u: list[np.ndarray] = []
    fp_v: list[np.ndarray] = []
    w = 1
    while w < m:
        starts = np.arange(0, m, w, dtype=np.int64)
        nchunks = len(starts)
        widths = np.diff(np.append(starts, m))
        cmax = np.maximum.reduceat(ranks, starts)
        pair_left = np.arange(0, nchunks - 1, 2)
        pair_right = pair_left + 1
        if len(pair_left):
            # threshold per element: the other run's maximum
            thr = np.empty(nchunks, dtype=np.int64)
            thr.fill(np.iinfo(np.int64).max)  # unpaired chunk: nothing counts
            thr[pair_left] = cmax[pair_right]
            thr[pair_right] = cmax[pair_left]
            over = ranks > np.repeat(thr, widths)
            seg = np.add.reduceat(over, starts)
            left_exhausts = cmax[pair_left] < cmax[pair_right]
            tail = np.where(left_exhausts, seg[pair_right], seg[pair_left])
            total += int((widths[pair_left] + widths[pair_right] - tail).sum())
            if want_first_pairs:
                cmin = np.minimum.reduceat(ranks, starts)
                fp_u.append(pos_of[cmin[pair_left]])
                fp_v.append(pos_of[cmin[pair_right]])
        w *= 2
    if want_first_pairs:
        return total, (np.concatenate(fp_u), np.concatenate(fp_v))
    return total, (np.empty(0, np.int64), np.empty(0, np.int64))


def merge_sort_py(m: int, takes_left) -> list[int]:
    """Reference bottom-up mergesort over indices 0..m-1.

    takes_left(i, j) must return True when element i goes before element j
    and is expected to charge the ledger exactly once per call.  The chunk
    structure matches merge_sort_count.
    """
    cur = list(range(m))
    w = 1
    while w < m:
        nxt: list[int] = []
        for start in range(0, m, 2 * w):
            mid = start + w
            end = min(start + 2 * w, m)
            if mid >= end:
                nxt.extend(cur[start:end])
                continue
            u = cur[start:mid]
            v = cur[mid:end]
            i = j = 0
            while i < len(u) and j < len(v):
                if takes_left(u[i], v[j]):
                    nxt.append(u[i])
                    i += 1
                else:
                    nxt.append(v[j])
                    j += 1
            nxt.extend(u[i:])
            nxt.extend(v[j:])
        cur = nxt
        w *= 2
    return cur


def two_pointer_merge_count(svals: np.ndarray, bvals: np.ndarray) -> int:
    """Comparisons of the canonical two-pointer merge (left run wins ties)."""
    ms, mb = len(svals), len(bvals)
    if ms == 0 or mb == 0:
        return 0
    s_last = svals[-1]
    b_last = bvals[-1]
    tail_b = mb - int(np.searchsorted(bvals, s_last, side="left"))
    tail_s = ms - int(np.searchsorted(svals, b_last, side="right"))
    return ms + mb - max(tail_b, tail_s)


def merge_py(svals, bvals, on_compare) -> list[int]:
    """Reference two-pointer merge; returns for each s its insertion index in b.

    on_compare(si, bj) is called once per executed comparison and must
    return the sign of svals[si] - bvals[bj].
    """
    ms, mb = len(svals), len(bvals)
    ins = [0] * ms
    i = j = 0
    while i < ms and j < mb:
        s = on_compare(i, j)
        if s <= 0:
            ins[i] = j
            i += 1
        else:
            j += 1
    while i < ms:
        ins[i] = mb
        i += 1
    return ins


def binary_search_batch(values: np.ndarray, queries: np.ndarray):
    """Early-exit binary search of each query over a sorted array.

    Returns (found, ins, probes): found[q] is the probed index whose value
    equals the query (-1 if none was hit), ins[q] the insertion point when
    not found, probes[q] the exact number of executed sign tests.
    """
    m = len(values)
    nq = len(queries)
    lo = np.zeros(nq, dtype=np.int64)
    hi = np.full(nq, m - 1, dtype=np.int64)
    found = np.full(nq, -1, dtype=np.int64)
    probes = np.zeros(nq, dtype=np.int64)
    if m == 0:
        return found, lo, probes
    active = lo <= hi
    while active.any():
        mid = (lo + hi) >> 1
        v = values[np.where(active, mid, 0)]
        probes[active] += 1
        less = active & (v < queries)
        greater = active & (v > queries)
        hit = active & ~less & ~greater
        found[hit] = mid[hit]
        lo = np.where(less, mid + 1, lo)
        hi = np.where(greater, mid - 1, hi)
        active = (lo <= hi) & (found < 0)
    return found, lo, probes


def binary_search_py(values, x, on_probe):
    """Reference early-exit binary search; on_probe(mid) returns the sign
    of values[mid] - x and is charged once per executed probe."""
    lo, hi = 0, len(values) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        s = on_probe(mid)
        if s == 0:
            return mid, lo
        if s < 0:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1, lo
