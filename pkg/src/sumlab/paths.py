"""Vectorized block-staircase walks.

For each query value the coarse scan over blocks visits at most
nbA + nbB - 1 boxes, moving down (lo++) while max(A_lo) + min(B_hi) is not
above the target and left (hi--) otherwise.  This module reconstructs, for
every query at once, the exact visited states in walk order together with
the exact number of executed boundary comparisons, from searchsorted
staircase levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class StaircaseWalks:
    """Flattened per-query walk states, in walk order (query, then step)."""

    counts: np.ndarray  # boundary comparisons per query == states per query
    offsets: np.ndarray  # start of each query's states in the flat arrays
    lid: np.ndarray  # query id per state
    bi: np.ndarray  # row-block per state
    bj: np.ndarray  # column-block per state

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def block_staircase(max_left: np.ndarray, min_right: np.ndarray, targets: np.ndarray) -> StaircaseWalks:
    """Walks searching each target in the (max_left[i] + min_right[j]) grid.

    max_left: per row-block maxima (ascending); min_right: per column-block
    minima (ascending); targets: the searched values (one walk each).
    Moves down while max_left[bi] + min_right[bj] <= target.
    """
    nba, nbb = len(max_left), len(min_right)
    nq = len(targets)
    lid_parts = []
    bi_parts = []
    bj_parts = []
    counts = np.zeros(nq, dtype=np.int64)
    offsets = np.zeros(nq + 1, dtype=np.int64)
    chunk = max(1, (1 << 21) // max(nbb, 1))
    pos = 0
    for l0 in range(0, nq, chunk):
        tg = targets[l0 : l0 + chunk]
        nl = len(tg)
        # e[l, j]: rows with max_left <= target - min_right[j]
        e = np.searchsorted(max_left, (tg[:, None] - min_right[None, :]).ravel(), side="right")
        e = e.reshape(nl, nbb)
        ebig = e == nba
        nbottom = ebig.sum(axis=1)  # bottom-exit columns form a prefix in j
        jstar = np.where(nbottom > 0, nbottom - 1, -1)
        # entry row per column j is e[:, j+1] (0 for the rightmost column)
        entry = np.concatenate([e[:, 1:], np.zeros((nl, 1), dtype=e.dtype)], axis=1)
        exit_row = np.minimum(e, nba - 1)
        runlen = exit_row - entry + 1
        visited = np.arange(nbb)[None, :] >= jstar[:, None]
        runlen = np.where(visited, runlen, 0)
        # the bottom-exit column has no hi-- state at its end
        bcol = jstar >= 0
        if bcol.any():
            rows_b = np.nonzero(bcol)[0]
            runlen[rows_b, jstar[rows_b]] = nba - entry[rows_b, jstar[rows_b]]
        # flatten in walk order: query asc, column desc, row asc
        runs_desc = runlen[:, ::-1]
        base_desc = entry[:, ::-1]
        flat_runs = runs_desc.ravel()
        flat_base = base_desc.ravel()
        keep = flat_runs > 0
        flat_runs = flat_runs[keep]
        flat_base = flat_base[keep]
        total_chunk = int(flat_runs.sum())
        if total_chunk:
            seg_start = np.repeat(np.cumsum(flat_runs) - flat_runs, flat_runs)
            inner = np.arange(total_chunk, dtype=np.int64) - seg_start
            bi_parts.append(np.repeat(flat_base, flat_runs) + inner)
            grid_l, grid_j = np.divmod(np.nonzero(keep.reshape(nl, nbb).ravel())[0], nbb)
            bj_parts.append(np.repeat(nbb - 1 - grid_j, flat_runs))
            lid_parts.append(np.repeat(grid_l + l0, flat_runs))
        counts[l0 : l0 + chunk] = runlen.sum(axis=1)
        pos += total_chunk
    offsets[1:] = np.cumsum(counts)
    if lid_parts:
        lid = np.concatenate(lid_parts)
        bi = np.concatenate(bi_parts)
        bj = np.concatenate(bj_parts)
    else:
        lid = bi = bj = np.empty(0, dtype=np.int64)
    return StaircaseWalks(counts, offsets, lid, bi, bj)


def block_staircase_py(max_left, min_right, target, on_compare):
    """Reference walk for one target; on_compare(bi, bj) returns the sign of
    (max_left[bi] + min_right[bj]) - target and is charged per call.

    Returns the visited (bi, bj) states in order.
    """
    nba, nbb = len(max_left), len(min_right)
    bi, bj = 0, nbb - 1
    states = []
    while bi < nba and bj >= 0:
        states.append((bi, bj))
        if on_compare(bi, bj) <= 0:
            bi += 1
        else:
            bj -= 1
    return states
