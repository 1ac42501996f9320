"""Subquadratic decision-tree procedure over g-blocks, three-set form.

Sort the difference set of the A- and B-blocks (4-term comparisons), derive
every box order for free, then for each c walk the block staircase, binary
searching -c in each visited box (3-term comparisons).  With
g ~ sqrt(n log n) the counted total grows clearly slower than quadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import countkit
from .core import ThreeSumInstance, Witness
from .fredman import BlockPartition, BoxOrder, box_order, box_order_values, sort_difference_set
from .instrument import charge_input_sort, pick_engine
from .ledger import ComparisonLedger, Quantity, compare_quantities
from .paths import block_staircase, block_staircase_py

PHASE_PATH = "path"
PHASE_BOX = "box-search"


@dataclass
class GpRun:
    """Materialized run structure: block size, all box orders, ledger stats."""

    g: int
    box_orders: dict[tuple[int, int], BoxOrder]
    stats: dict


def auto_g(n: int) -> int:
    if n <= 1:
        return 1
    return min(n, math.ceil(math.sqrt(n * math.log2(n))))


def _resolve_g(inst, g) -> int:
    n = inst.n
    if g == "auto":
        return auto_g(n)
    g = int(g)
    if not 1 <= g <= n:
        raise ValueError(f"g={g} out of range [1, {n}]")
    return g


def solve_gp(inst: ThreeSumInstance, g="auto", ledger: ComparisonLedger | None = None, engine: str = "auto") -> Witness | None:
    """Witness-existence equals the oracle; halts at the first witness found."""
    ledger = ledger if ledger is not None else ComparisonLedger()
    g = _resolve_g(inst, g)
    engine = pick_engine(inst, engine)
    if engine == "py":
        return _solve_gp_py(inst, g, ledger)
    if engine == "np":
        return _solve_gp_np(inst, g, ledger)
    raise ValueError(f"unknown engine {engine!r}")


def materialize_gp(inst: ThreeSumInstance, g: int, ledger: ComparisonLedger | None = None) -> GpRun:
    """Build every box order through the rank route (audit-scale helper)."""
    ledger = ledger if ledger is not None else ComparisonLedger()
    pa = BlockPartition.contiguous(inst.A, g)
    pb = BlockPartition.contiguous(inst.B, g)
    diff = sort_difference_set([pa, pb], ledger, engine="py")
    boxes = {
        (i, j): box_order(pa.block(i), pb.block(j), diff, ledger)
        for i in range(len(pa))
        for j in range(len(pb))
    }
    return GpRun(g, boxes, ledger.snapshot())


def _solve_gp_py(inst, g, ledger):
    for s in inst.sets():
        charge_input_sort(s, ledger, "py")
    A, B, C = inst.A, inst.B, inst.C
    pa = BlockPartition.contiguous(A, g)
    pb = BlockPartition.contiguous(B, g)
    diff = sort_difference_set([pa, pb], ledger, engine="py")
    boxes: dict[tuple[int, int], BoxOrder] = {}
    zero = Quantity.const(0)

    def get_box(i, j):
        got = boxes.get((i, j))
        if got is None:
            got = box_order(pa.block(i), pb.block(j), diff, ledger)
            boxes[(i, j)] = got
        return got

    max_left = [blk.idx[-1] for blk in pa.blocks]
    min_right = [blk.idx[0] for blk in pb.blocks]
    for l in range(len(C)):
        cq = C.quantity(l)

        def on_boundary(bi, bj):
            form = A.quantity(int(max_left[bi])) + B.quantity(int(min_right[bj])) + cq
            return compare_quantities(ledger, form, zero, PHASE_PATH)

        bi, bj = 0, len(pb) - 1
        while bi < len(pa) and bj >= 0:
            cells = get_box(bi, bj).positions
            xidx, yidx = pa.block(bi).idx, pb.block(bj).idx

            def on_probe(mid):
                p, q = cells[mid]
                form = A.quantity(int(xidx[p])) + B.quantity(int(yidx[q])) + cq
                return compare_quantities(ledger, form, zero, PHASE_BOX)

            found, _ = countkit.binary_search_py(cells, None, on_probe)
            if found >= 0:
                p, q = cells[found]
                ia, jb = int(xidx[p]), int(yidx[q])
                return Witness((ia, jb, l), (A.value(ia), B.value(jb), C.value(l)))
            if on_boundary(bi, bj) <= 0:
                bi += 1
            else:
                bj -= 1
    return None


def _solve_gp_np(inst, g, ledger):
    for s in inst.sets():
        charge_input_sort(s, ledger, "np")
    a, b, c = inst.A.values, inst.B.values, inst.C.values
    pa = BlockPartition.contiguous(inst.A, g)
    pb = BlockPartition.contiguous(inst.B, g)
    diff = sort_difference_set([pa, pb], ledger, engine="np")

    max_left = np.array([blk.values()[-1] for blk in pa.blocks], dtype=np.int64)
    min_right = np.array([blk.values()[0] for blk in pb.blocks], dtype=np.int64)
    walks = block_staircase(max_left, min_right, -c)

    nstates = len(walks.lid)
    probes = np.zeros(nstates, dtype=np.int64)
    found_cell = np.full((nstates, 2), -1, dtype=np.int64)  # global (i, j) of a hit
    boxkey = walks.bi * (len(pb.blocks) + 1) + walks.bj
    order = np.argsort(boxkey, kind="stable")
    bounds = np.nonzero(np.diff(boxkey[order]))[0] + 1
    for grp in np.split(order, bounds):
        i, j = int(walks.bi[grp[0]]), int(walks.bj[grp[0]])
        vals, rows, cols = box_order_values(pa.block(i), pb.block(j))
        queries = -c[walks.lid[grp]]
        found, _, pr = countkit.binary_search_batch(vals, queries)
        probes[grp] = pr
        hit = found >= 0
        if hit.any():
            found_cell[grp[hit], 0] = pa.block(i).idx[rows[found[hit]]]
            found_cell[grp[hit], 1] = pb.block(j).idx[cols[found[hit]]]

    hits = np.nonzero(found_cell[:, 0] >= 0)[0]
    if hits.size == 0:
        ledger.add_bulk(PHASE_PATH, walks.total, 3)
        ledger.add_bulk(PHASE_BOX, int(probes.sum()), 3)
        return None
    s_star = int(hits[0])  # states are flattened in walk order already
    ledger.add_bulk(PHASE_PATH, s_star, 3)
    ledger.add_bulk(PHASE_BOX, int(probes[:s_star].sum()) + int(probes[s_star]), 3)
    ia, jb = int(found_cell[s_star, 0]), int(found_cell[s_star, 1])
    l = int(walks.lid[s_star])
    return Witness((ia, jb, l), (int(a[ia]), int(b[jb]), int(c[l])))
