"""Ledger-charged input sorting, shared by all solvers.

Instances arrive canonically sorted, but a solver still pays for the sort
that anchors every later free reuse of the input order.  Sets built by the
odd-k reduction carry their generation order, and the charge replays the
mergesort from that order; plain sets replay it from the (already sorted)
input sequence.
"""

from __future__ import annotations

from . import countkit
from .core import SumSet
from .ledger import ComparisonLedger, compare_quantities

PHASE_INPUT = "sort-input"


def charge_input_sort(s: SumSet, ledger: ComparisonLedger, engine: str = "np") -> None:
    m = len(s)
    gen = getattr(s, "gen_order", None)
    if engine == "np":
        if s.provenance is not None:
            raise ValueError("vectorized sort charge supports plain sets only")
        if gen is None:
            ranks = countkit.rank_keys(s.values)
        else:
            ranks = countkit.rank_keys(s.values[gen], gen)
        count, _ = countkit.merge_sort_count(ranks)
        ledger.add_bulk(PHASE_INPUT, count, 2)
        return
    if engine != "py":
        raise ValueError(f"unknown engine {engine!r}")
    seq = list(range(m)) if gen is None else [int(t) for t in gen]

    def takes_left(ti, tj):
        i, j = seq[ti], seq[tj]
        sgn = compare_quantities(ledger, s.quantity(i), s.quantity(j), PHASE_INPUT)
        if sgn != 0:
            return sgn < 0
        return i < j

    countkit.merge_sort_py(m, takes_left)


def pick_engine(inst, engine: str) -> str:
    if engine != "auto":
        return engine
    plain = all(s.provenance is None for s in inst.sets())
    return "np" if plain else "py"
