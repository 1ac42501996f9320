"""The quadratic three-set scan and the contour structure it induces.

This module is the semantic reference: it solves instances in O(|C| *
(|A|+|B|)) sign tests and defines the staircase contour that the block
algorithms coarsen.  Not built for wall-clock speed; built to be obviously
right and exactly countable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SumSet, ThreeSumInstance, Witness
from .instrument import charge_input_sort, pick_engine
from .ledger import ComparisonLedger, Quantity, compare_quantities

PHASE_SCAN = "scan"


@dataclass(frozen=True)
class Contour:
    """Positions (lo, hi) visited while searching one value in A+B.

    bottom_exit records whether the scan terminated by running off the last
    row (lo reached |A|) rather than off the first column.
    """

    positions: tuple[tuple[int, int], ...]
    bottom_exit: bool = False

    def rows_at_column(self, j: int) -> list[int]:
        return [lo for lo, hi in self.positions if hi == j]

    def exit_row(self, j: int, n_rows: int) -> int | None:
        """Row at which the scan left column j: the first row of the column
        whose sum is not below the searched value, or n_rows if the whole
        column is below it.  None if the column was never visited.

        This is the boundary separating sums below the searched value from
        the rest, which is what "one contour lies above another" compares.
        """
        rows = self.rows_at_column(j)
        if not rows:
            return None
        last = max(rows)
        if self.bottom_exit and (last, j) == self.positions[-1]:
            return n_rows
        return last


def contour(x, A: SumSet, B: SumSet, ledger: ComparisonLedger, phase: str = PHASE_SCAN) -> Contour:
    """Exact position trace of the scan searching x in the sum matrix A+B.

    x may be a plain integer (a free constant: 2-term forms) or a Quantity
    carrying provenance (e.g. the negation of an input element).
    """
    xq = x if isinstance(x, Quantity) else Quantity.const(int(x))
    lo, hi = 0, len(B) - 1
    positions: list[tuple[int, int]] = []
    while lo < len(A) and hi >= 0:
        positions.append((lo, hi))
        s = compare_quantities(ledger, A.quantity(lo) + B.quantity(hi), xq, phase)
        if s < 0:
            lo += 1
        else:  # ties walk left, keeping contours well defined with witnesses present
            hi -= 1
    return Contour(tuple(positions), bottom_exit=lo >= len(A))


def solve_quadratic(
    inst: ThreeSumInstance, ledger: ComparisonLedger, engine: str = "auto"
) -> Witness | None:
    """Scan A+B once per c; one 3-term sign test per inner step.

    The scan keeps going after a witness is found (witnesses walk left), so
    the executed comparisons do not depend on where witnesses sit; the
    first witness in scan order is returned.
    """
    engine = pick_engine(inst, engine)
    if engine == "py":
        return _solve_quadratic_py(inst, ledger)
    if engine == "np":
        return _solve_quadratic_np(inst, ledger)
    raise ValueError(f"unknown engine {engine!r}")


def _solve_quadratic_py(inst, ledger):
    for s in inst.sets():
        charge_input_sort(s, ledger, "py")
    A, B, C = inst.A, inst.B, inst.C
    witness = None
    for l in range(len(C)):
        lo, hi = 0, len(B) - 1
        cq = C.quantity(l)
        while lo < len(A) and hi >= 0:
            s = compare_quantities(ledger, A.quantity(lo) + B.quantity(hi) + cq, Quantity.const(0), PHASE_SCAN)
            if s < 0:
                lo += 1
            else:
                if s == 0 and witness is None:
                    witness = Witness((lo, hi, l), (A.value(lo), B.value(hi), C.value(l)))
                hi -= 1
    return witness


def _solve_quadratic_np(inst, ledger):
    for s in inst.sets():
        charge_input_sort(s, ledger, "np")
    a, b, c = inst.A.values, inst.B.values, inst.C.values
    na, nb, nc = len(a), len(b), len(c)
    total = 0
    witness = None
    chunk = max(1, (1 << 21) // max(nb, 1))
    for l0 in range(0, nc, chunk):
        cs = c[l0 : l0 + chunk]
        targets = (-cs[:, None]) - b[None, :]
        e = np.searchsorted(a, targets.ravel()).reshape(len(cs), nb)
        nbottom = (e == na).sum(axis=1)  # bottom-exit columns form a prefix in j
        has_bottom = nbottom > 0
        jstar = nbottom - 1
        counts = np.where(has_bottom, na + nb - 1 - jstar, e[:, 0] + nb)
        total += int(counts.sum())
        if witness is None:
            probe = np.minimum(e, na - 1)
            eq = (e < na) & (a[probe] == targets)
            eq &= np.arange(nb)[None, :] > np.where(has_bottom, jstar, -1)[:, None]
            hit_rows = np.nonzero(eq.any(axis=1))[0]
            if hit_rows.size:
                li = int(hit_rows[0])
                j = int(np.max(np.nonzero(eq[li])[0]))  # scan meets the largest column first
                i = int(e[li, j])
                witness = Witness((i, j, l0 + li), (int(a[i]), int(b[j]), int(c[l0 + li])))
    ledger.add_bulk(PHASE_SCAN, total, 3)
    return witness
