"""Sign-test ledger: the cost model every solver in this package is measured by.

A branching step costs one comparison, and a comparison is a sign test of an
affine form over *original* input values.  The ledger records how many such
tests a run executed, split by phase label, together with the largest arity
(number of distinct variable terms) any executed form had.  Reusing an order
that was already paid for (difference-set ranks, box permutations, bridge
links) is free: only `compare` calls and the bulk counts reported by the
vectorized kernels are recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Inputs are bounded so that any form with a handful of small-coefficient
# terms fits comfortably in a 128-bit intermediate.
SCALAR_BOUND = 1 << 40
FORM_VALUE_BOUND = 1 << 127


class LedgerOverflowError(ArithmeticError):
    """A form evaluated outside the 128-bit intermediate range."""


@dataclass(frozen=True)
class Operand:
    """One original input value: which set, which index, and its exact value."""

    set_id: str
    index: int
    value: int


@dataclass(frozen=True)
class LinearForm:
    """Affine form sum(coeff * operand) + constant, evaluated exactly."""

    terms: tuple[tuple[int, Operand], ...]
    constant: int = 0

    def canonical_terms(self) -> tuple[tuple[int, Operand], ...]:
        """Combine terms that reference the same input; drop zero coefficients."""
        merged: dict[tuple[str, int], tuple[int, Operand]] = {}
        for coeff, op in self.terms:
            key = (op.set_id, op.index)
            if key in merged:
                merged[key] = (merged[key][0] + coeff, op)
            else:
                merged[key] = (coeff, op)
        return tuple((c, op) for c, op in merged.values() if c != 0)

    @property
    def arity(self) -> int:
        return len(self.canonical_terms())

    def evaluate(self) -> int:
        total = self.constant
        for coeff, op in self.terms:
            total += coeff * op.value
        if not -FORM_VALUE_BOUND < total < FORM_VALUE_BOUND:
            raise LedgerOverflowError(f"form value {total} exceeds 128-bit range")
        return total


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


class ComparisonLedger:
    """Counts executed sign tests, per phase, plus the maximum form arity."""

    def __init__(self, trace_enabled: bool = False):
        self.total = 0
        self.per_phase: dict[str, int] = {}
        self.max_arity = 0
        self.trace_enabled = trace_enabled
        self.trace: list[tuple[str, LinearForm, int]] = []

    def compare(self, form: LinearForm, phase: str) -> int:
        """Execute one sign test; returns -1, 0, or +1."""
        arity = form.arity
        if arity < 1:
            raise ValueError("sign test needs at least one variable term")
        value = form.evaluate()
        self.total += 1
        self.per_phase[phase] = self.per_phase.get(phase, 0) + 1
        if arity > self.max_arity:
            self.max_arity = arity
        sign = _sign(value)
        if self.trace_enabled:
            self.trace.append((phase, form, sign))
        return sign

    def add_bulk(self, phase: str, count: int, max_arity: int) -> None:
        """Record `count` comparisons executed by an instrumented kernel.

        The kernel is responsible for `count` and `max_arity` being exactly
        what the per-comparison path would have recorded; the equivalence is
        covered by tests that run both routes on the same input.
        """
        if count < 0:
            raise ValueError("negative comparison count")
        if count == 0:
            return
        self.total += count
        self.per_phase[phase] = self.per_phase.get(phase, 0) + count
        if max_arity > self.max_arity:
            self.max_arity = max_arity

    def phase_total(self, phase: str) -> int:
        return self.per_phase.get(phase, 0)

    def snapshot(self) -> dict:
        return {
            "total": self.total,
            "per_phase": dict(self.per_phase),
            "max_arity": self.max_arity,
        }


@dataclass(frozen=True)
class Quantity:
    """An exact value together with its affine provenance over original inputs.

    Solvers manipulate derived values (negations, pairwise sums, weighted
    tuple sums); carrying provenance means the form handed to the ledger is
    always expanded down to original-input terms.
    """

    value: int
    terms: tuple[tuple[int, Operand], ...] = ()
    constant: int = 0

    @staticmethod
    def of(op: Operand, coeff: int = 1, constant: int = 0) -> "Quantity":
        return Quantity(coeff * op.value + constant, ((coeff, op),), constant)

    @staticmethod
    def const(value: int) -> "Quantity":
        return Quantity(value, (), value)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, tuple((-c, op) for c, op in self.terms), -self.constant)

    def __add__(self, other: "Quantity") -> "Quantity":
        return Quantity(
            self.value + other.value,
            self.terms + other.terms,
            self.constant + other.constant,
        )

    def __sub__(self, other: "Quantity") -> "Quantity":
        return self + (-other)


def compare_quantities(ledger: ComparisonLedger, lhs: Quantity, rhs: Quantity, phase: str) -> int:
    """Sign test of lhs - rhs, charged to `phase`."""
    diff = lhs - rhs
    return ledger.compare(LinearForm(diff.terms, diff.constant), phase)
