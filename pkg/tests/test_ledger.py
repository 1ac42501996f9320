import pytest

from sumlab.ledger import (
    ComparisonLedger,
    LedgerOverflowError,
    LinearForm,
    Operand,
    Quantity,
    compare_quantities,
)


def op(set_id, i, v):
    return Operand(set_id, i, v)


def test_compare_three_term_zero():
    led = ComparisonLedger()
    form = LinearForm(((1, op("A", 0, 2)), (1, op("B", 0, 3)), (1, op("C", 0, -5))))
    assert led.compare(form, "scan") == 0
    assert led.total == 1
    assert led.max_arity == 3


def test_compare_four_term_sign():
    led = ComparisonLedger()
    # (a - a') - (b' - b) with a=1, a'=3, b=10, b'=14 -> 1-3-14+10 = -6
    form = LinearForm(
        (
            (1, op("A", 0, 1)),
            (-1, op("A", 1, 3)),
            (-1, op("B", 1, 14)),
            (1, op("B", 0, 10)),
        )
    )
    assert led.compare(form, "sort-D") == -1
    assert led.max_arity == 4


def test_max_arity_tracks_maximum():
    led = ComparisonLedger()
    led.compare(LinearForm(((1, op("A", 0, 1)), (1, op("A", 1, 2)))), "p")
    led.compare(
        LinearForm(
            (
                (1, op("A", 0, 1)),
                (1, op("A", 1, 2)),
                (1, op("B", 0, 3)),
                (1, op("B", 1, 4)),
            )
        ),
        "p",
    )
    led.compare(LinearForm(((1, op("A", 0, 1)), (1, op("A", 1, 2)), (1, op("B", 0, 3)))), "p")
    assert led.max_arity == 4


def test_canonicalization_merges_duplicate_operands():
    a0 = op("A", 0, 7)
    form = LinearForm(((1, a0), (-1, a0), (1, op("B", 0, 1))))
    assert form.arity == 1
    form2 = LinearForm(((1, a0), (1, a0)))
    assert form2.arity == 1  # coefficients add to 2, one term


def test_constant_not_counted_in_arity():
    form = LinearForm(((2, op("A", 0, 5)),), constant=-10)
    assert form.arity == 1
    assert form.evaluate() == 0


def test_zero_arity_rejected():
    led = ComparisonLedger()
    a0 = op("A", 0, 7)
    with pytest.raises(ValueError):
        led.compare(LinearForm(((1, a0), (-1, a0))), "p")


def test_snapshot_counts_phases():
    led = ComparisonLedger()
    f = LinearForm(((1, op("A", 0, 1)),))
    led.compare(f, "x")
    led.compare(f, "x")
    led.compare(f, "y")
    snap = led.snapshot()
    assert snap["total"] == 3
    assert snap["per_phase"] == {"x": 2, "y": 1}
    assert snap["total"] == sum(snap["per_phase"].values())


def test_fresh_ledger_snapshot():
    snap = ComparisonLedger().snapshot()
    assert snap["total"] == 0 and snap["max_arity"] == 0


def test_bulk_updates():
    led = ComparisonLedger()
    led.add_bulk("sort-D", 10, 4)
    led.add_bulk("sort-D", 0, 9)  # zero count must not touch arity
    assert led.total == 10
    assert led.max_arity == 4


def test_overflow_detection():
    form = LinearForm(((1 << 90, op("A", 0, 1 << 39)),))
    with pytest.raises(LedgerOverflowError):
        form.evaluate()


def test_quantity_algebra():
    a = Quantity.of(op("A", 3, 10))
    b = Quantity.of(op("B", 1, -4), coeff=2)
    s = a + b
    assert s.value == 2
    neg = -s
    assert neg.value == -2
    led = ComparisonLedger()
    assert compare_quantities(led, a, b, "t") == 1  # 10 - (-8) > 0
    assert led.total == 1


def test_trace_recording():
    led = ComparisonLedger(trace_enabled=True)
    led.compare(LinearForm(((1, op("A", 0, 5)),)), "t")
    assert len(led.trace) == 1
    phase, form, sign = led.trace[0]
    assert phase == "t" and sign == 1
