import numpy as np
import pytest

from sumlab.baseline import Contour, contour, solve_quadratic
from sumlab.core import SumSet, ThreeSumInstance, generate, three_sum_oracle
from sumlab.ledger import ComparisonLedger


def test_contour_trace_example():
    led = ComparisonLedger()
    A = SumSet("A", [1, 2])
    B = SumSet("B", [10, 20])
    tr = contour(15, A, B, led)
    assert tr.positions == ((0, 1), (0, 0), (1, 0))
    assert led.total == 3
    assert led.max_arity == 2  # plain-constant query: a + b - x


def test_contour_below_all_sums():
    A = SumSet("A", [5, 6, 7])
    B = SumSet("B", [10, 20, 30, 40])
    tr = contour(0, A, B, ComparisonLedger())
    assert tr.positions == tuple((0, hi) for hi in range(3, -1, -1))


def test_contour_above_all_sums():
    A = SumSet("A", [5, 6, 7])
    B = SumSet("B", [10, 20])
    tr = contour(1000, A, B, ComparisonLedger())
    assert tr.positions == tuple((lo, 1) for lo in range(3))


def test_contour_length_bound():
    rng = np.random.default_rng(0)
    for trial in range(50):
        na, nb = int(rng.integers(1, 20)), int(rng.integers(1, 20))
        A = SumSet("A", np.sort(rng.integers(-30, 30, na)))
        B = SumSet("B", np.sort(rng.integers(-30, 30, nb)))
        x = int(rng.integers(-70, 70))
        tr = contour(x, A, B, ComparisonLedger())
        assert 0 < len(tr.positions) <= na + nb
        assert tr.positions[0] == (0, nb - 1)


def test_contours_never_cross():
    rng = np.random.default_rng(1)
    for trial in range(300):
        na, nb = int(rng.integers(2, 16)), int(rng.integers(2, 16))
        A = SumSet("A", np.sort(rng.integers(-25, 25, na)))
        B = SumSet("B", np.sort(rng.integers(-25, 25, nb)))
        x = int(rng.integers(-60, 60))
        y = int(rng.integers(-60, 60))
        if x == y:
            continue
        if x > y:
            x, y = y, x
        cx = contour(x, A, B, ComparisonLedger())
        cy = contour(y, A, B, ComparisonLedger())
        for j in range(nb):
            ex = cx.exit_row(j, na)
            ey = cy.exit_row(j, na)
            if ex is not None and ey is not None:
                assert ex <= ey


def test_quadratic_witness_example():
    inst = ThreeSumInstance.from_values([1, 2], [10, 20], [-21])
    w = solve_quadratic(inst, ComparisonLedger(), engine="py")
    assert w is not None and w.values == (1, 20, -21)


def test_quadratic_parity_none():
    inst = generate("no-solution-parity", 16, 3)
    assert solve_quadratic(inst, ComparisonLedger(), engine="py") is None


@pytest.mark.parametrize("engine", ["py", "np"])
def test_quadratic_matches_oracle(engine):
    rng = np.random.default_rng(11)
    for trial in range(80):
        kind = ["uniform", "planted", "no-solution-parity", "clustered"][trial % 4]
        n = int(rng.integers(1, 40))
        inst = generate(kind, n, 5000 + trial)
        w = solve_quadratic(inst, ComparisonLedger(), engine=engine)
        expect = three_sum_oracle(inst)
        assert (w is None) == (expect is None)
        if w is not None:
            assert w.check_three_sum(inst)


def test_quadratic_engines_agree_exactly():
    rng = np.random.default_rng(23)
    for trial in range(60):
        kind = ["uniform", "planted", "no-solution-parity", "clustered"][trial % 4]
        na, nb, nc = (int(rng.integers(1, 25)) for _ in range(3))
        inst = generate(kind, max(na, nb, nc), 9000 + trial, sizes=(na, nb, nc))
        led_py, led_np = ComparisonLedger(), ComparisonLedger()
        w_py = solve_quadratic(inst, led_py, engine="py")
        w_np = solve_quadratic(inst, led_np, engine="np")
        assert led_py.snapshot() == led_np.snapshot()
        assert (w_py is None) == (w_np is None)
        if w_py is not None:
            assert w_py == w_np


def test_quadratic_inner_loop_bound():
    inst = generate("uniform", 32, 0)
    led = ComparisonLedger()
    solve_quadratic(inst, led, engine="py")
    assert led.per_phase[PHASE := "scan"] <= len(inst.C) * (len(inst.A) + len(inst.B))


def test_quadratic_uniform_example():
    inst = generate("uniform", 64, 3)
    w = solve_quadratic(inst, ComparisonLedger())
    assert (w is None) == (three_sum_oracle(inst) is None)
