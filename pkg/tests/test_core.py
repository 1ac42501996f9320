import itertools

import numpy as np
import pytest

from sumlab import core
from sumlab.core import (
    KLdtInstance,
    ThreeSumInstance,
    Witness,
    generate,
    generate_k_ldt,
    k_ldt_oracle,
    three_sum_oracle,
    two_pointer_oracle,
)


def slow_three_sum(inst):
    """Ultra-naive cross-check, independent of everything in the package."""
    a, b, c = inst.A.values, inst.B.values, inst.C.values
    for i, j, l in itertools.product(range(len(a)), range(len(b)), range(len(c))):
        if int(a[i]) + int(b[j]) + int(c[l]) == 0:
            return (i, j, l)
    return None


def slow_k_ldt(inst):
    n = len(inst.A)
    for idx in itertools.product(range(n), repeat=inst.k):
        if inst.phi([inst.A[i] for i in idx]) == 0:
            return idx
    return None


def test_oracle_trivial_witness():
    inst = ThreeSumInstance.from_values([1], [2], [-3])
    w = three_sum_oracle(inst)
    assert w == Witness((0, 0, 0), (1, 2, -3))
    assert w.check_three_sum(inst)


def test_oracle_trivial_none():
    assert three_sum_oracle(ThreeSumInstance.from_values([1], [2], [4])) is None


def test_oracle_matches_slow_scan():
    rng = np.random.default_rng(0)
    for trial in range(60):
        n = int(rng.integers(1, 9))
        inst = generate(["uniform", "planted", "clustered"][trial % 3], n, 100 + trial)
        w = three_sum_oracle(inst)
        expected = slow_three_sum(inst)
        if expected is None:
            assert w is None
        else:
            assert w.indices == expected  # lexicographic first
            assert w.check_three_sum(inst)


def test_two_pointer_oracle_crosschecks_triple_loop():
    for trial in range(120):
        kind = ["uniform", "planted", "no-solution-parity", "clustered"][trial % 4]
        n = 3 + trial % 40
        inst = generate(kind, n, 1000 + trial)
        assert (two_pointer_oracle(inst) is None) == (three_sum_oracle(inst) is None)


def test_generate_planted_always_has_witness():
    for seed in range(40):
        inst = generate("planted", 8, seed)
        assert three_sum_oracle(inst) is not None


def test_generate_parity_never_has_witness():
    for seed in range(40):
        inst = generate("no-solution-parity", 4 + seed % 13, seed)
        assert all(v % 2 != 0 for v in inst.A.values)
        assert three_sum_oracle(inst) is None


def test_generate_deterministic():
    a = generate("uniform", 64, 3)
    b = generate("uniform", 64, 3)
    assert np.array_equal(a.A.values, b.A.values)
    assert np.array_equal(a.C.values, b.C.values)


def test_generate_rejects_bad_args():
    with pytest.raises(ValueError):
        generate("weird", 4, 0)
    with pytest.raises(ValueError):
        generate("uniform", 0, 0)


def test_generate_clustered_has_ties():
    inst = generate("clustered", 64, 5)
    assert len(np.unique(inst.A.values)) < 64


def test_k_ldt_oracle_examples():
    w = k_ldt_oracle(KLdtInstance(3, (0, 1, 1, 1), [-3, 1, 2]))
    assert w is not None and sorted(w.values) == [-3, 1, 2]
    w = k_ldt_oracle(KLdtInstance(5, (0, 1, 1, 1, 1, 1), [-4, 1]))
    assert w is not None and sorted(w.values) == [-4, 1, 1, 1, 1]
    w = k_ldt_oracle(KLdtInstance(3, (0, 2, 1, -1), [1, 3, 5]))
    assert w is not None and w.check_k_ldt(KLdtInstance(3, (0, 2, 1, -1), [1, 3, 5]))


def test_k_ldt_oracle_matches_slow():
    for trial in range(50):
        k = 3 if trial % 2 else 5
        inst = generate_k_ldt(k, 2 + trial % 4, 300 + trial)
        w = k_ldt_oracle(inst)
        expected = slow_k_ldt(inst)
        if expected is None:
            assert w is None
        else:
            assert w.indices == expected
            assert w.check_k_ldt(inst)


def test_k_ldt_instance_validation():
    with pytest.raises(ValueError):
        KLdtInstance(4, (0, 1, 1, 1, 1), [1])
    with pytest.raises(ValueError):
        KLdtInstance(3, (0, 1, 0, 1), [1])


def test_scalar_bound_enforced():
    with pytest.raises(ValueError):
        ThreeSumInstance.from_values([1 << 40], [0], [0])


def test_instance_json_roundtrip(tmp_path):
    inst = generate("uniform", 16, 9)
    path = tmp_path / "inst.json"
    core.dump_instance(inst, path)
    back = core.load_instance(path)
    assert np.array_equal(back.A.values, inst.A.values)
    assert np.array_equal(back.C.values, inst.C.values)
    # integers travel as strings
    import json

    raw = json.loads(path.read_text())
    assert all(isinstance(v, str) for v in raw["A"])


def test_k_ldt_json_roundtrip(tmp_path):
    inst = generate_k_ldt(5, 6, 2)
    path = tmp_path / "kldt.json"
    core.dump_instance(inst, path)
    back = core.load_instance(path)
    assert back.k == 5 and back.alphas == inst.alphas
    assert np.array_equal(back.A, inst.A)


def test_unbalanced_generation():
    inst = generate("uniform", 8, 0, sizes=(4, 9, 2))
    assert not inst.balanced
    assert (len(inst.A), len(inst.B), len(inst.C)) == (4, 9, 2)


def test_distinct_sums_helper():
    inst = core.generate_distinct_sums("uniform", 32, 7)
    assert core.has_distinct_pairwise_sums(inst)
