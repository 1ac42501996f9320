"""Problem instances, generators, and brute-force oracles.

Everything downstream is validated against the oracles in this module, so
they are kept deliberately independent of the solver code: the three-set
oracle is an exhaustive triple scan, and the k-variate oracle enumerates
all of A^k.  Inputs are exact signed integers; all arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .ledger import SCALAR_BOUND, Operand, Quantity

GENERATOR_KINDS = ("uniform", "planted", "no-solution-parity", "clustered")

# Coefficients for k-LDT are kept small so every expanded form stays far
# inside the 128-bit intermediate bound.
ALPHA_BOUND = 1 << 20


def _as_int_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("input set must be one-dimensional")
    return arr


def _check_scalar_bound(arr: np.ndarray) -> None:
    if arr.size and int(np.abs(arr).max()) >= SCALAR_BOUND:
        raise ValueError(f"input magnitude must be < 2**40, got {int(np.abs(arr).max())}")


class SumSet:
    """One sorted input set, optionally carrying per-element provenance.

    Plain sets reference themselves: element i is the original input
    (set_id, i).  Reduced sets (weighted tuple sums built by the odd-k
    reduction) carry provenance so ledger forms expand to the original
    inputs they were derived from.
    """

    __slots__ = ("set_id", "values", "provenance", "eps_rank", "gen_order")

    def __init__(self, set_id: str, values, provenance=None, eps_rank: int | None = None, gen_order=None):
        arr = _as_int_array(values)
        if np.any(arr[1:] < arr[:-1]):
            raise ValueError(f"set {set_id} is not sorted")
        arr.flags.writeable = False
        self.set_id = set_id
        self.values = arr
        # provenance[i] = (terms, constant), terms = ((coeff, src_index, src_value), ...)
        self.provenance = provenance
        # generation-order permutation: what order the elements were produced
        # in before sorting; None means the set arrived in sorted order
        self.gen_order = gen_order
        # Tie-break priority used when this set participates in difference
        # orders; see fredman.sort_difference_set.
        self.eps_rank = eps_rank if eps_rank is not None else _DEFAULT_EPS.get(set_id, 9)

    def __len__(self) -> int:
        return len(self.values)

    def value(self, i: int) -> int:
        return int(self.values[i])

    def quantity(self, i: int) -> Quantity:
        v = int(self.values[i])
        if self.provenance is None:
            return Quantity.of(Operand(self.set_id, i, v))
        terms, constant = self.provenance[i]
        ops = tuple((c, Operand("A", si, sv)) for c, si, sv in terms)
        return Quantity(v, ops, constant)


_DEFAULT_EPS = {"B": 1, "A": 2, "C": 3}


class ThreeSumInstance:
    """Three sorted sets; the question is whether a+b+c = 0 has a solution."""

    __slots__ = ("A", "B", "C")

    def __init__(self, A: SumSet, B: SumSet, C: SumSet):
        for s in (A, B, C):
            _check_scalar_bound(s.values)
        self.A = A
        self.B = B
        self.C = C

    @classmethod
    def from_values(cls, a, b, c) -> "ThreeSumInstance":
        return cls(
            SumSet("A", np.sort(_as_int_array(a))),
            SumSet("B", np.sort(_as_int_array(b))),
            SumSet("C", np.sort(_as_int_array(c))),
        )

    @property
    def balanced(self) -> bool:
        return len(self.A) == len(self.B) == len(self.C)

    @property
    def n(self) -> int:
        return max(len(self.A), len(self.B), len(self.C))

    def sets(self) -> tuple[SumSet, SumSet, SumSet]:
        return (self.A, self.B, self.C)


class KLdtInstance:
    """Does alpha_0 + sum(alpha_i * x_i) vanish on some k-tuple from A?"""

    __slots__ = ("k", "alphas", "A")

    def __init__(self, k: int, alphas, A):
        if k < 3 or k % 2 == 0:
            raise ValueError("k must be an odd integer >= 3")
        alphas = tuple(int(a) for a in alphas)
        if len(alphas) != k + 1:
            raise ValueError(f"need {k + 1} coefficients, got {len(alphas)}")
        if any(a == 0 for a in alphas[1:]):
            raise ValueError("alpha_1..alpha_k must be nonzero")
        if any(abs(a) > ALPHA_BOUND for a in alphas):
            raise ValueError("coefficient magnitude too large")
        arr = np.sort(_as_int_array(A))
        _check_scalar_bound(arr)
        arr.flags.writeable = False
        self.k = k
        self.alphas = alphas
        self.A = arr

    def phi(self, xs) -> int:
        return self.alphas[0] + sum(a * int(x) for a, x in zip(self.alphas[1:], xs))


@dataclass(frozen=True)
class Witness:
    """Indices and summands of one solution.

    For three-set instances the indices point into (A, B, C); for k-LDT
    they form a k-tuple into A and the cited values satisfy
    alpha_0 + sum(alpha_i * value_i) = 0.
    """

    indices: tuple[int, ...]
    values: tuple[int, ...]

    def check_three_sum(self, inst: ThreeSumInstance) -> bool:
        i, j, l = self.indices
        ok = (
            inst.A.value(i) == self.values[0]
            and inst.B.value(j) == self.values[1]
            and inst.C.value(l) == self.values[2]
        )
        return ok and sum(self.values) == 0

    def check_k_ldt(self, inst: KLdtInstance) -> bool:
        if len(self.indices) != inst.k:
            return False
        if any(int(inst.A[i]) != v for i, v in zip(self.indices, self.values)):
            return False
        return inst.phi(self.values) == 0


# ---------------------------------------------------------------------------
# generators


def _range_for(n: int) -> int:
    return int(min(2**39 - 4, max(32, 2 * n**3)))


def generate(kind: str, n: int, seed: int, sizes: tuple[int, int, int] | None = None) -> ThreeSumInstance:
    """Deterministic instance generator.

    planted guarantees at least one witness; no-solution-parity emits only
    odd values (three odd numbers cannot sum to zero), so no algorithm may
    ever report a witness on those.
    """
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {GENERATOR_KINDS}")
    if n < 1:
        raise ValueError("n must be >= 1")
    na, nb, nc = sizes if sizes is not None else (n, n, n)
    if min(na, nb, nc) < 1:
        raise ValueError("all set sizes must be >= 1")
    rng = np.random.default_rng(seed)
    r = _range_for(n)

    if kind == "uniform" or kind == "planted":
        a = rng.integers(-r, r + 1, na)
        b = rng.integers(-r, r + 1, nb)
        c = rng.integers(-r, r + 1, nc)
        if kind == "planted":
            ia = int(rng.integers(na))
            jb = int(rng.integers(nb))
            c[int(rng.integers(nc))] = -(int(a[ia]) + int(b[jb]))
    elif kind == "no-solution-parity":
        half = r // 2
        a = 2 * rng.integers(-half, half, na) + 1
        b = 2 * rng.integers(-half, half, nb) + 1
        c = 2 * rng.integers(-half, half, nc) + 1
    else:  # clustered: heavy ties and near-ties
        ncenters = max(1, n // 8)
        centers = rng.integers(-r, r + 1, ncenters)
        a = centers[rng.integers(ncenters, size=na)] + rng.integers(-2, 3, na)
        b = centers[rng.integers(ncenters, size=nb)] + rng.integers(-2, 3, nb)
        c = centers[rng.integers(ncenters, size=nc)] + rng.integers(-2, 3, nc)

    return ThreeSumInstance.from_values(a, b, c)


def generate_k_ldt(k: int, n: int, seed: int, alpha_range: int = 4) -> KLdtInstance:
    """Random coefficients (nonzero, small) and a random input set."""
    rng = np.random.default_rng(seed)
    alphas = [int(rng.integers(-alpha_range, alpha_range + 1))]
    for _ in range(k):
        a = 0
        while a == 0:
            a = int(rng.integers(-alpha_range, alpha_range + 1))
        alphas.append(a)
    r = _range_for(n)
    return KLdtInstance(k, alphas, rng.integers(-r, r + 1, n))


def has_distinct_pairwise_sums(inst: ThreeSumInstance) -> bool:
    sums = inst.A.values[:, None] + inst.B.values[None, :]
    return np.unique(sums).size == sums.size


def generate_distinct_sums(kind: str, n: int, seed: int, max_tries: int = 64) -> ThreeSumInstance:
    """Retry `generate` (bumping the seed deterministically) until A+B has no ties."""
    for t in range(max_tries):
        inst = generate(kind, n, seed + 1_000_003 * t)
        if has_distinct_pairwise_sums(inst):
            return inst
    raise RuntimeError(f"no distinct-sum instance found for n={n} after {max_tries} tries")


# ---------------------------------------------------------------------------
# oracles


def three_sum_oracle(inst: ThreeSumInstance) -> Witness | None:
    """Exhaustive triple scan; first witness in lexicographic index order."""
    a, b, c = inst.A.values, inst.B.values, inst.C.values
    bc = b[:, None] + c[None, :]
    for i in range(len(a)):
        hits = np.argwhere(bc == -int(a[i]))
        if hits.size:
            j, l = int(hits[0][0]), int(hits[0][1])
            return Witness((i, j, l), (int(a[i]), int(b[j]), int(c[l])))
    return None


def two_pointer_oracle(inst: ThreeSumInstance) -> Witness | None:
    """Independent O(n^2 log n) check: for each c, look up -c - a in sorted B."""
    a, b, c = inst.A.values, inst.B.values, inst.C.values
    for l in range(len(c)):
        targets = -int(c[l]) - a
        pos = np.searchsorted(b, targets)
        ok = (pos < len(b)) & (b[np.minimum(pos, len(b) - 1)] == targets)
        if ok.any():
            i = int(np.argmax(ok))
            j = int(pos[i])
            return Witness((i, j, l), (int(a[i]), int(b[j]), int(c[l])))
    return None


def k_ldt_oracle(inst: KLdtInstance, work_limit: int = 1 << 29) -> Witness | None:
    """Exhaustive scan over A^k (tuples with repetition), lexicographic order."""
    n = len(inst.A)
    if n**inst.k > work_limit:
        raise ValueError(f"oracle scan of size {n}**{inst.k} exceeds work limit")
    a = inst.A
    alphas = inst.alphas
    # Tensor over the trailing k-1 coordinates, scanned per first coordinate.
    tail = np.zeros((1,), dtype=np.int64) + alphas[0]
    for t in range(2, inst.k + 1):
        tail = (tail[..., None] + alphas[t] * a).reshape(-1)
    tail = tail.reshape((n,) * (inst.k - 1)) if inst.k > 1 else tail
    for i1 in range(n):
        grid = alphas[1] * int(a[i1]) + tail
        hits = np.argwhere(grid == 0)
        if hits.size:
            idx = (i1,) + tuple(int(x) for x in hits[0])
            return Witness(idx, tuple(int(a[i]) for i in idx))
    return None


# ---------------------------------------------------------------------------
# instance files: integers travel as decimal strings so consumers that parse
# JSON numbers as doubles cannot silently lose precision.


def instance_to_obj(inst) -> dict:
    if isinstance(inst, ThreeSumInstance):
        return {
            "A": [str(int(v)) for v in inst.A.values],
            "B": [str(int(v)) for v in inst.B.values],
            "C": [str(int(v)) for v in inst.C.values],
        }
    if isinstance(inst, KLdtInstance):
        return {
            "k": inst.k,
            "alphas": [str(a) for a in inst.alphas],
            "A": [str(int(v)) for v in inst.A],
        }
    raise TypeError(f"cannot serialize {type(inst)!r}")


def instance_from_obj(obj: dict):
    if "k" in obj:
        return KLdtInstance(int(obj["k"]), [int(a) for a in obj["alphas"]], [int(v) for v in obj["A"]])
    return ThreeSumInstance.from_values(
        [int(v) for v in obj["A"]], [int(v) for v in obj["B"]], [int(v) for v in obj["C"]]
    )


def dump_instance(inst, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_obj(inst), fh)


def load_instance(path):
    with open(path) as fh:
        return instance_from_obj(json.load(fh))
