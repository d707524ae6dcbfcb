"""Vector matroids from matrices over GF(p): rank oracle, circuits, coloops.

Ground sets here stay tiny (2n+3 elements), so circuits come from
size-ordered subset enumeration with superset pruning rather than any
matroid-theoretic machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ffla import FpMatrix, PrimeModulus, rank_of_rows

DEFAULT_GROUND_CAP = 20


def ln_matrix(n: int, p: int) -> FpMatrix:
    """The (n+1) x (2n+3) guide matrix over GF(p).

    Columns: A_i = e_i for i in [n+1], B_k = all-ones - e_k, C = all-ones.
    The B-column block has rank n exactly when p divides n.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    d = n + 1
    cols = []
    for i in range(d):
        cols.append([1 if r == i else 0 for r in range(d)])
    for k in range(d):
        cols.append([(1 - (1 if r == k else 0)) % p for r in range(d)])
    cols.append([1] * d)
    rows = [[cols[j][r] for j in range(2 * d + 1)] for r in range(d)]
    return FpMatrix.from_rows(rows, p, cols=2 * d + 1)


def ln_labels(n: int) -> tuple:
    return tuple([f"A{i}" for i in range(1, n + 2)]
                 + [f"B{i}" for i in range(1, n + 2)] + ["C"])


@dataclass(frozen=True)
class VectorMatroid:
    """Matroid of the columns of a matrix over GF(p), one label per column."""

    labels: tuple
    matrix: FpMatrix

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.matrix.cols:
            raise ValueError("one label per column required")
        object.__setattr__(self, "_index",
                           {lab: j for j, lab in enumerate(self.labels)})

    @property
    def modulus(self) -> PrimeModulus:
        return self.matrix.modulus

    def _columns(self, subset):
        idx = getattr(self, "_index")
        try:
            return [idx[lab] for lab in subset]
        except KeyError as exc:
            raise KeyError(f"unknown label {exc.args[0]!r}") from None

    def rank(self, subset) -> int:
        cols = self._columns(subset)
        rows = [self.matrix.column(j) for j in cols]
        return rank_of_rows(rows, self.matrix.p)

    def is_independent(self, subset) -> bool:
        subset = list(subset)
        return self.rank(subset) == len(subset)

    def full_rank(self) -> int:
        return self.rank(self.labels)


def ln_matroid(n: int, p: int) -> VectorMatroid:
    return VectorMatroid(ln_labels(n), ln_matrix(n, p))


@dataclass(frozen=True)
class CircuitSet:
    """Minimal dependent subsets; no member contains another."""

    circuits: frozenset  # of frozensets of labels

    def __post_init__(self):
        object.__setattr__(self, "circuits", frozenset(self.circuits))
        for a in self.circuits:
            for b in self.circuits:
                if a < b:
                    raise ValueError("circuit set is not an antichain")

    def __contains__(self, subset):
        return frozenset(subset) in self.circuits

    def __iter__(self):
        return iter(self.circuits)

    def __len__(self):
        return len(self.circuits)


def circuits(m: VectorMatroid, cap: int = DEFAULT_GROUND_CAP) -> CircuitSet:
    """All minimal dependent subsets, by increasing size with pruning."""
    if len(m.labels) > cap:
        raise ValueError(f"ground set of {len(m.labels)} exceeds cap {cap}")
    found = []
    for size in range(1, len(m.labels) + 1):
        for combo in itertools.combinations(m.labels, size):
            s = frozenset(combo)
            if any(c <= s for c in found):
                continue
            if m.rank(combo) < size:
                found.append(s)
    return CircuitSet(frozenset(found))


def coloops(m: VectorMatroid, cap: int = DEFAULT_GROUND_CAP) -> frozenset:
    """Elements lying in no circuit."""
    cs = circuits(m, cap=cap)
    covered = set()
    for c in cs:
        covered |= c
    return frozenset(set(m.labels) - covered)


def delete(m: VectorMatroid, j) -> VectorMatroid:
    """Restriction to the labels outside j."""
    j = set(j)
    unknown = j - set(m.labels)
    if unknown:
        raise KeyError(f"unknown labels: {sorted(map(str, unknown))}")
    keep = [lab for lab in m.labels if lab not in j]
    idx = [m.labels.index(lab) for lab in keep]
    return VectorMatroid(tuple(keep), m.matrix.select_columns(idx))


def class_a(n: int) -> CircuitSet:
    """The circuit subsets present when the characteristic divides n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a = [f"A{i}" for i in range(1, n + 2)]
    b = [f"B{i}" for i in range(1, n + 2)]
    members = {frozenset(a + ["C"]), frozenset(b)}
    for i in range(n + 1):
        members.add(frozenset(a[:i] + a[i + 1:] + [b[i]]))
        members.add(frozenset([a[i], b[i], "C"]))
    return CircuitSet(frozenset(members))


def class_b(n: int) -> CircuitSet:
    """The circuit subsets present when the characteristic does not divide n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a = [f"A{i}" for i in range(1, n + 2)]
    b = [f"B{i}" for i in range(1, n + 2)]
    members = {frozenset(a + ["C"]), frozenset(b + ["C"])}
    for i in range(n + 1):
        members.add(frozenset(a[:i] + a[i + 1:] + [b[i]]))
        members.add(frozenset([a[i], b[i], "C"]))
    return CircuitSet(frozenset(members))


def verify_classes(n: int, primes, cap: int = DEFAULT_GROUND_CAP) -> dict:
    """Per-prime check that the matching class is a subset of the circuits."""
    out = {"n": n, "primes": {}}
    ca, cb = class_a(n), class_b(n)
    for p in primes:
        m = ln_matroid(n, p)
        cs = circuits(m, cap=cap)
        divides = n % p == 0
        wanted = ca if divides else cb
        ok = all(c in cs for c in wanted)
        out["primes"][p] = {
            "divides_n": divides,
            "class": "A" if divides else "B",
            "class_subset_of_circuits": ok,
            "rank": m.full_rank(),
            "circuit_count": len(cs),
        }
    return out


def circuits_report(n: int, p: int, cap: int = DEFAULT_GROUND_CAP) -> dict:
    """JSON-ready circuits report for one (n, p)."""
    m = ln_matroid(n, p)
    cs = circuits(m, cap=cap)
    ca, cb = class_a(n), class_b(n)
    return {
        "n": n,
        "p": p,
        "rank": m.full_rank(),
        "circuits": sorted(sorted(c) for c in cs),
        "class_A_ok": all(c in cs for c in ca),
        "class_B_ok": all(c in cs for c in cb),
    }
