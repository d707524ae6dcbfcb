import pytest

from charrank.ffla import FpMatrix, PrimeModulus
from charrank.matroid import (CircuitSet, VectorMatroid, circuits, class_a,
                              class_b, circuits_report, coloops, delete,
                              ln_labels, ln_matrix, ln_matroid,
                              verify_classes)


def test_ln_matrix_shape_and_labels():
    m = ln_matrix(2, 2)
    assert (m.rows, m.cols) == (3, 7)
    assert ln_labels(2) == ("A1", "A2", "A3", "B1", "B2", "B3", "C")


def test_ln_matrix_columns():
    m = ln_matrix(2, 3)
    cols = list(zip(*m.entries))
    assert cols[0] == (1, 0, 0)          # A1 = e1
    assert cols[3] == (0, 1, 1)          # B1 = all-ones minus e1
    assert cols[6] == (1, 1, 1)          # C


def test_rank_oracle():
    m = ln_matroid(2, 2)
    assert m.full_rank() == 3
    assert m.rank(["A1", "A2"]) == 2
    assert m.is_independent(["A1", "A2", "A3"])
    assert not m.is_independent(["A1", "A2", "A3", "C"])
    # B1+B2+B3 = (n+1-1) * ones = ones over GF(2) when n = 2
    assert m.rank(["B1", "B2", "B3"]) == 2


def test_circuit_axioms_small():
    for p in (2, 3):
        m = ln_matroid(2, p)
        cs = circuits(m)
        for c in cs:
            assert not m.is_independent(c)
            for x in c:
                assert m.is_independent(c - {x})
        # antichain
        for c1 in cs:
            for c2 in cs:
                if c1 != c2:
                    assert not c1 < c2


def test_class_membership_dichotomy():
    for n, p in ((2, 2), (3, 3), (4, 2), (6, 2), (6, 3)):
        rep = circuits_report(n, p)
        assert rep["class_A_ok"], (n, p)
    for n, p in ((2, 3), (3, 2), (4, 3), (6, 5)):
        rep = circuits_report(n, p)
        assert rep["class_B_ok"], (n, p)


def test_class_sizes():
    assert len(class_a(2)) == 8  # 2(n+1) + 2
    assert len(class_b(2)) == 8
    assert len(class_a(3)) == 10


def test_coloops_and_delete():
    # free matroid: every element is a coloop
    free = VectorMatroid(("x", "y"), FpMatrix.identity(2, PrimeModulus(2)))
    assert coloops(free) == {"x", "y"}
    # the guide matroid has none
    m = ln_matroid(2, 2)
    assert coloops(m) == set()
    assert delete(m, []) == m
    sub = delete(m, ["C"])
    assert "C" not in sub.labels
    assert sub.full_rank() == 3


def test_class_shapes():
    ca = class_a(2)
    cb = class_b(2)
    assert frozenset({"A1", "A2", "A3", "C"}) in ca
    assert frozenset({"B1", "B2", "B3"}) in ca
    assert frozenset({"B1", "B2", "B3", "C"}) in cb
    assert frozenset({"B1", "B2", "B3"}) not in cb
    # shared members
    assert frozenset({"A1", "B1", "C"}) in ca
    assert frozenset({"A1", "B1", "C"}) in cb


def test_verify_classes():
    out = verify_classes(2, (2, 3))["primes"]
    assert out[2]["divides_n"] and not out[3]["divides_n"]
    assert out[2]["class"] == "A" and out[3]["class"] == "B"
    assert out[2]["class_subset_of_circuits"]
    assert out[3]["class_subset_of_circuits"]


def test_circuit_set_rejects_non_antichain():
    with pytest.raises(ValueError):
        CircuitSet(frozenset({frozenset({"a"}), frozenset({"a", "b"})}))
