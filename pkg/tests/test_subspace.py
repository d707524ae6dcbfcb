import random

import pytest
from hypothesis import given, settings, strategies as st

from charrank.ffla import PrimeModulus
from charrank.subspace import (DirectSumDecomposition, Subspace,
                               SubspaceFamily, build_construction, codim,
                               complement_in, complement_within, full_space,
                               intersect, project, random_decomposition,
                               random_general_position_line, random_subspace,
                               span, sum_all, sum_spaces, zero_subspace)


def test_span_canonical():
    a = span([[1, 1, 0], [0, 1, 1]], 3, 2)
    b = span([[1, 0, 1], [0, 1, 1]], 3, 2)
    assert a == b
    assert a.dim == 2


def test_intersect_and_sum_dims():
    rng = random.Random(11)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        d = rng.randrange(1, 6)
        a = random_subspace(d, p, rng)
        b = random_subspace(d, p, rng)
        s = sum_spaces(a, b)
        i = intersect(a, b)
        assert s.dim + i.dim == a.dim + b.dim
        assert a.contains_subspace(i) and b.contains_subspace(i)
        assert s.contains_subspace(a) and s.contains_subspace(b)


def test_entropy_measures():
    fam = SubspaceFamily(("a", "b", "c"),
                         {"a": span([[1, 0, 0]], 3, 2),
                          "b": span([[0, 1, 0]], 3, 2),
                          "c": span([[1, 1, 0]], 3, 2)})
    assert fam.entropy(["a", "b"]) == 2
    assert fam.entropy(["a", "b", "c"]) == 2
    assert fam.mutual_info(["a", "b"], ["c"]) == 1
    assert fam.conditional_entropy(["c"], ["a", "b"]) == 0
    assert fam.cond_mutual_info(["a"], ["b"], ["c"]) == 1


def test_complement_in():
    rng = random.Random(5)
    for _ in range(30):
        p = rng.choice([2, 3])
        d = rng.randrange(1, 6)
        a = random_subspace(d, p, rng)
        b = random_subspace(d, p, rng)
        if not a.contains_subspace(b):
            continue
        w = complement_in(b, a)
        assert a.contains_subspace(w)
        assert intersect(w, b).dim == 0
        assert sum_spaces(w, b) == a


def test_complement_within_condition():
    # complement of b inside a that also lives inside c exists exactly when
    # codim_{a cap c}(b cap c) == codim_a(b)
    rng = random.Random(17)
    hits = 0
    for _ in range(200):
        p = rng.choice([2, 3])
        d = rng.randrange(2, 5)
        a = random_subspace(d, p, rng)
        b = intersect(a, random_subspace(d, p, rng))
        c = random_subspace(d, p, rng)
        ac, bc = intersect(a, c), intersect(b, c)
        cond = (ac.dim - bc.dim) == (a.dim - b.dim)
        w = complement_within(b, a, c)
        assert (w is not None) == cond
        if w is not None:
            hits += 1
            assert c.contains_subspace(w)
            assert sum_spaces(w, b) == a
            assert intersect(w, b).dim == 0
    assert hits > 0


def test_decomposition_projections():
    rng = random.Random(23)
    dec = random_decomposition(3, 2, 3, rng)
    assert sum_all(dec.parts, 6, 3) == full_space(6, 3)
    v = random_general_position_line(dec, rng)
    pieces = [project(dec, [k], v) for k in range(3)]
    for k, piece in enumerate(pieces):
        assert dec.parts[k].contains_subspace(piece)
        assert piece.dim == 1  # general position: every component nonzero
    assert sum_all(pieces, 6, 3).contains_subspace(v)


def test_build_construction_overlapping_parts():
    rng = random.Random(31)
    checked = 0
    for _ in range(60):
        p = rng.choice([2, 3])
        d = rng.randrange(3, 7)
        parts = [random_subspace(d, p, rng) for _ in range(3)]
        if any(s.dim == 0 for s in parts):
            continue
        c = random_subspace(d, p, rng)
        a_primes, c_bar, report = build_construction(parts, c)
        checked += 1
        total = sum_all(parts, d, p)
        assert sum_all(a_primes, d, p) == total
        # mutual complementarity of the primes
        for k in range(3):
            others = sum_all([a_primes[i] for i in range(3) if i != k], d, p)
            assert intersect(a_primes[k], others).dim == 0
        # c_bar is inside c and meets any 2 of the primes trivially
        assert c.contains_subspace(c_bar)
        for k in range(3):
            others = sum_all([a_primes[i] for i in range(3) if i != k], d, p)
            assert intersect(c_bar, others).dim == 0
        assert report["bound_holds"]
    assert checked > 20


def test_codim():
    a = full_space(4, 2)
    b = span([[1, 0, 0, 0], [0, 1, 0, 0]], 4, 2)
    assert codim(b, a) == 2
    assert codim(zero_subspace(4, 2), b) == 2
