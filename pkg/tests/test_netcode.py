from fractions import Fraction

import pytest

from charrank import matroid, netcode
from charrank.netcode import (IndexCodingNetwork, LinearIndexCode,
                              capacity_report, compose_lex, extend_with_message,
                              fit_decoders, lex_power, lex_product,
                              network_from_circuits, power_code, repeat_code,
                              simulate, solution_from_representation)


def network(family, n, p):
    cls = matroid.class_a(n) if family == "A" else matroid.class_b(n)
    return network_from_circuits(matroid.ln_labels(n), cls)


def test_network_shape():
    na = network("A", 2, 2)
    assert len(na.sources) == 7
    assert len(na.demands) == 25  # 4+4+4 from the 4-circuits, 3x3 from B_[3]
    nb = network("B", 2, 3)
    assert len(nb.demands) == 26


def test_closure_and_r_cl():
    na = network("A", 2, 2)
    cl = na.closure(frozenset({"A1", "B1"}))
    assert "C" in cl  # demand (C | A1, B1) from circuit {A1,B1,C}
    assert na.r_cl() == 3
    assert na.iterated_closure(frozenset({"A1", "B1", "A2", "B2"})) \
        == frozenset(na.sources)


def test_network_json_roundtrip():
    na = network("A", 2, 2)
    n2 = IndexCodingNetwork.from_json(na.to_json())
    assert n2 == na
    prod = lex_product(na, na)
    assert IndexCodingNetwork.from_json(prod.to_json()) == prod


def test_lex_product_shape():
    na = network("A", 2, 2)
    prod = lex_product(na, na)
    assert len(prod.sources) == 49
    assert len(prod.demands) == 25 * 25
    assert lex_power(na, 2) == prod


def test_code_solves_network_exhaustively():
    na = network("A", 2, 2)
    code = solution_from_representation(matroid.ln_matroid(2, 2), na)
    assert code.k == 1 and code.n_broadcast == 4
    v = simulate(code, na)
    assert v.passed and v.mode == "exhaustive" and v.tuples_checked == 128

    nb = network("B", 2, 3)
    code = solution_from_representation(matroid.ln_matroid(2, 3), nb)
    v = simulate(code, nb)
    assert v.passed and v.mode == "exhaustive" and v.tuples_checked == 2187


def test_wrong_characteristic_code_fails():
    # the parity code of L_2 over GF(3) cannot solve N_{A_2}
    na = network("A", 2, 2)
    ker = netcode.kernel(matroid.ln_matrix(2, 3))
    base = LinearIndexCode(ker.modulus, tuple(na.sources), 1, ker)
    with pytest.raises(ValueError):
        fit_decoders(base, na)


def test_extend_with_message_gives_1_5_code():
    na = network("A", 2, 2)
    ker = netcode.kernel(matroid.ln_matrix(2, 3))
    base = LinearIndexCode(ker.modulus, tuple(na.sources), 1, ker)
    ext = fit_decoders(extend_with_message(base, "C"), na)
    assert ext.n_broadcast == 5
    v = simulate(ext, na)
    assert v.passed and v.mode == "exhaustive"


def test_code_json_roundtrip():
    na = network("A", 2, 2)
    code = solution_from_representation(matroid.ln_matroid(2, 2), na)
    c2 = LinearIndexCode.from_json(code.to_json())
    assert c2.encoder == code.encoder
    assert c2.decoders.keys() == code.decoders.keys()
    assert simulate(c2, na).passed


def test_repeat_code():
    na = network("A", 2, 2)
    code = solution_from_representation(matroid.ln_matroid(2, 2), na)
    rep = repeat_code(code, 3)
    assert rep.k == 3 and rep.n_broadcast == 12
    rep = fit_decoders(rep, na)
    v = simulate(rep, na, trials=2000, seed=1)
    assert v.passed


def test_power_code_square():
    na = network("A", 2, 2)
    code = solution_from_representation(matroid.ln_matroid(2, 2), na)
    sq = power_code(code, na, 2)
    assert sq.k == 1 and sq.n_broadcast == 16
    net2 = lex_power(na, 2)
    v = simulate(sq, net2, trials=10**4, seed=0)
    assert v.passed and v.tuples_checked == 10**4


def test_simulation_catches_bad_code():
    na = network("A", 2, 2)
    code = solution_from_representation(matroid.ln_matroid(2, 2), na)
    # corrupt one decoder: the verdict must fail, not raise
    (key, dec), = list(code.decoders.items())[:1]
    bad_rows = [[(x + 1) % 2 for x in row] for row in dec.entries]
    bad = dict(code.decoders)
    bad[key] = netcode.FpMatrix.from_rows(bad_rows, dec.modulus,
                                          cols=dec.cols)
    broken = LinearIndexCode(code.modulus, code.sources, code.k,
                             code.encoder, bad)
    v = simulate(broken, na)
    assert not v.passed
    assert v.failure is not None


def test_capacity_report_values():
    rep = capacity_report(2, 1)
    assert rep["lower_bound"] == Fraction(4, 5)
    assert rep["upper_bound_case_i"] == Fraction(204, 205)
    assert rep["upper_bound_case_ii"] == Fraction(92, 93)
    assert rep["formula_only"]
    rep3 = capacity_report(2, 3)
    assert rep3["lower_bound"] == Fraction(4, 5) ** 3
