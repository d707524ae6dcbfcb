from fractions import Fraction

import pytest

from charrank import matroid, netcode
from charrank.lp import (LPProblem, Row, build_problem, check_feasible,
                         code_entropy_point, flow_constraints,
                         matroid_side_constraints, role_map_permutations,
                         scheme_constraint_div, scheme_constraint_nondiv,
                         shannon_constraints, solve_min)


def tiny(rows, sources=("x",)):
    lp = LPProblem(sources)
    lp.rows.extend(rows)
    return lp


def test_solve_min_by_hand():
    # min z_{} s.t. z_{} + z_{x} >= 3, z_{x} <= 2  ->  z_{} = 1
    lp = tiny([Row({0: Fraction(1), 1: Fraction(1)}, ">=", Fraction(3)),
               Row({1: Fraction(1)}, "<=", Fraction(2))])
    sol = solve_min(lp)
    assert sol.status == "optimal"
    assert sol.optimum == 1


def test_solve_min_equality_row():
    lp = tiny([Row({0: Fraction(2), 1: Fraction(-1)}, "==", Fraction(5)),
               Row({1: Fraction(1)}, ">=", Fraction(1))])
    sol = solve_min(lp)
    assert sol.status == "optimal"
    assert sol.optimum == 3
    assert sol.assignment[1] == 1


def test_solve_min_infeasible():
    lp = tiny([Row({0: Fraction(1)}, "<=", Fraction(-1))])
    assert solve_min(lp).status == "infeasible"
    lp = tiny([Row({1: Fraction(1)}, ">=", Fraction(2)),
               Row({1: Fraction(1)}, "<=", Fraction(1))])
    assert solve_min(lp).status == "infeasible"


def test_source_cap():
    with pytest.raises(ValueError):
        LPProblem(tuple(range(11)))


def test_shannon_row_counts():
    s = ("a", "b", "c")
    rows = shannon_constraints(s)
    # monotonicity: 3 * 2^2, submodularity: C(3,2) * 2^1
    assert len(rows) == 12 + 6
    # every row holds for the rank of a representable point, e.g. z_Y = |Y|
    card = {m: Fraction(bin(m).count("1")) for m in range(8)}
    assert all(r.check(card) for r in rows)


def test_flow_rows_cut_cardinality_point():
    na = netcode.network_from_circuits(matroid.ln_labels(2),
                                       matroid.class_a(2))
    rows = flow_constraints(na)
    assert any(r.rel == "==" for r in rows)
    # z_Y = |Y| ignores the demands, so the closure rows must reject it
    card = {m: Fraction(bin(m).count("1")) for m in range(128)}
    assert not all(r.check(card) for r in rows)
    # a code's entropy point satisfies every flow row
    code = netcode.solution_from_representation(matroid.ln_matroid(2, 2), na)
    prob = build_problem(na)
    point = code_entropy_point(code, prob)
    assert all(r.check(point) for r in rows)


def test_scheme_rows_reference_only_known_masks():
    na = netcode.network_from_circuits(matroid.ln_labels(2),
                                       matroid.class_a(2))
    lp = LPProblem(tuple(na.sources))
    for builder in (scheme_constraint_div, scheme_constraint_nondiv):
        row = builder(lp, 2)
        assert row.rel == ">="
        assert all(0 <= m < 128 for m in row.coeffs)
        assert row.coeffs  # nonempty


def test_role_map_permutations_count():
    maps = list(role_map_permutations(2))
    assert len(maps) == 6
    assert all(m["C"] == "C" for m in maps)


def test_side_constraints_exist_for_both_classes():
    na = netcode.network_from_circuits(matroid.ln_labels(2),
                                       matroid.class_a(2))
    for cls in ("div", "nondiv"):
        rows = matroid_side_constraints(na, 2, cls)
        assert rows
        assert all("paper-asserted" in r.tag for r in rows)


def test_entropy_point_of_code_is_feasible():
    na = netcode.network_from_circuits(matroid.ln_labels(2),
                                       matroid.class_a(2))
    code = netcode.solution_from_representation(matroid.ln_matroid(2, 2), na)
    prob = build_problem(na)
    point = code_entropy_point(code, prob)
    assert check_feasible(prob, point) == []
    assert point[0] == 4


def test_dump_mentions_tags():
    lp = tiny([Row({0: Fraction(1)}, ">=", Fraction(1), tag="demo")])
    assert "demo" in lp.dump()
