import json

import pytest

from pentatile.catalog import conditions_of, membership
from pentatile.solver import EMPTY, FAMILY, FIXED, intersection_report, venn_table, venn_to_json
from pentatile.system import certify_empty, solve


def test_fixed_pair():
    rep = intersection_report((2, 8))
    assert rep.verdict == FIXED and rep.count == 3
    for c in rep.shapes:
        assert {2, 8} <= membership(c.shape)
    assert rep.diagnostics["uncertified"] == 0


def test_family_pair():
    rep = intersection_report((1, 2))
    assert rep.verdict == FAMILY and rep.dimension >= 1 and rep.count == 0


def test_empty_pair_is_certified():
    rep = intersection_report((3, 13))
    assert rep.verdict == EMPTY
    assert rep.diagnostics["certified_empty"] + rep.diagnostics["linear_empty"] == rep.diagnostics["systems"]


def test_order_and_seed_do_not_matter():
    a = intersection_report((7, 1), seed=0)
    b = intersection_report((1, 7), seed=11)
    assert a.verdict == b.verdict == FIXED
    assert a.count == b.count == 1
    assert max(abs(x - y) for x, y in zip(a.shapes[0].key(), b.shapes[0].key())) < 1e-8


def test_solver_tolerance_is_reported():
    rep = intersection_report((1, 7), solver_tol=1e-10)
    assert rep.diagnostics["solver_tol"] == 1e-10
    assert rep.verdict == FIXED


def test_bad_cells():
    with pytest.raises(ValueError):
        intersection_report((4,))
    with pytest.raises(KeyError):
        intersection_report((1, 99))


def test_single_type_systems():
    res = solve(conditions_of(14).system(), starts=32)
    assert res.solutions and res.solutions[0].dimension == 0
    assert not certify_empty(conditions_of(7).system())


def test_venn_json_is_deterministic():
    cells = [(1, 7), (3, 7)]
    a = venn_to_json(venn_table(starts=50, cells=cells))
    b = venn_to_json(venn_table(starts=50, cells=cells))
    assert a == b
    obj = json.loads(a)
    assert obj["1,7"]["verdict"] == FIXED and obj["3,7"]["verdict"] == EMPTY
