import math

import numpy as np
import pytest

from pentatile.catalog import TYPE_IDS, matching_labelings, sample
from pentatile.nodes import (
    FLAT,
    FLAT_TYPES,
    InvalidNodeSet,
    NodeRelationSet,
    numeric_node_set,
    parse_node_set,
    type_node_set,
)


def test_type7_derivation():
    ns = type_node_set(7)
    assert sorted(ns.describe()) == sorted(["A+2B", "C+2E", "A+C+2D"])
    assert not ns.allows_flat


@pytest.mark.parametrize("t", TYPE_IDS)
def test_type_nodes_close_on_members(t):
    p = sample(t)
    g = matching_labelings(p, t)[0]
    ns = type_node_set(t, g)
    assert ns.compositions
    ns.check(p)
    assert ns.allows_flat == (t in FLAT_TYPES)


@pytest.mark.parametrize("t", TYPE_IDS)
def test_numeric_nodes_contain_derived_nodes(t):
    p = sample(t)
    ns = type_node_set(t, matching_labelings(p, t)[0])
    num = set(numeric_node_set(p).compositions)
    assert set(ns.compositions) <= num


def test_parse_and_prefix():
    ns = parse_node_set(["2B+A", "D+E+flat"])
    assert ns.allows((1, 2, 0, 0, 0, 0))
    assert ns.allows((0, 0, 0, 1, 1, 1))
    assert ns.allows_prefix((0, 1, 0, 0, 0, 0))
    assert not ns.allows_prefix((0, 3, 0, 0, 0, 0))
    assert ns.allows_flat
    assert not ns.without_flat().allows_flat


def test_check_rejects_wrong_sums():
    p = sample(7)
    with pytest.raises(InvalidNodeSet):
        NodeRelationSet(((5, 0, 0, 0, 0, 0),)).check(p)
    with pytest.raises(InvalidNodeSet):
        NodeRelationSet(()).check(p)


def test_numeric_regular_pentagon_has_no_nodes():
    from pentatile.pentagon import regular_pentagon

    ns = numeric_node_set(regular_pentagon())
    assert ns.compositions == ()
    for c in numeric_node_set(sample(1)).compositions:
        total = float(np.dot(c[:5], sample(1).angles)) + math.pi * c[FLAT]
        assert abs(total - 2 * math.pi) < 1e-7
