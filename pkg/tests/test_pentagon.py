import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_convex_pentagon
from pentatile.pentagon import (
    ALL_LABELINGS,
    IDENTITY,
    BadAngleSum,
    DegenerateEdge,
    Labeling,
    NonConvex,
    NotClosed,
    PentagonError,
    canonical_form,
    closure_residual,
    is_line_symmetric,
    key_distance,
    pentagon_from_angles_edges,
    pentagon_from_json,
    pentagon_from_vertices,
    regular_pentagon,
    relabel,
    render_vertices,
    similar,
    symmetries,
)


def test_labelings_form_dihedral_group():
    assert len(set(ALL_LABELINGS)) == 10
    for g in ALL_LABELINGS:
        assert g.compose(g.inverse()) == IDENTITY
        for h in ALL_LABELINGS:
            assert g.compose(h) in ALL_LABELINGS
    assert Labeling(7, False) == Labeling(2, False)


def test_relabel_composes():
    rng = np.random.default_rng(0)
    p = random_convex_pentagon(rng)
    for g in ALL_LABELINGS:
        for h in ALL_LABELINGS:
            a = relabel(relabel(p, g), h)
            b = relabel(p, g.compose(h))
            assert a.angles == b.angles and a.edges == b.edges


def test_regular_pentagon():
    p = regular_pentagon()
    assert np.allclose(p.angles_deg, 108.0)
    assert np.allclose(p.edges, 1.0)
    assert len(symmetries(p)) == 10
    assert is_line_symmetric(p)


def test_rejects_bad_input():
    with pytest.raises(BadAngleSum):
        pentagon_from_angles_edges([100] * 5, [1] * 5)
    with pytest.raises(NonConvex):
        pentagon_from_angles_edges([190, 80, 90, 90, 90], [1] * 5)
    with pytest.raises(NotClosed):
        pentagon_from_angles_edges([108] * 5, [1, 1, 1, 1, 2])
    with pytest.raises(DegenerateEdge):
        pentagon_from_angles_edges([108] * 5, [1, 1, 0, 1, 1])
    with pytest.raises(PentagonError):
        pentagon_from_angles_edges([108] * 4, [1] * 4)
    with pytest.raises(NonConvex):
        pentagon_from_vertices([(0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)])
    with pytest.raises(PentagonError):
        pentagon_from_json({"corners": []})


def test_vertices_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = random_convex_pentagon(rng)
        q = pentagon_from_vertices(render_vertices(p))
        assert similar(p, q, 1e-9)


def test_clockwise_input_is_mirrored():
    pts = render_vertices(pentagon_from_angles_edges([100, 110, 120, 100, 110], [1, 1.1, 1.0, 1.2, 0.9], 1e-1))
    p = pentagon_from_vertices(pts)
    q = pentagon_from_vertices(pts[::-1])
    assert not p.mirrored and q.mirrored
    assert similar(p, q, 1e-9)


def test_json_round_trip_is_byte_stable():
    rng = np.random.default_rng(4)
    for _ in range(50):
        p = random_convex_pentagon(rng)
        a = json.dumps(p.to_json())
        q = pentagon_from_json(json.loads(a))
        assert json.dumps(q.to_json()) == a
        assert json.dumps(pentagon_from_json(json.loads(json.dumps(q.to_json()))).to_json()) == a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(ALL_LABELINGS))
def test_canonical_form_invariant(seed, g):
    p = random_convex_pentagon(np.random.default_rng(seed))
    a = canonical_form(p).key()
    b = canonical_form(relabel(p, g)).key()
    assert np.max(np.abs(a - b)) < 1e-9
    assert key_distance(p, relabel(p, g)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 10.0))
def test_similarity_ignores_scale(seed, scale):
    p = random_convex_pentagon(np.random.default_rng(seed))
    q = pentagon_from_vertices(render_vertices(p) * scale + 3.0)
    assert similar(p, q, 1e-8)
    assert closure_residual(q.angles, q.edges) < 1e-12


def test_distinct_shapes_are_not_similar():
    rng = np.random.default_rng(5)
    p, q = random_convex_pentagon(rng), random_convex_pentagon(rng)
    assert not similar(p, q)
    assert math.isclose(p.area(), abs(p.area()))
