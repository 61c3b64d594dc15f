import json

import numpy as np
import pytest

from pentatile.catalog import matching_labelings, sample
from pentatile.geometry import Isometry
from pentatile.nodes import NodeRelationSet, numeric_node_set, parse_node_set, type_node_set
from pentatile.pentagon import pentagon_from_json, regular_pentagon
from pentatile.tiling import (
    InvalidNodeSet,
    NoRecipeFound,
    Patch,
    TilingRecipe,
    WrongFamily,
    assemble_recipe,
    edge_to_edge_recipe,
    belt_frame,
    belt_tiling,
    generate_patch,
    patch_svg,
    representative_recipe,
    validate_patch,
)


@pytest.fixture(scope="module")
def rec7():
    return representative_recipe(7, sample(7))


def test_isohedral_type_unit(rec7):
    r = representative_recipe(4, sample(4))
    assert r.unit_size == 4 and not r.uses_reflections()
    assert rec7.unit_size == 8 and rec7.uses_reflections()


def test_patch_size_and_validity(rec7):
    patch = generate_patch(rec7, 2, 1)
    assert len(patch) == 5 * 3 * rec7.unit_size
    rep = validate_patch(patch)
    assert rep.ok(1e-9)
    assert rep.window_area > rep.tile_area
    assert set(json.loads(json.dumps(rep.to_json()))) >= {"overlap", "defect"}


def test_validation_detects_overlap_and_gap(rec7):
    patch = generate_patch(rec7, 2, 2)
    doubled = Patch(patch.base, patch.tiles + patch.tiles[:1], patch.window, patch.recipe)
    assert validate_patch(doubled).overlap == pytest.approx(1.0)
    mid = len(patch.tiles) // 2
    holed = Patch(patch.base, patch.tiles[:mid] + patch.tiles[mid + 1:], patch.window, patch.recipe)
    assert validate_patch(holed).defect > 1e-3


def test_regular_pentagon_has_no_recipe():
    with pytest.raises(NoRecipeFound) as exc:
        assemble_recipe(regular_pentagon(), numeric_node_set(regular_pentagon()))
    assert exc.value.exhaustive
    with pytest.raises(NoRecipeFound):
        assemble_recipe(regular_pentagon(), parse_node_set(["2B+A", "C+D+E"]))


def test_malformed_nodes_and_arguments():
    p = sample(1)
    with pytest.raises(InvalidNodeSet):
        assemble_recipe(p, NodeRelationSet(((0, 0, 0, 0, 0, 1),)))
    with pytest.raises(ValueError):
        assemble_recipe(p, type_node_set(1), max_unit=17)
    with pytest.raises(WrongFamily):
        representative_recipe(14, sample(7))
    with pytest.raises(ValueError):
        generate_patch(representative_recipe(1, p), -1, 0)


def test_reflections_disabled():
    p = sample(7)
    ns = type_node_set(7, matching_labelings(p, 7)[0])
    with pytest.raises(NoRecipeFound) as exc:
        assemble_recipe(p, ns, allow_reflections=False)
    assert exc.value.exhaustive


def test_budget_exhaustion_is_not_exhaustive():
    p = sample(15)
    ns = type_node_set(15, matching_labelings(p, 15)[0])
    with pytest.raises(NoRecipeFound) as exc:
        assemble_recipe(p, ns, budget=50)
    assert not exc.value.exhaustive


def test_recipe_json_round_trip(rec7):
    a = json.dumps(rec7.to_json(), sort_keys=True)
    again = TilingRecipe.from_json(json.loads(a))
    assert json.dumps(again.to_json(), sort_keys=True) == a
    assert validate_patch(generate_patch(again, 1, 1)).ok()


def test_recipe_rejects_degenerate_lattice():
    with pytest.raises(ValueError):
        TilingRecipe(sample(1), (Isometry(),), ((1.0, 0.0), (2.0, 0.0)))
    with pytest.raises(ValueError):
        TilingRecipe(sample(1), (), ((1.0, 0.0), (0.0, 1.0)))


def test_belts():
    p = sample(6)
    frame = belt_frame(representative_recipe(6, p))
    assert np.linalg.norm(frame.v) > 0
    for conn in ([False] * 4, [True, False, True, True]):
        patch = belt_tiling(p, "type6", conn, 4, 4)
        assert validate_patch(patch).ok()
        assert patch.meta["kind"] == "belt"
    with pytest.raises(ValueError):
        belt_tiling(p, "type6", [False] * 3, 4, 4)
    with pytest.raises(ValueError):
        belt_tiling(p, "type9", [False] * 4, 4, 4)
    with pytest.raises(WrongFamily):
        belt_tiling(sample(7), "type6", [False] * 4, 4, 4)
    with pytest.raises(WrongFamily):
        belt_tiling(sample(1), "type1", [False] * 4, 4, 4)


def test_svg(rec7):
    svg = patch_svg(generate_patch(rec7, 1, 1))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert "reflected" in svg and "*" in svg
    assert svg.count("<path") == 9 * rec7.unit_size


def test_union_keeps_every_tile_with_nearly_coincident_edges():
    # a plain polygon union lost one whole tile of this patch
    p = pentagon_from_json({
        "angles_deg": [75.21005818744, 142.39497090628, 98.049806002596, 93.370067904982, 130.975096998702],
        "edges": [1.0, 1.0, 1.0, 1.163059472938, 1.0],
    })
    patch = generate_patch(edge_to_edge_recipe(p), 2, 2)
    rep = validate_patch(patch)
    assert rep.ok(1e-9), rep
