"""Angle compositions allowed at the vertices of a tiling.

A composition counts how many corners of each base vertex meet at a node,
plus a sixth entry that is 1 when the node lies inside the edge of another
tile (a flat node, where the corners sum to 180 degrees).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .catalog import VERTEX_LETTERS, conditions_of
from .pentagon import IDENTITY, Labeling, PentagonShape

FLAT = 5
MAX_CORNERS = 6
MAX_FLAT_CORNERS = 4

# representative tilings of these types contain flat nodes
FLAT_TYPES = frozenset({1, 2, 3, 10, 11, 12, 13, 14, 15})


class InvalidNodeSet(ValueError):
    pass


@dataclass(frozen=True)
class NodeRelationSet:
    """Allowed node compositions over the base vertex indices (and the flat marker)."""

    compositions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        arr = np.array(self.compositions, dtype=int).reshape(-1, 6)
        object.__setattr__(self, "_arr", arr)

    @property
    def allows_flat(self) -> bool:
        return bool(len(self._arr) and self._arr[:, FLAT].max() > 0)

    def allows_prefix(self, counts) -> bool:
        c = np.asarray(counts)
        return bool(np.any(np.all(self._arr >= c, axis=1)))

    def allows(self, counts) -> bool:
        c = np.asarray(counts)
        return bool(np.any(np.all(self._arr == c, axis=1)))

    def without_flat(self) -> "NodeRelationSet":
        return NodeRelationSet(tuple(c for c in self.compositions if c[FLAT] == 0))

    def check(self, shape: PentagonShape, tol: float = 1e-7) -> None:
        if not self.compositions:
            raise InvalidNodeSet("empty node set")
        ang = np.asarray(shape.angles)
        for c in self.compositions:
            total = float(np.dot(c[:5], ang)) + math.pi * c[FLAT]
            if abs(total - 2 * math.pi) > tol:
                raise InvalidNodeSet(f"composition {format_composition(c)} sums to {math.degrees(total):.6f} deg")

    def describe(self, labeling: Labeling = IDENTITY) -> list[str]:
        return [format_composition(c, labeling) for c in self.compositions]


def format_composition(counts, labeling: Labeling = IDENTITY) -> str:
    """Letters of a composition, where base vertex labeling.vertex_map()[i] is letter i."""
    vm = labeling.vertex_map()
    inv = {vm[i]: VERTEX_LETTERS[i] for i in range(5)}
    parts = []
    for idx in sorted(range(5), key=lambda j: inv[j]):
        k = counts[idx]
        if k:
            parts.append(f"{k}{inv[idx]}" if k > 1 else inv[idx])
    s = "+".join(parts)
    return s + "+flat" if counts[FLAT] else s


def _multisets(max_size: int):
    for n in range(1, max_size + 1):
        for combo in itertools.combinations_with_replacement(range(5), n):
            counts = [0] * 5
            for i in combo:
                counts[i] += 1
            yield tuple(counts)


@lru_cache(maxsize=None)
def _implied(type_id: int, allow_flat: bool) -> tuple[tuple[int, ...], ...]:
    """Letter compositions whose angle sum is forced by the type's angle relations."""
    tc = conditions_of(type_id)
    rows = [list(r.coefficients) + [math.degrees(r.constant)] for r in tc.angle_relations]
    rows.append([1, 1, 1, 1, 1, 540.0])
    R = np.array(rows, dtype=float)
    rank = np.linalg.matrix_rank(R, tol=1e-9)
    out = []
    targets = [(0, 360.0)] + ([(1, 180.0)] if allow_flat else [])
    for flat, const in targets:
        for counts in _multisets(MAX_FLAT_CORNERS if flat else MAX_CORNERS):
            row = np.array(list(counts) + [const])
            if np.linalg.matrix_rank(np.vstack([R, row]), tol=1e-9) == rank:
                out.append(counts + (flat,))
    return tuple(out)


def type_node_set(type_id: int, labeling: Labeling = IDENTITY, allow_flat: bool | None = None) -> NodeRelationSet:
    """Node relations implied by the Type conditions, mapped to base vertices.

    ``labeling`` is the relabeling under which the base shape satisfies the
    conditions: letter ``i`` of the conditions is base vertex ``labeling.vertex_map()[i]``.
    """
    if allow_flat is None:
        allow_flat = type_id in FLAT_TYPES
    vm = labeling.vertex_map()
    comps = []
    for c in _implied(type_id, allow_flat):
        base = [0] * 6
        for i in range(5):
            base[vm[i]] += c[i]
        base[FLAT] = c[FLAT]
        comps.append(tuple(base))
    return NodeRelationSet(tuple(sorted(set(comps))))


def numeric_node_set(shape: PentagonShape, allow_flat: bool = True, tol: float = 1e-7) -> NodeRelationSet:
    """Every composition whose angles of this particular shape sum to 360 (or 180 on a flat node)."""
    ang = np.asarray(shape.angles)
    comps = []
    for counts in _multisets(MAX_CORNERS):
        if abs(float(np.dot(counts, ang)) - 2 * math.pi) < tol:
            comps.append(counts + (0,))
    if allow_flat:
        for counts in _multisets(MAX_FLAT_CORNERS):
            if abs(float(np.dot(counts, ang)) - math.pi) < tol:
                comps.append(counts + (1,))
    return NodeRelationSet(tuple(sorted(comps)))


def parse_node_set(texts, labeling: Labeling = IDENTITY) -> NodeRelationSet:
    """Compositions written in letters, e.g. ``["2B+A", "2E+C", "2D+A+C"]`` or ``["D+E+flat"]``."""
    vm = labeling.vertex_map()
    comps = []
    for text in texts:
        base = [0] * 6
        for term in text.replace(" ", "").split("+"):
            if term == "flat":
                base[FLAT] += 1
                continue
            k = int(term[:-1]) if len(term) > 1 else 1
            base[vm[VERTEX_LETTERS.index(term[-1])]] += k
        comps.append(tuple(base))
    return NodeRelationSet(tuple(sorted(set(comps))))
