"""Periodic tilings by one convex pentagon: assembly, patches and validation.

``assemble_recipe`` grows a tiling one tile at a time around the vertex
with the narrowest uncovered gap.  A placed tile is either a new member of
the translation unit or a translate of an existing member, in which case
the translation becomes a lattice vector.  The search succeeds once the
lattice has rank two and the unit exactly fills a lattice cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geometry import (
    TWO_PI,
    Isometry,
    ccw,
    direction,
    overlapping,
    polygon_area,
    reduce_basis,
    rotation_matrix,
    wrap,
)
from .nodes import FLAT, InvalidNodeSet, NodeRelationSet
from .pentagon import PentagonShape, render_vertices

MAX_UNIT = 16
ANG_EPS = 1e-7
MAX_DENOMINATOR = 12
# precision grid for polygon unions, relative to the tile diameter
SNAP = 1e-12


class NoRecipeFound(RuntimeError):
    def __init__(self, message: str, exhaustive: bool):
        super().__init__(message)
        self.exhaustive = exhaustive


class WrongFamily(ValueError):
    pass


@dataclass(frozen=True)
class TilingRecipe:
    base: PentagonShape
    unit: tuple[Isometry, ...]
    lattice: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        L = np.array(self.lattice, dtype=float)
        if L.shape != (2, 2) or abs(np.linalg.det(L)) < 1e-12:
            raise ValueError("lattice vectors must be linearly independent")
        if not self.unit:
            raise ValueError("a translation unit needs at least one tile")

    @property
    def unit_size(self) -> int:
        return len(self.unit)

    def uses_reflections(self) -> bool:
        return any(g.reflected for g in self.unit)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "unit": [g.to_json() for g in self.unit],
            "lattice": [[round(x, 12) for x in v] for v in self.lattice],
        }

    @staticmethod
    def from_json(obj: dict) -> "TilingRecipe":
        from .pentagon import pentagon_from_json

        base = pentagon_from_json(obj["base"])
        unit = tuple(Isometry.from_json(u) for u in obj["unit"])
        lat = tuple(tuple(float(x) for x in v) for v in obj["lattice"])
        return TilingRecipe(base, unit, lat)


@dataclass
class PlacedTile:
    vertices: np.ndarray
    isometry: Isometry
    unit_index: int
    lattice_coords: tuple[int, int]


@dataclass
class Patch:
    base: PentagonShape
    tiles: list[PlacedTile]
    window: tuple[float, float, float, float]
    recipe: TilingRecipe | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tiles)

    def polygons(self) -> np.ndarray:
        return np.array([t.vertices for t in self.tiles])


# ---------------------------------------------------------------- search


@dataclass(frozen=True)
class _State:
    unit: tuple[Isometry, ...]
    lattice: tuple[np.ndarray, ...]


class _Assembler:
    def __init__(self, shape: PentagonShape, nodes: NodeRelationSet, allow_reflections: bool,
                 budget: int):
        self.shape = shape
        self.nodes = nodes
        self.V = render_vertices(shape)
        self.W = self.V * np.array([1.0, -1.0])
        self.angles = np.asarray(shape.angles)
        self.area = abs(polygon_area(self.V))
        self.diam = max(float(np.linalg.norm(p - q)) for p in self.V for q in self.V)
        self.tol = 1e-7 * self.diam
        self.allow_reflections = allow_reflections
        self.allow_flat = nodes.allows_flat
        self.budget = budget
        self.expanded = 0
        self.exhausted = False
        self._cache: dict = {}

    # tiles -------------------------------------------------------------

    def pts(self, g: Isometry) -> np.ndarray:
        out = self._cache.get(g)
        if out is None:
            out = self._cache[g] = g.apply(self.V)
        return out

    @staticmethod
    def ccw_poly(pts: np.ndarray, reflected: bool) -> np.ndarray:
        return pts[::-1] if reflected else pts

    def world(self, st: _State, center: np.ndarray, radius: float, extra=()):
        """(points, reflected) of every tile whose centroid is within radius of center."""
        out = []
        units = list(st.unit) + list(extra)
        for g in units:
            base_pts = self.pts(g)
            c = base_pts.mean(axis=0)
            for v in self.lattice_near(st.lattice, center - c, radius):
                if np.linalg.norm(c + v - center) <= radius:
                    out.append((base_pts + v, g.reflected))
        return out

    @staticmethod
    def lattice_near(lattice, offset: np.ndarray, radius: float):
        if len(lattice) == 0:
            return [np.zeros(2)]
        if len(lattice) == 1:
            L = lattice[0]
            a = float(offset @ L) / float(L @ L)
            r = radius / math.sqrt(float(L @ L))
            return [k * L for k in range(math.floor(a - r), math.ceil(a + r) + 1)]
        B = np.column_stack(lattice)
        Binv = np.linalg.inv(B)
        a = Binv @ offset
        r = radius * np.linalg.norm(Binv, axis=1)
        out = []
        for i in range(math.floor(a[0] - r[0]), math.ceil(a[0] + r[0]) + 1):
            for j in range(math.floor(a[1] - r[1]), math.ceil(a[1] + r[1]) + 1):
                out.append(i * lattice[0] + j * lattice[1])
        return out

    # nodes -------------------------------------------------------------

    def contributions(self, x: np.ndarray, tiles):
        """Composition counts and covered sectors at point x."""
        if not tiles:
            return [0] * 6, []
        P, R = _stack(tiles)
        return node_at(x, P, R, self.angles, self.tol, self.diam)

    def node_ok(self, counts) -> bool:
        total = float(np.dot(counts[:5], self.angles)) + math.pi * counts[FLAT]
        if total > TWO_PI + 1e-6:
            return False
        if abs(total - TWO_PI) < 1e-6:
            return self.nodes.allows(counts)
        return self.nodes.allows_prefix(counts)

    @staticmethod
    def gaps(sectors):
        """Uncovered angular intervals (start, width) around a point."""
        if not sectors:
            return [(0.0, TWO_PI)]
        ss = sorted(sectors)
        total = sum(w for _, w in ss)
        if total >= TWO_PI - 1e-6:
            return []
        out = []
        for i, (s, w) in enumerate(ss):
            end = s + w
            nxt = ss[(i + 1) % len(ss)][0]
            g = wrap(nxt - end)
            if len(ss) > 1 and g > TWO_PI - 1e-6:
                g = 0.0
            if len(ss) == 1:
                g = TWO_PI - w
            if g > 1e-6:
                out.append((wrap(end), g))
        return out

    def local_valid(self, pts: np.ndarray, tiles) -> bool:
        """Node checks at the corners of pts and at foreign corners on its boundary."""
        points = list(pts)
        if tiles:
            P, _ = _stack(tiles)
            Q = P.reshape(-1, 2)
            near = np.linalg.norm(Q - pts.mean(axis=0), axis=1) <= self.diam + self.tol
            for y in Q[near]:
                if _on_edges(y, pts[None], self.tol).any():
                    points.append(y)
        for x in points:
            counts, _ = self.contributions(x, tiles)
            if not self.node_ok(counts):
                return False
        return True

    # lattice -----------------------------------------------------------

    def in_lattice(self, lattice, v: np.ndarray) -> bool:
        if np.linalg.norm(v) < self.tol:
            return True
        if len(lattice) == 0:
            return False
        if len(lattice) == 1:
            L = lattice[0]
            if abs(L[0] * v[1] - L[1] * v[0]) > self.tol * np.linalg.norm(L):
                return False
            t = float(v @ L) / float(L @ L)
            return abs(t - round(t)) * np.linalg.norm(L) < self.tol
        c = np.linalg.solve(np.column_stack(lattice), v)
        back = np.column_stack(lattice) @ np.round(c)
        return np.linalg.norm(back - v) < self.tol

    def add_vector(self, lattice, v: np.ndarray):
        """Lattice generated by the current one and v, or None if it is not discrete."""
        v = np.asarray(v, dtype=float)
        if len(lattice) == 0:
            return (v,)
        if len(lattice) == 1:
            L = lattice[0]
            cross = L[0] * v[1] - L[1] * v[0]
            if abs(cross) > self.tol * np.linalg.norm(L):
                b1, b2 = reduce_basis(L, v)
                return (b1, b2)
            t = Fraction(float(v @ L) / float(L @ L)).limit_denominator(MAX_DENOMINATOR)
            if abs(float(t) * L - v).max() > self.tol:
                return None
            return (L / t.denominator,)
        B = np.column_stack(lattice)
        c = np.linalg.solve(B, v)
        fr = [Fraction(float(x)).limit_denominator(MAX_DENOMINATOR) for x in c]
        if np.linalg.norm(B @ np.array([float(f) for f in fr]) - v) > self.tol:
            return None
        q = math.lcm(fr[0].denominator, fr[1].denominator)
        gens = [(q, 0), (0, q), (int(fr[0] * q), int(fr[1] * q))]
        h = _hermite_2d(gens)
        b1 = B @ (np.array(h[0], dtype=float) / q)
        b2 = B @ (np.array(h[1], dtype=float) / q)
        b1, b2 = reduce_basis(b1, b2)
        return (b1, b2)

    def normalize_unit(self, st: _State):
        """Drop unit tiles that coincide with a lattice translate of an earlier one."""
        keep = []
        for g in st.unit:
            dup = False
            for h in keep:
                if h.reflected == g.reflected and _same_angle(h.rotation, g.rotation):
                    v = np.asarray(g.translation) - np.asarray(h.translation)
                    if self.in_lattice(st.lattice, v):
                        dup = True
                        break
            if not dup:
                keep.append(g)
        return _State(tuple(keep), st.lattice)

    def consistent(self, st: _State) -> bool:
        if len(st.lattice) == 2:
            det = abs(float(np.linalg.det(np.column_stack(st.lattice))))
            if self.area * len(st.unit) > det * (1 + 1e-9) + 1e-12:
                return False
        for idx, g in enumerate(st.unit):
            pts = self.pts(g)
            c = pts.mean(axis=0)
            tiles = self.world(st, c, 2 * self.diam)
            others = [t for t in tiles if np.linalg.norm(t[0] - pts) > self.tol]
            if others:
                polys = np.array([self.ccw_poly(q, r) for q, r in others])
                if overlapping(self.ccw_poly(pts, g.reflected), polys, eps=self.tol).any():
                    return False
            if not self.local_valid(pts, tiles):
                return False
        return True

    def complete(self, st: _State) -> bool:
        if len(st.lattice) < 2:
            return False
        det = abs(float(np.linalg.det(np.column_stack(st.lattice))))
        return abs(self.area * len(st.unit) - det) < 1e-9 * det

    # growth ------------------------------------------------------------

    def next_vertex(self, st: _State):
        best = None
        for j, g in enumerate(st.unit):
            pts = self.pts(g)
            for k in range(5):
                x = pts[k]
                tiles = self.world(st, x, 1.5 * self.diam)
                _, sectors = self.contributions(x, tiles)
                for start, width in self.gaps(sectors):
                    key = (round(width, 7), j, k)
                    if best is None or key < best[0]:
                        best = (key, x, start, width)
        return best

    def candidates(self, st: _State, x: np.ndarray, phi: float, gap: float):
        protos = [False, True] if self.allow_reflections else [False]
        out = []
        for refl in protos:
            P = self.W if refl else self.V
            for k in range(5):
                if self.angles[k] > gap + ANG_EPS:
                    continue
                start = (P[(k - 1) % 5] - P[k]) if refl else (P[(k + 1) % 5] - P[k])
                rot = wrap(phi - direction(start))
                t = x - rotation_matrix(rot) @ P[k]
                out.append(Isometry(refl, rot, (float(t[0]), float(t[1]))))
        if self.allow_flat and gap >= math.pi - ANG_EPS:
            u = np.array([math.cos(phi), math.sin(phi)])
            anchors = []
            for q, _ in self.world(st, x, 2 * self.diam):
                for y in q:
                    d = y - x
                    s = float(d @ u)
                    if abs(d[0] * u[1] - d[1] * u[0]) < self.tol and abs(s) > self.tol:
                        if not any(abs(s - a) < self.tol for a in anchors):
                            anchors.append(s)
            anchors.sort()
            for refl in protos:
                P = self.W if refl else self.V
                for k in range(5):
                    a, b = (P[(k + 1) % 5], P[k]) if refl else (P[k], P[(k + 1) % 5])
                    L = float(np.linalg.norm(b - a))
                    rot = wrap(phi - direction(b - a))
                    R = rotation_matrix(rot)
                    for s in anchors:
                        if 0 < s < L - self.tol:
                            start_pt = x + (s - L) * u
                        elif -L + self.tol < s < 0:
                            start_pt = x + s * u
                        else:
                            continue
                        t = start_pt - R @ a
                        out.append(Isometry(refl, rot, (float(t[0]), float(t[1]))))
        return out

    def expand(self, st: _State, max_unit: int):
        self.expanded += 1
        if self.expanded > self.budget:
            self.exhausted = False
            raise _BudgetExceeded
        if self.complete(st):
            return st
        nv = self.next_vertex(st)
        if nv is None:
            return None
        _, x, phi, gap = nv
        for g in self.candidates(st, x, phi, gap):
            pts = self.pts(g)
            c = pts.mean(axis=0)
            tiles = self.world(st, c, 2 * self.diam)
            if tiles:
                polys = np.array([self.ccw_poly(q, r) for q, r in tiles])
                if overlapping(self.ccw_poly(pts, g.reflected), polys, eps=self.tol).any():
                    continue
            # translate of an existing unit tile: try it as a lattice vector first
            for h in st.unit:
                if h.reflected != g.reflected or not _same_angle(h.rotation, g.rotation):
                    continue
                v = np.asarray(g.translation) - np.asarray(h.translation)
                if self.in_lattice(st.lattice, v):
                    continue
                lat = self.add_vector(st.lattice, v)
                if lat is None:
                    continue
                nxt = self.normalize_unit(_State(st.unit, lat))
                if self.consistent(nxt):
                    res = self.expand(nxt, max_unit)
                    if res is not None:
                        return res
            if len(st.unit) >= max_unit:
                continue
            own = [(pts + v, g.reflected) for v in self.lattice_near(st.lattice, np.zeros(2), 2 * self.diam)
                   if np.linalg.norm(v) > self.tol and np.linalg.norm(v) <= 2 * self.diam]
            if own:
                polys = np.array([self.ccw_poly(q, r) for q, r in own])
                if overlapping(self.ccw_poly(pts, g.reflected), polys, eps=self.tol).any():
                    continue
            if not self.local_valid(pts, tiles + own + [(pts, g.reflected)]):
                continue
            nxt = _State(st.unit + (g,), st.lattice)
            if len(st.lattice) and not self.consistent(nxt):
                continue
            res = self.expand(nxt, max_unit)
            if res is not None:
                return res
        return None


class _BudgetExceeded(Exception):
    pass


def node_at(x: np.ndarray, P: np.ndarray, R: np.ndarray, angles, tol: float, reach: float = math.inf):
    """Corners and flat sides of the polygons P (base vertex order) meeting at x.

    Returns the composition counts (five corners plus the flat marker) and the
    angular sectors (start direction, width) that the polygons cover around x.
    """
    counts = [0] * 6
    sectors = []
    if len(P) == 0:
        return counts, sectors
    d = np.linalg.norm(P - x, axis=2)
    k = np.argmin(d, axis=1)
    dmin = d[np.arange(len(P)), k]
    corner = dmin < tol
    for i in np.flatnonzero(corner):
        ki = int(k[i])
        counts[ki] += 1
        nxt = P[i, (ki - 1) % 5] if R[i] else P[i, (ki + 1) % 5]
        sectors.append((direction(nxt - x), float(angles[ki])))
    rest = np.flatnonzero(~corner & (dmin <= reach))
    if len(rest):
        on = _on_edges(x, P[rest], tol)
        for i, e in zip(*np.nonzero(on)):
            tile = rest[i]
            p, q = P[tile, e], P[tile, (e + 1) % 5]
            counts[FLAT] += 1
            fwd = (p - q) if R[tile] else (q - p)
            sectors.append((direction(fwd), math.pi))
    return counts, sectors


def covered_gaps(sectors):
    """Uncovered angular intervals (start, width) around a point."""
    return _Assembler.gaps(sectors)


def _stack(tiles):
    return np.array([t[0] for t in tiles]), np.array([t[1] for t in tiles], dtype=bool)


def _on_edges(x: np.ndarray, P: np.ndarray, tol: float) -> np.ndarray:
    """(n, 5) mask of polygon edges that contain x strictly inside."""
    p = P
    d = np.roll(P, -1, axis=1) - p
    L2 = np.einsum("nkd,nkd->nk", d, d)
    t = np.einsum("nkd,nkd->nk", x - p, d) / L2
    L = np.sqrt(L2)
    off = x - (p + t[..., None] * d)
    return (t * L > tol) & ((1 - t) * L > tol) & (np.einsum("nkd,nkd->nk", off, off) <= tol * tol)


def _same_angle(a: float, b: float) -> bool:
    d = wrap(a - b)
    return d < 1e-7 or d > TWO_PI - 1e-7


def _hermite_2d(gens):
    """Basis of the integer lattice in Z^2 spanned by the given integer vectors."""
    rows = [list(g) for g in gens if g != (0, 0)]
    # column 0
    while sum(1 for r in rows if r[0] != 0) > 1:
        rows.sort(key=lambda r: (abs(r[0]) if r[0] else math.inf))
        piv = rows[0]
        for r in rows[1:]:
            if r[0]:
                m = r[0] // piv[0]
                r[0] -= m * piv[0]
                r[1] -= m * piv[1]
    rows.sort(key=lambda r: (r[0] == 0, abs(r[0])))
    first = rows[0]
    rest = [r[1] for r in rows[1:] if r[1] != 0]
    g = 0
    for x in rest:
        g = math.gcd(g, x)
    return [tuple(first), (0, g)]


def usable_nodes(p: PentagonShape, nodes: NodeRelationSet, tol: float = 1e-7) -> NodeRelationSet:
    """The compositions of ``nodes`` whose angle sums close for this particular shape."""
    ang = np.asarray(p.angles)
    keep = []
    for c in nodes.compositions:
        if len(c) != 6 or min(c) < 0 or sum(c[:5]) == 0:
            raise InvalidNodeSet(f"malformed composition {c!r}")
        total = float(np.dot(c[:5], ang)) + math.pi * c[FLAT]
        if abs(total - TWO_PI) < tol:
            keep.append(tuple(c))
    return NodeRelationSet(tuple(keep))


def assemble_recipe(
    p: PentagonShape,
    nodes: NodeRelationSet,
    max_unit: int = MAX_UNIT,
    seed: int = 0,
    allow_reflections: bool = True,
    budget: int = 200000,
) -> TilingRecipe:
    """Smallest translation unit found by backtracking under the given node relations.

    The search is deterministic; ``seed`` is accepted for interface symmetry and
    recorded but the candidate order does not depend on it.
    """
    if not 1 <= max_unit <= MAX_UNIT:
        raise ValueError(f"max_unit must lie in 1..{MAX_UNIT}")
    usable = usable_nodes(p, nodes)
    if not usable.compositions:
        raise NoRecipeFound("no node composition closes with these angles", exhaustive=True)
    asm = _Assembler(p, usable, allow_reflections, budget)
    start = _State((Isometry(),), ())
    try:
        for n in range(1, max_unit + 1):
            st = asm.expand(start, n)
            if st is not None:
                b1, b2 = reduce_basis(*st.lattice)
                lat = ((float(b1[0]), float(b1[1])), (float(b2[0]), float(b2[1])))
                return TilingRecipe(p, st.unit, lat)
    except _BudgetExceeded:
        raise NoRecipeFound(f"search budget of {budget} expansions exhausted", exhaustive=False)
    raise NoRecipeFound(f"no translation unit with at most {max_unit} tiles", exhaustive=True)


# ------------------------------------------------------- representatives

_RECIPES: dict = {}


def _shape_cache_key(p: PentagonShape):
    e = np.asarray(p.edges) / p.edges[0]
    return tuple(np.round(np.concatenate([p.angles, e]), 9))


def type_labeling(p: PentagonShape, type_id: int):
    from .catalog import matching_labelings

    labs = matching_labelings(p, type_id)
    if not labs:
        raise WrongFamily(f"shape is not a Type {type_id} pentagon")
    return labs[0]


def representative_recipe(type_id: int, p: PentagonShape, max_unit: int = MAX_UNIT,
                          allow_reflections: bool = True) -> TilingRecipe:
    """Smallest unit tiling p under the node relations implied by the Type conditions."""
    from .nodes import type_node_set

    key = ("rep", type_id, _shape_cache_key(p), max_unit, allow_reflections)
    if key not in _RECIPES:
        nodes = type_node_set(type_id, type_labeling(p, type_id))
        _RECIPES[key] = assemble_recipe(p, nodes, max_unit=max_unit, allow_reflections=allow_reflections)
    return _RECIPES[key]


def edge_to_edge_recipe(p: PentagonShape, max_unit: int = MAX_UNIT, allow_reflections: bool = True,
                        budget: int = 200000) -> TilingRecipe:
    """Smallest unit whose tiling has no vertex inside another tile's edge.

    The node relations are every flat-free composition that closes numerically
    for this shape, so the search does not depend on any Type membership.
    """
    from .nodes import numeric_node_set

    key = ("e2e", _shape_cache_key(p), max_unit, allow_reflections)
    if key not in _RECIPES:
        nodes = numeric_node_set(p, allow_flat=False)
        _RECIPES[key] = assemble_recipe(p, nodes, max_unit=max_unit, allow_reflections=allow_reflections,
                                        budget=budget)
    return _RECIPES[key]


# --------------------------------------------------------------- patches


def _bbox(polys: np.ndarray) -> tuple[float, float, float, float]:
    pts = polys.reshape(-1, 2)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def generate_patch(recipe: TilingRecipe, m: int, n: int) -> Patch:
    """The (2m+1) x (2n+1) block of lattice translates of the unit."""
    if m < 0 or n < 0:
        raise ValueError("patch half-sizes must be non-negative")
    V = render_vertices(recipe.base)
    b1, b2 = (np.asarray(v) for v in recipe.lattice)
    tiles = []
    for i in range(-m, m + 1):
        for j in range(-n, n + 1):
            shift = i * b1 + j * b2
            for u, g in enumerate(recipe.unit):
                h = g.translated(shift)
                tiles.append(PlacedTile(h.apply(V), h, u, (i, j)))
    polys = np.array([t.vertices for t in tiles])
    return Patch(recipe.base, tiles, _bbox(polys), recipe, {"kind": "lattice", "m": m, "n": n})


@dataclass(frozen=True)
class ValidationReport:
    max_overlap_area: float
    overlap: float
    defect_area: float
    defect: float
    window_area: float
    tile_area: float

    def ok(self, tol: float = 1e-6) -> bool:
        return self.overlap < tol and self.defect < tol

    def to_json(self) -> dict:
        return {k: float(v) for k, v in self.__dict__.items()}


def _grid(patch: Patch) -> float:
    return SNAP * patch.base.diameter()


def safe_window(patch: Patch):
    """Outer outline of the patch (holes filled) shrunk by one tile diameter."""
    import shapely
    from shapely.geometry import Polygon

    # a plain union can drop whole tiles when many edges nearly coincide
    union = shapely.union_all([Polygon(ccw(t.vertices)) for t in patch.tiles], grid_size=_grid(patch))
    parts = list(getattr(union, "geoms", [union]))
    outer = max(parts, key=lambda g: g.area)
    return Polygon(outer.exterior).buffer(-patch.base.diameter()), union


def validate_patch(patch: Patch) -> ValidationReport:
    """Largest pairwise overlap and the uncovered area inside the safe window."""
    from shapely import STRtree
    from shapely.geometry import Polygon

    if not patch.tiles:
        raise ValueError("empty patch")
    polys = [Polygon(ccw(t.vertices)) for t in patch.tiles]
    tile_area = float(np.mean([q.area for q in polys]))
    tree = STRtree(polys)
    worst = 0.0
    for i, q in enumerate(polys):
        for j in tree.query(q):
            if j > i:
                worst = max(worst, q.intersection(polys[j]).area)
    window, union = safe_window(patch)
    wa = float(window.area)
    defect_area = float(window.difference(union, grid_size=_grid(patch)).area) if wa > 0 else 0.0
    return ValidationReport(
        max_overlap_area=float(worst),
        overlap=float(worst) / tile_area,
        defect_area=defect_area,
        defect=defect_area / wa if wa > 0 else 0.0,
        window_area=wa,
        tile_area=tile_area,
    )


# ----------------------------------------------------------------- belts

BELT_FAMILIES = ("type1", "type6")


@dataclass(frozen=True)
class BeltFrame:
    """Geometry of freely connectable vertical belts of a periodic tiling.

    A belt is the unit repeated along ``v``.  Its right neighbor is either the
    plain translate by ``w`` or the mirror image (across a line perpendicular to
    ``v``) translated by ``t``.
    """

    recipe: TilingRecipe
    v: tuple[float, float]
    w: tuple[float, float]
    t: tuple[float, float]
    mirror: Isometry


def _belt_type(p: PentagonShape, family: str) -> int:
    from .catalog import membership
    from .pentagon import relabel

    if family not in BELT_FAMILIES:
        raise ValueError(f"belt family must be one of {BELT_FAMILIES}")
    if family == "type6":
        if 6 not in membership(p):
            raise WrongFamily("belts of this kind need a Type 6 pentagon")
        return 6
    from .catalog import matching_labelings

    for g in matching_labelings(p, 1):
        e = relabel(p, g).edges
        if abs(e[4] - e[2]) <= 1e-6 * np.mean(e):
            return 1
    raise WrongFamily("belts of this kind need a Type 1 pentagon with a = d")


def _vec(x) -> tuple[float, float]:
    return (float(x[0]), float(x[1]))


def _column(asm: "_Assembler", unit, origin, v, rows) -> list:
    out = []
    for g in unit:
        base = asm.pts(g)
        for k in rows:
            out.append((base + origin + k * v, g.reflected))
    return out


def _connection_ok(asm: "_Assembler", left, right, t, v, n_hat) -> bool:
    """True when the right belt, shifted by t, meets the left belt without gaps or overlaps."""
    K = 2 + math.ceil(2 * asm.diam / np.linalg.norm(v))
    rows = range(-K, K + 1)
    L = _column(asm, left, np.zeros(2), v, rows)
    R = _column(asm, right, t, v, rows)
    Lp = np.array([asm.ccw_poly(q, r) for q, r in L])
    for q, r in R:
        if overlapping(asm.ccw_poly(q, r), Lp, eps=asm.tol).any():
            return False
    v_hat = v / np.linalg.norm(v)
    span = np.linalg.norm(v)
    both = L + R
    for own, sign, shift in ((L, 1.0, 0.0), (R, -1.0, float(t @ v_hat))):
        for q, _ in own:
            for x in q:
                if abs(float(x @ v_hat) - shift) > span:
                    continue
                _, sec = asm.contributions(x, own)
                gaps = asm.gaps(sec)
                if not gaps:
                    continue
                facing = any(sign * float(np.array([math.cos(s + g / 2), math.sin(s + g / 2)]) @ n_hat) > 0
                             for s, g in gaps)
                if not facing:
                    continue
                _, sec2 = asm.contributions(x, both)
                if asm.gaps(sec2):
                    return False
    return True


_FRAMES: dict = {}


def belt_frame(recipe: TilingRecipe) -> BeltFrame:
    """Find a lattice direction along which mirrored belts fit their neighbors."""
    key = id(recipe)
    if key in _FRAMES and _FRAMES[key].recipe is recipe:
        return _FRAMES[key]
    asm = _Assembler(recipe.base, NodeRelationSet(()), True, 0)
    b1, b2 = (np.asarray(x) for x in recipe.lattice)
    for v, w in ((b1, b2), (b2, b1), (b1 + b2, b1), (b1 - b2, b1)):
        v_hat = v / np.linalg.norm(v)
        n_hat = np.array([-v_hat[1], v_hat[0]])
        if n_hat @ w < 0:
            n_hat = -n_hat
        mirror = Isometry(True, wrap(2 * direction(n_hat)), (0.0, 0.0))
        munit = [mirror.compose(g) for g in recipe.unit]
        X = np.concatenate([asm.pts(g) + k * v for g in recipe.unit for k in (-1, 0, 1)])
        Y = np.concatenate([asm.pts(g) for g in munit])
        cands = []
        for d in (X[:, None, :] - Y[None, :, :]).reshape(-1, 2):
            if d @ n_hat <= asm.tol:
                continue
            d = d - round(float(d @ v) / float(v @ v)) * v
            if not any(np.linalg.norm(d - c) < asm.tol for c in cands):
                cands.append(d)
        cands.sort(key=lambda d: (round(float(d @ n_hat), 9), round(float(np.linalg.norm(d)), 9)))
        for t in cands:
            if _connection_ok(asm, recipe.unit, munit, t, v, n_hat):
                frame = BeltFrame(recipe, _vec(v), _vec(w), _vec(t), mirror)
                _FRAMES[key] = frame
                return frame
    raise WrongFamily("no direction admits mirrored belt connections for this recipe")


def belt_tiling(p: PentagonShape, family: str, connection: Sequence[bool], height: int, width: int) -> Patch:
    """Vertical belts joined left to right; ``connection[j]`` mirrors belt j+1 relative to belt j.

    The last entry describes the join beyond the right edge of the window and
    only enters the metadata.
    """
    if len(connection) != width:
        raise ValueError("need one connection flag per belt")
    if height < 1 or width < 1:
        raise ValueError("height and width must be positive")
    type_id = _belt_type(p, family)
    recipe = representative_recipe(type_id, p)
    frame = belt_frame(recipe)
    V = render_vertices(p)
    v, w, t = (np.asarray(x) for x in (frame.v, frame.w, frame.t))
    M = frame.mirror.matrix()
    step = {(False, False): w, (False, True): t, (True, True): M @ w, (True, False): M @ t}
    states = [False]
    for c in connection[:-1]:
        states.append(states[-1] ^ bool(c))
    origin = np.zeros(2)
    tiles = []
    half = height // 2
    for j, s in enumerate(states):
        if j:
            origin = origin + step[(states[j - 1], s)]
        unit = [frame.mirror.compose(g) if s else g for g in recipe.unit]
        # keep the belts side by side rather than drifting along v
        mid = origin + np.mean([g.apply(V).mean(axis=0) for g in unit], axis=0)
        origin = origin - round(float(mid @ v) / float(v @ v)) * v
        for k in range(-half, height - half):
            for u, g in enumerate(unit):
                h = g.translated(origin + k * v)
                tiles.append(PlacedTile(h.apply(V), h, u, (j, k)))
    polys = np.array([x.vertices for x in tiles])
    meta = {
        "kind": "belt",
        "family": family,
        "connection": [bool(c) for c in connection],
        "mirrored_belts": states,
        "belt_vector": list(frame.v),
    }
    return Patch(p, tiles, _bbox(polys), recipe, meta)


# ------------------------------------------------------------------ SVG


def patch_svg(patch: Patch, size: float = 800.0) -> str:
    """One path per tile; reflected tiles get their own class and an asterisk."""
    x0, y0, x1, y1 = patch.window
    pad = 0.02 * max(x1 - x0, y1 - y0)
    scale = size / max(x1 - x0 + 2 * pad, y1 - y0 + 2 * pad)
    W = (x1 - x0 + 2 * pad) * scale
    H = (y1 - y0 + 2 * pad) * scale

    def tr(pt):
        return (pt[0] - x0 + pad) * scale, (y1 + pad - pt[1]) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.1f}" height="{H:.1f}" viewBox="0 0 {W:.1f} {H:.1f}">',
        "<style>.direct{fill:#f2f2f2}.reflected{fill:#bcd4e6}.unit{stroke:#333;stroke-width:2}"
        "path{stroke:#555;stroke-width:0.7}text{font:bold 14px sans-serif;text-anchor:middle}</style>",
    ]
    home = (0, 0)
    for tile in patch.tiles:
        pts = [tr(q) for q in tile.vertices]
        d = "M" + " L".join(f"{a:.3f},{b:.3f}" for a, b in pts) + " Z"
        cls = "reflected" if tile.isometry.reflected else "direct"
        if tile.lattice_coords == home:
            cls += " unit"
        out.append(f'<path class="{cls}" d="{d}"/>')
        if tile.isometry.reflected:
            cx, cy = tr(tile.vertices.mean(axis=0))
            out.append(f'<text x="{cx:.3f}" y="{cy + 5:.3f}">*</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
