"""Measurements on finite patches: contacts, coronas, nodes, periods, audits.

Every statistic here is a property of the finite patch.  In particular the
corona-class count is the number of distinct first-corona shapes among tiles
whose corona lies fully inside the patch; it is evidence for, not a proof of,
the number of transitivity classes of the infinite tiling.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .catalog import VERTEX_LETTERS, membership
from .geometry import TWO_PI, Isometry, ccw, overlapping, reduce_basis
from .nodes import FLAT
from .pentagon import PentagonShape, is_line_symmetric, render_vertices, symmetries
from .tiling import (
    MAX_UNIT,
    NoRecipeFound,
    Patch,
    _on_edges,
    covered_gaps,
    edge_to_edge_recipe,
    generate_patch,
    node_at,
    safe_window,
    validate_patch,
)

CORONA_NOTE = "corona-class count (finite patch)"
NODE_TOL = 1e-6
E2E_TYPES = frozenset({1, 2, 4, 5, 6, 7, 8, 9})


class IncompleteCorona(ValueError):
    pass


class InvalidNode(ValueError):
    pass


# ------------------------------------------------------------- helpers


class _Geometry:
    """Cached arrays and neighbor queries for one patch."""

    def __init__(self, patch: Patch):
        self.patch = patch
        self.P = np.array([t.vertices for t in patch.tiles])
        self.R = np.array([t.isometry.reflected for t in patch.tiles], dtype=bool)
        self.angles = np.asarray(patch.base.angles)
        V = render_vertices(patch.base)
        self.edge = float(np.mean(np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1)))
        self.diam = patch.base.diameter()
        self.tol = NODE_TOL * self.edge
        self.centroids = self.P.mean(axis=1)
        self.tree = cKDTree(self.centroids)
        self._window = None
        self._interior = None

    def near(self, x, radius=None) -> np.ndarray:
        r = self.diam + self.tol if radius is None else radius
        return np.array(sorted(self.tree.query_ball_point(x, r)), dtype=int)

    def node(self, x, idx=None):
        idx = self.near(x) if idx is None else idx
        return node_at(x, self.P[idx], self.R[idx], self.angles, self.tol, self.diam)

    def touching(self, i: int) -> np.ndarray:
        idx = self.near(self.centroids[i], 2 * self.diam)
        polys = np.array([ccw(q) for q in self.P[idx]])
        hit = overlapping(ccw(self.P[i]), polys, eps=-self.tol)
        return idx[hit]

    def boundary_points(self, i: int, members: np.ndarray) -> list:
        """Corners of tile i and foreign corners lying inside its edges."""
        pts = list(self.P[i])
        for j in members:
            if j == i:
                continue
            for y in self.P[j]:
                if _on_edges(y, self.P[i][None], self.tol).any():
                    pts.append(y)
        return pts

    def window(self):
        if self._window is None:
            from shapely import prepared

            w, _ = safe_window(self.patch)
            self._window = (w, prepared.prep(w))
        return self._window

    def interior(self) -> np.ndarray:
        if self._interior is None:
            from shapely.geometry import Point

            _, pw = self.window()
            self._interior = np.array([pw.contains(Point(c)) for c in self.centroids], dtype=bool)
        return self._interior


def _geometry(patch: Patch) -> _Geometry:
    g = patch.meta.get("_geometry")
    if g is None or g.patch is not patch or len(g.P) != len(patch.tiles):
        g = _Geometry(patch)
        patch.meta["_geometry"] = g
    return g


# ------------------------------------------------------- simple flags


def uses_reflections(patch: Patch) -> bool:
    """Whether both orientations occur (so the minority are reflected tiles)."""
    n_ref = sum(t.isometry.reflected for t in patch.tiles)
    return 0 < min(n_ref, len(patch.tiles) - n_ref)


def is_edge_to_edge(patch: Patch) -> bool:
    """No corner of any tile lies inside an edge of an interior tile."""
    geo = _geometry(patch)
    for i in np.flatnonzero(geo.interior()):
        for j in geo.touching(i):
            if j == i:
                continue
            for y in geo.P[j]:
                if _on_edges(y, geo.P[i][None], geo.tol).any():
                    return False
    return True


# ----------------------------------------------------------- coronas


@dataclass
class Corona:
    center: int
    members: list[int]
    polygons: np.ndarray  # member tiles in the frame where the center is the base tile

    def matches(self, other: "Corona", symmetries_, tol: float) -> bool:
        if len(self.members) != len(other.members):
            return False
        B = other.polygons
        cB = B.mean(axis=1)
        for S in symmetries_:
            A = S.apply(self.polygons.reshape(-1, 2)).reshape(self.polygons.shape)
            if _same_polygons(A, B, cB, tol):
                return True
        return False


def _same_polygons(A: np.ndarray, B: np.ndarray, cB: np.ndarray, tol: float) -> bool:
    used = np.zeros(len(B), dtype=bool)
    for a in A:
        d = np.linalg.norm(cB - a.mean(axis=0), axis=1)
        ok = False
        for j in np.flatnonzero((d < tol * 10) & ~used):
            dv = np.linalg.norm(a[:, None, :] - B[j][None, :, :], axis=2).min(axis=1)
            if dv.max() < tol * 10:
                used[j] = ok = True
                break
        if not ok:
            return False
    return True


def _complete(geo: _Geometry, i: int, members: np.ndarray) -> bool:
    for x in geo.boundary_points(i, members):
        _, sectors = node_at(x, geo.P[members], geo.R[members], geo.angles, geo.tol, geo.diam)
        if covered_gaps(sectors):
            return False
    return True


def first_corona(patch: Patch, tile: int) -> Corona:
    """The tile with every tile sharing a boundary point with it, in the tile's own frame."""
    geo = _geometry(patch)
    members = geo.touching(tile)
    if not _complete(geo, tile, members):
        raise IncompleteCorona(f"tile {tile} is too close to the patch boundary")
    inv = patch.tiles[tile].isometry.inverse()
    polys = inv.apply(geo.P[members].reshape(-1, 2)).reshape(len(members), 5, 2)
    return Corona(tile, [int(j) for j in members], polys)


def _fit_isometry(src: np.ndarray, dst: np.ndarray) -> Isometry:
    """Least-squares isometry (reflection allowed) taking src onto dst."""
    cs, cd = src.mean(axis=0), dst.mean(axis=0)
    H = (src - cs).T @ (dst - cd)
    U, _, Vt = np.linalg.svd(H)
    Rm = Vt.T @ U.T
    t = cd - Rm @ cs
    return Isometry.from_matrix(Rm, t)


def base_symmetries(base: PentagonShape) -> list[Isometry]:
    """Isometries of the rendered base tile onto itself."""
    V = render_vertices(base)
    out = []
    for g in symmetries(base):
        vm = g.vertex_map()
        out.append(_fit_isometry(V, V[vm]))
    return out or [Isometry()]


@dataclass
class CoronaClasses:
    k: int
    representatives: list[Corona]
    members: list[list[int]]
    interior_tiles: int

    @property
    def note(self) -> str:
        return CORONA_NOTE


def corona_classes(patch: Patch) -> CoronaClasses:
    """Group complete first coronas up to isometry, reflections included."""
    geo = _geometry(patch)
    syms = base_symmetries(patch.base)
    reps: list[Corona] = []
    groups: list[list[int]] = []
    complete = 0
    for i in range(len(patch.tiles)):
        try:
            c = first_corona(patch, i)
        except IncompleteCorona:
            continue
        complete += 1
        for r, grp in zip(reps, groups):
            if c.matches(r, syms, geo.tol):
                grp.append(i)
                break
        else:
            reps.append(c)
            groups.append([i])
    if not reps:
        raise IncompleteCorona("no tile has a complete first corona in this patch")
    return CoronaClasses(len(reps), reps, groups, complete)


# ------------------------------------------------------------- nodes


def format_node(counts) -> list[str]:
    letters = []
    for i in range(5):
        letters += [VERTEX_LETTERS[i]] * int(counts[i])
    return letters


def vertex_spectrum(patch: Patch) -> Counter:
    """Compositions met at the nodes inside the safe window, with multiplicity.

    Keys are 6-tuples: corner counts per base vertex then the flat marker.
    """
    geo = _geometry(patch)
    from shapely.geometry import Point

    _, pw = geo.window()
    pts = geo.P.reshape(-1, 2)
    tree = cKDTree(pts)
    seen = np.zeros(len(pts), dtype=bool)
    spectrum: Counter = Counter()
    for a in range(len(pts)):
        if seen[a]:
            continue
        group = tree.query_ball_point(pts[a], geo.tol)
        seen[group] = True
        x = pts[group].mean(axis=0)
        if not pw.contains(Point(x)):
            continue
        counts, _ = geo.node(x)
        total = float(np.dot(counts[:5], geo.angles)) + math.pi * counts[FLAT]
        if abs(total - TWO_PI) > NODE_TOL:
            raise InvalidNode(
                f"node at ({x[0]:.6f}, {x[1]:.6f}) collects {math.degrees(total):.6f} deg "
                f"from {'+'.join(format_node(counts)) or 'nothing'}"
            )
        spectrum[tuple(counts)] += 1
    return spectrum


def spectrum_json(spectrum: Counter, angles) -> list[dict]:
    out = []
    for counts, n in sorted(spectrum.items()):
        flat = counts[FLAT] > 0
        out.append({
            "composition": format_node(counts),
            "flat": flat,
            "sum_deg": round(float(np.degrees(np.dot(counts[:5], angles))), 9),
            "count": n,
        })
    return out


# ------------------------------------------------------- periodicity


@dataclass
class Periodicity:
    generators: list[tuple[float, float]]
    tested: int

    @property
    def lattice(self):
        return self.generators if len(self.generators) == 2 else None


def periodicity_check(patch: Patch, min_fraction: float = 0.5) -> Periodicity:
    """Pure translations taking the patch's tiles onto tiles of the patch.

    A tile is tested when its translated centroid falls inside some tile of
    the patch; the covering tile must then be the translated copy.  A
    candidate counts only when at least ``min_fraction`` of all tiles were
    tested, so far-reaching shifts that test almost nothing are not mistaken
    for periods.
    """
    geo = _geometry(patch)
    n = len(patch.tiles)
    if n < 2:
        return Periodicity([], 0)
    polys = np.array([ccw(q) for q in geo.P])
    lin = [(t.isometry.reflected, round(math.cos(t.isometry.rotation), 7), round(math.sin(t.isometry.rotation), 7))
           for t in patch.tiles]
    tr = np.array([t.isometry.translation for t in patch.tiles])
    mid = geo.centroids.mean(axis=0)
    c = int(np.argmin(np.linalg.norm(geo.centroids - mid, axis=1)))
    cands = [tr[j] - tr[c] for j in range(n) if j != c and lin[j] == lin[c]]
    cands.sort(key=lambda u: (round(float(np.linalg.norm(u)), 9), round(float(u[0]), 9), round(float(u[1]), 9)))
    tol = 10 * geo.tol
    valid = []
    tested_total = 0
    for u in cands:
        # candidates are sorted by length, so anything parallel to a period is a multiple of it
        if valid and _parallel(u, valid[0], tol):
            continue
        tested = 0
        ok = True
        for i in range(n):
            y = geo.centroids[i] + u
            host = [j for j in geo.near(y) if _inside(y, polys[j])]
            if not host:
                continue
            tested += 1
            j = host[0]
            if lin[j] != lin[i] or np.linalg.norm(tr[j] - tr[i] - u) > tol:
                ok = False
                break
        tested_total += tested
        if ok and tested >= min_fraction * n:
            valid.append(u)
            if len(valid) == 2:
                break
    gens = valid
    if len(gens) == 2:
        gens = list(reduce_basis(*gens))
    return Periodicity([(float(g[0]), float(g[1])) for g in gens], tested_total)


def _inside(y, poly) -> bool:
    d = np.roll(poly, -1, axis=0) - poly
    cross = d[:, 0] * (y[1] - poly[:, 1]) - d[:, 1] * (y[0] - poly[:, 0])
    return bool(np.all(cross > 0))


def _parallel(u, b, tol) -> bool:
    return abs(b[0] * u[1] - b[1] * u[0]) <= tol * np.linalg.norm(b)


# ------------------------------------------------------------ report


@dataclass
class AnalysisReport:
    edge_to_edge: bool
    uses_reflections: bool
    corona_classes: int
    nodes: list[dict]
    periods: list | None
    notes: list[str] = field(default_factory=lambda: [CORONA_NOTE])

    def to_json(self) -> dict:
        return {
            "edge_to_edge": self.edge_to_edge,
            "uses_reflections": self.uses_reflections,
            "corona_classes": self.corona_classes,
            "nodes": self.nodes,
            "periods": self.periods,
            "notes": list(self.notes),
        }


def analyze(patch: Patch) -> AnalysisReport:
    spectrum = vertex_spectrum(patch)
    per = periodicity_check(patch)
    return AnalysisReport(
        edge_to_edge=is_edge_to_edge(patch),
        uses_reflections=uses_reflections(patch),
        corona_classes=corona_classes(patch).k,
        nodes=spectrum_json(spectrum, patch.base.angles),
        periods=[list(g) for g in per.lattice] if per.lattice else None,
    )


# ------------------------------------------------------------- audits


@dataclass
class AuditEntry:
    shape: PentagonShape
    membership: list[int]
    recipe_found: bool
    unit_size: int | None = None
    uses_reflections: bool | None = None
    exhaustive: bool | None = None
    violation: bool = False
    excluded: str | None = None

    def to_json(self) -> dict:
        return {
            "shape": self.shape.to_json(),
            "membership": self.membership,
            "recipe_found": self.recipe_found,
            "unit_size": self.unit_size,
            "uses_reflections": self.uses_reflections,
            "exhaustive": self.exhaustive,
            "violation": self.violation,
            "excluded": self.excluded,
        }


@dataclass
class AuditReport:
    kind: str
    entries: list[AuditEntry]
    seed: int | None = None

    @property
    def violations(self) -> list[AuditEntry]:
        return [e for e in self.entries if e.violation]

    @property
    def found(self) -> list[AuditEntry]:
        return [e for e in self.entries if e.recipe_found]

    @property
    def inconclusive(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.recipe_found and e.excluded is None]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "shapes": len(self.entries),
            "recipes_found": len(self.found),
            "violations": len(self.violations),
            "inconclusive": len(self.inconclusive),
            "entries": [e.to_json() for e in self.entries],
        }


def theorem1_audit(shapes, max_unit: int = MAX_UNIT, budget: int = 50000, seed: int | None = None) -> AuditReport:
    """Edge-to-edge tilers must belong to one of Types 1, 2 and 4 to 9.

    For each shape an edge-to-edge recipe is searched from geometry alone.
    When one is found its patch is validated and re-checked for the
    edge-to-edge property before the membership test is applied.
    """
    entries = []
    for p in shapes:
        mem = sorted(membership(p))
        try:
            rec = edge_to_edge_recipe(p, max_unit=max_unit, budget=budget)
        except NoRecipeFound as exc:
            entries.append(AuditEntry(p, mem, False, exhaustive=exc.exhaustive))
            continue
        patch = generate_patch(rec, 2, 2)
        if not validate_patch(patch).ok() or not is_edge_to_edge(patch):
            raise AssertionError("assembler returned an invalid edge-to-edge recipe")
        entries.append(AuditEntry(
            p, mem, True, rec.unit_size, uses_reflections(patch),
            violation=not (set(mem) & E2E_TYPES),
        ))
    return AuditReport("theorem1", entries, seed)


def reflection_domain(p: PentagonShape) -> bool:
    """Membership only in Type 2, or in one of Types 7 to 13 but not in Type 1."""
    mem = membership(p)
    return mem == {2} or (bool(mem & set(range(7, 14))) and 1 not in mem)


def reflection_audit(shapes, max_unit: int = MAX_UNIT, budget: int = 50000, seed: int | None = None) -> AuditReport:
    """Search for tilings without reflected tiles under each member Type's node relations."""
    from .nodes import NodeRelationSet, type_node_set
    from .catalog import matching_labelings
    from .tiling import assemble_recipe

    entries = []
    for p in shapes:
        mem = sorted(membership(p))
        if is_line_symmetric(p):
            entries.append(AuditEntry(p, mem, False, excluded="line symmetric"))
            continue
        comps = set()
        for t in mem:
            for g in matching_labelings(p, t):
                comps.update(type_node_set(t, g).compositions)
        if not comps:
            entries.append(AuditEntry(p, mem, False, excluded="no Type membership"))
            continue
        nodes = NodeRelationSet(tuple(sorted(comps)))
        try:
            rec = assemble_recipe(p, nodes, max_unit=max_unit, allow_reflections=False, budget=budget)
        except NoRecipeFound as exc:
            entries.append(AuditEntry(p, mem, False, exhaustive=exc.exhaustive))
            continue
        entries.append(AuditEntry(p, mem, True, rec.unit_size, rec.uses_reflections()))
    return AuditReport("reflections", entries, seed)


def edge_to_edge_candidates(count: int, seed: int = 0) -> list[PentagonShape]:
    """Random members of Types 1, 2 and 4 to 9 whose parameters allow edge-to-edge tilings.

    Types 4 to 9 are drawn freely.  Type 1 is drawn with a = d and Type 2
    with c = e, the sub-families known to tile edge to edge.
    """
    from .catalog import NoSolution, random_member, sample_with
    from .system import ConvergenceFailure

    rng = np.random.default_rng(seed)
    families = (1, 2, 4, 5, 6, 7, 8, 9)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * max(count, 1):
            raise ConvergenceFailure("could not draw enough edge-to-edge candidates")
        t = families[len(out) % len(families)]
        try:
            if t == 1:
                prm = {"A": rng.uniform(90, 120), "B": rng.uniform(100, 135),
                       "D": rng.uniform(60, 85), "a": rng.uniform(0.6, 1.3)}
                p = sample_with(1, prm, ["a=d"], seed=int(rng.integers(1 << 31)))
            elif t == 2:
                prm = {"A": rng.uniform(90, 115), "B": rng.uniform(100, 125), "C": rng.uniform(100, 125)}
                p = sample_with(2, prm, ["c=e"], seed=int(rng.integers(1 << 31)))
            else:
                p = random_member(t, rng)
        except (NoSolution, ConvergenceFailure):
            continue
        out.append(p)
    return out
