"""Convex pentagon shapes up to similarity.

A shape is stored as five interior angles (radians) and five edge lengths.
Vertex ``i`` carries ``angles[i]`` and edge ``i`` runs from vertex ``i`` to
vertex ``i + 1`` (indices mod 5), counterclockwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ANGLE_TOL = 1e-9
CLOSURE_TOL = 1e-9
CLASSIFY_TOL = 1e-6
KEY_TOL = 1e-7
DEGENERATE_EDGE = 1e-9

LETTERS = "ABCDE"


class PentagonError(ValueError):
    pass


class BadAngleSum(PentagonError):
    pass


class NotClosed(PentagonError):
    pass


class NonConvex(PentagonError):
    pass


class DegenerateEdge(PentagonError):
    pass


@dataclass(frozen=True, order=True)
class Labeling:
    """One of the 10 relabelings of a pentagon (rotations and reflections).

    Under ``Labeling(r, False)`` new vertex ``i`` is old vertex ``i + r``;
    under ``Labeling(r, True)`` it is old vertex ``r - i``, which reverses
    the orientation (a mirror image read counterclockwise).
    """

    rotation: int = 0
    reflected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", self.rotation % 5)

    def vertex_map(self) -> list[int]:
        r = self.rotation
        if self.reflected:
            return [(r - i) % 5 for i in range(5)]
        return [(r + i) % 5 for i in range(5)]

    def edge_map(self) -> list[int]:
        r = self.rotation
        if self.reflected:
            return [(r - i - 1) % 5 for i in range(5)]
        return [(r + i) % 5 for i in range(5)]

    def compose(self, other: "Labeling") -> "Labeling":
        """Labeling equivalent to applying ``self`` first, then ``other``."""
        first, second = self.vertex_map(), other.vertex_map()
        combined = [first[second[i]] for i in range(5)]
        for g in ALL_LABELINGS:
            if g.vertex_map() == combined:
                return g
        raise AssertionError("labelings are closed under composition")

    def inverse(self) -> "Labeling":
        for g in ALL_LABELINGS:
            if self.compose(g) == IDENTITY:
                return g
        raise AssertionError("every labeling has an inverse")


ALL_LABELINGS: tuple[Labeling, ...] = tuple(
    Labeling(r, refl) for refl in (False, True) for r in range(5)
)
IDENTITY = Labeling(0, False)


def _headings(angles: Sequence[float]) -> np.ndarray:
    ext = math.pi - np.asarray(angles, dtype=float)
    return np.concatenate([[0.0], np.cumsum(ext[1:5])])


def closure_vector(angles: Sequence[float], edges: Sequence[float]) -> np.ndarray:
    """Sum of the edge vectors when walking the boundary; zero for a closed shape."""
    h = _headings(angles)
    e = np.asarray(edges, dtype=float)
    return np.array([e @ np.cos(h), e @ np.sin(h)])


def closure_residual(angles: Sequence[float], edges: Sequence[float]) -> float:
    e = np.asarray(edges, dtype=float)
    return float(np.linalg.norm(closure_vector(angles, e)) / e.sum())


@dataclass(frozen=True)
class PentagonShape:
    angles: tuple[float, ...]
    edges: tuple[float, ...]
    mirrored: bool = field(default=False, compare=False)
    # serialized form this shape was read from, reused so re-writing is byte-stable
    _source: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def angles_deg(self) -> tuple[float, ...]:
        return tuple(math.degrees(a) for a in self.angles)

    def relabel(self, g: Labeling) -> "PentagonShape":
        return relabel(self, g)

    def vertices(self) -> np.ndarray:
        return render_vertices(self)

    def area(self) -> float:
        v = render_vertices(self)
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def diameter(self) -> float:
        v = render_vertices(self)
        return max(float(np.linalg.norm(p - q)) for p in v for q in v)

    def to_json(self) -> dict:
        if self._source is not None:
            return {"angles_deg": list(self._source[0]), "edges": list(self._source[1])}
        return {
            "angles_deg": [round(a, 12) for a in self.angles_deg],
            "edges": [round(e, 12) for e in self.edges],
        }

    def __repr__(self) -> str:
        ang = ", ".join(f"{a:.4f}" for a in self.angles_deg)
        ed = ", ".join(f"{e:.4f}" for e in self.edges)
        return f"PentagonShape(angles_deg=({ang}), edges=({ed}))"


@dataclass(frozen=True)
class CanonicalPentagon:
    shape: PentagonShape
    labeling: Labeling

    def key(self) -> np.ndarray:
        return shape_key(self.shape)


def relabel(p: PentagonShape, g: Labeling) -> PentagonShape:
    vm, em = g.vertex_map(), g.edge_map()
    return PentagonShape(
        tuple(p.angles[i] for i in vm), tuple(p.edges[i] for i in em), p.mirrored
    )


def shape_key(p: PentagonShape) -> np.ndarray:
    """Angles followed by edges scaled so edge 0 is one."""
    e = np.asarray(p.edges, dtype=float)
    return np.concatenate([np.asarray(p.angles, dtype=float), e / e[0]])


def _key_less(a: np.ndarray, b: np.ndarray, tol: float = KEY_TOL) -> bool:
    for x, y in zip(a, b):
        if abs(x - y) > tol:
            return x < y
    # every component within tolerance; fall back to exact comparison
    return tuple(a) < tuple(b)


def canonical_labeling(p: PentagonShape) -> Labeling:
    best_g, best_key = None, None
    for g in ALL_LABELINGS:
        k = shape_key(relabel(p, g))
        if best_key is None or _key_less(k, best_key):
            best_g, best_key = g, k
    return best_g


def _normalized(angles: Sequence[float], edges: Sequence[float], mirrored=False) -> PentagonShape:
    """Project onto exact angle sum and closure, then scale the canonical first edge to 1."""
    a = np.asarray(angles, dtype=float)
    a = a + (3 * math.pi - a.sum()) / 5
    e = np.asarray(edges, dtype=float)
    h = _headings(a)
    H = np.vstack([np.cos(h), np.sin(h)])
    e = e - H.T @ np.linalg.solve(H @ H.T, H @ e)
    raw = PentagonShape(tuple(float(x) for x in a), tuple(float(x) for x in e), mirrored)
    g = canonical_labeling(raw)
    first = e[g.edge_map()[0]]
    return PentagonShape(raw.angles, tuple(float(x / first) for x in e), mirrored)


def pentagon_from_radians(
    angles: Sequence[float], edges: Sequence[float], closure_tol: float = CLOSURE_TOL
) -> PentagonShape:
    a = [float(x) for x in angles]
    e = [float(x) for x in edges]
    if len(a) != 5 or len(e) != 5:
        raise PentagonError("a pentagon needs exactly five angles and five edges")
    for x in a:
        if not (ANGLE_TOL < x < math.pi - ANGLE_TOL):
            raise NonConvex(f"angle {math.degrees(x):.9g} deg is not strictly between 0 and 180")
    if min(e) <= 0:
        raise DegenerateEdge("edge lengths must be positive")
    if abs(sum(a) - 3 * math.pi) > max(closure_tol, ANGLE_TOL) * 5:
        raise BadAngleSum(f"angle sum is {math.degrees(sum(a)):.9g} deg, expected 540")
    res = closure_residual(a, e)
    if res > closure_tol:
        raise NotClosed(f"closure residual {res:.3g} exceeds {closure_tol:g}")
    return _normalized(a, e)


def pentagon_from_angles_edges(
    angles_deg: Sequence[float], edges: Sequence[float], closure_tol: float = CLOSURE_TOL
) -> PentagonShape:
    """Build a validated shape from angles in degrees and edge lengths.

    >>> p = pentagon_from_angles_edges([108] * 5, [1] * 5)
    >>> round(p.angles_deg[0], 9)
    108.0
    """
    a = list(angles_deg)
    if len(a) != 5:
        raise PentagonError("a pentagon needs exactly five angles")
    for x in a:
        if not (0 < x < 180):
            raise NonConvex(f"angle {x} deg is not strictly between 0 and 180")
    if abs(sum(a) - 540.0) > math.degrees(max(closure_tol, ANGLE_TOL) * 5):
        raise BadAngleSum(f"angle sum is {sum(a):.9g} deg, expected 540")
    return pentagon_from_radians([math.radians(x) for x in a], edges, closure_tol)


def pentagon_from_vertices(points: Iterable[Sequence[float]]) -> PentagonShape:
    pts = np.asarray([list(p) for p in points], dtype=float)
    if pts.shape != (5, 2):
        raise PentagonError("expected five planar points")
    x, y = pts[:, 0], pts[:, 1]
    signed = 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    mirrored = bool(signed < 0)
    if mirrored:
        pts = pts[[0, 4, 3, 2, 1]]
    edges_vec = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges_vec, axis=1)
    if lengths.min() < DEGENERATE_EDGE * lengths.max():
        raise DegenerateEdge("two consecutive vertices coincide")
    angles = []
    for i in range(5):
        u = pts[(i - 1) % 5] - pts[i]
        w = pts[(i + 1) % 5] - pts[i]
        cross = w[0] * u[1] - w[1] * u[0]
        ang = math.atan2(cross, float(np.dot(u, w)))
        if ang <= ANGLE_TOL or ang >= math.pi - ANGLE_TOL:
            raise NonConvex(f"vertex {i} has interior angle {math.degrees(ang % (2 * math.pi)):.9g} deg")
        angles.append(ang)
    if abs(sum(angles) - 3 * math.pi) > 1e-6:
        raise NonConvex("vertices do not bound a simple convex pentagon")
    shape = _normalized(angles, lengths)
    return PentagonShape(shape.angles, shape.edges, mirrored)


def render_vertices(p: PentagonShape) -> np.ndarray:
    """Vertex coordinates with vertex 0 at the origin and edge 0 along +x."""
    h = _headings(p.angles)
    steps = np.asarray(p.edges)[:, None] * np.column_stack([np.cos(h), np.sin(h)])
    return np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)[:4]])


def pentagon_from_json(obj: dict, closure_tol: float = CLOSURE_TOL) -> PentagonShape:
    if "vertices" in obj:
        return pentagon_from_vertices(obj["vertices"])
    if "angles_deg" in obj and "edges" in obj:
        p = pentagon_from_angles_edges(obj["angles_deg"], obj["edges"], closure_tol)
        src = (tuple(float(x) for x in obj["angles_deg"]), tuple(float(x) for x in obj["edges"]))
        fresh = p.to_json()
        drift = max(abs(x - y) for x, y in zip(fresh["angles_deg"] + fresh["edges"], src[0] + src[1]))
        if drift < 1e-10:
            object.__setattr__(p, "_source", src)
        return p
    raise PentagonError("pentagon JSON needs 'angles_deg' and 'edges', or 'vertices'")


def canonical_form(p: PentagonShape) -> CanonicalPentagon:
    g = canonical_labeling(p)
    q = relabel(p, g)
    e = np.asarray(q.edges)
    q = PentagonShape(q.angles, tuple(float(x) for x in e / e[0]))
    return CanonicalPentagon(q, g)


def key_distance(p: PentagonShape, q: PentagonShape) -> float:
    """Smallest max-norm distance between the canonical key of p and any relabeling of q."""
    kp = canonical_form(p).key()
    return min(float(np.max(np.abs(kp - shape_key(relabel(q, g))))) for g in ALL_LABELINGS)


def similar(p: PentagonShape, q: PentagonShape, tol: float = CLASSIFY_TOL) -> bool:
    return key_distance(p, q) <= tol


def symmetries(p: PentagonShape, tol: float = CLASSIFY_TOL) -> list[Labeling]:
    """Labelings that map the shape onto itself (always contains the identity)."""
    k = shape_key(p)
    return [g for g in ALL_LABELINGS if np.max(np.abs(shape_key(relabel(p, g)) - k)) <= tol]


def is_line_symmetric(p: PentagonShape, tol: float = CLASSIFY_TOL) -> bool:
    return any(g.reflected for g in symmetries(p, tol))


def regular_pentagon() -> PentagonShape:
    return pentagon_from_angles_edges([108.0] * 5, [1.0] * 5)
