"""Planar isometries and small convex-polygon predicates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2 * math.pi


def wrap(angle: float) -> float:
    """Angle reduced to [0, 2 pi)."""
    a = math.fmod(angle, TWO_PI)
    return a + TWO_PI if a < 0 else a


def direction(v) -> float:
    return wrap(math.atan2(v[1], v[0]))


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Isometry:
    """x -> R(rotation) @ F x + translation, where F mirrors across the x-axis when reflected."""

    reflected: bool = False
    rotation: float = 0.0
    translation: tuple[float, float] = (0.0, 0.0)

    def matrix(self) -> np.ndarray:
        m = rotation_matrix(self.rotation)
        if self.reflected:
            m = m @ np.diag([1.0, -1.0])
        return m

    def apply(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ self.matrix().T + np.asarray(self.translation)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        m = self.matrix() @ other.matrix()
        t = self.matrix() @ np.asarray(other.translation) + np.asarray(self.translation)
        return Isometry.from_matrix(m, t)

    def inverse(self) -> "Isometry":
        m = self.matrix().T
        return Isometry.from_matrix(m, -m @ np.asarray(self.translation))

    def translated(self, v) -> "Isometry":
        t = np.asarray(self.translation) + np.asarray(v, dtype=float)
        return Isometry(self.reflected, self.rotation, (float(t[0]), float(t[1])))

    @property
    def determinant(self) -> int:
        return -1 if self.reflected else 1

    @staticmethod
    def from_matrix(m: np.ndarray, t) -> "Isometry":
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        refl = det < 0
        rot = math.atan2(m[1, 0], m[0, 0])
        return Isometry(bool(refl), wrap(rot), (float(t[0]), float(t[1])))

    def to_json(self) -> dict:
        return {
            "reflected": self.reflected,
            "rotation_deg": round(math.degrees(self.rotation), 12),
            "translation": [round(self.translation[0], 12), round(self.translation[1], 12)],
        }

    @staticmethod
    def from_json(obj: dict) -> "Isometry":
        t = obj["translation"]
        return Isometry(bool(obj["reflected"]), math.radians(obj["rotation_deg"]), (float(t[0]), float(t[1])))


def polygon_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def ccw(pts: np.ndarray) -> np.ndarray:
    return pts if polygon_area(pts) > 0 else pts[::-1]


def overlapping(poly: np.ndarray, others: np.ndarray, eps: float = 1e-9) -> np.ndarray:
    """Separating-axis test of one convex polygon against a stack of convex polygons.

    Returns a boolean per polygon in ``others`` telling whether the interiors
    overlap by more than ``eps`` along every candidate axis.
    """
    if len(others) == 0:
        return np.zeros(0, dtype=bool)
    P = poly[None, :, :]
    Q = others
    axes_p = np.broadcast_to(_normals(poly)[None], (len(Q), poly.shape[0], 2))
    axes_q = _normals_stack(Q)
    axes = np.concatenate([axes_p, axes_q], axis=1)  # (n, k, 2)
    pp = np.einsum("nkd,nvd->nkv", axes, np.broadcast_to(P, (len(Q),) + poly.shape))
    qq = np.einsum("nkd,nvd->nkv", axes, Q)
    sep = (pp.max(axis=2) <= qq.min(axis=2) + eps) | (qq.max(axis=2) <= pp.min(axis=2) + eps)
    return ~sep.any(axis=1)


def _normals(poly: np.ndarray) -> np.ndarray:
    d = np.roll(poly, -1, axis=0) - poly
    n = np.stack([-d[:, 1], d[:, 0]], axis=1)
    return n / np.linalg.norm(n, axis=1, keepdims=True)


def _normals_stack(polys: np.ndarray) -> np.ndarray:
    d = np.roll(polys, -1, axis=1) - polys
    n = np.stack([-d[..., 1], d[..., 0]], axis=-1)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def point_on_segment(x, p, q, tol: float) -> bool:
    """True when x lies strictly inside segment pq (not within tol of an endpoint)."""
    d = q - p
    L2 = float(d @ d)
    t = float((x - p) @ d) / L2
    L = math.sqrt(L2)
    if t * L <= tol or (1 - t) * L <= tol:
        return False
    off = x - (p + t * d)
    return float(off @ off) <= tol * tol


def reduce_basis(b1, b2):
    """Lagrange-Gauss reduction of a planar lattice basis."""
    b1 = np.asarray(b1, dtype=float)
    b2 = np.asarray(b2, dtype=float)
    for _ in range(200):
        if b1 @ b1 > b2 @ b2:
            b1, b2 = b2, b1
        mu = round(float(b1 @ b2) / float(b1 @ b1))
        if mu == 0:
            break
        b2 = b2 - mu * b1
    if b1[0] * b2[1] - b1[1] * b2[0] < 0:
        b2 = -b2
    return b1, b2
