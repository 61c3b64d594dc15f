"""Constraint systems over the ten shape unknowns and their numerical solution.

Every tile condition is linear in the angles or in the edges, so only the
two closure equations are nonlinear.  A system is therefore reduced to an
affine parametrization ``angles = a0 + N t`` and ``edges = e0 + M s`` and
the closure is solved in the reduced coordinates ``(t, s)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .pentagon import PentagonShape, pentagon_from_radians

CONVERGED = 1e-12
CONVEX_MARGIN = 1e-3
DEDUPE_RADIUS = 1e-5

# h = HEAD_C + HEAD_G @ angles gives the direction of every edge
HEAD_G = -np.tril(np.ones((5, 5)), 0)
HEAD_G[:, 0] = 0.0
HEAD_C = np.pi * np.arange(5, dtype=float)


class ConvergenceFailure(RuntimeError):
    pass


def _null_space(A: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if A.shape[0] == 0:
        return np.eye(A.shape[1])
    u, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vt[rank:].T


def _affine(A: np.ndarray, b: np.ndarray):
    """Particular solution and null-space basis of A x = b, or None if inconsistent."""
    x0, *_ = np.linalg.lstsq(A, b, rcond=None)
    if A.shape[0] and np.max(np.abs(A @ x0 - b)) > 1e-10:
        return None
    return x0, _null_space(A)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear angle rows (radians) and linear edge rows plus closure.

    ``angle_rows @ angles = angle_rhs`` and ``edge_rows @ edges = edge_rhs``,
    with indices in the internal vertex/edge order.  The angle sum and the
    scale pin ``edges[0] = 1`` are always appended.
    """

    angle_rows: np.ndarray
    angle_rhs: np.ndarray
    edge_rows: np.ndarray
    edge_rhs: np.ndarray
    label: str = ""

    @staticmethod
    def build(angle_rows=(), angle_rhs=(), edge_rows=(), edge_rhs=(), label=""):
        ar = np.asarray(angle_rows, dtype=float).reshape(-1, 5)
        er = np.asarray(edge_rows, dtype=float).reshape(-1, 5)
        return ConstraintSystem(
            ar, np.asarray(angle_rhs, dtype=float).reshape(-1),
            er, np.asarray(edge_rhs, dtype=float).reshape(-1), label,
        )

    def combine(self, other: "ConstraintSystem", label: str = "") -> "ConstraintSystem":
        return ConstraintSystem(
            np.vstack([self.angle_rows, other.angle_rows]),
            np.concatenate([self.angle_rhs, other.angle_rhs]),
            np.vstack([self.edge_rows, other.edge_rows]),
            np.concatenate([self.edge_rhs, other.edge_rhs]),
            label or self.label,
        )

    @property
    def n_equations(self) -> int:
        return len(self.angle_rhs) + len(self.edge_rhs) + 4

    n_unknowns = 10

    def full_angle_system(self):
        A = np.vstack([self.angle_rows, np.ones((1, 5))])
        b = np.concatenate([self.angle_rhs, [3 * np.pi]])
        return A, b

    def full_edge_system(self):
        pin = np.zeros((1, 5))
        pin[0, 0] = 1.0
        A = np.vstack([self.edge_rows, pin])
        b = np.concatenate([self.edge_rhs, [1.0]])
        return A, b

    def reduced(self):
        ang = _affine(*self.full_angle_system())
        edg = _affine(*self.full_edge_system())
        if ang is None or edg is None:
            return None
        return Reduced(ang[0], ang[1], edg[0], edg[1])

    def residuals(self, angles, edges) -> np.ndarray:
        a = np.asarray(angles, dtype=float)
        e = np.asarray(edges, dtype=float)
        e = e / e[0]
        h = HEAD_C + HEAD_G @ a
        return np.concatenate([
            self.angle_rows @ a - self.angle_rhs,
            [a.sum() - 3 * np.pi],
            self.edge_rows @ e - self.edge_rhs,
            [e @ np.cos(h), e @ np.sin(h)],
        ])


@dataclass(frozen=True)
class Reduced:
    a0: np.ndarray
    N: np.ndarray
    e0: np.ndarray
    M: np.ndarray

    @property
    def ka(self) -> int:
        return self.N.shape[1]

    @property
    def ke(self) -> int:
        return self.M.shape[1]

    def split(self, z):
        return z[..., : self.ka], z[..., self.ka:]

    def unpack(self, z):
        t, s = self.split(z)
        return self.a0 + t @ self.N.T, self.e0 + s @ self.M.T

    def closure(self, z):
        a, e = self.unpack(z)
        h = HEAD_C + a @ HEAD_G.T
        return np.stack([np.sum(e * np.cos(h), -1), np.sum(e * np.sin(h), -1)], -1)

    def jacobian(self, z):
        a, e = self.unpack(z)
        h = HEAD_C + a @ HEAD_G.T
        c, s = np.cos(h), np.sin(h)
        GN = HEAD_G @ self.N
        jt_re = (-e * s) @ GN
        jt_im = (e * c) @ GN
        js_re = c @ self.M
        js_im = s @ self.M
        return np.stack([np.concatenate([jt_re, js_re], -1), np.concatenate([jt_im, js_im], -1)], -2)

    def start(self, angles, edges):
        t = (angles - self.a0) @ self.N
        s = (edges - self.e0) @ self.M
        return np.concatenate([t, s], -1)


def _pinv_step(J, F):
    # batched minimum-norm least-squares step
    return -np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-12), F)


def newton(red: Reduced, z0: np.ndarray, iters: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Damped Gauss-Newton on the closure, batched over rows of z0."""
    z = np.array(z0, dtype=float)
    if z.shape[1] == 0:
        F = red.closure(z)
        return z, np.linalg.norm(F, axis=1)
    F = red.closure(z)
    r = np.linalg.norm(F, axis=1)
    alphas = np.array([1.0, 0.5, 0.25, 0.1, 0.03, 0.01])
    for _ in range(iters):
        active = r > CONVERGED * 1e-2
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        dz = _pinv_step(red.jacobian(z[idx]), F[idx])
        best_z, best_r, best_F = z[idx], r[idx], F[idx]
        for al in alphas:
            zc = z[idx] + al * dz
            Fc = red.closure(zc)
            rc = np.linalg.norm(Fc, axis=1)
            better = rc < best_r
            best_z = np.where(better[:, None], zc, best_z)
            best_F = np.where(better[:, None], Fc, best_F)
            best_r = np.where(better, rc, best_r)
        z[idx], F[idx], r[idx] = best_z, best_F, best_r
    return z, r


def random_starts(red: Reduced, n: int, rng: np.random.Generator) -> np.ndarray:
    ang = rng.dirichlet(np.full(5, 3.0), size=n) * 3 * np.pi
    ang = np.clip(ang, 0.2, np.pi - 0.2)
    ang *= 3 * np.pi / ang.sum(axis=1, keepdims=True)
    edg = rng.uniform(0.3, 2.0, size=(n, 5))
    return red.start(ang, edg)


def is_convex(angles, edges, margin: float = CONVEX_MARGIN) -> bool:
    a = np.asarray(angles)
    e = np.asarray(edges)
    return bool(np.all(a > margin) and np.all(a < np.pi - margin) and np.all(e > margin * e.max()))


def local_dimension(red: Reduced, z: np.ndarray) -> int:
    k = red.ka + red.ke
    if k == 0:
        return 0
    J = red.jacobian(z[None, :])[0]
    sv = np.linalg.svd(J, compute_uv=False)
    rank = int(np.sum(sv > 1e-8 * max(1.0, sv[0])))
    return k - rank


@dataclass
class Solution:
    shape: PentagonShape
    dimension: int
    residual: float


@dataclass
class SolveResult:
    solutions: list = field(default_factory=list)
    starts: int = 0
    converged: int = 0
    feasible_linear: bool = True


_VM = None
_EM = None


def labeling_keys(angles: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Shape keys of every labeling: array (..., 10, 10) of angles then edges over the first edge."""
    global _VM, _EM
    if _VM is None:
        from .pentagon import ALL_LABELINGS

        _VM = np.array([g.vertex_map() for g in ALL_LABELINGS])
        _EM = np.array([g.edge_map() for g in ALL_LABELINGS])
    a = angles[..., _VM]
    e = edges[..., _EM]
    return np.concatenate([a, e / e[..., :1]], axis=-1)


def solve(
    system: ConstraintSystem,
    starts: int = 200,
    seed: int = 0,
    margin: float = CONVEX_MARGIN,
    max_keep: int = 50,
    max_family: int = 5,
    tol: float = CONVERGED,
) -> SolveResult:
    """Multistart solve; converged strictly convex solutions, deduplicated."""
    red = system.reduced()
    out = SolveResult(starts=starts)
    if red is None:
        out.feasible_linear = False
        return out
    rng = np.random.default_rng(seed)
    z0 = random_starts(red, starts, rng)
    z, r = newton(red, z0)
    ok = np.nonzero(r < tol)[0]
    out.converged = int(len(ok))
    a_all, e_all = red.unpack(z)
    kept_keys = np.empty((0, 10, 10))
    for i in ok:
        a, e = a_all[i], e_all[i]
        if not is_convex(a, e, margin):
            continue
        k = labeling_keys(a, e)
        if len(kept_keys):
            d = np.abs(kept_keys - k[0]).max(axis=2).min(axis=1)
            if d.min() < DEDUPE_RADIUS:
                continue
        try:
            shape = pentagon_from_radians(a, e)
        except ValueError:
            continue
        kept_keys = np.concatenate([kept_keys, k[None]])
        dim = local_dimension(red, z[i])
        out.solutions.append(Solution(shape, dim, float(r[i])))
        if len(out.solutions) >= max_keep or (dim > 0 and len(out.solutions) >= max_family):
            break
    return out


def _interval_cos(lo: np.ndarray, hi: np.ndarray):
    """Elementwise enclosure of cos over [lo, hi]."""
    clo = np.minimum(np.cos(lo), np.cos(hi))
    chi = np.maximum(np.cos(lo), np.cos(hi))
    # maxima at 2k pi, minima at (2k+1) pi
    k_max = np.ceil(lo / (2 * np.pi))
    has_max = 2 * np.pi * k_max <= hi
    k_min = np.ceil((lo - np.pi) / (2 * np.pi))
    has_min = 2 * np.pi * k_min + np.pi <= hi
    chi = np.where(has_max, 1.0, chi)
    clo = np.where(has_min, -1.0, clo)
    return clo, chi


def _edge_ray(R):
    """The unique admissible edge vector (sum 1) when the relations leave one ray, else None.

    Returns an empty array when no positive edge vector exists on that ray.
    """
    if R.shape[0] == 0:
        return None
    key = R.tobytes()
    if key in _RAY_CACHE:
        return _RAY_CACHE[key]
    K = _null_space(R)
    out = None
    if K.shape[1] == 0:
        out = np.empty(0)
    elif K.shape[1] == 1:
        v = K[:, 0] / K[:, 0].sum() if abs(K[:, 0].sum()) > 1e-12 else None
        out = v if v is not None and v.min() > 0 else np.empty(0)
    _RAY_CACHE[key] = out
    return out


_RAY_CACHE: dict = {}


def _edges_feasible(R, clo, chi, slo, shi, edge_floor) -> bool:
    # variables: 5 edges with sum 1; closure must be reachable inside the interval box
    n = 5
    ray = _edge_ray(R)
    if ray is not None:
        if ray.size == 0 or ray.min() < edge_floor:
            return False
        return bool(ray @ clo <= 0 <= ray @ chi and ray @ slo <= 0 <= ray @ shi)
    A_ub = np.vstack([clo, -chi, slo, -shi])
    b_ub = np.zeros(4)
    A_eq = np.vstack([R, np.ones((1, n))]) if R.shape[0] else np.ones((1, n))
    b_eq = np.zeros(A_eq.shape[0])
    b_eq[-1] = 1.0
    res = linprog(np.zeros(n), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(edge_floor, None)] * n, method="highs")
    return res.status == 0


def certify_empty(
    system: ConstraintSystem,
    resolution_deg: float = 2.0,
    min_resolution_deg: float = 0.01,
    margin: float = CONVEX_MARGIN,
    edge_floor: float = 1e-4,
    max_cells: int = 200000,
) -> bool:
    """True if no strictly convex closed solution exists, proved by interval subdivision.

    The admissible angle polytope is covered by boxes in the reduced angle
    coordinates.  Each box yields interval enclosures of every edge heading;
    an LP then asks whether nonnegative edges obeying the edge relations can
    make both closure sums vanish for some headings in those intervals.
    Every box is bisected down to the resolution; boxes that are still
    feasible there are refined further, up to ``min_resolution_deg``, before
    the certificate gives up.
    """
    A, b = system.full_angle_system()
    ang = _affine(A, b)
    if ang is None:
        return True
    R = system.edge_rows
    if np.any(np.abs(system.edge_rhs) > 0):
        raise ValueError("certificates apply to homogeneous edge relations only")
    a0, N = ang
    lo_a, hi_a = margin, np.pi - margin
    ka = N.shape[1]
    if ka == 0:
        if np.any(a0 < lo_a) or np.any(a0 > hi_a):
            return True
        h = HEAD_C + HEAD_G @ a0
        return not _edges_feasible(R, np.cos(h), np.cos(h), np.sin(h), np.sin(h), edge_floor)
    # bounding box of the polytope in t coordinates
    A_ub = np.vstack([N, -N])
    b_ub = np.concatenate([hi_a - a0, a0 - lo_a])
    box_lo, box_hi = np.zeros(ka), np.zeros(ka)
    for j in range(ka):
        c = np.zeros(ka)
        c[j] = 1.0
        r1 = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * ka, method="highs")
        if r1.status == 2:
            return True
        r2 = linprog(-c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * ka, method="highs")
        box_lo[j], box_hi[j] = r1.x[j], r2.x[j]
    absN = np.abs(N)
    GN = HEAD_G @ N
    absGN = np.abs(GN)
    res = math.radians(resolution_deg)
    floor = math.radians(min_resolution_deg)
    stack = [((box_lo + box_hi) / 2, (box_hi - box_lo) / 2)]
    cells = 0
    while stack:
        c, r = stack.pop()
        cells += 1
        if cells > max_cells:
            return False
        a_c = a0 + N @ c
        a_r = absN @ r
        if np.any(a_c + a_r < lo_a) or np.any(a_c - a_r > hi_a):
            continue
        # the box must also meet the polytope; cheap test via LP on the box
        h_c = HEAD_C + HEAD_G @ a0 + GN @ c
        h_r = absGN @ r
        clo, chi = _interval_cos(h_c - h_r, h_c + h_r)
        slo, shi = _interval_cos(h_c - h_r - np.pi / 2, h_c + h_r - np.pi / 2)
        width = np.max(2 * a_r)
        if width > res:
            pass
        elif not _edges_feasible(R, clo, chi, slo, shi, edge_floor):
            continue
        elif width <= floor:
            return False
        # bisect the coordinate contributing most to the angle widths
        contrib = (absN * r[None, :]).max(axis=0)
        j = int(np.argmax(contrib))
        r2 = r.copy()
        r2[j] /= 2
        for sgn in (-1, 1):
            c2 = c.copy()
            c2[j] += sgn * r2[j]
            stack.append((c2, r2))
    return True
