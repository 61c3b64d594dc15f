"""The fifteen Type families of convex pentagonal monotiles.

Conditions are written in the usual letter notation: vertices ``A..E`` and
edges ``a..e``, where edge ``x`` is the edge ending at vertex ``X`` when the
boundary is walked counterclockwise (``a = EA``, ``b = AB``, ...).  In the
internal index order vertex ``A`` is 0 and edge ``b`` (from A to B) is 0.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .pentagon import (
    ALL_LABELINGS,
    CLASSIFY_TOL,
    IDENTITY,
    Labeling,
    PentagonShape,
    relabel,
)
from .system import (
    ConstraintSystem,
    ConvergenceFailure,
    certify_empty,
    local_dimension,
    solve,
)

VERTEX_LETTERS = "ABCDE"
EDGE_LETTERS = "abcde"
# letter -> internal edge index (edge i joins vertex i to vertex i+1)
EDGE_INDEX = {"a": 4, "b": 0, "c": 1, "d": 2, "e": 3}
INDEX_EDGE = {v: k for k, v in EDGE_INDEX.items()}

TYPE_IDS = tuple(range(1, 16))


class UnknownType(KeyError):
    pass


class NoSolution(ValueError):
    pass


# the conditions of each family, in letter notation
NOTATION: dict[int, tuple[tuple[str, ...], tuple[str, ...]]] = {
    1: (("A+B+C=360",), ()),
    2: (("A+B+D=360",), ("a=d",)),
    3: (("A=120", "C=120", "D=120"), ("a=b", "d=c+e")),
    4: (("A=90", "C=90"), ("a=b", "c=d")),
    5: (("A=60", "D=120"), ("a=b", "d=e")),
    6: (("C+E=180", "A=2C"), ("a=b=e", "c=d")),
    7: (("2B+A=360", "2E+C=360"), ("a=b=c=d",)),
    8: (("2A+B=360", "2D+C=360"), ("a=b=c=d",)),
    9: (("2E+B=360", "2D+C=360"), ("a=b=c=d",)),
    10: (("E=90", "A+D=180", "2B-D=180", "2C+D=360"), ("a=e=b+d",)),
    11: (("A=90", "C+E=180", "2B+C=360"), ("d=e=2a+c",)),
    12: (("A=90", "C+E=180", "2B+C=360"), ("2a=c+e=d",)),
    13: (("A=90", "C=90", "2B+D=360", "2E+D=360"), ("c=d", "2c=e")),
    14: (("A=90", "2B+C=360", "C+E=180"), ("2a=2c=d=e",)),
    15: (("A=150", "B=60", "C=135", "D=105"), ("a=c=e", "b=2a")),
}

# free parameters used by sample(): uppercase = angle in degrees,
# lowercase = edge length relative to edge b
FREE_PARAMS: dict[int, tuple[tuple[str, float], ...]] = {
    1: (("A", 100.0), ("B", 120.0), ("D", 100.0), ("c", 0.8), ("d", 1.2)),
    2: (("A", 100.0), ("B", 110.0), ("C", 110.0), ("c", 0.6)),
    3: (("B", 100.0),),
    4: (("B", 120.0), ("D", 110.0)),
    5: (("B", 105.0), ("C", 125.0)),
    6: (("C", 70.0),),
    7: (("A", 86.0),),
    8: (("A", 110.0),),
    9: (("B", 130.0),),
    10: (("D", 110.0),),
    11: (("C", 70.0),),
    12: (("C", 70.0),),
    13: (("B", 115.0),),
    14: (),
    15: (),
}

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*([A-Za-z])")


def _linear(expr: str, letters: str) -> np.ndarray:
    co = np.zeros(5)
    expr = expr.replace(" ", "")
    pos = 0
    for m in _TERM.finditer(expr):
        if m.start() != pos:
            raise ValueError(f"cannot parse {expr!r}")
        pos = m.end()
        sign = -1.0 if m.group(1) == "-" else 1.0
        k = float(m.group(2)) if m.group(2) else 1.0
        if m.group(3) not in letters:
            raise ValueError(f"unknown symbol {m.group(3)!r} in {expr!r}")
        co[letters.index(m.group(3))] += sign * k
    if pos != len(expr):
        raise ValueError(f"cannot parse {expr!r}")
    return co


@dataclass(frozen=True)
class AngleRelation:
    """sum(coefficients[i] * angle[i]) == constant, vertex order A..E."""

    coefficients: tuple[int, ...]
    constant: float
    text: str = ""

    @staticmethod
    def parse(text: str) -> "AngleRelation":
        lhs, rhs = text.split("=")
        co = _linear(lhs, VERTEX_LETTERS)
        try:
            const = math.radians(float(rhs))
        except ValueError:
            co = co - _linear(rhs, VERTEX_LETTERS)
            const = 0.0
        return AngleRelation(tuple(int(x) for x in co), const, text)

    def residual(self, angles: Sequence[float]) -> float:
        return float(np.dot(self.coefficients, angles) - self.constant)


@dataclass(frozen=True)
class EdgeRelation:
    """sum(coefficients[i] * edge[i]) == 0, internal edge order."""

    coefficients: tuple[int, ...]
    text: str = ""

    @staticmethod
    def parse_chain(text: str) -> list["EdgeRelation"]:
        parts = text.split("=")
        out = []
        for lhs, rhs in zip(parts, parts[1:]):
            letter_co = _linear(lhs, EDGE_LETTERS) - _linear(rhs, EDGE_LETTERS)
            co = np.zeros(5)
            for j, x in enumerate(letter_co):
                co[EDGE_INDEX[EDGE_LETTERS[j]]] = x
            out.append(EdgeRelation(tuple(int(x) for x in co), f"{lhs}={rhs}"))
        return out

    def residual(self, edges: Sequence[float]) -> float:
        return float(np.dot(self.coefficients, edges))

    def letter_coefficients(self) -> list[int]:
        return [self.coefficients[EDGE_INDEX[x]] for x in EDGE_LETTERS]


@dataclass(frozen=True)
class TypeConditions:
    type_id: int
    angle_relations: tuple[AngleRelation, ...]
    edge_relations: tuple[EdgeRelation, ...]
    notation: tuple[str, ...] = ()

    @staticmethod
    def from_notation(type_id: int, angle_texts, edge_texts) -> "TypeConditions":
        ar = tuple(AngleRelation.parse(s) for s in angle_texts)
        er = tuple(r for s in edge_texts for r in EdgeRelation.parse_chain(s))
        return TypeConditions(type_id, ar, er, tuple(angle_texts) + tuple(edge_texts))

    def system(self, labeling: Labeling = IDENTITY) -> ConstraintSystem:
        """Equations on the base shape stating that relabel(shape, labeling) obeys these conditions."""
        vm, em = labeling.vertex_map(), labeling.edge_map()
        ar = np.zeros((len(self.angle_relations), 5))
        for k, rel in enumerate(self.angle_relations):
            for i, c in enumerate(rel.coefficients):
                ar[k, vm[i]] += c
        er = np.zeros((len(self.edge_relations), 5))
        for k, rel in enumerate(self.edge_relations):
            for i, c in enumerate(rel.coefficients):
                er[k, em[i]] += c
        rhs = [rel.constant for rel in self.angle_relations]
        return ConstraintSystem.build(ar, rhs, er, np.zeros(len(er)), label=f"T{self.type_id}")

    def residuals(self, p: PentagonShape, labeling: Labeling = IDENTITY) -> np.ndarray:
        q = relabel(p, labeling)
        e = np.asarray(q.edges) * 5 / sum(q.edges)
        return np.array(
            [r.residual(q.angles) for r in self.angle_relations]
            + [r.residual(e) for r in self.edge_relations]
        )


def conditions_of(type_id: int) -> TypeConditions:
    if type_id not in NOTATION:
        raise UnknownType(type_id)
    return _conditions(type_id)


@lru_cache(maxsize=None)
def _conditions(type_id: int) -> TypeConditions:
    angles, edges = NOTATION[type_id]
    return TypeConditions.from_notation(type_id, angles, edges)


def type_residual(p: PentagonShape, conditions: TypeConditions) -> tuple[float, Labeling]:
    """Smallest worst-relation residual over the ten labelings, with the labeling that attains it."""
    best, best_g = math.inf, IDENTITY
    for g in ALL_LABELINGS:
        r = conditions.residuals(p, g)
        worst = float(np.max(np.abs(r))) if len(r) else 0.0
        if worst < best:
            best, best_g = worst, g
    return best, best_g


def matching_labelings(p: PentagonShape, type_id: int, tol: float = CLASSIFY_TOL) -> list[Labeling]:
    tc = conditions_of(type_id)
    out = []
    for g in ALL_LABELINGS:
        r = tc.residuals(p, g)
        if len(r) == 0 or np.max(np.abs(r)) <= tol:
            out.append(g)
    return out


def membership(p: PentagonShape, tol: float = CLASSIFY_TOL) -> set[int]:
    """Types whose conditions hold for some relabeling of p.

    >>> from .pentagon import regular_pentagon
    >>> membership(regular_pentagon())
    set()
    """
    return {t for t in TYPE_IDS if type_residual(p, conditions_of(t))[0] <= tol}


def residual_table(p: PentagonShape) -> dict[int, dict]:
    out = {}
    for t in TYPE_IDS:
        tc = conditions_of(t)
        worst, g = type_residual(p, tc)
        r = tc.residuals(p, g)
        texts = [x.text for x in tc.angle_relations] + [x.text for x in tc.edge_relations]
        nearest = texts[int(np.argmax(np.abs(r)))] if len(r) else ""
        out[t] = {
            "residual": worst,
            "labeling": [g.rotation, g.reflected],
            "worst_relation": nearest,
        }
    return out


def _param_rows(type_id: int, params: Mapping[str, float]):
    ar, arhs, er = [], [], []
    for name, value in params.items():
        row = np.zeros(5)
        if name in VERTEX_LETTERS:
            row[VERTEX_LETTERS.index(name)] = 1.0
            ar.append(row)
            arhs.append(math.radians(value))
        elif name in EDGE_LETTERS:
            if value <= 0:
                raise NoSolution(f"edge ratio {name}={value} must be positive")
            row[EDGE_INDEX[name]] = 1.0
            row[EDGE_INDEX["b"]] -= value
            er.append(row)
        else:
            raise ValueError(f"unknown parameter {name!r} for Type {type_id}")
    return ConstraintSystem.build(ar, arhs, er, np.zeros(len(er)))


def parameter_names(type_id: int) -> list[str]:
    conditions_of(type_id)
    return [n for n, _ in FREE_PARAMS[type_id]]


def _resolve_params(type_id: int, params) -> dict[str, float]:
    spec = FREE_PARAMS[type_id]
    names = [n for n, _ in spec]
    values = {n: v for n, v in spec}
    if params is None:
        return values
    if isinstance(params, Mapping):
        for k, v in params.items():
            if k not in values:
                raise ValueError(f"Type {type_id} has free parameters {names}, not {k!r}")
            values[k] = float(v)
        return values
    params = list(params)
    if len(params) != len(spec):
        raise ValueError(f"Type {type_id} takes {len(spec)} parameters {names}, got {len(params)}")
    return {n: float(v) for n, v in zip(names, params)}


def sample(type_id: int, params=None, seed: int = 0, starts: int = 64) -> PentagonShape:
    """A member of the family with the given free parameters.

    ``params`` is a sequence in the order of ``parameter_names(type_id)`` or a
    mapping by name; missing names take their defaults.  The returned shape
    satisfies the conditions under its own labeling.
    """
    tc = conditions_of(type_id)
    values = _resolve_params(type_id, params)
    system = tc.system().combine(_param_rows(type_id, values))
    res = solve(system, starts=starts, seed=seed)
    if not res.feasible_linear:
        raise NoSolution(f"parameters {values} contradict the Type {type_id} conditions")
    if not res.solutions:
        if res.converged:
            raise NoSolution(f"no convex Type {type_id} pentagon with {values}")
        raise ConvergenceFailure(f"no start converged for Type {type_id} with {values}")
    best = min(res.solutions, key=lambda s: tuple(np.round(s.shape.angles + s.shape.edges, 9)))
    return best.shape


def sample_with(type_id: int, params: Mapping[str, float], extra: Sequence[str] = (), seed: int = 0,
                starts: int = 64) -> PentagonShape:
    """A family member obeying extra relations such as ``"a=d"`` or ``"C=E"``.

    Only the parameters given are pinned, so callers drop one free parameter
    for every independent extra relation.
    """
    tc = conditions_of(type_id)
    extra_tc = TypeConditions.from_notation(
        type_id,
        [t for t in extra if t.split("=")[0].strip()[-1:].isupper()],
        [t for t in extra if t.split("=")[0].strip()[-1:].islower()],
    )
    system = tc.system().combine(extra_tc.system()).combine(_param_rows(type_id, dict(params)))
    res = solve(system, starts=starts, seed=seed)
    if not res.solutions:
        if res.feasible_linear and not res.converged:
            raise ConvergenceFailure(f"no start converged for Type {type_id} with {params} and {list(extra)}")
        raise NoSolution(f"no convex Type {type_id} pentagon with {params} and {list(extra)}")
    best = min(res.solutions, key=lambda s: tuple(np.round(s.shape.angles + s.shape.edges, 9)))
    return best.shape


def sample_residual(p: PentagonShape, type_id: int) -> float:
    """Residual of the full system (conditions, angle sum, closure) under p's own labeling."""
    r = conditions_of(type_id).system().residuals(p.angles, p.edges)
    return float(np.max(np.abs(r)))


def random_params(type_id: int, rng: np.random.Generator) -> dict[str, float]:
    out = {}
    for name, default in FREE_PARAMS[type_id]:
        if name in VERTEX_LETTERS:
            out[name] = float(rng.uniform(default - 25.0, default + 25.0))
        else:
            out[name] = float(rng.uniform(0.5, 1.6))
    return out


def random_member(type_id: int, rng: np.random.Generator, tries: int = 50) -> PentagonShape:
    for _ in range(tries):
        try:
            return sample(type_id, random_params(type_id, rng), seed=int(rng.integers(1 << 31)))
        except (NoSolution, ConvergenceFailure):
            continue
    raise ConvergenceFailure(f"could not draw a random Type {type_id} member")


@lru_cache(maxsize=None)
def witness(type_id: int) -> PentagonShape:
    return sample(type_id)


@lru_cache(maxsize=None)
def degrees_of_freedom(type_id: int) -> int:
    """Solution-manifold dimension (after similarity) measured at the witness."""
    p = witness(type_id)
    red = conditions_of(type_id).system().reduced()
    e = np.asarray(p.edges) / p.edges[0]
    z = red.start(np.asarray(p.angles), e)
    return local_dimension(red, z)


@dataclass(frozen=True)
class EquilateralResult:
    kind: str  # "none", "fixed" or "family"
    shapes: tuple[PentagonShape, ...] = ()
    dimension: int = 0


def equilateral_system(type_id: int) -> ConstraintSystem:
    rows = np.zeros((4, 5))
    for i in range(1, 5):
        rows[i - 1, 0], rows[i - 1, i] = -1.0, 1.0
    eq = ConstraintSystem.build(edge_rows=rows, edge_rhs=np.zeros(4))
    return conditions_of(type_id).system().combine(eq)


def equilateral_member(type_id: int, starts: int = 200, seed: int = 0) -> EquilateralResult:
    system = equilateral_system(type_id)
    res = solve(system, starts=starts, seed=seed)
    if res.solutions:
        dim = max(s.dimension for s in res.solutions)
        if dim > 0:
            return EquilateralResult("family", tuple(s.shape for s in res.solutions[:3]), dim)
        return EquilateralResult("fixed", tuple(s.shape for s in res.solutions))
    if certify_empty(system):
        return EquilateralResult("none")
    raise ConvergenceFailure(f"equilateral Type {type_id}: nothing found and emptiness not certified")


def export_catalog() -> list[dict]:
    out = []
    for t in TYPE_IDS:
        tc = conditions_of(t)
        out.append({
            "type": t,
            "notation": list(tc.notation),
            "angle_relations": [list(r.coefficients) + [round(math.degrees(r.constant), 9)]
                                for r in tc.angle_relations],
            "edge_relations": [r.letter_coefficients() for r in tc.edge_relations],
            "dof": degrees_of_freedom(t),
            "parameters": [{"name": n, "default": v} for n, v in FREE_PARAMS[t]],
            "witness": witness(t).to_json(),
        })
    return out
