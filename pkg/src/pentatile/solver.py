"""Intersections of Type families: which pentagons satisfy several condition sets at once."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .catalog import TYPE_IDS, conditions_of, membership
from .pentagon import ALL_LABELINGS, IDENTITY, CanonicalPentagon, canonical_form, key_distance
from .system import (
    CONVERGED,
    DEDUPE_RADIUS,
    ConstraintSystem,
    ConvergenceFailure,
    certify_empty,
    solve,
)

EMPTY = "Empty"
FIXED = "FixedShapes"
FAMILY = "Family"
FAILED = "ConvergenceFailure"

NAMED_TRIPLES = ((1, 5, 6), (1, 2, 12))


def solve_system(system: ConstraintSystem, starts: int = 200, seed: int = 0):
    """Distinct convex solutions of one system and the largest local dimension among them."""
    res = solve(system, starts=starts, seed=seed)
    if res.feasible_linear and res.converged == 0:
        raise ConvergenceFailure(f"no start converged for {system.label or 'system'}")
    shapes = [canonical_form(s.shape) for s in res.solutions]
    dim = max((s.dimension for s in res.solutions), default=0)
    return shapes, dim


@dataclass
class IntersectionReport:
    types: tuple[int, ...]
    verdict: str
    shapes: list[CanonicalPentagon] = field(default_factory=list)
    dimension: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.shapes) if self.verdict == FIXED else 0

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "shapes": [c.shape.to_json() for c in self.shapes],
            "dimension": self.dimension,
            "diagnostics": self.diagnostics,
        }


def intersection_systems(types):
    """One system per choice of labelings for every type after the first."""
    first = conditions_of(types[0]).system(IDENTITY)
    rest = [conditions_of(t) for t in types[1:]]
    for gs in itertools.product(ALL_LABELINGS, repeat=len(rest)):
        sys_ = first
        for tc, g in zip(rest, gs):
            sys_ = sys_.combine(tc.system(g))
        yield gs, sys_


def intersection_report(types, starts: int = 200, seed: int = 0, certify: bool = True,
                        solver_tol: float = CONVERGED) -> IntersectionReport:
    types = tuple(sorted(set(int(t) for t in types)))
    if len(types) < 2:
        raise ValueError("an intersection needs at least two types")
    for t in types:
        conditions_of(t)
    found = []
    dims = []
    converged = 0
    systems = 0
    linear_empty = 0
    certified = 0
    uncertain = 0
    pending = []
    for k, (gs, system) in enumerate(intersection_systems(types)):
        systems += 1
        res = solve(system, starts=starts, seed=seed + 7919 * k, tol=solver_tol)
        if not res.feasible_linear:
            linear_empty += 1
            continue
        converged += res.converged
        for s in res.solutions:
            if any(key_distance(s.shape, f) < DEDUPE_RADIUS for f in found):
                continue
            found.append(s.shape)
            dims.append(s.dimension)
        if not res.solutions:
            pending.append(system)
    # emptiness only needs proof when nothing was found at all
    if not found and certify:
        for system in pending:
            if certify_empty(system):
                certified += 1
            else:
                uncertain += 1
    # every reported shape has to pass the membership test for all queried types
    kept = [(p, d) for p, d in zip(found, dims) if set(types) <= membership(p)]
    diagnostics = {
        "systems": systems,
        "starts_per_system": starts,
        "converged": converged,
        "linear_empty": linear_empty,
        "certified_empty": certified,
        "uncertified": uncertain,
        "dedupe_radius": DEDUPE_RADIUS,
        "seed": seed,
        "solver_tol": solver_tol,
    }
    if kept:
        canon = sorted((canonical_form(p) for p, _ in kept), key=lambda c: tuple(np.round(c.key(), 9)))
        dim = max(d for _, d in kept)
        verdict = FAMILY if dim > 0 else FIXED
        if verdict == FAMILY:
            canon = canon[:3]
        return IntersectionReport(types, verdict, canon, dim, diagnostics)
    if uncertain or not certify:
        return IntersectionReport(types, FAILED, [], 0, diagnostics)
    return IntersectionReport(types, EMPTY, [], 0, diagnostics)


def venn_cells(pairs: bool = True, triples: bool = True):
    cells = []
    if pairs:
        cells += list(itertools.combinations(TYPE_IDS, 2))
    if triples:
        cells += list(NAMED_TRIPLES)
    return cells


def venn_table(starts: int = 200, seed: int = 0, cells=None,
               solver_tol: float = CONVERGED) -> dict[tuple[int, ...], IntersectionReport]:
    cells = venn_cells() if cells is None else [tuple(sorted(c)) for c in cells]
    return {c: intersection_report(c, starts=starts, seed=seed, solver_tol=solver_tol) for c in cells}


def venn_to_json(table: dict) -> str:
    obj = {",".join(map(str, k)): v.to_json() for k, v in sorted(table.items())}
    return json.dumps(obj, indent=2, sort_keys=True)
