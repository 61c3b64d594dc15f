"""Command line: classify, tile, venn, audit and catalog.

Exit codes: 0 success, 1 a bounded search found nothing (NoRecipeFound),
2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from .catalog import (
    TYPE_IDS,
    NoSolution,
    UnknownType,
    export_catalog,
    membership,
    residual_table,
    sample,
)
from .pentagon import CLASSIFY_TOL, PentagonError, pentagon_from_json
from .system import CONVERGED, ConvergenceFailure

EXIT_OK = 0
EXIT_NO_RECIPE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    tol: float = CLASSIFY_TOL
    solver_tol: float = CONVERGED
    validation_tol: float = 1e-6
    starts: int = 200
    seed: int = 0
    unit_cap: int = 16
    patch: tuple[int, int] = (2, 2)
    svg: str | None = None
    json: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        for name in ("tol", "solver_tol", "validation_tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.starts < 1:
            raise UsageError("--starts must be at least 1")
        if not 1 <= self.unit_cap <= 16:
            raise UsageError("--unit-cap must lie in 1..16")
        if min(self.patch) < 0:
            raise UsageError("--patch sizes must be non-negative")

    def to_json(self) -> dict:
        d = asdict(self)
        d["patch"] = list(self.patch)
        d.pop("extra")
        return d


def _default_seed() -> int:
    raw = os.environ.get("PENTA_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PENTA_SEED must be an integer, got {raw!r}")


def _config(args) -> RunConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = RunConfig(
        tol=args.tol,
        solver_tol=args.solver_tol,
        validation_tol=args.validation_tol,
        starts=args.starts,
        seed=seed,
        unit_cap=args.unit_cap,
        patch=tuple(args.patch) if getattr(args, "patch", None) else (2, 2),
        svg=getattr(args, "svg", None),
        json=args.json,
    )
    cfg.validate()
    return cfg


def _emit(obj, cfg: RunConfig) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if cfg.json:
        with open(cfg.json, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_pentagon(path: str):
    try:
        if path == "-":
            obj = json.load(sys.stdin)
        else:
            with open(path) as fh:
                obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read pentagon JSON from {path}: {exc}")
    if not isinstance(obj, dict):
        raise UsageError("pentagon JSON must be an object")
    try:
        return pentagon_from_json(obj)
    except (PentagonError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid pentagon: {exc}")


def _parse_params(items) -> dict[str, float]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"--param {k} needs a number, got {v!r}")
    return out


# ------------------------------------------------------------ commands


def cmd_classify(args, cfg: RunConfig) -> int:
    p = _read_pentagon(args.input)
    table = residual_table(p)
    out = {
        "pentagon": p.to_json(),
        "membership": sorted(membership(p, cfg.tol)),
        "residuals": {str(k): v for k, v in sorted(table.items())},
        "tol": cfg.tol,
        "seed": cfg.seed,
    }
    _emit(out, cfg)
    return EXIT_OK


def cmd_tile(args, cfg: RunConfig) -> int:
    from .analysis import analyze
    from .nodes import numeric_node_set
    from .tiling import (
        NoRecipeFound,
        assemble_recipe,
        generate_patch,
        patch_svg,
        representative_recipe,
        validate_patch,
    )

    params = _parse_params(args.param)
    if args.type is not None and args.input is not None:
        raise UsageError("give either --type or --input, not both")
    if args.type is not None:
        try:
            p = sample(args.type, params or None, seed=cfg.seed)
        except UnknownType:
            raise UsageError(f"unknown Type {args.type}")
        except (NoSolution, ConvergenceFailure, ValueError) as exc:
            raise UsageError(str(exc))
        type_id = args.type
    elif args.input is not None:
        if params:
            raise UsageError("--param only applies together with --type")
        p = _read_pentagon(args.input)
        mem = sorted(membership(p, cfg.tol))
        type_id = mem[0] if mem else None
    else:
        raise UsageError("tile needs --type or --input")
    allow = not args.no_reflections
    try:
        if type_id is not None:
            recipe = representative_recipe(type_id, p, max_unit=cfg.unit_cap, allow_reflections=allow)
        else:
            recipe = assemble_recipe(p, numeric_node_set(p), max_unit=cfg.unit_cap, allow_reflections=allow)
    except NoRecipeFound as exc:
        sys.stderr.write(f"no recipe: {exc}\n")
        _emit({"recipe": None, "reason": str(exc), "exhaustive": exc.exhaustive,
               "type": type_id, "seed": cfg.seed}, cfg)
        return EXIT_NO_RECIPE
    m, n = cfg.patch
    patch = generate_patch(recipe, m, n)
    report = validate_patch(patch)
    out = {
        "type": type_id,
        "recipe": recipe.to_json(),
        "validation": report.to_json(),
        "valid": report.ok(cfg.validation_tol),
        "patch": {"m": m, "n": n, "tiles": len(patch)},
        "seed": cfg.seed,
    }
    try:
        out["analysis"] = analyze(patch).to_json()
    except ValueError as exc:
        out["analysis"] = None
        out["analysis_error"] = str(exc)
    if cfg.svg:
        with open(cfg.svg, "w") as fh:
            fh.write(patch_svg(patch))
    _emit(out, cfg)
    return EXIT_OK


def _type_list(values, size: int, flag: str) -> tuple[int, ...]:
    ts = tuple(int(v) for v in values)
    if len(set(ts)) != size or any(t not in TYPE_IDS for t in ts):
        raise UsageError(f"{flag} needs {size} distinct Type numbers in 1..15")
    return ts


def cmd_venn(args, cfg: RunConfig) -> int:
    from .solver import venn_cells, venn_table, venn_to_json

    cells = []
    for pair in args.pair or ():
        cells.append(_type_list(pair, 2, "--pair"))
    for triple in args.triple or ():
        cells.append(_type_list(triple, 3, "--triple"))
    if args.all or args.pairs:
        cells += venn_cells(pairs=True, triples=False)
    if args.all or args.triples:
        cells += venn_cells(pairs=False, triples=True)
    if not cells:
        raise UsageError("venn needs --pair, --triple, --pairs, --triples or --all")
    cells = sorted(set(tuple(sorted(c)) for c in cells))
    table = venn_table(starts=cfg.starts, seed=cfg.seed, cells=cells, solver_tol=cfg.solver_tol)
    out = {"seed": cfg.seed, "starts": cfg.starts, "cells": json.loads(venn_to_json(table))}
    _emit(out, cfg)
    return EXIT_OK


def cmd_audit(args, cfg: RunConfig) -> int:
    from .analysis import edge_to_edge_candidates, reflection_audit, reflection_domain, theorem1_audit
    from .catalog import random_member

    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if args.kind == "theorem1":
        shapes = edge_to_edge_candidates(args.samples, seed=cfg.seed)
        report = theorem1_audit(shapes, max_unit=cfg.unit_cap, seed=cfg.seed)
    else:
        import numpy as np

        rng = np.random.default_rng(cfg.seed)
        pool = (2, 7, 8, 9, 10, 11, 12, 13)
        shapes = []
        tries = 0
        while len(shapes) < args.samples and tries < 50 * args.samples:
            t = pool[tries % len(pool)]
            tries += 1
            try:
                p = random_member(t, rng)
            except ConvergenceFailure:
                continue
            if reflection_domain(p):
                shapes.append(p)
        report = reflection_audit(shapes, max_unit=cfg.unit_cap, seed=cfg.seed)
    out = report.to_json()
    out["config"] = cfg.to_json()
    _emit(out, cfg)
    return EXIT_OK


def cmd_catalog(args, cfg: RunConfig) -> int:
    _emit({"types": export_catalog(), "seed": cfg.seed}, cfg)
    return EXIT_OK


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=CLASSIFY_TOL, help="classification tolerance")
    common.add_argument("--solver-tol", type=float, default=CONVERGED, help="closure residual accepted as converged")
    common.add_argument("--validation-tol", type=float, default=1e-6, help="normalized overlap/defect tolerance")
    common.add_argument("--starts", type=int, default=200, help="multistart budget per system")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $PENTA_SEED or 0)")
    common.add_argument("--unit-cap", type=int, default=16, help="largest translation unit searched")
    common.add_argument("--json", metavar="PATH", help="write JSON here instead of stdout")

    ap = argparse.ArgumentParser(prog="pentatile", description="Convex pentagonal monotiles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="Type membership of a pentagon JSON file")
    p.add_argument("input", help="pentagon JSON file, or - for stdin")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tile", parents=[common], help="recipe, patch and analysis for a Type or pentagon")
    p.add_argument("--type", type=int)
    p.add_argument("--input", help="pentagon JSON file")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="free parameter of --type")
    p.add_argument("--patch", type=int, nargs=2, metavar=("M", "N"), default=[2, 2])
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--no-reflections", action="store_true")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("venn", parents=[common], help="intersections of Type families")
    p.add_argument("--pair", type=int, nargs=2, action="append", metavar=("X", "Y"))
    p.add_argument("--triple", type=int, nargs=3, action="append", metavar=("X", "Y", "Z"))
    p.add_argument("--pairs", action="store_true", help="all 105 pairs")
    p.add_argument("--triples", action="store_true", help="the named triples")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_venn)

    p = sub.add_parser("audit", parents=[common], help="theorem1 or reflections audit")
    p.add_argument("kind", choices=("theorem1", "reflections"))
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("catalog", parents=[common], help="export the Type catalog")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"pentatile: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
