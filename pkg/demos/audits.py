"""Two audits over random family members.

Edge-to-edge: search edge-to-edge tilings from the angles alone, then check
that every shape that tiles this way belongs to Types 1, 2 or 4 to 9.

Reflections: for shapes where reflected tiles are expected to be necessary,
search again with reflections switched off.

Run:  python3 demos/audits.py [samples]
"""
import sys
import time

import numpy as np

from pentatile import reflection_audit, theorem1_audit
from pentatile.analysis import edge_to_edge_candidates, reflection_domain
from pentatile.catalog import random_member


def main(samples=16):
    t0 = time.perf_counter()
    shapes = edge_to_edge_candidates(samples, seed=0)
    rep = theorem1_audit(shapes, seed=0)
    print(f"edge-to-edge audit: {len(rep.found)}/{samples} tilings found, "
          f"{len(rep.violations)} outside the expected Types ({time.perf_counter() - t0:.0f}s)")
    for e in rep.found[:8]:
        print(f"  Types {e.membership}  unit {e.unit_size}  reflected {e.uses_reflections}")

    rng = np.random.default_rng(0)
    pool = []
    for t in (2, 7, 8, 9):
        p = random_member(t, rng)
        if reflection_domain(p):
            pool.append(p)
    rep = reflection_audit(pool)
    for e in rep.entries:
        status = "tiles without reflections" if e.recipe_found else (
            e.excluded or ("no tiling (exhaustive)" if e.exhaustive else "search budget exhausted"))
        print(f"  reflections off, Types {e.membership}: {status}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 16)
