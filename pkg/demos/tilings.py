"""Build a periodic tiling for every Type, check it and look at its structure.

Writes one SVG per Type into demos/out/.

Run:  python3 demos/tilings.py
"""
import pathlib
import time

from pentatile import analyze, generate_patch, patch_svg, representative_recipe, sample, validate_patch
from pentatile.catalog import TYPE_IDS

OUT = pathlib.Path(__file__).with_name("out")


def main():
    OUT.mkdir(exist_ok=True)
    print("Type  unit  reflected  e2e  k  overlap   defect    nodes")
    for t in TYPE_IDS:
        t0 = time.perf_counter()
        recipe = representative_recipe(t, sample(t))
        patch = generate_patch(recipe, 2, 2)
        check = validate_patch(patch)
        rep = analyze(patch)
        nodes = " ".join("".join(n["composition"]) + ("+flat" if n["flat"] else "") for n in rep.nodes)
        print(f"{t:>4}  {recipe.unit_size:>4}  {str(rep.uses_reflections):<9}  "
              f"{'yes' if rep.edge_to_edge else 'no':<3}  {rep.corona_classes}  "
              f"{check.overlap:.1e}  {check.defect:.1e}  {nodes}   ({time.perf_counter() - t0:.1f}s)")
        (OUT / f"type{t:02d}.svg").write_text(patch_svg(patch))
    print(f"\nSVGs in {OUT}; reflected tiles are shaded and starred.")


if __name__ == "__main__":
    main()
