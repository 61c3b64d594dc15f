"""Belts: columns of tiles that can be stacked side by side in two ways.

A Type 1 pentagon with a = d builds a belt whose right neighbor may be
either a translate or a mirror image.  Choosing the join by the Thue-Morse
sequence gives a patch with only the period along the belts, while a
constant choice keeps a full lattice of periods.  Type 6 belts joined
alternately give four classes of first coronas instead of two.

Run:  python3 demos/belts.py
"""
import pathlib

from pentatile import belt_tiling, corona_classes, patch_svg, periodicity_check, sample_with, validate_patch
from pentatile.catalog import sample

OUT = pathlib.Path(__file__).with_name("out")


def thue_morse(n):
    return [bin(i).count("1") % 2 == 1 for i in range(n)]


def main():
    OUT.mkdir(exist_ok=True)
    p = sample_with(1, {"A": 105, "B": 118, "D": 75, "a": 0.9}, ["a=d"])
    for name, joins in [("thue-morse", thue_morse(8)), ("constant", [False] * 8)]:
        patch = belt_tiling(p, "type1", joins, 8, 8)
        per = periodicity_check(patch)
        print(f"Type 1 {name:<10} belts: valid={validate_patch(patch).ok()} "
              f"periods found={len(per.generators)} {per.generators}")
        (OUT / f"belt_type1_{name}.svg").write_text(patch_svg(patch))
    print("belt direction:", patch.meta["belt_vector"])

    q = sample(6)
    for name, joins in [("alternating", [bool(j % 2) for j in range(6)]), ("constant", [False] * 6)]:
        patch = belt_tiling(q, "type6", joins, 6, 6)
        print(f"Type 6 {name:<11} belts: corona classes k={corona_classes(patch).k}")
        (OUT / f"belt_type6_{name}.svg").write_text(patch_svg(patch))


if __name__ == "__main__":
    main()
