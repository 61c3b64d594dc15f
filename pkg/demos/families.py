"""Walk through the fifteen Type families and where they overlap.

Run:  python3 demos/families.py
"""
import math

from pentatile import conditions_of, intersection_report, membership, sample
from pentatile.catalog import FREE_PARAMS, TYPE_IDS, degrees_of_freedom, matching_labelings
from pentatile.pentagon import relabel


def show_catalog():
    print("Type  dof  conditions")
    for t in TYPE_IDS:
        tc = conditions_of(t)
        print(f"{t:>4}  {degrees_of_freedom(t):>3}  {', '.join(tc.notation)}")


def type14_angle():
    # the only Type 14 pentagon, up to similarity
    p = sample(14)
    q = relabel(p, matching_labelings(p, 14)[0])
    closed = math.degrees(math.acos((3 * math.sqrt(57) - 17) / 16))
    print(f"\nType 14 angle C = {q.angles_deg[2]:.12f} deg (closed form {closed:.12f})")


def overlaps():
    print("\nSome intersections:")
    for cell in [(1, 7), (2, 7), (2, 8), (1, 2), (3, 13), (1, 2, 12)]:
        rep = intersection_report(cell)
        extra = f"{rep.count} shape(s)" if rep.count else f"dimension {rep.dimension}" if rep.dimension else ""
        print(f"  {str(cell):<12} {rep.verdict:<12} {extra}")
    p = intersection_report((2, 8)).shapes[0].shape
    print("  one Type 2 and Type 8 shape:", p, "members of", sorted(membership(p)))


def free_parameters():
    print("\nFree parameters of Type 1:", [n for n, _ in FREE_PARAMS[1]])
    p = sample(1, {"A": 100.0, "B": 125.0})
    print("  sample:", p)


if __name__ == "__main__":
    show_catalog()
    type14_angle()
    overlaps()
    free_parameters()
