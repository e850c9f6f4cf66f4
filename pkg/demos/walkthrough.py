"""Follow one eight-partition from input points to the three planes.

Run with ``python demos/walkthrough.py [size] [seed]``.
"""

import sys

from eightpart.exact_geom import fraction_str
from eightpart.grid_search import local_degree
from eightpart.partition import eight_partition, generate_random, oracle_pairs


def main(size=23, seed=1):
    pts = generate_random(size, seed)
    res = eight_partition(pts)
    curve, found = res.curve, res.search
    print(f"{size} points, k = {res.instance.k}")
    print(f"curve L: {curve.m} elements, {len(curve.vertices)} vertices")

    zeros = oracle_pairs(curve)
    print(f"vertex pairs with X = Y = 0: {len(zeros)}")
    for i, j in zeros:
        print(f"  ({i}, {j})  local degree {local_degree(curve, i, j)}")

    print(f"search: {found.rounds} rounds (bound {found.bound}), zero at {found.zero}")
    for entry in found.log:
        if "windings" in entry:
            print(f"  round {entry['round']}: areas {entry['areas']} windings {entry['windings']}")

    for name, h in zip(("H1", "H2", "H3"), res.planes):
        a, b, c = (fraction_str(x) for x in h.normal)
        print(f"{name}: {a} x + {b} y + {c} z = {fraction_str(h.offset)}")
    print("octant counts:", dict(sorted(res.report.octant_counts.items())))
    print("valid:", res.report.valid)


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
