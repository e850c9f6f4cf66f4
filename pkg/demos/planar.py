"""Four-partition a weighted planar set with lines bisected by a given direction.

Run with ``python demos/planar.py``.
"""

from fractions import Fraction

import numpy as np

from eightpart.planar import WeightedPoint2, four_partition_with_bisector


def main(n=24, seed=5, v=(1, 2)):
    rng = np.random.default_rng(seed)
    pts = [
        WeightedPoint2(Fraction(int(x), 100), Fraction(int(y), 100), int(w))
        for (x, y), w in zip(rng.integers(-500, 500, size=(n, 2)), rng.integers(1, 4, size=n))
    ]
    res = four_partition_with_bisector(pts, v)
    print(f"{n} points of total weight {res.total_weight}, bisector {v}")
    print("line 1:", " ".join(res.line1.to_strings()))
    print("line 2:", " ".join(res.line2.to_strings()))
    print(f"angle from v to line 1: {res.alpha:.4f} rad")
    for quad, w in sorted(res.quadrant_weights.items()):
        print(f"  quadrant {quad}: weight {w}")
    print("each quadrant holds at most a quarter:", res.valid)


if __name__ == "__main__":
    main()
