"""Exact eight-partitions of finite point sets in R^3 with a prescribed normal
for the first plane."""

from .exact_geom import (
    DegenerateInputError,
    OrientedPlane,
    Point3,
    canonicalize,
    general_position_check,
    pad_and_perturb,
)
from .grid_search import SignWalker, TrapezoidalRegion, pi_image, search, triangular_curve, winding, xy
from .partition import (
    PartitionReport,
    eight_partition,
    generate,
    generate_adversarial,
    generate_random,
    oracle_pairs,
    oracle_triples,
    verify,
)
from .planar import SymbolicValue, WeightedPoint2, four_partition_with_bisector, median_cross_section, start_edge
from .tracer import LevelCurve, side_counts, trace

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError",
    "OrientedPlane",
    "Point3",
    "canonicalize",
    "general_position_check",
    "pad_and_perturb",
    "SymbolicValue",
    "WeightedPoint2",
    "four_partition_with_bisector",
    "median_cross_section",
    "start_edge",
    "LevelCurve",
    "side_counts",
    "trace",
    "SignWalker",
    "TrapezoidalRegion",
    "pi_image",
    "search",
    "triangular_curve",
    "winding",
    "xy",
    "PartitionReport",
    "eight_partition",
    "generate",
    "generate_adversarial",
    "generate_random",
    "oracle_pairs",
    "oracle_triples",
    "verify",
]
