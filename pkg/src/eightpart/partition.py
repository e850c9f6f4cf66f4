"""Eight-partitions end to end, their verification, brute-force oracles and
instance generators."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_geom import (
    BLUE,
    RED,
    ColoredInstance,
    OrientedPlane,
    PaddingRecord,
    Point3,
    as_point,
    canonicalize,
    dot,
    general_position_check,
    pad_and_perturb,
    plane_of_dual_point,
    q,
    sign,
    sign_parity,
    sign_vectors,
)
from .grid_search import SearchResult, search
from .tracer import LevelCurve, Vertex, trace


class InternalError(RuntimeError):
    """An invariant that holds for every valid input was violated."""


# ---------------------------------------------------------------------------
# verification

def _sides(points: Sequence[Point3], plane: OrientedPlane) -> list[int]:
    return [plane.side(p) for p in points]


def _max_open_cell(sides: list[list[int]], members: Sequence[int]) -> int:
    """Largest number of members in one open cell of the given planes."""
    counts: dict[tuple[int, ...], int] = {}
    for i in members:
        key = tuple(s[i] for s in sides)
        if 0 in key:
            continue
        counts[key] = counts.get(key, 0) + 1
    return max(counts.values(), default=0)


@dataclass
class PartitionReport:
    n: int
    planes: tuple[OrientedPlane, OrientedPlane, OrientedPlane]
    octant_counts: dict[str, int]
    alternating_sums: dict[str, int]  # every sign vector except "+++"
    on_plane: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    bisects: tuple[bool, bool, bool]
    four_partitions: dict[str, bool]  # keyed "12", "13", "23"
    color_checks: dict = field(default_factory=dict)
    padding: PaddingRecord | None = None
    extra: dict = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return self.n // 8

    @property
    def valid(self) -> bool:
        return all(c <= self.bound for c in self.octant_counts.values())

    def to_json(self) -> dict:
        doc = {
            "valid": self.valid,
            "n": self.n,
            "bound": self.bound,
            "planes": [p.to_strings() for p in self.planes],
            "octant_counts": dict(self.octant_counts),
            "alternating_sums": dict(self.alternating_sums),
            "on_plane": [list(o) for o in self.on_plane],
            "bisects": list(self.bisects),
            "four_partitions": dict(self.four_partitions),
            "color_checks": self.color_checks,
        }
        if self.padding is not None:
            doc["padding"] = self.padding.to_json()
        doc.update(self.extra)
        return doc

    def to_text(self) -> str:
        """Plain three-line plane format: four rationals per line."""
        return "".join(" ".join(p.to_strings()) + "\n" for p in self.planes)


def verify(points: Sequence, h1: OrientedPlane, h2: OrientedPlane, h3: OrientedPlane) -> PartitionReport:
    pts = [as_point(p) for p in points]
    n = len(pts)
    planes = (h1, h2, h3)
    sides = [_sides(pts, h) for h in planes]
    labels = sign_vectors(3)
    counts = {a: 0 for a in labels}
    for i in range(n):
        key = tuple(s[i] for s in sides)
        if 0 not in key:
            counts["".join("+" if c > 0 else "-" for c in key)] += 1
    sums = {
        a: sum((-1) ** sign_parity(a, b) * counts[b] for b in labels) for a in labels if a != "+++"
    }
    on = tuple(tuple(i for i in range(n) if s[i] == 0) for s in sides)
    everyone = range(n)
    bisects = tuple(_max_open_cell([s], everyone) <= n // 2 for s in sides)
    fours = {
        f"{a + 1}{b + 1}": _max_open_cell([sides[a], sides[b]], everyone) <= n // 4
        for a, b in ((0, 1), (0, 2), (1, 2))
    }
    # colors are the two open sides of the first plane
    red = [i for i in range(n) if sides[0][i] < 0]
    blue = [i for i in range(n) if sides[0][i] > 0]
    checks = {}
    for name, t in (("H2", 1), ("H3", 2)):
        on_t = set(on[t])
        checks[name] = {
            "points_on": len(on_t),
            "red_on": len(on_t.intersection(red)),
            "blue_on": len(on_t.intersection(blue)),
            "bisects_red": _max_open_cell([sides[t]], red) <= len(red) // 2,
            "bisects_blue": _max_open_cell([sides[t]], blue) <= len(blue) // 2,
        }
    checks["H2H3_four_partitions_red"] = _max_open_cell([sides[1], sides[2]], red) <= len(red) // 4
    checks["H2H3_four_partitions_blue"] = _max_open_cell([sides[1], sides[2]], blue) <= len(blue) // 4
    return PartitionReport(n, planes, counts, sums, on, bisects, fours, checks)


# ---------------------------------------------------------------------------
# the main pipeline

@dataclass
class CanonicalInstance:
    """A padded point set of size ``8k+7`` in canonical position."""

    colored: ColoredInstance
    points: list[Point3]  # padded point set in input coordinates
    padding: PaddingRecord

    @property
    def k(self) -> int:
        return self.colored.k

    @property
    def n(self) -> int:
        return 8 * self.k + 7

    @property
    def N(self) -> int:
        return 4 * self.k + 2


def prepare(points: Sequence, direction=(0, 0, 1), seed: int = 0, perturb: bool = False) -> CanonicalInstance:
    """Pad (and optionally perturb) the input, then bring it to canonical position."""
    pts = [as_point(p) for p in points]
    padded, record = pad_and_perturb(pts, seed=seed, direction=direction, perturb=perturb)
    return CanonicalInstance(canonicalize(padded, direction, check=False), padded, record)


def _normalize(plane: OrientedPlane) -> OrientedPlane:
    return plane.primitive()


def _h1(inst: CanonicalInstance) -> OrientedPlane:
    col = inst.colored
    return OrientedPlane.with_normal_through(col.direction, inst.points[col.median_index])


def planes_for_pair(inst: CanonicalInstance, curve: LevelCurve, i: int, j: int):
    """``(H1, H2, H3)`` in input coordinates for vertex elements ``i`` and ``j``."""
    out = [_h1(inst)]
    for t in (i, j):
        el = curve.elements[t]
        if not isinstance(el, Vertex):
            raise InternalError(f"element {t} is not a vertex")
        canon = plane_of_dual_point(el.position)
        h = _normalize(inst.colored.transform.pull_back(canon))
        if dot(h.normal, inst.colored.direction) == 0:
            raise InternalError("a partitioning plane contains the prescribed direction")
        out.append(h)
    return tuple(out)


def _snap(plane: OrientedPlane, anchors: Sequence[Point3]) -> OrientedPlane:
    """The plane through ``anchors`` whose normal is closest to ``plane``'s.

    The normal is projected off every direction spanned by the anchors.
    """
    base = anchors[0]
    basis: list[tuple[Fraction, ...]] = []
    for p in anchors[1:]:
        d = tuple(p - base)
        for b in basis:
            f = dot(d, b) / dot(b, b)
            d = tuple(x - f * y for x, y in zip(d, b))
        if any(d):
            basis.append(d)
    n = tuple(plane.normal)
    for b in basis:
        f = dot(n, b) / dot(b, b)
        n = tuple(x - f * y for x, y in zip(n, b))
    if not any(n):
        raise InternalError("a plane cannot be moved back onto its points")
    return _normalize(OrientedPlane.with_normal_through(n, base))


def restore_originals(inst: CanonicalInstance, points: Sequence[Point3], planes):
    """Move planes found for jittered points back onto the original points.

    Each plane is rebuilt through the original positions of the points it
    contains.  For a small enough jitter a point strictly inside an octant
    stays inside it or lands on a plane, so octant counts never grow.
    """
    if not inst.padding.jittered:
        return tuple(planes)
    n = len(points)
    anchor = [points[t] if t < n else inst.points[t] for t in range(len(inst.points))]
    out = []
    for h in planes:
        incident = [anchor[t] for t, p in enumerate(inst.points) if h.side(p) == 0]
        out.append(_snap(h, incident) if incident else h)
    return tuple(out)


def _trivial(points: list[Point3], direction) -> tuple[OrientedPlane, OrientedPlane, OrientedPlane]:
    if not points:
        return (OrientedPlane(tuple(q(c) for c in direction), 0), OrientedPlane((1, 0, 0), 0), OrientedPlane((0, 1, 0), 0))
    h1 = OrientedPlane.with_normal_through(direction, points[0])
    rest = points[1:]
    h2 = OrientedPlane.through(rest[:3]) if rest[:3] else OrientedPlane.through(points[:1])
    h3 = OrientedPlane.through(rest[3:6]) if rest[3:6] else OrientedPlane.through(points[:1])
    return h1, _normalize(h2), _normalize(h3)


@dataclass
class PartitionResult:
    planes: tuple[OrientedPlane, OrientedPlane, OrientedPlane]
    report: PartitionReport
    curve: LevelCurve | None = None
    search: SearchResult | None = None
    instance: CanonicalInstance | None = None
    timings: dict[str, float] = field(default_factory=dict)


def eight_partition(points: Sequence, direction=(0, 0, 1), seed: int = 0, perturb: bool = False) -> PartitionResult:
    """Three planes, the first with normal ``direction``, whose open octants each
    hold at most ``n // 8`` of the points."""
    pts = [as_point(p) for p in points]
    direction = tuple(q(c) for c in direction)
    if not any(direction):
        raise ValueError("direction must be nonzero")
    if len(pts) <= 7:
        planes = _trivial(pts, direction)
        return PartitionResult(planes, verify(pts, *planes))
    t0 = time.perf_counter()
    inst = prepare(pts, direction, seed, perturb)
    t1 = time.perf_counter()
    curve = trace(inst.colored)
    t2 = time.perf_counter()
    found = search(curve)
    t3 = time.perf_counter()
    planes = restore_originals(inst, pts, planes_for_pair(inst, curve, *found.zero))
    report = verify(pts, *planes)
    report.padding = inst.padding
    t4 = time.perf_counter()
    timings = {"prepare": t1 - t0, "trace": t2 - t1, "search": t3 - t2, "verify": t4 - t3}
    return PartitionResult(planes, report, curve, found, inst, timings)


# ---------------------------------------------------------------------------
# oracles

def sign_matrices(curve: LevelCurve) -> tuple[np.ndarray, np.ndarray]:
    """Geometric sign vectors of every element, as ``m x |R|`` and ``m x |B|`` arrays."""
    rows = [curve.sign_vectors(t) for t in range(curve.m)]
    return (
        np.array([r for r, _ in rows], dtype=np.int64),
        np.array([b for _, b in rows], dtype=np.int64),
    )


def xy_matrices(curve: LevelCurve) -> tuple[np.ndarray, np.ndarray]:
    """All ``X(i, j)`` and ``Y(i, j)`` at once."""
    sr, sb = sign_matrices(curve)
    return sr @ sr.T, sb @ sb.T


def oracle_pairs(curve: LevelCurve) -> list[tuple[int, int]]:
    """Every pair ``(i, j)``, ``j < i``, with ``X = Y = 0``."""
    X, Y = xy_matrices(curve)
    zi, zj = np.nonzero((X == 0) & (Y == 0))
    return sorted((int(i), int(j)) for i, j in zip(zi, zj) if j < i)


ORACLE_CAP = 31


@dataclass
class OracleTriple:
    planes: tuple[OrientedPlane, OrientedPlane, OrientedPlane] | None
    report: PartitionReport | None
    candidates: int  # planes bisecting both colors


def oracle_triples(points: Sequence, direction=(0, 0, 1), seed: int = 0, perturb: bool = False) -> OracleTriple:
    """Exhaustive search over pairs of planes spanned by point triples.

    The first plane is fixed exactly as in :func:`eight_partition`.
    """
    pts = [as_point(p) for p in points]
    if len(pts) > ORACLE_CAP:
        raise ValueError(f"oracle_triples is limited to {ORACLE_CAP} points")
    direction = tuple(q(c) for c in direction)
    if len(pts) <= 7:
        planes = _trivial(pts, direction)
        return OracleTriple(planes, verify(pts, *planes), 0)
    inst = prepare(pts, direction, seed, perturb)
    col = inst.colored
    k = col.k
    red, blue = list(col.red), list(col.blue)
    allp = red + blue
    nr = len(red)
    half = (4 * k + 3) // 2

    coords = [(int(p.x), int(p.y), int(p.z)) for p in allp]
    cands: list[tuple[int, int, int]] = []
    side_rows: list[list[int]] = []
    for tri in itertools.combinations(range(len(allp)), 3):
        a, b, c = (coords[t] for t in tri)
        u = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
        w = (c[0] - a[0], c[1] - a[1], c[2] - a[2])
        nrm = (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])
        off = nrm[0] * a[0] + nrm[1] * a[1] + nrm[2] * a[2]
        s = [sign(nrm[0] * x + nrm[1] * y + nrm[2] * z - off) for x, y, z in coords]
        r_pos = s[:nr].count(1)
        r_neg = s[:nr].count(-1)
        b_pos = s[nr:].count(1)
        b_neg = s[nr:].count(-1)
        if max(r_pos, r_neg, b_pos, b_neg) <= half:
            cands.append(OrientedPlane(nrm, off))
            side_rows.append(s)
    if not cands:
        return OracleTriple(None, None, 0)
    S = np.array(side_rows, dtype=np.int64)  # candidates x points
    h1_side = np.array([-1] * nr + [1] * len(blue), dtype=np.int64)
    ok = np.ones((len(cands), len(cands)), dtype=bool)
    for a in (-1, 1):
        for b in (-1, 1):
            left = ((S == b) & (h1_side == a)[None, :]).astype(np.int64)
            for c in (-1, 1):
                right = (S == c).astype(np.int64)
                ok &= (left @ right.T) <= k
    hits = np.argwhere(np.triu(ok, 1))
    if len(hits) == 0:
        return OracleTriple(None, None, len(cands))
    a, b = (int(t) for t in hits[0])
    planes = (
        _h1(inst),
        _normalize(col.transform.pull_back(cands[a])),
        _normalize(col.transform.pull_back(cands[b])),
    )
    planes = restore_originals(inst, pts, planes)
    return OracleTriple(planes, verify(pts, *planes), len(cands))


# ---------------------------------------------------------------------------
# instance generators

GRID = 1 << 20


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) % (1 << 64))


def _grid_point(vals) -> Point3:
    return Point3(*(Fraction(int(v), GRID) for v in vals))


def generate_random(size: int, seed: int = 0, direction=(0, 0, 1), max_tries: int = 1000) -> list[Point3]:
    """Uniform points of the ``2^-20`` grid in the unit cube, in general position."""
    if size < 1:
        raise ValueError("size must be positive")
    rng = _rng(seed)
    for _ in range(max_tries):
        raw = rng.integers(0, GRID, size=(size, 3))
        pts = [_grid_point(r) for r in raw]
        if general_position_check(pts, direction) is None:
            return pts
    raise RuntimeError("could not draw a point set in general position")  # pragma: no cover


ADVERSARIAL_DIRECTION = (1, 0, 0)
DELTA = Fraction(1, 16)
EPSILON = Fraction(1, 1 << 10)


def generate_adversarial(size: int, seed: int = 0, max_tries: int = 1000) -> list[Point3]:
    """Separated construction with many simultaneous halving planes.

    About half of the points form a flat cluster in the thin rectangle
    ``[1/8, 1) x (0, eps)`` of the xy-plane.  The others lie close to a unit
    circle in the plane ``x = 0``.  For odd sizes one more point sits on the
    separating plane ``x = 1/16``.  Meant for the first plane normal to
    ``(1, 0, 0)``.
    """
    if size < 1:
        raise ValueError("size must be positive")
    rng = _rng(seed)
    has_median = size % 2 == 1
    rest = size - has_median
    n_cluster = (rest + 1) // 2
    n_circle = rest - n_cluster
    eps_units = int(EPSILON * GRID)
    for _ in range(max_tries):
        pts: list[Point3] = []
        for _ in range(n_cluster):
            x = rng.integers(GRID // 8, GRID)
            y = rng.integers(1, eps_units)
            z = rng.integers(-eps_units, eps_units + 1)
            pts.append(_grid_point((x, y, z)))
        offset = rng.random()
        for t in range(n_circle):
            theta = 2 * math.pi * (t + 0.5 + 0.25 * offset) / max(n_circle, 1)
            x = rng.integers(-GRID // 256, GRID // 256 + 1)
            pts.append(_grid_point((x, round(math.cos(theta) * GRID), round(math.sin(theta) * GRID))))
        if has_median:
            y, z = rng.integers(-GRID, GRID, size=2)
            pts.append(Point3(DELTA, Fraction(int(y), GRID), Fraction(int(z), GRID)))
        if general_position_check(pts, ADVERSARIAL_DIRECTION) is None:
            return pts
    raise RuntimeError("could not draw a point set in general position")  # pragma: no cover


def generate(kind: str, size: int, seed: int = 0) -> list[Point3]:
    if kind == "random":
        return generate_random(size, seed)
    if kind == "adversarial":
        return generate_adversarial(size, seed)
    raise ValueError(f"unknown instance kind {kind!r}")


def default_direction(kind: str) -> tuple[int, int, int]:
    return ADVERSARIAL_DIRECTION if kind == "adversarial" else (0, 0, 1)


__all__ = [
    "PartitionReport",
    "PartitionResult",
    "CanonicalInstance",
    "OracleTriple",
    "InternalError",
    "verify",
    "prepare",
    "eight_partition",
    "planes_for_pair",
    "restore_originals",
    "oracle_pairs",
    "oracle_triples",
    "sign_matrices",
    "xy_matrices",
    "generate",
    "generate_random",
    "generate_adversarial",
    "default_direction",
    "RED",
    "BLUE",
]
