"""Planar subroutines.

* ``median_cross_section`` / ``start_edge``: the crossing of the red and blue
  median levels in the slice ``y = d`` for ``d -> -inf``, decided exactly
  with values that are linear in the formal parameter ``d``.
* ``four_partition_with_bisector``: two lines four-partitioning a weighted
  planar point set such that a prescribed direction bisects their angle.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_geom import (
    BLUE,
    RED,
    ColoredInstance,
    DegenerateInputError,
    DualPlane,
    Point3,
    q,
    sign,
)


@functools.total_ordering
@dataclass(frozen=True)
class SymbolicValue:
    """``slope * d + constant`` compared in the limit ``d -> -inf``."""

    slope: Fraction
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "slope", q(self.slope))
        object.__setattr__(self, "constant", q(self.constant))

    def key(self) -> tuple[Fraction, Fraction]:
        return (-self.slope, self.constant)

    def __lt__(self, other: "SymbolicValue") -> bool:
        return self.key() < other.key()

    def __add__(self, other):
        if isinstance(other, SymbolicValue):
            return SymbolicValue(self.slope + other.slope, self.constant + other.constant)
        return SymbolicValue(self.slope, self.constant + q(other))

    __radd__ = __add__

    def __neg__(self):
        return SymbolicValue(-self.slope, -self.constant)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        s = q(s)
        return SymbolicValue(self.slope * s, self.constant * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        s = q(s)
        return SymbolicValue(self.slope / s, self.constant / s)

    def sign(self) -> int:
        if self.slope:
            return -sign(self.slope)
        return sign(self.constant)

    def evaluate(self, d) -> Fraction:
        return self.slope * q(d) + self.constant


ZERO = SymbolicValue(0, 0)


@dataclass(frozen=True)
class SliceLine:
    """The line ``z = slope * x + intercept`` inside a slice ``y = d``."""

    slope: Fraction
    intercept: SymbolicValue

    def at(self, x: SymbolicValue) -> SymbolicValue:
        return x * self.slope + self.intercept


def median_rank(count: int) -> int:
    """0-based rank (from below) of the median level among ``count`` lines."""
    return (count + 1) // 2 - 1


def _median_line(lines: Sequence[SliceLine], x: SymbolicValue) -> tuple[int, SymbolicValue]:
    vals = sorted(((ln.at(x).key(), i) for i, ln in enumerate(lines)))
    r = median_rank(len(lines))
    for nb in (r - 1, r + 1):
        if 0 <= nb < len(vals) and vals[nb][0] == vals[r][0]:
            raise DegenerateInputError("two lines tie at the median of a slice")
    i = vals[r][1]
    return i, lines[i].at(x)


def median_cross_section(red: Sequence[SliceLine], blue: Sequence[SliceLine]):
    """Crossing of the increasing red median level with the decreasing blue one.

    Red slopes must be positive and blue slopes negative.  Returns
    ``(x, red_index, blue_index)`` where ``x`` is a :class:`SymbolicValue`.
    """
    if not red or not blue:
        raise ValueError("need at least one line of each color")
    if any(ln.slope <= 0 for ln in red) or any(ln.slope >= 0 for ln in blue):
        raise ValueError("red slopes must be positive, blue slopes negative")
    candidates = sorted(
        ((b.intercept - r.intercept) / (r.slope - b.slope) for r in red for b in blue),
        key=SymbolicValue.key,
    )

    def gap(x):
        return (_median_line(red, x)[1] - _median_line(blue, x)[1]).sign()

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if gap(candidates[mid]) >= 0:
            hi = mid
        else:
            lo = mid + 1
    x = candidates[lo]
    ri, rv = _median_line(red, x)
    bi, bv = _median_line(blue, x)
    if rv != bv:
        raise DegenerateInputError("median levels of a slice do not cross at a line pair")
    return x, ri, bi


# ---------------------------------------------------------------------------
# lines of intersection of two dual planes, parametrized by y

def line_point(p: DualPlane, r: DualPlane, y) -> Point3:
    """Point with ordinate ``y`` on the line where ``p`` and ``r`` meet (``p.a != r.a``)."""
    y = q(y)
    x = -((p.b - r.b) * y + (p.c - r.c)) / (p.a - r.a)
    return Point3(x, y, p.height(x, y))


def line_direction(p: DualPlane, r: DualPlane) -> Point3:
    """Direction of increasing ``y`` along the line ``p`` and ``r`` meet in."""
    dx = -(p.b - r.b) / (p.a - r.a)
    return Point3(dx, Fraction(1), p.a * dx + p.b)


def crossing_y(p: DualPlane, r: DualPlane, h: DualPlane) -> Fraction | None:
    """Ordinate where ``h`` crosses the line ``p`` and ``r`` meet; None if parallel."""
    da, db, dc = p.a - r.a, p.b - r.b, p.c - r.c
    ha, hb, hc = h.a - p.a, h.b - p.b, h.c - p.c
    den = da * hb - ha * db
    if den == 0:
        return None
    return (ha * dc - da * hc) / den


@dataclass(frozen=True)
class StartEdge:
    red: int
    blue: int
    point: Point3  # a concrete point on the unbounded first edge
    direction: Point3  # +y direction along the edge


def start_edge(instance: ColoredInstance) -> StartEdge:
    """The red/blue plane pair carrying the ``-y`` unbounded half-line of L."""
    reds, blues = instance.red_planes, instance.blue_planes
    red_lines = [SliceLine(p.a, SymbolicValue(p.b, p.c)) for p in reds]
    blue_lines = [SliceLine(p.a, SymbolicValue(p.b, p.c)) for p in blues]
    _, ri, bi = median_cross_section(red_lines, blue_lines)
    r, b = reds[ri], blues[bi]
    ys = [
        crossing_y(r, b, h)
        for h in reds + blues
        if not (h.color == RED and h.source_index == ri) and not (h.color == BLUE and h.source_index == bi)
    ]
    if any(y is None for y in ys):
        raise DegenerateInputError("a dual plane is parallel to the start edge")
    d = min(ys) - 1 if ys else Fraction(0)
    return StartEdge(ri, bi, line_point(r, b, d), line_direction(r, b))


# ---------------------------------------------------------------------------
# four-partition with a prescribed bisector

@dataclass(frozen=True)
class WeightedPoint2:
    x: Fraction
    y: Fraction
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "x", q(self.x))
        object.__setattr__(self, "y", q(self.y))
        object.__setattr__(self, "weight", q(self.weight))
        if self.weight <= 0:
            raise ValueError("weights must be positive")


@dataclass(frozen=True)
class OrientedLine:
    """``<p, normal> = offset``; the positive side lies left of ``direction``."""

    normal: tuple[Fraction, Fraction]
    offset: Fraction

    @property
    def direction(self) -> tuple[Fraction, Fraction]:
        nx, ny = self.normal
        return (ny, -nx)

    def side(self, p) -> int:
        return sign(p[0] * self.normal[0] + p[1] * self.normal[1] - self.offset)

    def __neg__(self) -> "OrientedLine":
        return OrientedLine((-self.normal[0], -self.normal[1]), -self.offset)

    def to_strings(self) -> list[str]:
        from .exact_geom import fraction_str

        return [fraction_str(c) for c in (*self.normal, self.offset)]


@dataclass(frozen=True)
class FourPartition:
    alpha: float  # angle between v and the normal of line1, in [0, pi/2]
    normal: tuple[Fraction, Fraction]  # normal of line1: v rotated counterclockwise by alpha
    line1: OrientedLine
    line2: OrientedLine  # normal: -(v rotated clockwise by alpha)
    quadrant_weights: dict[str, Fraction]  # keyed by (side of line1, side of line2)
    total_weight: Fraction
    on_line: tuple[tuple[int, ...], tuple[int, ...]]
    sweep_index: int = 0  # position of the chosen direction among the swept ones
    sign_change_window: tuple[int, int] = (0, 0)  # where x - y changes sign
    swept: int = 0  # number of swept directions

    @property
    def max_quadrant(self) -> Fraction:
        return max(self.quadrant_weights.values())

    @property
    def valid(self) -> bool:
        return 4 * self.max_quadrant <= self.total_weight


def _cross2(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _dot2(a, b) -> int:
    return a[0] * b[0] + a[1] * b[1]


def _primitive(u: tuple[int, int]) -> tuple[int, int]:
    g = math.gcd(u[0], u[1]) or 1
    return (u[0] // g, u[1] // g)


def _halving_offsets(proj: list[int], weights: list[int], total: int) -> list[int]:
    by_value: dict[int, int] = {}
    for t, w in zip(proj, weights):
        by_value[t] = by_value.get(t, 0) + w
    out = []
    below = 0
    for t in sorted(by_value):
        at = by_value[t]
        above = total - below - at
        if 2 * below <= total and 2 * above <= total:
            out.append(t)
        below += at
    return out


def _unoriented(pos: frozenset, neg: frozenset, on: frozenset):
    halves = sorted([tuple(sorted(pos)), tuple(sorted(neg))])
    return (tuple(sorted(on)), tuple(halves))


def four_partition_with_bisector(points: Sequence[WeightedPoint2], v=(0, 1)) -> FourPartition:
    """Lines ``line1``, ``line2`` with ``v`` bisecting their angle, each open
    quadrant carrying at most a quarter of the total weight.

    The normals of the two lines are ``u`` and ``-w`` where ``w`` is the mirror
    image of ``u`` in the axis ``v``, so the bisector property is exact.  The
    sweep visits every direction where the order of projections onto ``u`` or
    ``w`` changes, plus one direction inside every gap between them.
    """
    pts = [p if isinstance(p, WeightedPoint2) else WeightedPoint2(*p) for p in points]
    if not pts:
        raise ValueError("no points")
    total_q = sum(p.weight for p in pts)
    if total_q <= 0:
        raise ValueError("total weight must be positive")
    vq = tuple(q(c) for c in v)
    if not any(vq):
        raise ValueError("bisector direction must be nonzero")

    cden = math.lcm(*(c.denominator for p in pts for c in (p.x, p.y)))
    xy = [(int(p.x * cden), int(p.y * cden)) for p in pts]
    wden = math.lcm(*(p.weight.denominator for p in pts))
    wts = [int(p.weight * wden) for p in pts]
    total = sum(wts)
    vden = math.lcm(vq[0].denominator, vq[1].denominator)
    vi = _primitive((int(vq[0] * vden), int(vq[1] * vden)))
    vperp = (-vi[1], vi[0])
    vv = _dot2(vi, vi)

    def mirror(u):
        s = 2 * _dot2(u, vi)
        return (s * vi[0] - vv * u[0], s * vi[1] - vv * u[1])

    def in_arc(u):
        return _cross2(vi, u) >= 0 and _dot2(vi, u) >= 0

    crit = {vi, vperp}
    positions = sorted(set(xy))
    for a in range(len(positions)):
        for b in range(a + 1, len(positions)):
            ex, ey = positions[b][0] - positions[a][0], positions[b][1] - positions[a][1]
            for nrm in ((-ey, ex), (ey, -ex)):
                for u in (nrm, mirror(nrm)):
                    if in_arc(u):
                        crit.add(_primitive(u))
    crit_sorted = sorted(crit, key=functools.cmp_to_key(lambda a, b: -sign(_cross2(a, b))))
    dirs: list[tuple[int, int]] = []
    for t, u in enumerate(crit_sorted):
        dirs.append(u)
        if t + 1 < len(crit_sorted):
            nxt = crit_sorted[t + 1]
            dirs.append(_primitive((u[0] * 1 + nxt[0], u[1] * 1 + nxt[1])))

    n = len(pts)
    mags = max(max(abs(c) for c in p) for p in xy) + 1
    dmag = max(max(abs(c) for c in u) for u in dirs) * (5 * vv + 1)  # bounds |mirror(u)| too
    dtype = np.int64 if 4 * mags * dmag < (1 << 62) else object
    P = np.array(xy, dtype=dtype).reshape(-1, 2)
    W = np.array(wts, dtype=dtype)
    QUADS = (("++", 1, 1), ("+-", 1, -1), ("-+", -1, 1), ("--", -1, -1))

    configs = []  # (dir index, t1, t2, quadrant weights, x - y)
    for di, u in enumerate(dirs):
        w = mirror(u)
        pu = P[:, 0] * u[0] + P[:, 1] * u[1]
        pw = P[:, 0] * w[0] + P[:, 1] * w[1]
        for t1 in _halving_offsets(pu.tolist(), wts, total):
            s1 = np.sign(pu - t1).astype(np.int8)
            for t2 in _halving_offsets(pw.tolist(), wts, total):
                s2 = np.sign(t2 - pw).astype(np.int8)
                quad = {name: int(W[(s1 == a) & (s2 == b)].sum()) for name, a, b in QUADS}
                f = quad["+-"] + quad["-+"] - quad["++"] - quad["--"]
                configs.append((di, t1, t2, quad, f))

    # sign pattern of x - y per direction, and the window around its change
    pattern = [0] * len(dirs)
    seen = [False] * len(dirs)
    for di, *_, f in configs:
        s = 1 if f > 0 else (-1 if f < 0 else 0)
        pattern[di] = s if not seen[di] else (pattern[di] if pattern[di] == s else 0)
        seen[di] = True
    first_not_pos = next((i for i, s in enumerate(pattern) if s != 1), len(pattern))
    last_not_neg = next((i for i in range(len(pattern) - 1, -1, -1) if pattern[i] != -1), -1)
    lo, hi = max(first_not_pos - 1, 0), min(last_not_neg + 1, len(pattern) - 1)

    def max_quad(c):
        return max(c[3].values())

    def sides(c):
        u = dirs[c[0]]
        w = mirror(u)
        s1 = [sign(_dot2(p, u) - c[1]) for p in xy]
        s2 = [sign(c[2] - _dot2(p, w)) for p in xy]
        return s1, s2

    def key(c):
        s1, s2 = sides(c)
        sets1 = [frozenset(i for i in range(n) if s1[i] == s) for s in (1, -1, 0)]
        sets2 = [frozenset(i for i in range(n) if s2[i] == s) for s in (1, -1, 0)]
        return (tuple(sorted([_unoriented(*sets1), _unoriented(*sets2)])), c[0])

    valid = [c for c in configs if 4 * max_quad(c) <= total]
    pool = [c for c in valid if lo <= c[0] <= hi] or valid
    if not pool:
        least = min(max_quad(c) for c in configs)
        pool = [c for c in configs if max_quad(c) == least]
    best = min(pool, key=key)
    s1, s2 = sides(best)
    on1 = [i for i in range(n) if s1[i] == 0]
    on2 = [i for i in range(n) if s2[i] == 0]

    di, t1, t2, quad, _ = best
    u = dirs[di]
    w = mirror(u)
    # back to input scale: <p, u> over integer coordinates is cden * <p_in, u>
    line1 = OrientedLine((Fraction(u[0]), Fraction(u[1])), Fraction(t1, cden))
    line2 = OrientedLine((Fraction(-w[0]), Fraction(-w[1])), Fraction(-t2, cden))
    alpha = math.atan2(_cross2(vi, u), _dot2(vi, u))
    return FourPartition(
        alpha=alpha,
        normal=line1.normal,
        line1=line1,
        line2=line2,
        quadrant_weights={k: Fraction(val, wden) for k, val in quad.items()},
        total_weight=total_q,
        on_line=(tuple(sorted(on1)), tuple(sorted(on2))),
        sweep_index=di,
        sign_change_window=(lo, hi),
        swept=len(dirs),
    )


def quadrant_weights(points: Sequence[WeightedPoint2], line1: OrientedLine, line2: OrientedLine) -> dict[str, Fraction]:
    """Open-quadrant weights keyed by side signs; used for independent checks."""
    out = {"++": Fraction(0), "+-": Fraction(0), "-+": Fraction(0), "--": Fraction(0)}
    for p in points:
        s1, s2 = line1.side((p.x, p.y)), line2.side((p.x, p.y))
        if s1 and s2:
            out[("+" if s1 > 0 else "-") + ("+" if s2 > 0 else "-")] += p.weight
    return out
