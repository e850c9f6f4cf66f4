"""Trace the curve L where the red and blue median levels meet.

L is walked in the direction of increasing y, as an alternating sequence of
edges and vertices.  Each edge lies on one red and one blue dual plane.  At
each vertex a third plane crosses the current line.  That plane replaces the
current plane of its own color, and the walk continues along the new line.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .exact_geom import (
    BLUE,
    RED,
    ColoredInstance,
    DegenerateInputError,
    DualPlane,
    Point3,
    dualize,
    fraction_str,
    sign,
)
from .planar import line_direction, line_point, start_edge

PlaneRef = tuple[str, int]  # (color, index within its color class)


@dataclass(frozen=True)
class Edge:
    red: int
    blue: int

    @property
    def planes(self) -> tuple[PlaneRef, PlaneRef]:
        return ((RED, self.red), (BLUE, self.blue))


@dataclass(frozen=True)
class Vertex:
    position: Point3
    planes: tuple[PlaneRef, PlaneRef, PlaneRef]  # incident planes
    new_plane: PlaneRef  # enters here, relative to the previous edge
    leaving: PlaneRef  # not on the next edge
    before: int  # sign of new_plane (above = +1) on the previous edge
    after: int  # sign of leaving on the next edge


CurveElement = Union[Edge, Vertex]


@dataclass(frozen=True)
class Step:
    """One coordinate of a sign vector changes between consecutive elements."""

    color: str
    index: int
    old: int
    new: int


@dataclass
class LevelCurve:
    """Elements ``x_1 .. x_m`` of L; ``x_1`` and ``x_m`` are half-lines."""

    instance: ColoredInstance
    elements: list[CurveElement]
    start_point: Point3  # a point on the first half-line
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.elements)

    @property
    def vertices(self) -> list[Vertex]:
        return [e for e in self.elements if isinstance(e, Vertex)]

    def _plane(self, ref: PlaneRef) -> DualPlane:
        pts = self.instance.red if ref[0] == RED else self.instance.blue
        return dualize(pts[ref[1]], ref[0], ref[1])

    def sample_point(self, i: int) -> Point3:
        """A point of element ``i`` (0-based): the vertex itself, or an interior point."""
        el = self.elements[i]
        if isinstance(el, Vertex):
            return el.position
        r, b = self._plane((RED, el.red)), self._plane((BLUE, el.blue))
        if i == 0:
            y = self.elements[1].position.y - 1
        elif i == self.m - 1:
            y = self.elements[i - 1].position.y + 1
        else:
            y = (self.elements[i - 1].position.y + self.elements[i + 1].position.y) / 2
        return line_point(r, b, y)

    def sign_vectors(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(red, blue) sign vectors of element ``i``; +1 where the plane is strictly above."""
        p = self.sample_point(i)
        return (
            tuple(dp.above_sign(p) for dp in self.instance.red_planes),
            tuple(dp.above_sign(p) for dp in self.instance.blue_planes),
        )

    def step(self, i: int) -> Step:
        """The sign change from element ``i`` to ``i + 1``."""
        a, b = self.elements[i], self.elements[i + 1]
        if isinstance(b, Vertex):
            return Step(b.new_plane[0], b.new_plane[1], b.before, 0)
        return Step(a.leaving[0], a.leaving[1], 0, a.after)

    def to_json(self, include_timings: bool = False) -> dict:
        out = []
        for el in self.elements:
            if isinstance(el, Edge):
                out.append({"type": "edge", "red": el.red, "blue": el.blue})
            else:
                out.append(
                    {
                        "type": "vertex",
                        "position": el.position.to_strings(),
                        "planes": [list(p) for p in el.planes],
                        "new_plane": list(el.new_plane),
                    }
                )
        doc = {
            "k": self.instance.k,
            "n": self.instance.n,
            "m": self.m,
            "start_point": self.start_point.to_strings(),
            "elements": out,
        }
        if include_timings:
            doc["timings"] = self.timings
        return doc


def _coeffs(instance: ColoredInstance):
    # dual plane of p: z = p1 x + p2 y - p3, integer coefficients
    red = [(int(p.x), int(p.y), -int(p.z)) for p in instance.red]
    blue = [(int(p.x), int(p.y), -int(p.z)) for p in instance.blue]
    return red, blue


def _next_crossing(line, others, y_cur):
    """First plane crossing the line ``line`` strictly after ``y_cur``.

    Returns ``(y, ref, den, da)`` or None.  ``den / da`` is the rate at which
    the plane rises relative to the line as y grows.
    """
    (ai, bi, ci), (aj, bj, cj) = line
    da, db, dc = ai - aj, bi - bj, ci - cj
    best = None
    tie = False
    for ref, (ah, bh, ch) in others:
        ha, hb, hc = ah - ai, bh - bi, ch - ci
        den = da * hb - ha * db
        if den == 0:
            continue
        y = Fraction(ha * dc - da * hc, den)
        if y_cur is not None and y <= y_cur:
            continue
        if best is None or y < best[0]:
            best, tie = (y, ref, den, da), False
        elif y == best[0]:
            tie = True
    if tie:
        raise DegenerateInputError("four dual planes meet in a point")
    return best


def trace(instance: ColoredInstance) -> LevelCurve:
    t0 = time.perf_counter()
    se = start_edge(instance)
    t1 = time.perf_counter()
    red, blue = _coeffs(instance)
    r, b = se.red, se.blue
    elements: list[CurveElement] = [Edge(r, b)]
    y_cur = None
    while True:
        line = (red[r], blue[b])
        others = [((RED, i), c) for i, c in enumerate(red) if i != r]
        others += [((BLUE, j), c) for j, c in enumerate(blue) if j != b]
        hit = _next_crossing(line, others, y_cur)
        if hit is None:
            break
        y, ref, den, da = hit
        before = -sign(den) * sign(da)
        rp = DualPlane(*map(Fraction, red[r]), RED, r)
        bp = DualPlane(*map(Fraction, blue[b]), BLUE, b)
        pos = line_point(rp, bp, y)
        if ref[0] == RED:
            leaving, r = (RED, r), ref[1]
        else:
            leaving, b = (BLUE, b), ref[1]
        # sign of the leaving plane on the new line, just after the vertex
        (ai, bi, _), (aj, bj, _) = red[r], blue[b]
        lc = red[leaving[1]] if leaving[0] == RED else blue[leaving[1]]
        nda, ndb = ai - aj, bi - bj
        nden = nda * (lc[1] - bi) - (lc[0] - ai) * ndb
        after = sign(nden) * sign(nda)
        planes = tuple(sorted({(RED, r), (BLUE, b), leaving}))
        elements.append(Vertex(pos, planes, ref, leaving, before, after))
        elements.append(Edge(r, b))
        y_cur = y
    if len(elements) < 3:
        raise DegenerateInputError("the median levels meet in a single line")
    t2 = time.perf_counter()
    return LevelCurve(instance, elements, se.point, {"start_edge": t1 - t0, "trace": t2 - t1})


def side_counts(curve: LevelCurve, i: int) -> tuple[int, int]:
    """Numbers of red and blue planes strictly below the sample point of element ``i``."""
    sr, sb = curve.sign_vectors(i)
    return sum(1 for s in sr if s < 0), sum(1 for s in sb if s < 0)


def trace_log_lines(curve: LevelCurve):
    """JSON-serializable records, one per vertex, for ``--emit-trace-log``."""
    for idx, el in enumerate(curve.elements):
        if isinstance(el, Vertex):
            yield {
                "element": idx,
                "y": fraction_str(el.position.y),
                "new_plane": list(el.new_plane),
                "leaving": list(el.leaving),
            }


__all__ = [
    "Edge",
    "Vertex",
    "CurveElement",
    "Step",
    "LevelCurve",
    "trace",
    "side_counts",
    "trace_log_lines",
    "line_direction",
]
