"""Winding-number search for a pair of vertices of L where both X and Y vanish.

Grid points ``(i, j)`` index pairs of elements of L (0-based).  The map
``pi(i, j) = (X, Y)`` takes each unit step in the grid to a step of at most
one unit in a single coordinate.  So a closed grid curve has a well-defined
image winding number unless its image passes through the origin.  The search
starts from the triangular curve, whose image winds an odd number of times.
It then repeatedly halves the enclosed region, keeping a half whose boundary
still has odd winding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exact_geom import RED
from .tracer import LevelCurve, Vertex

GridPoint = tuple[int, int]


def xy(curve: LevelCurve, i: int, j: int) -> tuple[int, int]:
    """``(X, Y)`` for elements ``i`` and ``j``, directly from sign vectors."""
    ri, bi = curve.sign_vectors(i)
    rj, bj = curve.sign_vectors(j)
    return sum(a * b for a, b in zip(ri, rj)), sum(a * b for a, b in zip(bi, bj))


class SignWalker:
    """Tracks ``pi(i, j)`` while ``(i, j)`` moves in unit grid steps.

    The sign vectors of ``x_i`` and ``x_j`` are computed geometrically once.
    After that every move costs O(1), because consecutive elements of L differ
    in exactly one sign.
    """

    def __init__(self, curve: LevelCurve, start: GridPoint = (0, 0)):
        self.curve = curve
        self.m = curve.m
        self._steps = [curve.step(t) for t in range(curve.m - 1)]
        self.i, self.j = start
        ri, bi = curve.sign_vectors(self.i)
        rj, bj = curve.sign_vectors(self.j)
        self._vi = [list(ri), list(bi)]
        self._vj = [list(rj), list(bj)]
        self.X = sum(a * b for a, b in zip(ri, rj))
        self.Y = sum(a * b for a, b in zip(bi, bj))
        self.moves = 0

    @property
    def value(self) -> tuple[int, int]:
        return (self.X, self.Y)

    def _apply(self, mine, other, forward: bool, t: int):
        st = self._steps[t]
        old, new = (st.old, st.new) if forward else (st.new, st.old)
        c = 0 if st.color == RED else 1
        delta = (new - old) * other[c][st.index]
        mine[c][st.index] = new
        if c == 0:
            self.X += delta
        else:
            self.Y += delta

    def move(self, di: int, dj: int) -> tuple[int, int]:
        if abs(di) + abs(dj) != 1:
            raise ValueError("moves are single unit steps")
        if di:
            ni = self.i + di
            if not 0 <= ni < self.m:
                raise IndexError("walk leaves the grid")
            self._apply(self._vi, self._vj, di > 0, min(self.i, ni))
            self.i = ni
        else:
            nj = self.j + dj
            if not 0 <= nj < self.m:
                raise IndexError("walk leaves the grid")
            self._apply(self._vj, self._vi, dj > 0, min(self.j, nj))
            self.j = nj
        self.moves += 1
        return self.value

    def goto(self, target: GridPoint) -> tuple[int, int]:
        ti, tj = target
        while self.i != ti:
            self.move(1 if ti > self.i else -1, 0)
        while self.j != tj:
            self.move(0, 1 if tj > self.j else -1)
        return self.value


def pi_image(curve: LevelCurve, path: Sequence[GridPoint], walker: SignWalker | None = None) -> list[tuple[int, int]]:
    """Images of the grid points of ``path`` (consecutive points one unit apart)."""
    if not path:
        return []
    w = walker or SignWalker(curve, path[0])
    out = [w.goto(path[0])]
    for (a, b), (c, d) in zip(path, path[1:]):
        out.append(w.move(c - a, d - b) if (a, b) != (c, d) else w.value)
    return out


def winding(image: Sequence[tuple[int, int]]) -> int | None:
    """Winding number of a closed polygonal curve around the origin.

    Counts signed crossings of the ray ``{(x, 0) : x > 0}``, with a half-open
    rule at vertices on the ray, so a curve that touches the ray and turns
    back contributes nothing.  Returns None if the curve meets the origin.
    """
    if not image:
        return None
    pts = list(image)
    if pts[0] != pts[-1]:
        pts.append(pts[0])
    total = 0
    for (ax, ay), (bx, by) in zip(pts, pts[1:]):
        if (ax, ay) == (0, 0):
            return None
        # the origin on the segment itself
        if ax * by - ay * bx == 0 and min(ax, bx) <= 0 <= max(ax, bx) and min(ay, by) <= 0 <= max(ay, by):
            return None
        if ay <= 0 < by or by <= 0 < ay:
            # x-coordinate of the crossing with y = 0, sign-tested without division
            num = ax * (by - ay) - ay * (bx - ax)
            den = by - ay
            if num * den > 0:
                total += 1 if by > ay else -1
    return total


def is_grid_curve(image: Sequence[tuple[int, int]]) -> bool:
    """Each step changes at most one coordinate, by at most one."""
    for (ax, ay), (bx, by) in zip(image, image[1:]):
        dx, dy = abs(bx - ax), abs(by - ay)
        if dx > 1 or dy > 1 or (dx and dy):
            return False
    return True


@dataclass(frozen=True)
class TrapezoidalRegion:
    """Cells ``[i, i+1] x [j, j+1]`` with ``i_lo <= i < i_hi``,
    ``j_lo <= j < j_hi`` and ``j <= i``."""

    i_lo: int
    i_hi: int
    j_lo: int
    j_hi: int

    @classmethod
    def triangle(cls, m: int) -> "TrapezoidalRegion":
        return cls(0, m - 1, 0, m - 1)

    @property
    def j_top(self) -> int:
        return min(self.j_hi - 1, self.i_hi - 1)

    def row_start(self, j: int) -> int:
        return max(self.i_lo, j)

    @property
    def empty(self) -> bool:
        return self.j_top < self.j_lo or self.row_start(self.j_lo) >= self.i_hi

    @property
    def area(self) -> int:
        if self.empty:
            return 0
        return sum(self.i_hi - self.row_start(j) for j in range(self.j_lo, self.j_top + 1))

    @property
    def height(self) -> int:
        return 0 if self.empty else self.j_top - self.j_lo + 1

    def cells(self) -> Iterable[GridPoint]:
        if self.empty:
            return
        for j in range(self.j_lo, self.j_top + 1):
            for i in range(self.row_start(j), self.i_hi):
                yield (i, j)

    def boundary(self) -> list[GridPoint]:
        """Closed counterclockwise boundary; the first point is repeated at the end."""
        if self.empty:
            raise ValueError("empty region")
        lo, top = self.j_lo, self.j_top
        start = (self.row_start(lo), lo)
        path = [start]
        i, j = start
        for i in range(i + 1, self.i_hi + 1):
            path.append((i, lo))
        for j in range(lo + 1, top + 2):
            path.append((self.i_hi, j))
        left = self.row_start(top)
        for i in range(self.i_hi - 1, left - 1, -1):
            path.append((i, top + 1))
        for j in range(top, lo - 1, -1):
            path.append((self.row_start(j), j))
            if j > lo:
                for i in range(self.row_start(j) - 1, self.row_start(j - 1) - 1, -1):
                    path.append((i, j))
        return path

    def width(self, j: int | None = None) -> int:
        return self.i_hi - self.row_start(self.j_lo if j is None else j)

    def is_block(self, unit: int = 1) -> bool:
        return self.height <= unit and self.width() <= unit

    def split(self, unit: int = 1) -> tuple["TrapezoidalRegion", "TrapezoidalRegion", list[GridPoint]]:
        """Two regions partitioning the cells, and the chord between them.

        Chords lie on multiples of ``unit`` relative to the region's corner.
        With ``unit = 1`` this halves the height, or the width of a single row.
        """
        if self.empty or self.is_block(unit):
            raise ValueError("a single block cannot be split")
        h = self.height
        if h > unit:
            mid = self.j_lo + unit * (-(-h // unit) // 2)
            a = TrapezoidalRegion(self.i_lo, self.i_hi, self.j_lo, mid)
            b = TrapezoidalRegion(self.i_lo, self.i_hi, mid, self.j_top + 1)
            chord = [(i, mid) for i in range(b.row_start(mid), self.i_hi + 1)]
        else:
            left = self.row_start(self.j_lo)
            blocks = -(-self.width() // unit)
            mid = left + unit * (-(-blocks // 2))
            a = TrapezoidalRegion(left, mid, self.j_lo, self.j_top + 1)
            b = TrapezoidalRegion(mid, self.i_hi, self.j_lo, self.j_top + 1)
            chord = [(mid, j) for j in range(self.j_lo, self.j_top + 2)]
        return a, b, chord


def triangular_curve(m: int) -> list[GridPoint]:
    return TrapezoidalRegion.triangle(m).boundary()


def round_bound(area: int) -> int:
    return math.ceil(math.log(area, 6 / 5)) + 1 if area > 1 else 1


class GridSearchError(RuntimeError):
    pass


@dataclass
class SearchResult:
    zero: GridPoint  # (i, j), both vertices of L
    rounds: int
    area: int
    log: list[dict] = field(default_factory=list)
    walker_moves: int = 0

    @property
    def bound(self) -> int:
        return round_bound(self.area)


def _walk(walker: SignWalker, path: Sequence[GridPoint]):
    """Walk ``path``; returns (image, first grid point mapped to the origin or None)."""
    image = [walker.goto(path[0])]
    hit = path[0] if image[0] == (0, 0) else None
    for (a, b), (c, d) in zip(path, path[1:]):
        val = walker.move(c - a, d - b)
        image.append(val)
        if hit is None and val == (0, 0):
            hit = (c, d)
    return image, hit


def local_degree(curve: LevelCurve, i: int, j: int, walker: SignWalker | None = None) -> int | None:
    """Winding of the image of the 8-neighbour ring around ``(i, j)``.

    A zero of ``pi`` at a vertex pair yields an eight-partition exactly when
    this degree is odd: both X and Y must change sign across it.
    """
    if not (0 < i < curve.m - 1 and 0 < j < curve.m - 1):
        return None
    ring = [(i + 1, j - 1), (i + 1, j), (i + 1, j + 1), (i, j + 1), (i - 1, j + 1), (i - 1, j), (i - 1, j - 1), (i, j - 1), (i + 1, j - 1)]
    return winding(pi_image(curve, ring, walker))


def search(curve: LevelCurve) -> SearchResult:
    """Find vertices ``(i, j)`` with ``pi(i, j) = (0, 0)`` and odd local degree.

    Every zero sits at a pair of odd indices (two vertices), and the boundary
    of T never meets one.  All chords are drawn on even grid lines, so no
    region boundary meets a zero either, and the winding of a boundary is
    the sum of the local degrees of the zeros it encloses.  Odd winding
    therefore always encloses a zero of odd degree, and the halving ends at a
    2 x 2 block whose centre is such a zero.
    """
    m = curve.m
    if m % 2 == 0:
        raise GridSearchError("L must alternate edges and vertices")
    region = TrapezoidalRegion.triangle(m)
    walker = SignWalker(curve, (0, 0))
    total_area = region.area
    log: list[dict] = []

    image, hit = _walk(walker, region.boundary())
    if hit is not None:
        raise GridSearchError(f"pi vanishes on the triangular curve at {hit}")
    w = winding(image)
    log.append({"round": 0, "region": _region_json(region), "area": region.area, "winding": w})
    if w is None or w % 2 == 0:
        raise GridSearchError(f"triangular curve has even winding {w}")
    rounds = 0
    while not region.is_block(2):
        rounds += 1
        a, b, chord = region.split(2)
        _, hit = _walk(walker, chord)
        if hit is not None:
            raise GridSearchError(f"pi vanishes on an even chord at {hit}")
        img_a, _ = _walk(walker, a.boundary())
        wa = winding(img_a)
        img_b, _ = _walk(walker, b.boundary())
        wb = winding(img_b)
        if wa is None or wb is None or wa + wb != w:
            raise GridSearchError("winding numbers are not additive across a chord")
        # defensive: both odd cannot happen; prefer the smaller piece
        region, w = (a, wa) if wa % 2 and (wb % 2 == 0 or a.area <= b.area) else (b, wb)
        log.append(
            {
                "round": rounds,
                "area": region.area,
                "winding": w,
                "region": _region_json(region),
                "areas": [a.area, b.area],
                "windings": [wa, wb],
            }
        )
    centre = (region.row_start(region.j_lo) + 1, region.j_lo + 1)
    if walker.goto(centre) != (0, 0):
        raise GridSearchError(f"odd block without a zero at its centre {centre}")
    i, j = centre
    if not (isinstance(curve.elements[i], Vertex) and isinstance(curve.elements[j], Vertex)):
        raise GridSearchError(f"pi vanishes at a non-vertex pair {centre}")
    log.append({"round": rounds, "event": "zero", "at": [i, j]})
    return SearchResult(centre, rounds, total_area, log, walker.moves)


def _region_json(r: TrapezoidalRegion) -> list[int]:
    return [r.i_lo, r.i_hi, r.j_lo, r.j_hi]
