"""Exact rational geometry in R^3.

Every coordinate is a :class:`fractions.Fraction`, so all orientation and
side tests are exact.  The module also owns the coordinate frames used by the
partition pipeline: the linear map sending a prescribed normal direction to
the z-axis, the translation through the z-median point and the shear that
separates red points from blue points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

ExactScalar = Fraction

RED = "red"
BLUE = "blue"

# int64 fast paths are used only while integer coordinates stay below this.
_INT64_COORD_LIMIT = 1 << 28


def q(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Strings are read as decimal literals or ``"num/den"``; floats are taken
    at their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def fraction_str(value: Fraction) -> str:
    value = q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sign(value) -> int:
    return (value > 0) - (value < 0)


class Point3(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction

    @classmethod
    def of(cls, x, y, z) -> "Point3":
        return cls(q(x), q(y), q(z))

    def __sub__(self, other):  # type: ignore[override]
        return Point3(self.x - other[0], self.y - other[1], self.z - other[2])

    def __add__(self, other):  # type: ignore[override]
        return Point3(self.x + other[0], self.y + other[1], self.z + other[2])

    def scaled(self, s) -> "Point3":
        return Point3(self.x * s, self.y * s, self.z * s)

    def to_strings(self) -> list[str]:
        return [fraction_str(c) for c in self]


def as_point(p) -> Point3:
    if isinstance(p, Point3):
        return p
    x, y, z = p
    return Point3.of(x, y, z)


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


@dataclass(frozen=True)
class OrientedPlane:
    """The plane ``<x, normal> = offset``; ``H+`` is where ``<x, normal> > offset``."""

    normal: tuple[Fraction, Fraction, Fraction]
    offset: Fraction

    def __post_init__(self):
        normal = tuple(q(c) for c in self.normal)
        if len(normal) != 3 or not any(normal):
            raise ValueError("plane normal must be a nonzero 3-vector")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", q(self.offset))

    def value(self, p) -> Fraction:
        return dot(p, self.normal) - self.offset

    def side(self, p) -> int:
        """+1 for H+, -1 for H-, 0 on the plane."""
        return sign(self.value(p))

    def __neg__(self) -> "OrientedPlane":
        return OrientedPlane(tuple(-c for c in self.normal), -self.offset)

    def is_vertical(self) -> bool:
        return self.normal[2] == 0

    def primitive(self) -> "OrientedPlane":
        """Same oriented plane, scaled by a positive factor to coprime integers."""
        coeffs = (*self.normal, self.offset)
        den = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * den) for c in coeffs]
        g = math.gcd(*ints)
        return OrientedPlane(tuple(Fraction(c // g) for c in ints[:3]), Fraction(ints[3] // g))

    @classmethod
    def with_normal_through(cls, normal, point) -> "OrientedPlane":
        normal = tuple(q(c) for c in normal)
        return cls(normal, dot(as_point(point), normal))

    @classmethod
    def through(cls, points: Sequence) -> "OrientedPlane":
        """Some plane containing the given (at most three) points."""
        pts = [as_point(p) for p in points]
        if len(pts) > 3:
            raise ValueError("at most three points determine a plane here")
        if not pts:
            return cls((0, 0, 1), 0)
        base = pts[0]
        dirs = [p - base for p in pts[1:]]
        dirs = [d for d in dirs if any(d)]
        if len(dirs) == 2:
            n = cross(dirs[0], dirs[1])
            if any(n):
                return cls.with_normal_through(n, base)
            dirs = dirs[:1]
        if len(dirs) == 1:
            d = dirs[0]
            # any normal orthogonal to d
            for axis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                n = cross(d, axis)
                if any(n):
                    return cls.with_normal_through(n, base)
        return cls.with_normal_through((0, 0, 1), base)

    def to_strings(self) -> list[str]:
        return [fraction_str(c) for c in (*self.normal, self.offset)]

    @classmethod
    def from_strings(cls, fields: Sequence[str]) -> "OrientedPlane":
        if len(fields) != 4:
            raise ValueError(f"a plane needs four coefficients, got {len(fields)}")
        a, b, c, d = (q(f) for f in fields)
        return cls((a, b, c), d)


def sign_vectors(k: int) -> list[str]:
    """All sign strings of length ``k`` in lexicographic order, ``'+'`` first."""
    out = [""]
    for _ in range(k):
        out = [s + c for s in out for c in "+-"]
    return out


def sign_parity(alpha: str, beta: str) -> int:
    """Number of coordinates where both sign strings are ``'-'``."""
    return sum(a == "-" and b == "-" for a, b in zip(alpha, beta))


@dataclass(frozen=True)
class DualPlane:
    """The non-vertical plane ``z = a x + b y + c`` dual to an input point."""

    a: Fraction
    b: Fraction
    c: Fraction
    color: str
    source_index: int

    def height(self, x, y) -> Fraction:
        return self.a * x + self.b * y + self.c

    def above_sign(self, p) -> int:
        """+1 if this plane passes strictly above ``p``, -1 strictly below, 0 through it."""
        return sign(self.height(p[0], p[1]) - p[2])


def dualize(p, color: str = RED, index: int = -1) -> DualPlane:
    p = as_point(p)
    return DualPlane(p.x, p.y, -p.z, color, index)


def dual_point(plane: DualPlane) -> Point3:
    """Inverse of :func:`dualize`."""
    return Point3(plane.a, plane.b, -plane.c)


def plane_of_dual_point(p) -> OrientedPlane:
    """The primal plane ``p*: z = p1 x + p2 y - p3`` as an oriented plane (H+ above)."""
    p = as_point(p)
    return OrientedPlane((-p.x, -p.y, Fraction(1)), -p.z)


@dataclass(frozen=True)
class AffineMap:
    """``x -> M x + t`` with exact rational entries."""

    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, Fraction, Fraction] = (Fraction(0),) * 3

    def __post_init__(self):
        m = tuple(tuple(q(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", tuple(q(c) for c in self.offset))
        if self.determinant() == 0:
            raise ValueError("affine map must be invertible")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def determinant(self) -> Fraction:
        m = self.matrix
        return dot(m[0], cross(m[1], m[2]))

    def apply(self, p) -> Point3:
        return Point3(*(dot(row, p) + t for row, t in zip(self.matrix, self.offset)))

    def then(self, other: "AffineMap") -> "AffineMap":
        """The map ``other(self(x))``."""
        m = other.matrix
        cols = list(zip(*self.matrix))
        prod = tuple(tuple(dot(row, col) for col in cols) for row in m)
        t = tuple(dot(row, self.offset) + o for row, o in zip(m, other.offset))
        return AffineMap(prod, t)

    def inverse(self) -> "AffineMap":
        m = self.matrix
        det = self.determinant()
        c0, c1, c2 = cross(m[1], m[2]), cross(m[2], m[0]), cross(m[0], m[1])
        inv = tuple(tuple(c[i] / det for c in (c0, c1, c2)) for i in range(3))
        t = tuple(-dot(row, self.offset) for row in inv)
        return AffineMap(inv, t)

    def pull_back(self, plane: OrientedPlane) -> OrientedPlane:
        """Plane in source coordinates whose image is ``plane``; sides are preserved."""
        cols = list(zip(*self.matrix))
        normal = tuple(dot(col, plane.normal) for col in cols)
        return OrientedPlane(normal, plane.offset - dot(self.offset, plane.normal))

    def push_forward(self, plane: OrientedPlane) -> OrientedPlane:
        return self.inverse().pull_back(plane)


def frame_for_direction(v) -> AffineMap:
    """Invertible linear map whose third output coordinate is ``<x, v>``.

    The other two rows are standard basis vectors, so ``v = e3`` gives the
    identity.  Only incidences and sides matter downstream, so the map need
    not be a rotation.
    """
    v = tuple(q(c) for c in v)
    if not any(v):
        raise ValueError("direction must be nonzero")
    drop = max(i for i in range(3) if v[i] != 0)
    keep = [i for i in range(3) if i != drop]
    rows = []
    for i in keep:
        row = [0, 0, 0]
        row[i] = 1
        rows.append(tuple(row))
    rows.append(v)
    return AffineMap(tuple(rows))


# ---------------------------------------------------------------------------
# general position

@dataclass(frozen=True)
class Violation:
    kind: str  # "horizontal_pair" | "vertical_triple" | "coplanar_quadruple"
    indices: tuple[int, ...]

    def __str__(self) -> str:
        what = {
            "horizontal_pair": "two points in a horizontal plane",
            "vertical_triple": "three points in a vertical plane",
            "coplanar_quadruple": "four points in a plane",
        }[self.kind]
        return f"{what}: indices {list(self.indices)}"


class DegenerateInputError(ValueError):
    def __init__(self, violation: Violation | str):
        self.violation = violation
        super().__init__(f"input is not in general position ({violation})")


def to_integer_coords(points: Sequence[Point3]) -> list[tuple[int, int, int]]:
    """Scale by the common denominator; incidences are unchanged."""
    if not points:
        return []
    den = math.lcm(*(c.denominator for p in points for c in p))
    return [tuple(int(c * den) for c in p) for p in points]


def _horizontal_pair(points) -> Violation | None:
    seen: dict[Fraction, int] = {}
    for i, p in enumerate(points):
        j = seen.setdefault(p[2], i)
        if j != i:
            return Violation("horizontal_pair", (j, i))
    return None


def _primitive2(dx: int, dy: int) -> tuple[int, int]:
    g = math.gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return dx, dy


def collinear_triple_2d(xy: Sequence[tuple[int, int]]) -> tuple[int, int, int] | None:
    """Indices of three collinear integer points (repeated points count), or None."""
    n = len(xy)
    for a in range(n):
        ax, ay = xy[a]
        seen: dict[tuple[int, int], int] = {}
        for b in range(a + 1, n):
            dx, dy = xy[b][0] - ax, xy[b][1] - ay
            if dx == 0 and dy == 0:
                # duplicate projection: collinear with any third point
                c = next(c for c in range(n) if c not in (a, b)) if n > 2 else None
                if c is not None:
                    return tuple(sorted((a, b, c)))
                continue
            key = _primitive2(dx, dy)
            if key in seen:
                return (a, seen[key], b)
            seen[key] = b
    return None


_HASH_MULT = (np.int64(0x9E3779B97F4A7C15 - (1 << 64)), np.int64(0x632BE59BD9B4E019), np.int64(0x3C6EF372FE94F82B))


def _coplanar_quadruple_int64(Z: np.ndarray) -> tuple[int, ...] | None:
    n = len(Z)
    with np.errstate(over="ignore"):
        for i in range(n - 3):
            D = Z[i + 1:] - Z[i]
            r = len(D)
            aa, bb = np.triu_indices(r, 1)
            N = np.cross(D[aa], D[bb])
            zero = ~N.any(axis=1)
            if zero.any():
                t = int(np.argmax(zero))
                a, b = int(aa[t]) + i + 1, int(bb[t]) + i + 1
                c = next(c for c in range(n) if c not in (i, a, b))
                return tuple(sorted((i, a, b, c)))
            g = np.gcd.reduce(np.abs(N), axis=1)
            N = N // g[:, None]
            first = np.where(N[:, 0] != 0, N[:, 0], np.where(N[:, 1] != 0, N[:, 1], N[:, 2]))
            N = N * np.sign(first)[:, None]
            h = N[:, 0] * _HASH_MULT[0] + N[:, 1] * _HASH_MULT[1] + N[:, 2] * _HASH_MULT[2]
            order = np.lexsort((h, aa))
            hs, As = h[order], aa[order]
            dup = np.nonzero((hs[1:] == hs[:-1]) & (As[1:] == As[:-1]))[0]
            for t in dup:
                s0, s1 = order[t], order[t + 1]
                if (N[s0] == N[s1]).all():
                    a = int(aa[s0]) + i + 1
                    b, c = sorted((int(bb[s0]) + i + 1, int(bb[s1]) + i + 1))
                    return (i, a, b, c)
    return None


def _coplanar_quadruple_exact(Z) -> tuple[int, ...] | None:
    n = len(Z)
    for i in range(n - 3):
        for a in range(i + 1, n - 2):
            da = [Z[a][t] - Z[i][t] for t in range(3)]
            seen: dict[tuple[int, int, int], int] = {}
            for b in range(a + 1, n):
                db = [Z[b][t] - Z[i][t] for t in range(3)]
                nrm = cross(da, db)
                if not any(nrm):
                    c = next(c for c in range(n) if c not in (i, a, b))
                    return tuple(sorted((i, a, b, c)))
                g = math.gcd(*nrm)
                nrm = tuple(x // g for x in nrm)
                lead = next(x for x in nrm if x)
                if lead < 0:
                    nrm = tuple(-x for x in nrm)
                if nrm in seen:
                    return (i, a, seen[nrm], b)
                seen[nrm] = b
    return None


def coplanar_quadruple(points: Sequence[Point3]) -> tuple[int, ...] | None:
    """Indices of four coplanar points, or None (affine invariant)."""
    if len(points) < 4:
        return None
    Z = to_integer_coords(points)
    if max(abs(c) for p in Z for c in p) < _INT64_COORD_LIMIT:
        return _coplanar_quadruple_int64(np.array(Z, dtype=np.int64))
    return _coplanar_quadruple_exact(Z)


def vertical_triple(points: Sequence[Point3]) -> tuple[int, int, int] | None:
    if len(points) < 3:
        return None
    Z = to_integer_coords(points)
    return collinear_triple_2d([(p[0], p[1]) for p in Z])


def projection_along(v) -> AffineMap:
    """Linear map ``x -> (<a, x>, <b, x>, <v, x>)`` with ``a``, ``b`` orthogonal to ``v``.

    Three points have collinear images in the first two coordinates exactly
    when they span a plane parallel to ``v``.
    """
    v = tuple(q(c) for c in v)
    if not any(v):
        raise ValueError("direction must be nonzero")
    axis = min(range(3), key=lambda i: (abs(v[i]), i))
    e = [0, 0, 0]
    e[axis] = 1
    a = cross(v, e)
    b = cross(v, a)
    return AffineMap((a, b, v))


def general_position_check(points: Sequence, direction=None) -> Violation | None:
    """Check no two points in a horizontal plane, no three in a vertical plane
    and no four in a plane.

    "Horizontal" means normal to ``direction`` (default ``e3``) and "vertical"
    means parallel to it.  Returns ``None`` when all conditions hold.
    """
    pts = [as_point(p) for p in points]
    if direction is not None:
        proj = projection_along(direction)
        pts = [proj.apply(p) for p in pts]
    found = _horizontal_pair(pts)
    if found:
        return found
    tri = vertical_triple(pts)
    if tri:
        return Violation("vertical_triple", tri)
    quad = coplanar_quadruple(pts)
    if quad:
        return Violation("coplanar_quadruple", quad)
    return None


# ---------------------------------------------------------------------------
# canonical instances

@dataclass(frozen=True)
class ColoredInstance:
    """Point set of size ``8k+7`` in canonical position.

    In transformed coordinates the z-median point is on ``z = 0``, the
    ``4k+3`` red points satisfy ``z < 0, x > 0`` and the ``4k+3`` blue points
    ``z > 0, x < 0``.  Coordinates are integers.
    """

    k: int
    red: tuple[Point3, ...]
    blue: tuple[Point3, ...]
    median: Point3
    red_index: tuple[int, ...]
    blue_index: tuple[int, ...]
    median_index: int
    transform: AffineMap  # input coordinates -> canonical coordinates
    shear: Fraction
    direction: tuple[Fraction, Fraction, Fraction]
    h1: OrientedPlane = field(default=OrientedPlane((0, 0, 1), 0))

    @property
    def n(self) -> int:
        return len(self.red) + len(self.blue) + 1

    @property
    def red_planes(self) -> list[DualPlane]:
        return [dualize(p, RED, i) for i, p in enumerate(self.red)]

    @property
    def blue_planes(self) -> list[DualPlane]:
        return [dualize(p, BLUE, i) for i, p in enumerate(self.blue)]

    @property
    def inverse(self) -> AffineMap:
        return self.transform.inverse()

    def check_invariants(self) -> None:
        size = 4 * self.k + 3
        assert len(self.red) == len(self.blue) == size
        assert self.median.z == 0
        assert all(p.z < 0 and p.x > 0 for p in self.red)
        assert all(p.z > 0 and p.x < 0 for p in self.blue)


def _shear_candidates(ratio_max: Fraction):
    if ratio_max < 0:
        yield Fraction(0)
    s = Fraction(math.floor(ratio_max) + 1) if ratio_max >= 0 else Fraction(1)
    while True:
        yield s
        s += 1


def canonicalize(points: Sequence, direction=(0, 0, 1), max_shear_tries: int = 64, check: bool = True) -> ColoredInstance:
    """Bring ``8k+7`` points into canonical position for direction ``direction``.

    ``check=False`` skips the coplanarity test for callers that already ran it.
    """
    pts = [as_point(p) for p in points]
    n = len(pts)
    if n < 7 or (n - 7) % 8:
        raise ValueError(f"canonical instances need n = 8k+7 points, got {n}")
    k = (n - 7) // 8
    direction = tuple(q(c) for c in direction)
    frame = frame_for_direction(direction)
    framed = [frame.apply(p) for p in pts]
    found = _horizontal_pair(framed)
    if found:
        raise DegenerateInputError(found)
    quad = coplanar_quadruple(pts) if check else None
    if quad:
        raise DegenerateInputError(Violation("coplanar_quadruple", quad))

    order = sorted(range(n), key=lambda i: framed[i].z)
    mid = order[4 * k + 3]
    zmed = framed[mid].z
    to_h1 = frame.then(AffineMap(((1, 0, 0), (0, 1, 0), (0, 0, 1)), (0, 0, -zmed)))
    placed = [to_h1.apply(p) for p in pts]

    ratio_max = max(p.x / p.z for i, p in enumerate(placed) if i != mid)
    for tries, s in enumerate(_shear_candidates(ratio_max)):
        if tries >= max_shear_tries:
            raise DegenerateInputError("no admissible shear found")
        sheared = [Point3(p.x - s * p.z, p.y, p.z) for p in placed]
        if vertical_triple(sheared) is None:
            break
    den = math.lcm(*(c.denominator for p in sheared for c in p))
    shear_map = AffineMap(((den, 0, -s * den), (0, den, 0), (0, 0, den)))
    transform = to_h1.then(shear_map)
    canon = [Point3(*(c * den for c in p)) for p in sheared]

    red_index = tuple(i for i in order[: 4 * k + 3])
    blue_index = tuple(i for i in order[4 * k + 4:])
    inst = ColoredInstance(
        k=k,
        red=tuple(canon[i] for i in red_index),
        blue=tuple(canon[i] for i in blue_index),
        median=canon[mid],
        red_index=red_index,
        blue_index=blue_index,
        median_index=mid,
        transform=transform,
        shear=s,
        direction=direction,
    )
    inst.check_invariants()
    return inst


# ---------------------------------------------------------------------------
# padding and perturbation

@dataclass(frozen=True)
class PaddingRecord:
    n_original: int
    dummy_indices: tuple[int, ...]
    jittered: bool
    seed: int

    def to_json(self) -> dict:
        return {
            "n_original": self.n_original,
            "dummy_indices": list(self.dummy_indices),
            "jittered": self.jittered,
            "seed": self.seed,
        }


def _common_grid(points: Sequence[Point3]) -> int:
    den = math.lcm(*(c.denominator for p in points for c in p)) if points else 1
    return den if den <= (1 << 32) else (1 << 20)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) % (1 << 64))


def jitter(points: Sequence[Point3], rng: np.random.Generator) -> list[Point3]:
    """Move every point by less than half the smallest nonzero coordinate gap."""
    pts = list(points)
    gaps = [
        abs(p[t] - r[t])
        for i, p in enumerate(pts)
        for r in pts[i + 1:]
        for t in range(3)
        if p[t] != r[t]
    ]
    delta = min(gaps) / 4 if gaps else Fraction(1)
    steps = 1 << 10
    out = []
    for p in pts:
        d = rng.integers(-steps, steps + 1, size=3)
        out.append(Point3(*(c + delta * Fraction(int(e), steps) for c, e in zip(p, d))))
    return out


def pad_and_perturb(points: Sequence, seed: int = 0, direction=(0, 0, 1), max_tries: int = 100, perturb: bool = True):
    """Add dummy points until ``n = 7 (mod 8)`` and restore general position.

    Degenerate inputs are jittered (seeded, deterministic), or rejected with
    :class:`DegenerateInputError` when ``perturb`` is false.  Dummies lie well
    outside the bounding box.  Returns ``(points', PaddingRecord)`` with the
    original points first, in order.
    """
    pts = [as_point(p) for p in points]
    n = len(pts)
    rng = _rng(seed)
    jittered = False
    tries = 0
    while (bad := general_position_check(pts, direction)) is not None:
        if not perturb:
            raise DegenerateInputError(bad)
        if tries >= max_tries:
            raise DegenerateInputError("jitter failed to reach general position")
        pts = jitter(pts if not jittered else [as_point(p) for p in points], rng)
        jittered = True
        tries += 1

    extra = (7 - n) % 8
    if extra == 0:
        return pts, PaddingRecord(n, (), jittered, seed)

    grid = _common_grid(pts)
    reach = max([abs(c) for p in pts for c in p] + [Fraction(1)])
    lo = [min(p[t] for p in pts) - reach for t in range(3)] if pts else [-reach] * 3
    hi = [max(p[t] for p in pts) + reach for t in range(3)] if pts else [reach] * 3
    bound = int(math.ceil(10 * reach * grid))
    for _ in range(max_tries):
        dummies: list[Point3] = []
        while len(dummies) < extra:
            c = rng.integers(-bound, bound + 1, size=3)
            d = Point3(*(Fraction(int(e), grid) for e in c))
            if all(lo[t] <= d[t] <= hi[t] for t in range(3)):
                continue
            dummies.append(d)
        candidate = pts + dummies
        if general_position_check(candidate, direction) is None:
            return candidate, PaddingRecord(n, tuple(range(n, n + extra)), jittered, seed)
    raise DegenerateInputError("could not place dummy points in general position")
