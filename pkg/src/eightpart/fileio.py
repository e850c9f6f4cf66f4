"""Plain-text formats: point files, weighted planar point files, plane triples."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .exact_geom import OrientedPlane, Point3, fraction_str
from .planar import WeightedPoint2


class ParseError(ValueError):
    pass


def parse_number(token: str, where: str = "") -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}not a number: {token!r}") from None


def _rows(text: str, widths: Sequence[int]):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in widths:
            raise ParseError(f"line {lineno}: expected {' or '.join(map(str, widths))} numbers, got {len(fields)}")
        yield [parse_number(f, f"line {lineno}: ") for f in fields]


def parse_points(text: str) -> list[Point3]:
    return [Point3(*row) for row in _rows(text, (3,))]


def parse_weighted_points(text: str) -> list[WeightedPoint2]:
    out = []
    for row in _rows(text, (2, 3)):
        w = row[2] if len(row) == 3 else Fraction(1)
        if w <= 0:
            raise ParseError("weights must be positive")
        out.append(WeightedPoint2(row[0], row[1], w))
    return out


def parse_planes(text: str) -> list[OrientedPlane]:
    planes = [OrientedPlane(tuple(row[:3]), row[3]) for row in _rows(text, (4,))]
    if len(planes) != 3:
        raise ParseError(f"expected three planes, got {len(planes)}")
    for p in planes:
        if not any(p.normal):
            raise ParseError("a plane needs a nonzero normal")
    return planes


def format_points(points: Iterable[Sequence]) -> str:
    return "".join(" ".join(fraction_str(Fraction(c)) for c in p) + "\n" for p in points)


def format_planes(planes: Iterable[OrientedPlane]) -> str:
    return "".join(" ".join(p.to_strings()) + "\n" for p in planes)


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def parse_vector(text: str, dim: int) -> tuple[Fraction, ...]:
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if len(parts) != dim:
        raise ParseError(f"expected {dim} comma-separated numbers, got {text!r}")
    vec = tuple(parse_number(t) for t in parts)
    if not any(vec):
        raise ParseError("direction must be nonzero")
    return vec
