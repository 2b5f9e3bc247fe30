"""Exact rational geometry: scalars, points, alpha-hyperplanes, radial directions.

Every coordinate, dot product, and hyperplane membership test in this package
is computed with arbitrary-precision rationals (`fractions.Fraction`).  Counts
downstream hash and compare these values for equality, so floating point never
enters a geometric computation.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence

__all__ = [
    "ExactScalar",
    "Point",
    "PointSet",
    "AlphaHyperplane",
    "Direction",
    "ParseError",
    "parse_scalar",
    "format_scalar",
    "point",
    "point_set",
    "is_origin",
    "dot",
    "alpha_hyperplane",
    "radial_direction",
    "read_point_set",
    "write_point_set",
    "parse_point_set",
    "format_point_set",
    "integer_grid",
    "random_point_set",
]

# Scalars are always stored in lowest terms with a positive denominator, so
# equality and hashing agree with the canonical form.
ExactScalar = Fraction

# A point is a fixed-length tuple of exact scalars.
Point = tuple[Fraction, ...]

_SCALAR_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class ParseError(ValueError):
    """Malformed textual input; carries the 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


def parse_scalar(text: str, line_no: int | None = None) -> Fraction:
    """Parse an optionally signed integer or ``a/b`` fraction.

    The input need not be reduced; the result always is.
    """
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ParseError(f"bad rational {text!r}", line_no)
    num = int(m.group(1))
    den = m.group(2)
    if den is None:
        return Fraction(num)
    if int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}", line_no)
    return Fraction(num, int(den))


def format_scalar(value: Fraction) -> str:
    """Canonical text form: ``n`` or ``n/d`` in lowest terms, ``d`` positive."""
    return str(Fraction(value))


def _coerce(value) -> Fraction:
    # Floats carry binary rounding noise; exactness demands explicit input.
    if isinstance(value, float):
        raise TypeError(
            f"float coordinate {value!r} is not exact; pass Fraction, int, or string"
        )
    return Fraction(value)


def point(*coords) -> Point:
    """Build a point, coercing ints, strings, and rationals to exact scalars."""
    return tuple(_coerce(c) for c in coords)


def is_origin(p: Point) -> bool:
    return all(c == 0 for c in p)


def dot(p: Point, q: Point) -> Fraction:
    """Exact dot product; the edge weight used by every counting operation."""
    if len(p) != len(q):
        raise ValueError(f"dimension mismatch: {len(p)} != {len(q)}")
    return sum((a * b for a, b in zip(p, q)), Fraction(0))


@dataclass(frozen=True)
class PointSet:
    """Dimension-tagged ordered collection of pairwise distinct points."""

    dim: int
    points: tuple[Point, ...]

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dimension must be at least 2, got {self.dim}")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError(
                    f"point {p} has {len(p)} coordinates, expected {self.dim}"
                )
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return p in self.points


def point_set(rows: Iterable[Sequence], dim: int | None = None) -> PointSet:
    """Build a PointSet from coordinate rows, coercing entries to scalars."""
    pts = tuple(tuple(_coerce(c) for c in row) for row in rows)
    if dim is None:
        if not pts:
            raise ValueError("dimension required for an empty point set")
        dim = len(pts[0])
    return PointSet(dim, pts)


@dataclass(frozen=True)
class AlphaHyperplane:
    """The level set ``{x : normal . x = value}``.

    In the plane this is the alpha-line of its pin: the locus of points whose
    dot product with ``normal`` equals ``value``.
    """

    normal: Point
    value: Fraction

    def __post_init__(self):
        if is_origin(self.normal):
            raise ValueError("hyperplane normal must not be the origin")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, x: Point) -> bool:
        return dot(self.normal, x) == self.value


def alpha_hyperplane(p: Point, alpha) -> AlphaHyperplane:
    """The hyperplane of points whose dot product with pin ``p`` is ``alpha``."""
    return AlphaHyperplane(tuple(Fraction(c) for c in p), Fraction(alpha))


@dataclass(frozen=True)
class Direction:
    """Canonical primitive integer vector identifying a line through the origin.

    Two points on one radial line map to the same Direction: coordinates are
    cleared to integers, divided by their gcd, and signed so the first nonzero
    entry is positive.
    """

    primitive: tuple[int, ...]

    def __post_init__(self):
        if all(c == 0 for c in self.primitive):
            raise ValueError("direction must be nonzero")
        if math.gcd(*self.primitive) != 1:
            raise ValueError("direction must be primitive")
        for c in self.primitive:
            if c:
                if c < 0:
                    raise ValueError("first nonzero coordinate must be positive")
                break

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.primitive)


def radial_direction(p: Point) -> Direction:
    """Canonical direction of the line through ``p`` and the origin."""
    coords = [Fraction(c) for c in p]
    if all(c == 0 for c in coords):
        raise ValueError("the origin has no radial direction")
    scale = math.lcm(*(c.denominator for c in coords))
    ints = [int(c * scale) for c in coords]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    for c in ints:
        if c:
            if c < 0:
                ints = [-x for x in ints]
            break
    return Direction(tuple(ints))


# ---------------------------------------------------------------------------
# .pts file format
#
# Line 1: `d <dim>`.  Each following non-empty, non-`#` line holds <dim>
# whitespace-separated coordinates, each an optionally signed integer or a/b
# fraction.  Input fractions need not be reduced; written output is always
# reduced with positive denominators.
# ---------------------------------------------------------------------------


def read_point_set(stream: IO[str]) -> PointSet:
    """Parse a .pts stream; raises ParseError with a line number on bad input."""
    dim: int | None = None
    pts: list[Point] = []
    seen: set[Point] = set()
    for line_no, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            fields = line.split()
            if len(fields) != 2 or fields[0] != "d":
                raise ParseError(f"expected header 'd <dim>', got {line!r}", line_no)
            try:
                dim = int(fields[1])
            except ValueError:
                raise ParseError(f"bad dimension {fields[1]!r}", line_no) from None
            if dim < 2:
                raise ParseError(f"dimension must be at least 2, got {dim}", line_no)
            continue
        fields = line.split()
        if len(fields) != dim:
            raise ParseError(
                f"expected {dim} coordinates, got {len(fields)}", line_no
            )
        p = tuple(parse_scalar(f, line_no) for f in fields)
        if p in seen:
            raise ParseError(f"duplicate point {line!r}", line_no)
        seen.add(p)
        pts.append(p)
    if dim is None:
        raise ParseError("missing 'd <dim>' header")
    return PointSet(dim, tuple(pts))


def write_point_set(ps: PointSet, stream: IO[str]) -> None:
    stream.write(format_point_set(ps))


def format_point_set(ps: PointSet) -> str:
    lines = [f"d {ps.dim}"]
    for p in ps.points:
        lines.append(" ".join(format_scalar(c) for c in p))
    return "\n".join(lines) + "\n"


def parse_point_set(text: str) -> PointSet:
    import io

    return read_point_set(io.StringIO(text))


def integer_grid(side: int, dim: int = 2, start: int = 1) -> PointSet:
    """Axis-aligned integer grid with ``side`` values per axis, off the origin
    for ``start >= 1``.  Points are ordered lexicographically.
    """
    if side < 1:
        raise ValueError("side must be positive")
    import itertools

    axis = [Fraction(start + i) for i in range(side)]
    pts = tuple(tuple(row) for row in itertools.product(axis, repeat=dim))
    return PointSet(dim, pts)


def random_point_set(
    n: int,
    dim: int = 2,
    *,
    seed: int,
    low: int = -50,
    high: int = 50,
    exclude_origin: bool = True,
) -> PointSet:
    """Seeded random set of distinct integer-coordinate points in a box.

    Uses Python's Mersenne Twister (`random.Random`) so identical seeds give
    identical sets on every platform.
    """
    if low > high:
        raise ValueError("empty coordinate box")
    capacity = (high - low + 1) ** dim - (1 if exclude_origin and low <= 0 <= high else 0)
    if n > capacity:
        raise ValueError(f"box holds only {capacity} distinct points, need {n}")
    rng = random.Random(seed)
    pts: list[Point] = []
    seen: set[Point] = set()
    while len(pts) < n:
        p = tuple(Fraction(rng.randint(low, high)) for _ in range(dim))
        if p in seen or (exclude_origin and is_origin(p)):
            continue
        seen.add(p)
        pts.append(p)
    return PointSet(dim, tuple(pts))
