"""Exact rational planar primitives.

Everything here works on :class:`fractions.Fraction` so that strict and
non-strict side tests are decided exactly.  Lines are non-vertical by
construction (``y = slope * x + intercept``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DegenerateInput

Rational = Fraction

ABOVE = "above"
ON = "on"
BELOW = "below"


def as_rational(value) -> Fraction:
    """Coerce ints, floats (exactly), strings like ``"3/4"`` and Fractions."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    return str(as_rational(value))


@dataclass(frozen=True, slots=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        if type(self.x) is not Fraction or type(self.y) is not Fraction:
            object.__setattr__(self, "x", as_rational(self.x))
            object.__setattr__(self, "y", as_rational(self.y))

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True, slots=True, order=True)
class Line:
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        if type(self.slope) is not Fraction or type(self.intercept) is not Fraction:
            object.__setattr__(self, "slope", as_rational(self.slope))
            object.__setattr__(self, "intercept", as_rational(self.intercept))

    def at(self, x) -> Fraction:
        return self.slope * x + self.intercept

    def shifted(self, dy) -> "Line":
        return Line(self.slope, self.intercept + dy)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p); +1 is a left turn."""
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (det > 0) - (det < 0)


def side_of_line(line: Line, p: Point) -> str:
    """Side of ``p`` relative to ``line``: ``"above"``, ``"on"`` or ``"below"``."""
    # integer cross-multiplication; denominators are positive
    s, b, x, y = line.slope, line.intercept, p.x, p.y
    sd_xd = s.denominator * x.denominator
    rhs = (s.numerator * x.numerator * b.denominator + b.numerator * sd_xd) * y.denominator
    lhs = y.numerator * sd_xd * b.denominator
    if lhs > rhs:
        return ABOVE
    if lhs < rhs:
        return BELOW
    return ON


# built from numerator/denominator directly; Fraction's operator dispatch
# costs more than the arithmetic here


def dualize_point(p: Point) -> Line:
    x = p.x
    return Line(Fraction(2 * x.numerator, x.denominator), -p.y)


def dualize_line(line: Line) -> Point:
    s = line.slope
    return Point(Fraction(s.numerator, 2 * s.denominator), -line.intercept)


@dataclass(frozen=True)
class Chain:
    """x-monotone chain whose interior vertices are all strict right turns."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        problems = chain_violations(self.vertices)
        if problems:
            raise DegenerateInput("; ".join(problems))

    def __len__(self):
        return len(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def __iter__(self):
        return iter(self.vertices)


def chain_violations(vertices: Sequence[Point]) -> list[str]:
    problems = []
    for a, b in zip(vertices, vertices[1:]):
        if not a.x < b.x:
            problems.append(f"x not strictly increasing at {a} -> {b}")
    for a, b, c in zip(vertices, vertices[1:], vertices[2:]):
        if orient(a, b, c) >= 0:
            problems.append(f"vertex {b} is not a strict right turn")
    return problems


def upper_hull(points: Iterable[Point]) -> Chain:
    """Upper convex hull, left to right, collinear points dropped."""
    pts = sorted(points)
    if not pts:
        raise DegenerateInput("upper hull of an empty point set")
    for a, b in zip(pts, pts[1:]):
        if a.x == b.x:
            raise DegenerateInput(f"duplicate x-coordinate {a.x}")
    hull: list[Point] = []
    for p in pts:
        while len(hull) >= 2 and orient(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    return Chain(tuple(hull))


@dataclass
class GeneralPositionReport:
    collinear: list[tuple[int, int, int]]
    duplicate_x: list[tuple[int, int]]
    truncated: bool = False

    @property
    def clean(self) -> bool:
        return not self.collinear and not self.duplicate_x

    def summary(self) -> str:
        if self.clean:
            return "general position"
        return (f"{len(self.collinear)} collinear triple(s), "
                f"{len(self.duplicate_x)} duplicate-x pair(s)"
                + (" (truncated)" if self.truncated else ""))


def _direction(p: Point, q: Point) -> tuple[int, int]:
    # canonical primitive direction, sign fixed so that opposite rays coincide
    dx, dy = q.x - p.x, q.y - p.y
    den = dx.denominator * dy.denominator
    a, b = int(dx * den), int(dy * den)
    g = gcd(a, b) or 1
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def general_position_check(points: Sequence[Point], limit: int = 1000) -> GeneralPositionReport:
    """Report collinear triples and shared x-coordinates (at most ``limit`` each)."""
    pts = list(points)
    dup: list[tuple[int, int]] = []
    by_x: dict[Fraction, list[int]] = {}
    for i, p in enumerate(pts):
        by_x.setdefault(p.x, []).append(i)
    for idx in by_x.values():
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                dup.append((idx[a], idx[b]))
    truncated = len(dup) > limit
    dup = dup[:limit]

    triples: list[tuple[int, int, int]] = []
    for i, p in enumerate(pts):
        groups: dict[tuple[int, int], list[int]] = {}
        for j in range(i + 1, len(pts)):
            if pts[j] == p:
                continue
            groups.setdefault(_direction(p, pts[j]), []).append(j)
        for js in groups.values():
            for a in range(len(js)):
                for b in range(a + 1, len(js)):
                    triples.append((i, js[a], js[b]))
                    if len(triples) > limit:
                        return GeneralPositionReport(triples[:limit], dup, True)
    return GeneralPositionReport(triples, dup, truncated)
