"""k-partitions: validation, exact crossing numbers and the dual coloring.

Containment and intersection are closed: a point on a triangle's boundary
is inside it, and a line touching a triangle intersects it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidInput, InvalidPartition
from .geometry import Line, Point, orient
from .levels import enumerate_class_masks, k_level

Triangle = tuple[Point, Point, Point]


@dataclass
class KPartition:
    parts: list[list[int]]
    triangles: list[Triangle]

    def part_of(self) -> dict[int, int]:
        return {i: t for t, part in enumerate(self.parts) for i in part}


@dataclass
class PartitionReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class CrossingCertificate:
    value: int
    witness: Line
    below_count: int
    crossed: frozenset[int]
    classes: int = 0


def in_triangle(tri: Triangle, p: Point) -> bool:
    """Closed containment, including triangles degenerated to a segment or point."""
    a, b, c = tri
    o = orient(a, b, c)
    if o:
        s1, s2, s3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
        return (s1 * o >= 0) and (s2 * o >= 0) and (s3 * o >= 0)
    # collinear: p must be on the segment spanned by the three vertices
    pts = sorted({a, b, c})
    lo, hi = pts[0], pts[-1]
    if lo == hi:
        return p == lo
    return orient(lo, hi, p) == 0 and lo <= p <= hi


def validate_partition(points: Sequence[Point], partition: KPartition, k: int) -> PartitionReport:
    rep = PartitionReport()
    n = len(points)
    want = -(-n // k)
    if len(partition.parts) != want:
        rep.violations.append(f"{len(partition.parts)} parts, expected ceil(n/k)={want}")
    if len(partition.triangles) != len(partition.parts):
        rep.violations.append(f"{len(partition.triangles)} triangles for {len(partition.parts)} parts")
    seen: dict[int, int] = {}
    for t, part in enumerate(partition.parts):
        for i in part:
            if not 0 <= i < n:
                rep.violations.append(f"part {t} references unknown point {i}")
            elif i in seen:
                rep.violations.append(f"point {i} in parts {seen[i]} and {t}")
            else:
                seen[i] = t
    missing = n - len(seen)
    if missing:
        rep.violations.append(f"{missing} point(s) not covered")
    full = n // k
    for t, part in enumerate(partition.parts):
        size = len(part)
        expect = k if t < full else n - full * k
        if size != expect:
            rep.violations.append(f"part {t} has {size} points, expected {expect}")
    for t, (part, tri) in enumerate(zip(partition.parts, partition.triangles)):
        outside = [i for i in part if 0 <= i < n and not in_triangle(tri, points[i])]
        if outside:
            rep.violations.append(f"triangle {t} misses point(s) {outside[:5]}")
    return rep


def _sites(partition: KPartition) -> list[Point]:
    return [v for tri in partition.triangles for v in tri]


def crossing_number(points: Sequence[Point], partition: KPartition, k: int,
                    validate: bool = True) -> CrossingCertificate:
    """Maximum number of triangles met by a k-shallow line, with a witness.

    Every class of k-shallow lines (with all triangle vertices as extra
    sites) is evaluated once.  Ties go to the witness with the smallest
    (slope, intercept).
    """
    if validate:
        rep = validate_partition(points, partition, k)
        if not rep.ok:
            raise InvalidPartition("; ".join(rep.violations))
    tri_masks = [0b111 << (3 * t) for t in range(len(partition.triangles))]
    best = None
    classes = 0
    for rep_line, bp, bs, os_ in enumerate_class_masks(points, k, _sites(partition)):
        classes += 1
        touch = bs | os_
        crossed = [t for t, tm in enumerate(tri_masks) if tm & touch and tm & ~bs]
        key = (-len(crossed), rep_line.slope, rep_line.intercept)
        if best is None or key < best[0]:
            best = (key, rep_line, bp, crossed)
    _, line, bp, crossed = best
    return CrossingCertificate(len(crossed), line, bp.bit_count(), frozenset(crossed), classes)


def triangle_sides(line: Line, tri: Triangle) -> list[int]:
    """Sign of each vertex relative to ``line``: +1 above, 0 on, -1 below."""
    out = []
    for v in tri:
        w = line.at(v.x)
        out.append((v.y > w) - (v.y < w))
    return out


def triangles_crossed(line: Line, partition: KPartition) -> frozenset[int]:
    out = []
    for t, tri in enumerate(partition.triangles):
        s = triangle_sides(line, tri)
        if not all(v > 0 for v in s) and not all(v < 0 for v in s):
            out.append(t)
    return frozenset(out)


def triangles_below(line: Line, partition: KPartition) -> int:
    return sum(1 for tri in partition.triangles if all(v < 0 for v in triangle_sides(line, tri)))


def points_below(line: Line, points: Sequence[Point]) -> tuple[int, int]:
    """(strictly below, on) counts."""
    below = on = 0
    for p in points:
        w = line.at(p.x)
        if p.y < w:
            below += 1
        elif p.y == w:
            on += 1
    return below, on


def enclosing_triangle(pts: Sequence[Point]) -> Triangle:
    """Right triangle on the lower-left bounding-box corner with doubled legs."""
    x0 = min(p.x for p in pts)
    y0 = min(p.y for p in pts)
    w = max(p.x for p in pts) - x0
    h = max(p.y for p in pts) - y0
    return Point(x0, y0), Point(x0 + 2 * w, y0), Point(x0, y0 + 2 * h)


def baseline_partition(points: Sequence[Point], k: int) -> KPartition:
    """Chunks of k consecutive points in x order; no crossing guarantee."""
    if not points or k < 1:
        raise InvalidInput("need at least one point and k >= 1")
    order = sorted(range(len(points)), key=lambda i: (points[i].x, points[i].y))
    parts = [order[s:s + k] for s in range(0, len(order), k)]
    return KPartition(parts, [enclosing_triangle([points[i] for i in part]) for part in parts])


def random_partition(points: Sequence[Point], k: int, rng: random.Random) -> KPartition:
    order = list(range(len(points)))
    rng.shuffle(order)
    parts = [sorted(order[s:s + k]) for s in range(0, len(order), k)]
    return KPartition(parts, [enclosing_triangle([points[i] for i in part]) for part in parts])


# --------------------------------------------------------------------------
# randomized oracle


@dataclass
class SamplerResult:
    value: int
    witness: Line | None
    samples: int
    shallow: int


def sample_crossing(points: Sequence[Point], partition: KPartition, k: int,
                    samples: int = 10 ** 6, seed: int = 0, chunk: int = 100_000) -> SamplerResult:
    """Random-line lower estimate of the crossing number.

    Lines are drawn mostly through jittered pairs of anchors (points and
    triangle vertices) at log-uniform scales, so thin cells next to
    arrangement vertices are hit too.  Float scores only rank candidates;
    the reported value is recomputed exactly for the best ones, so it never
    exceeds the true crossing number.
    """
    rng = np.random.default_rng(seed)
    P = np.array([[float(p.x), float(p.y)] for p in points])
    sites = _sites(partition)
    S = np.array([[float(p.x), float(p.y)] for p in sites]).reshape(-1, 2)
    A = np.vstack([P, S])
    span = float(np.ptp(A, axis=0).max()) or 1.0
    T = len(partition.triangles)
    pool: list[tuple[int, float, float]] = []
    best_float = -1
    shallow_total = 0
    done = 0
    while done < samples:
        c = min(chunk, samples - done)
        done += c
        i = rng.integers(0, len(A), c)
        j = rng.integers(0, len(A), c)
        scale = span * 10.0 ** rng.uniform(-7, -1, c)
        p1 = A[i] + rng.normal(size=(c, 2)) * scale[:, None]
        p2 = A[j] + rng.normal(size=(c, 2)) * scale[:, None]
        dx = p2[:, 0] - p1[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = (p2[:, 1] - p1[:, 1]) / dx
        # a fifth of the draws are free lines through a random anchor
        free = rng.random(c) < 0.2
        slope[free] = np.tan(rng.uniform(-1.55, 1.55, free.sum()))
        ok = np.isfinite(slope) & (np.abs(dx) > 1e-12 * span) | free
        icept = p1[:, 1] - slope * p1[:, 0]
        slope, icept = slope[ok], icept[ok]
        res_p = P[None, :, 1] - (slope[:, None] * P[None, :, 0] + icept[:, None])
        shallow = (res_p < 0).sum(axis=1) <= k
        if not shallow.any():
            continue
        slope, icept = slope[shallow], icept[shallow]
        shallow_total += len(slope)
        if T:
            res_s = S[None, :, 1] - (slope[:, None] * S[None, :, 0] + icept[:, None])
            res_s = res_s.reshape(len(slope), T, 3)
            crossed = ((res_s <= 0).any(axis=2) & (res_s >= 0).any(axis=2)).sum(axis=1)
        else:
            crossed = np.zeros(len(slope), dtype=int)
        top = int(crossed.max())
        if top >= best_float:
            if top > best_float:
                pool = [q for q in pool if q[0] >= top]
                best_float = top
            for idx in np.flatnonzero(crossed == top)[:16]:
                pool.append((top, float(slope[idx]), float(icept[idx])))
            pool = pool[-64:]

    value, witness = 0, None
    for _, s, b in pool:
        line = Line(Fraction(s), Fraction(b))
        below, on = points_below(line, points)
        if below > k or on:
            continue
        v = len(triangles_crossed(line, partition))
        if witness is None or v > value:
            value, witness = v, line
    return SamplerResult(value, witness, samples, shallow_total)


# --------------------------------------------------------------------------
# dual coloring


@dataclass
class VertexColoring:
    vertex: Point
    conflict: frozenset[int]
    distinct: int
    witness: Line
    witness_below: int
    crossed: int
    wholly_below: int

    @property
    def ok(self) -> bool:
        return self.wholly_below <= 1 and self.distinct <= self.crossed + self.wholly_below


@dataclass
class ColoringCheck:
    colors: dict[int, int]
    class_sizes_ok: bool
    vertices: list[VertexColoring]

    @property
    def max_distinct(self) -> int:
        return max((v.distinct for v in self.vertices), default=0)

    @property
    def max_witness_crossing(self) -> int:
        return max((v.crossed for v in self.vertices), default=0)

    @property
    def ok(self) -> bool:
        return self.class_sizes_ok and all(v.ok for v in self.vertices)

    def proposition_holds(self, crossing: int) -> bool:
        """Every conflict set shows at most crossing + 1 colors."""
        return self.ok and self.max_witness_crossing <= crossing and self.max_distinct <= crossing + 1


def _shallow_witness(v: Point, points: Sequence[Point], sites: Sequence[Point]) -> Line:
    """Primal line of dual vertex v, lowered just enough to clear points on it."""
    from .adversary import primal_line

    line = primal_line(v)
    gaps = [line.at(p.x) - p.y for p in list(points) + list(sites)]
    below = [g for g in gaps if g > 0]
    drop = min(below, default=Fraction(2)) / 2
    return line.shifted(-drop)


def coloring_from_partition(instance, partition: KPartition, k: int) -> ColoringCheck:
    """Color each dual line by the part of its primal point and audit every hull vertex."""
    points = instance.all_points
    n_lines = len(instance.lines)
    part_of = partition.part_of()
    if len(part_of) != len(points) or any(i not in part_of for i in range(n_lines)):
        raise InvalidInput("partition does not cover the instance points")
    colors = {i: part_of[i] for i in range(n_lines)}
    sizes: dict[int, int] = {}
    for c in colors.values():
        sizes[c] = sizes.get(c, 0) + 1
    sites = _sites(partition)
    level = k_level(instance.lines, k)
    out = []
    for hv, conflict in sorted(level.conflicts.items()):
        v = level.hull[hv]
        w = _shallow_witness(v, points, sites)
        below, _ = points_below(w, points)
        out.append(VertexColoring(
            vertex=v, conflict=conflict, distinct=len({colors[i] for i in conflict}),
            witness=w, witness_below=below,
            crossed=len(triangles_crossed(w, partition)),
            wholly_below=triangles_below(w, partition)))
    return ColoringCheck(colors, all(s <= k for s in sizes.values()), out)


# --------------------------------------------------------------------------
# exhaustive oracle


def _profile_partitions(items: list[int], k: int):
    """All unordered splits of ``items`` into parts of size k plus one remainder part."""
    from itertools import combinations

    r = len(items) % k

    def fill(rest):
        if not rest:
            yield []
            return
        head, tail = rest[0], rest[1:]
        for mates in combinations(tail, k - 1):
            left = [i for i in tail if i not in mates]
            for more in fill(left):
                yield [[head, *mates], *more]

    if r == 0:
        yield from fill(items)
        return
    for rem in combinations(items, r):
        rest = [i for i in items if i not in rem]
        for parts in fill(rest):
            yield [*parts, list(rem)]


def part_hull_triangle(pts: Sequence[Point]) -> Triangle:
    if len(pts) == 1:
        return pts[0], pts[0], pts[0]
    if len(pts) == 2:
        return pts[0], pts[1], pts[1]
    return tuple(pts[:3])


def exhaustive_min_crossing(points: Sequence[Point], k: int) -> tuple[int, KPartition, int]:
    """Minimum crossing number over every k-partition whose triangles are part hulls.

    Only meaningful for k <= 3, where a part's convex hull is itself a
    (possibly degenerate) triangle and hence the best triangle for it.
    Returns (minimum, an optimal partition, number of partitions tried).
    """
    from .errors import OracleTooLarge

    n = len(points)
    if n > 9 or not 1 <= k <= 3:
        raise OracleTooLarge(f"oracle limited to n <= 9 and k <= 3 (got n={n}, k={k})")
    best, best_part, tried = None, None, 0
    for parts in _profile_partitions(list(range(n)), k):
        full = [p for p in parts if len(p) == k]
        rest = [p for p in parts if len(p) != k]
        parts = full + rest
        part = KPartition(parts, [part_hull_triangle([points[i] for i in p]) for p in parts])
        tried += 1
        value = crossing_number(points, part, k, validate=False).value
        if best is None or value < best:
            best, best_part = value, part
    return best, best_part, tried
