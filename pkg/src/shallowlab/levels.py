"""k-levels of line arrangements and combinatorial classes of k-shallow lines.

Both computations convert the input to integers over a common denominator
first; all comparisons are then exact integer cross-multiplications, which
is an order of magnitude faster than Fraction arithmetic in the inner loops.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DegenerateInput, InvalidDepth
from .geometry import Chain, Line, Point, dualize_point, upper_hull


def _scale(lines: Sequence[Line]) -> tuple[int, list[int], list[int]]:
    den = 1
    for ln in lines:
        den = lcm(den, ln.slope.denominator, ln.intercept.denominator)
    slopes = [int(ln.slope * den) for ln in lines]
    icepts = [int(ln.intercept * den) for ln in lines]
    return den, slopes, icepts


def count_below(lines: Sequence[Line], p: Point) -> int:
    """Number of lines passing strictly below ``p``."""
    return sum(1 for ln in lines if ln.at(p.x) < p.y)


def lines_below(lines: Sequence[Line], p: Point) -> frozenset[int]:
    return frozenset(i for i, ln in enumerate(lines) if ln.at(p.x) < p.y)


@dataclass
class LevelChain:
    """The k-level polyline of ``lines`` together with its upper hull.

    The two unbounded rays are clipped one unit beyond the leftmost and
    rightmost vertex of the whole arrangement (``clip``).  ``edge_lines[e]``
    is the index of the input line supporting polyline edge ``e``.
    ``conflicts`` maps hull-vertex index to the set of line indices strictly
    below that vertex; hull vertices with fewer than k lines below are left
    out and listed in ``filtered``.
    """

    k: int
    lines: list[Line]
    polyline: list[Point]
    edge_lines: list[int]
    hull: Chain
    conflicts: dict[int, frozenset[int]] = field(default_factory=dict)
    filtered: list[int] = field(default_factory=list)
    concurrent: list[Point] = field(default_factory=list)
    clip: tuple[Fraction, Fraction] = (Fraction(-1), Fraction(1))


def _arrangement_x_range(slopes, icepts):
    """Leftmost and rightmost vertex abscissae (None when all lines are parallel).

    Before the first vertex the vertical order equals the order at -inf, so
    the leftmost vertex is a crossing of two neighbours in that order.
    """
    n = len(slopes)

    def extreme(order, pick_min):
        best = None
        for a, b in zip(order, order[1:]):
            if slopes[a] == slopes[b]:
                continue
            x = Fraction(icepts[b] - icepts[a], slopes[a] - slopes[b])
            if best is None or (x < best if pick_min else x > best):
                best = x
        return best

    left = sorted(range(n), key=lambda i: (-slopes[i], icepts[i]))
    right = sorted(range(n), key=lambda i: (slopes[i], icepts[i]))
    return extreme(left, True), extreme(right, False)


def k_level(lines: Sequence[Line], k: int) -> LevelChain:
    lines = list(lines)
    n = len(lines)
    if not 0 <= k < n:
        raise InvalidDepth(f"k={k} outside [0, {n})")
    if len(set(lines)) != n:
        raise DegenerateInput("two input lines coincide")
    den, S, B = _scale(lines)

    xmin, xmax = _arrangement_x_range(S, B)
    if xmin is None:
        xmin = xmax = Fraction(0)
    clip = (xmin - 1, xmax + 1)

    order = sorted(range(n), key=lambda i: (-S[i], B[i]))
    cur = order[k]
    start = cur
    # current abscissa as p0/q0 (q0 > 0); None means -infinity
    p0 = q0 = None
    vertices: list[Point] = []
    edge_lines = [cur]
    concurrent: list[Point] = []

    while True:
        bn = bd = None
        sc, bc = S[cur], B[cur]
        for o in range(n):
            so = S[o]
            if so == sc:
                continue
            num, dn = B[o] - bc, sc - so
            if dn < 0:
                num, dn = -num, -dn
            if p0 is not None and num * q0 <= p0 * dn:
                continue
            if bn is None or num * bd < bn * dn:
                bn, bd = num, dn
        if bn is None:
            break
        vals = [S[i] * bn + B[i] * bd for i in range(n)]
        vc = vals[cur]
        below = 0
        bundle = []
        for i, v in enumerate(vals):
            if v < vc:
                below += 1
            elif v == vc:
                bundle.append(i)
        bundle.sort(key=lambda i: S[i])
        x = Fraction(bn, bd)
        y = Fraction(vc, bd * den)
        if len(bundle) >= 3:
            concurrent.append(Point(x, y))
        new = bundle[k - below]
        if new != cur:
            vertices.append(Point(x, y))
            edge_lines.append(new)
            cur = new
        p0, q0 = bn, bd

    left = Point(clip[0], lines[start].at(clip[0]))
    right = Point(clip[1], lines[cur].at(clip[1]))
    polyline = [left, *vertices, right]
    level = LevelChain(k=k, lines=lines, polyline=polyline, edge_lines=edge_lines,
                       hull=upper_hull(polyline), concurrent=concurrent, clip=clip)
    level.conflicts = hull_conflicts(level)
    level.filtered = [i for i in range(len(level.hull)) if i not in level.conflicts]
    return level


def hull_conflicts(level: LevelChain) -> dict[int, frozenset[int]]:
    """Conflict sets of the hull vertices that have exactly k lines below.

    Closure vertices of the level with only k - 1 lines below are bends the
    wrong way and cannot sit on the upper hull in general position; any
    that do (degenerate input) are dropped here.
    """
    out = {}
    for i, v in enumerate(level.hull):
        below = lines_below(level.lines, v)
        if len(below) == level.k:
            out[i] = below
    return out


def edge_midpoints(level: LevelChain) -> list[Point]:
    pts = level.polyline
    return [Point((a.x + b.x) / 2, (a.y + b.y) / 2) for a, b in zip(pts, pts[1:])]


# --------------------------------------------------------------------------
# k-shallow line classes


@dataclass(frozen=True)
class ShallowLineClass:
    representative: Line
    below_points: frozenset[int]
    sites_below: frozenset[int] = frozenset()
    sites_on: frozenset[int] = frozenset()


@dataclass
class _DualArrangement:
    den: int
    slopes: list[int]
    icepts: list[int]
    pmask: list[int]
    smask: list[int]


def _dual_arrangement(points: Sequence[Point], sites: Sequence[Point]) -> _DualArrangement:
    groups: dict[Line, list[int]] = {}
    for i, p in enumerate(points):
        groups.setdefault(dualize_point(p), [0, 0])[0] |= 1 << i
    for j, s in enumerate(sites):
        groups.setdefault(dualize_point(s), [0, 0])[1] |= 1 << j
    duals = list(groups)
    den, S, B = _scale(duals)
    return _DualArrangement(den, S, B, [groups[d][0] for d in duals], [groups[d][1] for d in duals])


def _sample_abscissae(S, B) -> list[Fraction]:
    xs = set()
    n = len(S)
    for a in range(n):
        for b in range(a + 1, n):
            if S[a] != S[b]:
                xs.add(Fraction(B[b] - B[a], S[a] - S[b]))
    if not xs:
        return [Fraction(0)]
    xs = sorted(xs)
    out = [xs[0] - 1]
    for a, b in zip(xs, xs[1:]):
        out.append(a)
        out.append((a + b) / 2)
    out.append(xs[-1])
    out.append(xs[-1] + 1)
    return out


def enumerate_class_masks(points: Sequence[Point], k: int, sites: Sequence[Point] = ()):
    """Yield ``(line, below_mask, site_below_mask, site_on_mask)`` per class.

    A dual sample point ``q`` lies strictly below the dual line of ``p``
    exactly when ``p`` lies strictly below the primal line of ``q``.  Every
    face and edge of the dual arrangement meets a vertical line through
    either a vertex or the middle of a slab between consecutive vertex
    abscissae, so sampling every cell on those verticals is complete.
    """
    if k < 0:
        raise InvalidDepth(f"k={k} must be non-negative")
    arr = _dual_arrangement(points, sites)
    S, B, den = arr.slopes, arr.icepts, arr.den
    m = len(S)
    seen: dict[tuple[int, int, int], tuple[Fraction, int, int]] = {}

    for x in _sample_abscissae(S, B):
        p, q = x.numerator, x.denominator
        vals = [2 * (S[i] * p + B[i] * q) for i in range(m)]
        order = sorted(range(m), key=vals.__getitem__, reverse=True)
        # walk from the top down; 'acc' masks collect dual lines strictly above
        acc_p = acc_s = 0
        top = vals[order[0]] + 2 if order else 0
        candidates = [(top, 0, 0, 0)]
        g = 0
        while g < m:
            v = vals[order[g]]
            gp = gs = 0
            h = g
            while h < m and vals[order[h]] == v:
                gp |= arr.pmask[order[h]]
                gs |= arr.smask[order[h]]
                h += 1
            if not gp:
                candidates.append((v, acc_p, acc_s, gs))
            acc_p |= gp
            acc_s |= gs
            if acc_p.bit_count() > k:
                break
            nxt = vals[order[h]] if h < m else v - 4
            candidates.append(((v + nxt) // 2, acc_p, acc_s, 0))
            g = h
        for w, bp, bs, os_ in candidates:
            if bp.bit_count() > k:
                continue
            key = (bp, bs, os_)
            if key not in seen:
                seen[key] = (x, w, q)

    for (bp, bs, os_), (x, w, q) in seen.items():
        rep = Line(2 * x, -Fraction(w, 2 * q * den))
        yield rep, bp, bs, os_


def _bits(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def shallow_line_classes(points: Sequence[Point], k: int,
                         extra_sites: Sequence[Point] = ()) -> list[ShallowLineClass]:
    """One representative line per class of k-shallow lines.

    A class fixes the set of points strictly below and the three-way side of
    every extra site.  Lines through an input point are never reported.
    """
    return [ShallowLineClass(rep, _bits(bp), _bits(bs), _bits(os_))
            for rep, bp, bs, os_ in enumerate_class_masks(points, k, extra_sites)]
