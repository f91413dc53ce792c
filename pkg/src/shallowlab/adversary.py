"""The lower-bound instance: a convex chain, block lines, replication, padding.

Sign convention.  With ``p* : y = 2 p_x x - p_y`` a dual point ``v`` lies
above ``p*`` exactly when ``p`` lies *above* the primal line ``v*``.  The
lines strictly below a chain vertex would therefore become points above a
primal line, while shallowness is measured below.  The instance's primal
points are taken as the mirror image ``(slope / 2, intercept)`` of the
plain dual point, and the primal line of a dual vertex ``(a, c)`` is
``y = -2 a x + c``.  With this pair, "line strictly below v" is
equivalent to "point strictly below the primal line of v".
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import EpsilonTooLarge, ParameterRange, PaddingUnverifiable
from .geometry import Chain, Line, Point, general_position_check

DEFAULT_EPS = Fraction(1, 8)
GENERAL_POSITION_LIMIT = 300


def primal_point(line: Line) -> Point:
    return Point(line.slope / 2, line.intercept)


def primal_line(v: Point) -> Line:
    return Line(-2 * v.x, v.y)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class AdversaryInstance:
    m: int
    beta: int
    k: int
    k_prime: int
    eps: Fraction
    chain: Chain
    lines: list[Line]
    provenance: list[tuple[int, int, int]]
    points: list[Point]
    padding: list[Point] = field(default_factory=list)
    n_target: int | None = None
    checks: list[Check] = field(default_factory=list)

    @property
    def all_points(self) -> list[Point]:
        return self.points + self.padding

    def interval(self, i: int) -> tuple[int, int]:
        """1-based chain-vertex range strictly above line ``i``."""
        j, t, _ = self.provenance[i]
        return (t - 1) * 2 ** j + 1, t * 2 ** j

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class ConstructionReport:
    n: int
    k: int
    beta: int
    m: int
    k_prime: int
    n_prime: int
    crossing_lower_bound: int
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def _log2_exact(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ParameterRange(f"m={m} is not a power of two")
    return m.bit_length() - 1


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def choose_beta(n: int, k: int) -> int:
    """Largest beta with (2^(beta+1) - 1) / (beta + 1) <= n / (2k)."""
    if k < 1 or n < 4 * k:
        raise ParameterRange(f"need k >= 1 and n >= 4k (n={n}, k={k})")
    beta = 1
    while (2 ** (beta + 2) - 1) * 2 * k <= n * (beta + 2):
        beta += 1
    return beta


def build_chain(m: int) -> Chain:
    if m < 2:
        raise ParameterRange(f"m={m} must be at least 2")
    _log2_exact(m)
    return Chain(tuple(Point(i, -i * i) for i in range(1, m + 1)))


def side_pattern(line: Line, chain: Chain) -> tuple[frozenset[int], frozenset[int]]:
    """1-based indices of chain vertices strictly above and exactly on ``line``."""
    above, on = set(), set()
    for i, v in enumerate(chain, start=1):
        w = line.at(v.x)
        if v.y > w:
            above.add(i)
        elif v.y == w:
            on.add(i)
    return frozenset(above), frozenset(on)


def pattern_ok(line: Line, chain: Chain, a: int, b: int) -> bool:
    """Exactly v_a..v_b strictly above ``line``, every other vertex strictly below.

    The vertical gaps vertex-minus-line form a concave sequence along the
    chain, so four gaps decide the whole pattern.
    """
    def gap(i):
        v = chain[i - 1]
        return v.y - line.at(v.x)

    if gap(a) <= 0 or gap(b) <= 0:
        return False
    if a > 1 and gap(a - 1) >= 0:
        return False
    if b < len(chain) and gap(b + 1) >= 0:
        return False
    return True


def _support_slope(chain: Chain, a: int) -> Fraction:
    vs = chain.vertices

    def edge(i):  # slope of edge v_i -> v_{i+1}, 1-based
        p, q = vs[i - 1], vs[i]
        return (q.y - p.y) / (q.x - p.x)

    if len(vs) == 1:
        return Fraction(0)
    if a == 1:
        return edge(1) + 1
    if a == len(vs):
        return edge(a - 1) - 1
    return (edge(a - 1) + edge(a)) / 2


def build_block_line(chain: Chain, a: int, b: int, eps: Fraction) -> Line:
    """Line strictly below v_a..v_b and strictly above the remaining vertices."""
    m = len(chain)
    if not 1 <= a <= b <= m:
        raise ParameterRange(f"bad block [{a}, {b}] for a chain of {m} vertices")
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterRange("eps must be positive")
    pa = chain[a - 1]
    if a < b:
        pb = chain[b - 1]
        slope = (pb.y - pa.y) / (pb.x - pa.x)
    else:
        slope = _support_slope(chain, a)
    line = Line(slope, pa.y - slope * pa.x - eps)
    if not pattern_ok(line, chain, a, b):
        raise EpsilonTooLarge(f"eps={eps} too large for block [{a}, {b}]")
    return line


def _perturbed_family(chain, beta, copies, extra, eps, rng):
    m = len(chain)
    lines, prov = [], []
    slope_scale = eps / (4 * m * m)
    for j in range(beta + 1):
        size = 2 ** j
        for t in range(1, m // size + 1):
            a, b = (t - 1) * size + 1, t * size
            base = build_block_line(chain, a, b, eps)
            count = copies + (extra if j == beta else 0)
            for c in range(count):
                # distinct intercept drop per copy plus a tiny slope jitter so
                # that copies are not parallel (no shared primal abscissae);
                # copy c draws from its own sub-interval, so jitters never repeat
                u = Fraction(rng.randint(1, (1 << 16) - 1), 1 << 16)
                jitter = (c + u) / count * slope_scale
                line = Line(base.slope + jitter, base.intercept - eps / (c + 2))
                if not pattern_ok(line, chain, a, b):
                    raise EpsilonTooLarge(f"perturbed copy ({j},{t},{c}) changed sides")
                lines.append(line)
                prov.append((j, t, c))
    return lines, prov


def build_instance(m: int, k: int, eps: Fraction = DEFAULT_EPS, seed: int = 0) -> AdversaryInstance:
    """Replicated block lines L_0..L_beta under the chain (i, -i^2), i = 1..m."""
    beta = _log2_exact(m)
    chain = build_chain(m)
    if k < beta + 1:
        raise ParameterRange(f"k={k} must be at least beta+1={beta + 1}")
    copies = k // (beta + 1)
    k_prime = copies * (beta + 1)
    extra = k - k_prime
    eps = Fraction(eps)
    while True:
        try:
            lines, prov = _perturbed_family(chain, beta, copies, extra, eps, random.Random(seed))
            break
        except EpsilonTooLarge:
            eps /= 2
    inst = AdversaryInstance(m=m, beta=beta, k=k, k_prime=k_prime, eps=eps, chain=chain,
                             lines=lines, provenance=prov,
                             points=[primal_point(ln) for ln in lines])
    inst.checks = construction_checks(inst)
    return inst


def construction_checks(inst: AdversaryInstance) -> list[Check]:
    checks = []
    n_expected = (2 * inst.m - 1) * inst.k_prime // (inst.beta + 1) + inst.k - inst.k_prime
    checks.append(Check("line_count", len(inst.lines) == n_expected,
                        f"{len(inst.lines)} lines, expected {n_expected}"))
    checks.append(Check("distinct_lines", len(set(inst.lines)) == len(inst.lines)))
    bad = [i for i, ln in enumerate(inst.lines) if not pattern_ok(ln, inst.chain, *inst.interval(i))]
    checks.append(Check("side_patterns", not bad, f"{len(bad)} line(s) off pattern"))
    # conflict sizes follow from the verified intervals via a difference array
    diff = [0] * (inst.m + 2)
    for i in range(len(inst.lines)):
        a, b = inst.interval(i)
        diff[a] += 1
        diff[b + 1] -= 1
    sizes, run = [], 0
    for i in range(1, inst.m + 1):
        run += diff[i]
        sizes.append(run)
    checks.append(Check("conflict_sizes", all(s == inst.k for s in sizes),
                        f"min {min(sizes)}, max {max(sizes)}, k={inst.k}"))
    if len(inst.points) <= GENERAL_POSITION_LIMIT:
        gp = general_position_check(inst.points)
        checks.append(Check("general_position", gp.clean, gp.summary()))
    else:
        xs = [p.x for p in inst.points]
        ok = len(set(xs)) == len(xs)
        checks.append(Check("general_position", ok,
                            "distinct abscissae only; collinearity not checked above "
                            f"{GENERAL_POSITION_LIMIT} points"))
    return checks


# --------------------------------------------------------------------------
# padding


@dataclass
class PaddingReport:
    count: int
    verified: bool
    method: str
    attempts: int
    detail: str = ""
    enumerated: bool | None = None


def padding_certificate(points: Sequence[Point], padding: Sequence[Point], k: int) -> tuple[bool, str]:
    """Sufficient exact test that no padding point sits below a k-shallow line.

    A line passing above a padding point q with slope >= 0 has every point
    right of q and no higher than q strictly below it (mirror for slope <= 0).
    If all padding lies above all instance points, and at least k instance
    points lie strictly left of the padding and k strictly right, any line
    with a padding point below has at least k + 1 points below.
    """
    if not padding:
        return True, "no padding"
    top = max(p.y for p in points) if points else None
    low = min(q.y for q in padding)
    if top is not None and not low > top:
        return False, "padding not above the instance"
    lo = min(q.x for q in padding)
    hi = max(q.x for q in padding)
    left = sum(1 for p in points if p.x < lo)
    right = sum(1 for p in points if p.x > hi)
    ok = left >= k and right >= k
    return ok, f"{left} instance point(s) left, {right} right, need {k} each"


def _split_gap(xs: list[Fraction], k: int):
    n = len(xs)
    mid = n // 2
    for s in sorted(range(k, n - k + 1), key=lambda s: (abs(s - mid), s)):
        if 0 < s < n and xs[s - 1] < xs[s]:
            return xs[s - 1], xs[s]
    return None


def pad_points(inst: AdversaryInstance, n: int, max_retries: int = 6,
               enumerate_limit: int = 48, strict: bool = False):
    """Append ``n - n'`` points that no k-shallow line has below it.

    The padding is a tiny convex cluster high above the instance, placed in
    an x-gap with as many instance points on each side as possible.  Every
    attempt is checked exactly by :func:`padding_certificate`; small sets
    are also cross-checked by full class enumeration.
    """
    from .levels import enumerate_class_masks

    base = list(inst.points)
    count = n - len(base)
    if count < 0:
        raise ParameterRange(f"target n={n} below instance size {len(base)}")
    if count == 0:
        rep = PaddingReport(0, True, "empty", 0, "no padding needed")
        return base, rep

    xs = sorted(p.x for p in base)
    gap = _split_gap(xs, inst.k)
    if gap is None:
        # no split with k points on both sides exists; place centrally anyway
        gap = _split_gap(xs, 0) or (xs[-1], xs[-1] + 2)
    x0, x1 = gap
    xc = (x0 + x1) / 2
    width = (x1 - x0) / 2
    ys = [p.y for p in base]
    top = max(ys)
    height = max(Fraction(1), top - min(ys))

    pads: list[Point] = []
    verified, detail, enumerated = False, "", None
    attempt = 0
    for attempt in range(1, max_retries + 1):
        pads = []
        for i in range(count):
            t = Fraction(2 * i - (count - 1), 2 * count) if count > 1 else Fraction(0)
            pads.append(Point(xc + width * t, top + height + width * t * t))
        verified, detail = padding_certificate(base, pads, inst.k)
        if verified and n <= enumerate_limit:
            full = base + pads
            pad_bits = ((1 << n) - 1) ^ ((1 << len(base)) - 1)
            enumerated = not any(bp & pad_bits for _, bp, _, _ in enumerate_class_masks(full, inst.k))
            verified = enumerated
            if not enumerated:
                detail += "; class enumeration found a shallow line above padding"
        if verified:
            break
        height *= 4
        width /= 4

    rep = PaddingReport(count, verified, "certificate" + ("+enumeration" if enumerated is not None else ""),
                        attempt, detail, enumerated)
    if strict and not verified:
        raise PaddingUnverifiable(detail)
    return base + pads, rep


def instance_report(n: int, k: int, padding: bool = True, seed: int = 0,
                    enumerate_limit: int = 48):
    """Build the padded instance for (n, k) and check the parameter arithmetic."""
    from .treecolor import slice_bound

    if not ceil_log2(n) <= k <= n // 4:
        raise ParameterRange(f"k={k} outside [ceil(log2 n), n/4] = [{ceil_log2(n)}, {n // 4}]")
    beta = choose_beta(n, k)
    m = 2 ** beta
    inst = build_instance(m, k, seed=seed)
    inst.n_target = n
    n_prime = len(inst.lines)
    checks = list(inst.checks)
    checks.append(Check("n_prime_bounds", Fraction(n, 8) <= n_prime <= n,
                        f"n/8={Fraction(n, 8)} <= n'={n_prime} <= n={n}"))
    checks.append(Check("chain_size", m >= Fraction(n, 9 * k), f"m={m} >= n/(9k)={Fraction(n, 9 * k)}"))
    if padding:
        pts, prep = pad_points(inst, n, enumerate_limit=enumerate_limit)
        inst.padding = pts[n_prime:]
        checks.append(Check("padding_size", 8 * prep.count <= 7 * n, f"{prep.count} <= 7n/8"))
        checks.append(Check("padding_verified", prep.verified, f"{prep.method}: {prep.detail}"))
    inst.checks = checks
    report = ConstructionReport(n=n, k=k, beta=beta, m=m, k_prime=inst.k_prime, n_prime=n_prime,
                                crossing_lower_bound=slice_bound(beta) - 1, checks=checks)
    return inst, report
