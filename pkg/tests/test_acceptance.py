"""Acceptance criteria, each at its stated tolerance and time limit.

Every test records one PASS/FAIL line (printed in the terminal summary and
to stdout) before asserting, so a failing criterion still reports.
"""
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from shallowlab.adversary import build_instance, choose_beta, instance_report, side_pattern
from shallowlab.experiment import grid_pairs
from shallowlab.geometry import Line, Point, dualize_line, dualize_point, side_of_line
from shallowlab.levels import count_below, edge_midpoints, enumerate_class_masks, k_level
from shallowlab.partition import (baseline_partition, coloring_from_partition, crossing_number,
                                  random_partition, sample_crossing)
from shallowlab.treecolor import (MultiColoredTree, adversary_min_bruteforce, greedy_colorful_path,
                                  slice_bound, summation_chain_holds)

pytestmark = pytest.mark.acceptance


def record(number, title, ok, elapsed, limit, detail=""):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"{status} criterion {number}: {title} ({elapsed:.1f}s / {limit:.0f}s)"
    if detail:
        line += f" - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert within, line


def c7_grid():
    pairs = []
    for rule in ("log", "2log", "n8", "n4"):
        pairs += grid_pairs([2 ** e for e in range(6, 15)], rule)
    return pairs


# 1 -------------------------------------------------------------------------

def test_criterion_1_construction_fidelity():
    start = time.perf_counter()
    problems = []
    for m in (2, 4, 8, 16, 32, 64):
        beta = m.bit_length() - 1
        for k in (beta + 1, 2 * (beta + 1), beta + 2):
            inst = build_instance(m, k)
            kp = k // (beta + 1) * (beta + 1)
            expected = (2 * m - 1) * kp // (beta + 1) + (k - kp)
            if len(inst.lines) != expected:
                problems.append(f"m={m} k={k}: {len(inst.lines)} lines, expected {expected}")
            level = k_level(inst.lines, k)
            sizes = {len(c) for c in level.conflicts.values()}
            # chain vertices: lines strictly below, counted directly
            sizes |= {count_below(inst.lines, v) for v in inst.chain}
            if sizes != {k}:
                problems.append(f"m={m} k={k}: conflict sizes {sorted(sizes)}")
            for ln, (j, t, _c) in zip(inst.lines, inst.provenance):
                above, on = side_pattern(ln, inst.chain)
                block = frozenset(range((t - 1) * 2 ** j + 1, t * 2 ** j + 1))
                if above != block or on:
                    problems.append(f"m={m} k={k}: line ({j},{t}) off pattern")
                    break
    record(1, "construction fidelity", not problems, time.perf_counter() - start, 10,
           "; ".join(problems[:3]) or "line counts, conflict sets and side patterns exact")


# 2 -------------------------------------------------------------------------

def test_criterion_2_duality():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    nums = rng.integers(-999, 1000, size=(10 ** 5, 4)).tolist()
    dens = rng.integers(1, 100, size=(10 ** 5, 4)).tolist()
    bad = 0
    for (a, b, c, d), (e, f, g, h) in zip(nums, dens):
        p = Point(Fraction(a, e), Fraction(b, f))
        ln = Line(Fraction(c, g), Fraction(d, h))
        dp, dl = dualize_point(p), dualize_line(ln)
        if dualize_line(dp) != p or dualize_point(dl) != ln:
            bad += 1
        elif side_of_line(ln, p) != side_of_line(dp, dl):
            bad += 1
    record(2, "duality involution and side preservation", bad == 0, time.perf_counter() - start, 5,
           f"{bad} failing pair(s) of 100000")


# 3 -------------------------------------------------------------------------

def _reflect(ln):
    return Line(-ln.slope, -ln.intercept)


def test_criterion_3_level_oracle():
    start = time.perf_counter()
    rng = random.Random(3)
    bad = []
    for trial in range(200):
        n = rng.randint(2, 40)
        lines = set()
        while len(lines) < n:
            lines.add(Line(Fraction(rng.randint(-20, 20), rng.randint(1, 4)),
                           Fraction(rng.randint(-20, 20), rng.randint(1, 4))))
        lines = sorted(lines)
        k = rng.randrange(n)
        level = k_level(lines, k)
        if any(count_below(lines, p) != k for p in edge_midpoints(level)):
            bad.append(f"trial {trial}: midpoint count")
            continue
        # the k-level mirrored in the x-axis is the (n-1-k)-level of the mirrored lines
        mirror = k_level([_reflect(ln) for ln in lines], n - 1 - k)
        if [Point(p.x, -p.y) for p in mirror.polyline] != level.polyline:
            bad.append(f"trial {trial}: reflection")
    record(3, "k-level midpoints and reflection", not bad, time.perf_counter() - start, 30,
           "; ".join(bad[:3]) or "200 arrangements")


# 4 -------------------------------------------------------------------------

def test_criterion_4_evaluator_vs_sampler():
    start = time.perf_counter()
    rng = random.Random(4)
    mismatches = []
    for trial in range(50):
        n = rng.randint(3, 12)
        pts = {}
        while len(pts) < n:
            x = Fraction(rng.randint(-50, 50), rng.randint(1, 4))
            pts.setdefault(x, Point(x, Fraction(rng.randint(-50, 50), rng.randint(1, 4))))
        pts = list(pts.values())
        k = rng.randint(1, max(1, n // 2))
        part = baseline_partition(pts, k)
        exact = crossing_number(pts, part, k).value
        sampled = sample_crossing(pts, part, k, samples=10 ** 6, seed=trial).value
        if sampled != exact:
            mismatches.append(f"trial {trial}: exact {exact}, sampler {sampled}")
    record(4, "exact crossing equals 10^6-line sampler", not mismatches,
           time.perf_counter() - start, 120, "; ".join(mismatches[:3]) or "50 instances")


# 5 -------------------------------------------------------------------------

def _level_offsets(beta):
    return [2 ** d - 1 for d in range(beta + 2)]


def _mirrored(beta, nodes, mask):
    """Apply the subtree-swapping automorphism given by bits of ``mask``."""
    off = _level_offsets(beta)
    depth = np.floor(np.log2(nodes + 1)).astype(np.int64)
    pos = nodes - (2 ** depth - 1)
    pos ^= (mask >> (beta - depth)) & (2 ** depth - 1)
    return np.asarray(off)[depth] + pos


def _preorder(beta):
    out, stack = [], [0]
    last = 2 ** (beta + 1) - 1
    while stack:
        v = stack.pop()
        out.append(v)
        if 2 * v + 1 < last:
            stack += [2 * v + 2, 2 * v + 1]
    return np.array(out, dtype=np.int64)


def _colorings(beta, per, cap, count, rng):
    """Valid colorings: uniform shuffles, preorder packing and level packing."""
    nodes = 2 ** (beta + 1) - 1
    slots = nodes * per
    packed = np.repeat(np.arange(-(-slots // cap)), cap)[:slots]
    pre = _preorder(beta)
    for i in range(count):
        kind = i % 3
        if kind == 0:
            labels = rng.permutation(packed)
        else:
            order = pre if kind == 1 else np.arange(nodes)
            order = _mirrored(beta, order, int(rng.integers(0, 2 ** beta)))
            labels = np.empty(slots, dtype=np.int64)
            # node order[r] gets slots r*per .. r*per+per-1 of the packed sequence
            idx = (order[:, None] * per + np.arange(per)).ravel()
            labels[idx] = packed
        yield MultiColoredTree(beta, labels.reshape(nodes, per))


def test_criterion_5_lemma_machinery():
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    bad = []
    for beta in range(4, 15):
        bound = slice_bound(beta)
        per = 1 + beta % 2
        k = per * (beta + 1)
        for j, tree in enumerate(_colorings(beta, per, 2 * k, 1000, rng)):
            _path, distinct = greedy_colorful_path(tree, k, 2 * k)
            if distinct < bound:
                bad.append(f"beta={beta} coloring {j}: {distinct} < {bound}")
    chain_bad = [b for b in range(4, 2 ** 16 + 1) if not summation_chain_holds(b)]
    detail = f"greedy below bound: {len(bad)}; summation chain failures for 4 <= beta <= 2^16: {len(chain_bad)}"
    record(5, "colorful path and summation chain", not bad and not chain_bad,
           time.perf_counter() - start, 60, detail)


# 6 -------------------------------------------------------------------------

def test_criterion_6_bruteforce_lemma():
    start = time.perf_counter()
    values = {}
    for beta in (1, 2):
        for cap in (2, 3, 4):
            values[(beta, cap)] = adversary_min_bruteforce(beta, beta + 1, cap)
    ok = all(v >= slice_bound(b) for (b, _), v in values.items())
    record(6, "exhaustive min-max colors at toy scale", ok, time.perf_counter() - start, 60,
           ", ".join(f"beta={b} cap={c}: {v}" for (b, c), v in sorted(values.items())))


# 7 -------------------------------------------------------------------------

def test_criterion_7_theorem_arithmetic():
    start = time.perf_counter()
    bad = []
    for n, k in c7_grid():
        _inst, rep = instance_report(n, k, padding=False)
        ok = Fraction(n, 8) <= rep.n_prime <= n and rep.m >= Fraction(n, 9 * k)
        if not ok:
            bad.append(f"n={n} k={k}")
    record(7, "n/8 <= n' <= n and m >= n/(9k) over the grid", not bad,
           time.perf_counter() - start, 60, "; ".join(bad) or f"{len(c7_grid())} grid points")


# 8 -------------------------------------------------------------------------

def test_criterion_8_end_to_end():
    start = time.perf_counter()
    rng = random.Random(8)
    instances = [build_instance(m, k, seed=s) for s, (m, k) in
                 enumerate([(2, 2), (2, 3), (4, 3), (4, 4), (4, 5), (8, 4), (8, 5)])]
    for n, k in [(32, 8), (64, 8)]:
        instances.append(instance_report(n, k)[0])
    bad, evaluated = [], 0
    for inst in instances:
        pts = inst.all_points
        parts = [baseline_partition(pts, inst.k)]
        parts += [random_partition(pts, inst.k, rng) for _ in range(20)]
        for part in parts:
            crossing = crossing_number(pts, part, inst.k).value
            check = coloring_from_partition(inst, part, inst.k)
            evaluated += 1
            if not check.proposition_holds(crossing):
                bad.append(f"m={inst.m} k={inst.k}: distinct {check.max_distinct}, crossing {crossing}")
    record(8, "distinct colors <= crossing + 1", not bad, time.perf_counter() - start, 120,
           "; ".join(bad[:3]) or f"{evaluated} partitions on {len(instances)} instances")


# 9 -------------------------------------------------------------------------

def c9_small_pairs(count=20):
    """Small theorem-range pairs whose instance can be padded at all.

    A line just under the leftmost padding point with a steep negative
    slope has only that point and the instance points left of it below,
    so padding needs at least k instance points on each side: n' >= 2k.
    """
    pairs = []
    for n in range(16, 49, 4):
        lg = (n - 1).bit_length()
        for k in range(lg, n // 4 + 1):
            beta = choose_beta(n, k)
            kp = k // (beta + 1) * (beta + 1)
            n_prime = (2 ** (beta + 1) - 1) * kp // (beta + 1) + k - kp
            pairs.append((n, k, n_prime >= 2 * k))
    feasible = [(n, k) for n, k, ok in pairs if ok]
    out = [(n, k, seed) for seed in range(count) for n, k in feasible][:count]
    return out, len(pairs) - len(feasible)


def test_criterion_9_padding():
    start = time.perf_counter()
    small, skipped = c9_small_pairs()
    small_bad = []
    for n, k, seed in small:
        inst, rep = instance_report(n, k, seed=seed)
        pts = inst.all_points
        pad = ((1 << len(pts)) - 1) ^ ((1 << len(inst.lines)) - 1)
        enumerated_ok = not any(bp & pad for _, bp, _, _ in enumerate_class_masks(pts, k))
        if not (rep.ok and enumerated_ok):
            small_bad.append(f"n={n} k={k} seed={seed}")
    grid_bad = []
    for n, k in c7_grid():
        _inst, rep = instance_report(n, k)
        if not rep.ok:
            grid_bad.append(f"n={n} k={k}")
    detail = (f"{len(small)} small padded instances, enumerator failures: {small_bad or 'none'} "
              f"({skipped} small pairs with n' < 2k cannot be padded); "
              f"criterion-7 grid rows without verified padding: {grid_bad or 'none'}")
    record(9, "padding verified", not small_bad and not grid_bad, time.perf_counter() - start, 120,
           detail)
