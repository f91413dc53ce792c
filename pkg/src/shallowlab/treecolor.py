"""Multi-colorings of complete binary trees and the colorful-path argument.

Nodes are stored in level order: node 0 is the root, the children of node
``i`` are ``2i + 1`` and ``2i + 2``, and depth ``d`` occupies indices
``2^d - 1 .. 2^(d+1) - 2``.  Logarithms are base 2 and ceilings of them are
taken on exact integers.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import HypothesisViolated, OracleTooLarge, ParameterRange


def ceil_log2(x: int) -> int:
    """Smallest s with 2**s >= x (x >= 1)."""
    return (x - 1).bit_length()


@dataclass
class MultiColoredTree:
    beta: int
    colors: Sequence[Sequence[Hashable]]

    def __post_init__(self):
        if self.beta < 0:
            raise ParameterRange("beta must be non-negative")
        if len(self.colors) != self.size:
            raise ParameterRange(f"{len(self.colors)} color lists for {self.size} nodes")

    @property
    def size(self) -> int:
        return 2 ** (self.beta + 1) - 1

    def node_colors(self, i: int) -> list:
        row = self.colors[i]
        return row.tolist() if isinstance(row, np.ndarray) else list(row)

    def leaf(self, t: int) -> int:
        """Node id of the t-th leaf (0-based, left to right)."""
        return 2 ** self.beta - 1 + t

    def path_to(self, node: int) -> list[int]:
        out = [node]
        while node:
            node = (node - 1) // 2
            out.append(node)
        return out[::-1]

    def distinct_on(self, path: Sequence[int]) -> int:
        seen = set()
        for v in path:
            seen.update(self.node_colors(v))
        return len(seen)


def depth_of(node: int) -> int:
    return (node + 1).bit_length() - 1


# --------------------------------------------------------------------------
# slices


@dataclass
class SliceDecomposition:
    beta: int
    slices: list[tuple[int, int]]  # inclusive level ranges, root level 0
    complete_count: int

    @property
    def sizes(self) -> list[int]:
        return [hi - lo + 1 for lo, hi in self.slices]


def slice_size(i: int, beta: int) -> int:
    return ceil_log2(3 * i * beta)


def slices(beta: int) -> SliceDecomposition:
    """Cut the beta + 1 levels into slices of ceil(log(3 i beta)) levels each."""
    if beta < 1:
        raise ParameterRange("beta must be at least 1")
    out = []
    lo, i, complete = 0, 1, 0
    while lo <= beta:
        size = slice_size(i, beta)
        hi = lo + size - 1
        if hi <= beta:
            complete += 1
        out.append((lo, min(hi, beta)))
        lo = hi + 1
        i += 1
    return SliceDecomposition(beta, out, complete)


def closed_form_slice_estimate(beta: int) -> int:
    """ceil((beta + 1) / (3 log beta)) decided exactly: least c with beta^(3c) >= 2^(beta+1)."""
    if beta < 2:
        raise ParameterRange("estimate needs beta >= 2")
    target = 1 << (beta + 1)
    c = max(1, int((beta + 1) / (3 * math.log2(beta))) - 1)
    while beta ** (3 * c) < target:
        c += 1
    while c > 1 and beta ** (3 * (c - 1)) >= target:
        c -= 1
    return c


def slice_bound(beta: int) -> int:
    """Number of complete slices, the count the greedy path certifiably reaches."""
    b = slices(beta).complete_count
    if beta >= 4:
        assert b >= closed_form_slice_estimate(beta) - 1, (beta, b)
    return b


def _at_least(beta: int, b: int, total: int) -> bool:
    """Exact test of 3 b log2(beta) >= total."""
    diff = 3 * b * math.log2(beta) - total
    if abs(diff) > 1e-6 * max(1.0, total):
        return diff > 0
    return beta ** (3 * b) >= 1 << total


def summation_chain_holds(beta: int) -> bool:
    """sum_{i<=b} ceil(log(3 i beta)) <= 3 b log(beta) for every 1 <= b <= beta.

    The summand is a step function of i, so the slack is linear on each
    step and only step endpoints need checking.
    """
    total = 0
    i = 1
    while i <= beta:
        s = ceil_log2(3 * i * beta)
        last = min(beta, (1 << s) // (3 * beta))
        if not _at_least(beta, i, total + s):
            return False
        total += s * (last - i + 1)
        if not _at_least(beta, last, total):
            return False
        i = last + 1
    return True


def summation_links(beta: int, b: int) -> dict[str, bool]:
    """Each link of the slice-count estimate, evaluated separately (floats)."""
    lhs = sum(slice_size(i, beta) for i in range(1, b + 1))
    mid1 = sum(math.log2(4 * i * beta) for i in range(1, b + 1))
    mid2 = b * (2 + math.log2(b) + math.log2(beta))
    rhs = 3 * b * math.log2(beta)
    tol = 1e-9
    return {
        "ceil_vs_log4": lhs <= mid1 + tol,
        "log4_vs_bound": mid1 <= mid2 + tol,
        "bound_vs_3blog": mid2 <= rhs + tol,
        "end_to_end": _at_least(beta, b, lhs),
    }


# --------------------------------------------------------------------------
# validation


@dataclass
class ColoringReport:
    node_size_violations: list[int] = field(default_factory=list)
    class_violations: dict = field(default_factory=dict)
    per_node: int = 0
    extra: int = 0

    @property
    def ok(self) -> bool:
        return not self.node_size_violations and not self.class_violations


def _class_sizes(tree: MultiColoredTree) -> dict:
    if isinstance(tree.colors, np.ndarray):
        vals, counts = np.unique(tree.colors, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))
    return Counter(c for i in range(tree.size) for c in tree.node_colors(i))


def validate_coloring(tree: MultiColoredTree, k: int, class_cap: int,
                      extra_at: str = "root") -> ColoringReport:
    """Check node multiset sizes and color-class sizes.

    Every node must carry floor(k / (beta + 1)) colors; the remainder
    k - k' sits on the root (where replicated copies of the top line live)
    or, with ``extra_at="leaves"``, on every leaf.
    """
    per = k // (tree.beta + 1)
    extra = k - per * (tree.beta + 1)
    rep = ColoringReport(per_node=per, extra=extra)
    first_leaf = 2 ** tree.beta - 1
    if isinstance(tree.colors, np.ndarray) and not extra:
        # rectangular storage: every node has the same number of colors
        if tree.colors.ndim != 2 or tree.colors.shape[1] != per:
            rep.node_size_violations = list(range(tree.size))
        rep.class_violations = {c: s for c, s in _class_sizes(tree).items() if s > class_cap}
        return rep
    for i in range(tree.size):
        want = per
        if extra and ((extra_at == "root" and i == 0) or (extra_at == "leaves" and i >= first_leaf)):
            want += extra
        if len(tree.colors[i]) != want:
            rep.node_size_violations.append(i)
    rep.class_violations = {c: s for c, s in _class_sizes(tree).items() if s > class_cap}
    return rep


# --------------------------------------------------------------------------
# greedy path


def _best_descent(tree: MultiColoredTree, start: int, levels: int, have: set) -> tuple[list[int], int]:
    """Downward path of ``levels`` nodes from ``start`` adding the most new colors."""
    best_path, best_gain = None, -1
    stack = [(start, [start], frozenset(tree.node_colors(start)) - have)]
    while stack:
        node, path, new = stack.pop()
        if len(path) == levels:
            gain = len(new)
            # stack pops right children first, so '>=' keeps the leftmost winner
            if gain >= best_gain:
                best_path, best_gain = path, gain
            continue
        for child in (2 * node + 2, 2 * node + 1):
            stack.append((child, path + [child], new | (frozenset(tree.node_colors(child)) - have)))
    return best_path, best_gain


def _leftmost_descent(start: int, levels: int) -> list[int]:
    path = [start]
    while len(path) < levels:
        path.append(2 * path[-1] + 1)
    return path


def greedy_colorful_path(tree: MultiColoredTree, k: int | None = None,
                         class_cap: int | None = None) -> tuple[list[int], int]:
    """Root-leaf path built slice by slice with one new color per complete slice.

    After slice i the path holds at least i distinct colors whenever each
    node carries k/(beta+1) colors and classes have at most 2k slots: a
    complete slice subtree below the current end then holds at least i
    distinct colors, so an exhaustive search inside it finds one the path
    lacks.  Passing ``k`` and ``class_cap`` validates those hypotheses and
    raises :class:`HypothesisViolated` (carrying the path) on failure.
    """
    dec = slices(tree.beta)
    path: list[int] = []
    have: set = set()
    for i, (lo, hi) in enumerate(dec.slices, start=1):
        levels = hi - lo + 1
        starts = [0] if not path else [2 * path[-1] + 1, 2 * path[-1] + 2]
        if len(have) >= i:
            seg = _leftmost_descent(starts[0], levels)
        else:
            seg, gain = None, -1
            for s in starts:
                cand, g = _best_descent(tree, s, levels, have)
                if g > gain:
                    seg, gain = cand, g
        path.extend(seg)
        for v in seg:
            have.update(tree.node_colors(v))
    distinct = len(have)
    if k is not None and class_cap is not None:
        rep = validate_coloring(tree, k, class_cap)
        if not rep.ok:
            raise HypothesisViolated(
                f"{len(rep.node_size_violations)} node size violation(s), "
                f"{len(rep.class_violations)} oversized class(es)", path, distinct)
    return path, distinct


# --------------------------------------------------------------------------
# instance trees and the exhaustive oracle


def tree_from_instance(instance, coloring: dict | Sequence | None = None) -> MultiColoredTree:
    """Store each line in the node whose leaves are the chain vertices above it."""
    beta = instance.beta
    colors: list[list] = [[] for _ in range(2 ** (beta + 1) - 1)]
    for idx, (j, t, _c) in enumerate(instance.provenance):
        node = 2 ** (beta - j) - 1 + (t - 1)
        colors[node].append(idx if coloring is None else coloring[idx])
    return MultiColoredTree(beta, colors)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def adversary_min_bruteforce(beta: int, k: int, class_cap: int, limit: int = 10 ** 8) -> int:
    """min over valid multi-colorings of the max distinct colors on a root-leaf path.

    Colorings are enumerated up to relabeling as restricted growth strings
    over the color slots in level order, pruning any branch where some
    already-colored root path reaches the best value found so far.
    """
    if k % (beta + 1):
        raise ParameterRange(f"k={k} is not a multiple of beta+1={beta + 1}")
    per = k // (beta + 1)
    nodes = 2 ** (beta + 1) - 1
    slots = nodes * per
    if bell_number(slots) > limit:
        raise OracleTooLarge(f"{slots} slots exceed the enumeration budget")
    owner = [s // per for s in range(slots)]
    assign = [0] * slots
    sizes: list[int] = []
    best = [slots + 1]
    path_colors: list[set] = [set() for _ in range(nodes)]

    def node_done(v):
        parent = path_colors[(v - 1) // 2] if v else set()
        cols = parent | {assign[s] for s in range(v * per, (v + 1) * per)}
        path_colors[v] = cols
        return len(cols)

    def rec(s):
        if s == slots:
            first_leaf = 2 ** beta - 1
            worst = max(len(path_colors[v]) for v in range(first_leaf, nodes))
            best[0] = min(best[0], worst)
            return
        for c in range(len(sizes) + 1):
            if c == len(sizes):
                sizes.append(0)
            if sizes[c] < class_cap:
                sizes[c] += 1
                assign[s] = c
                ok = True
                if (s + 1) % per == 0 and node_done(owner[s]) >= best[0]:
                    ok = False
                if ok:
                    rec(s + 1)
                sizes[c] -= 1
            if sizes[-1] == 0:
                sizes.pop()
                break

    rec(0)
    return best[0]
