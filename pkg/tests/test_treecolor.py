import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shallowlab.adversary import build_instance
from shallowlab.errors import HypothesisViolated, ParameterRange
from shallowlab.partition import baseline_partition
from shallowlab.treecolor import (MultiColoredTree, adversary_min_bruteforce, ceil_log2,
                                  greedy_colorful_path, closed_form_slice_estimate, slice_bound,
                                  slices, summation_chain_holds, summation_links,
                                  tree_from_instance, validate_coloring)


@pytest.mark.parametrize("beta, sizes, complete", [(1, [2], 1), (3, [4], 1), (16, [6, 7, 4], 2)])
def test_slices_examples(beta, sizes, complete):
    dec = slices(beta)
    assert dec.sizes == sizes and dec.complete_count == complete
    assert sum(dec.sizes) == beta + 1


def test_slice_bound_examples():
    assert slice_bound(3) == 1
    assert slice_bound(16) == 2
    assert slice_bound(16) >= (16 + 1) / (12)
    assert slice_bound(256) >= 9


@pytest.mark.parametrize("beta", [4, 5, 16, 100, 256, 1000])
def test_slice_estimate_is_exact_ceiling(beta):
    est = closed_form_slice_estimate(beta)
    assert est == math.ceil((beta + 1) / (3 * math.log2(beta)))
    assert slice_bound(beta) >= est - 1


def _chain_direct(beta):
    total = 0
    for b in range(1, beta + 1):
        total += ceil_log2(3 * b * beta)
        if beta ** (3 * b) < 2 ** total:
            return False
    return True


def test_summation_chain_matches_direct_sum():
    for beta in range(1, 90):
        assert summation_chain_holds(beta) == _chain_direct(beta), beta


def test_summation_chain_small_beta():
    # log(beta) is too small to absorb the ceilings below 3
    assert not summation_chain_holds(1) and not summation_chain_holds(2)
    assert summation_chain_holds(3)


def test_first_summation_link_can_fail():
    links = summation_links(6, 1)
    assert not links["ceil_vs_log4"]
    assert links["end_to_end"]


def test_tree_from_small_instances():
    inst = build_instance(2, 2)
    tree = tree_from_instance(inst)
    assert tree.size == 3
    assert [len(tree.node_colors(i)) for i in range(3)] == [1, 1, 1]
    top = [i for i, (j, _, _) in enumerate(inst.provenance) if j == inst.beta]
    assert tree.node_colors(0) == top

    inst = build_instance(4, 3)
    tree = tree_from_instance(inst)
    assert tree.size == 7
    for t in range(4):
        v = inst.chain[t]
        below = {i for i, ln in enumerate(inst.lines) if ln.at(v.x) < v.y}
        on_path = {c for node in tree.path_to(tree.leaf(t)) for c in tree.node_colors(node)}
        assert on_path == below


def test_extra_copies_sit_at_root():
    inst = build_instance(4, 4)
    tree = tree_from_instance(inst)
    assert len(tree.node_colors(0)) == 2
    assert validate_coloring(tree, 4, 4).ok
    assert not validate_coloring(tree, 4, 4, extra_at="leaves").ok


def test_validate_coloring_examples():
    tree = MultiColoredTree(1, [[0, 1], [0, 2], [0, 3]])
    assert not validate_coloring(tree, 4, 2).ok  # color 0 has three slots, so cap 2 fails
    assert validate_coloring(tree, 4, 3).ok
    ident = MultiColoredTree(2, [[i] for i in range(7)])
    assert validate_coloring(ident, 3, 3).ok


def test_oversized_class_detected():
    k = 3
    colors = [[0]] * 7  # one class with 7 > 2k slots
    rep = validate_coloring(MultiColoredTree(2, colors), k, 2 * k)
    assert rep.class_violations == {0: 7}


def test_instance_coloring_passes():
    inst = build_instance(8, 4)
    part = baseline_partition(inst.points, 4)
    tree = tree_from_instance(inst, part.part_of())
    assert validate_coloring(tree, 4, 4).ok


def test_greedy_single_color():
    tree = MultiColoredTree(3, [[0]] * 15)
    path, distinct = greedy_colorful_path(tree)
    assert distinct == 1 and len(path) == 4


def test_greedy_raises_on_bad_coloring():
    tree = MultiColoredTree(3, [[0]] * 15)
    with pytest.raises(HypothesisViolated) as exc:
        greedy_colorful_path(tree, k=4, class_cap=8)
    assert exc.value.distinct == 1


def test_greedy_on_explicit_coloring():
    # beta=3, k=4: four color groups, one per level
    tree = MultiColoredTree(3, [[d] for i in range(15) for d in [(i + 1).bit_length() - 1]])
    path, distinct = greedy_colorful_path(tree)
    assert distinct == 4 >= slice_bound(3)


def _valid_random_tree(rng, beta, k, cap):
    per = k // (beta + 1)
    slots = (2 ** (beta + 1) - 1) * per
    labels = np.repeat(np.arange(-(-slots // cap)), cap)[:slots]
    rng.shuffle(labels)
    return MultiColoredTree(beta, labels.reshape(-1, per))


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_greedy_reaches_slice_bound(beta, per, seed):
    k = per * (beta + 1)
    tree = _valid_random_tree(np.random.default_rng(seed), beta, k, 2 * k)
    path, distinct = greedy_colorful_path(tree, k, 2 * k)
    assert path[0] == 0 and len(path) == beta + 1
    assert all(b in (2 * a + 1, 2 * a + 2) for a, b in zip(path, path[1:]))
    assert distinct == tree.distinct_on(path) >= slice_bound(beta)


def _rgs(n):
    # restricted growth strings = set partitions, without any pruning
    def rec(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for c in range(top + 2):
            yield from rec(prefix + [c], max(top, c))
    yield from rec([], -1)


def _brute_min_max(beta, cap):
    nodes = 2 ** (beta + 1) - 1
    leaves = range(2 ** beta - 1, nodes)
    best = nodes
    tree = MultiColoredTree(beta, [[0]] * nodes)
    for labels in _rgs(nodes):
        if max(labels.count(c) for c in set(labels)) > cap:
            continue
        worst = max(len({labels[v] for v in tree.path_to(leaf)}) for leaf in leaves)
        best = min(best, worst)
    return best


@pytest.mark.parametrize("beta, cap, value", [(1, 1, 2), (1, 2, 2), (1, 3, 1),
                                              (2, 2, 3), (2, 3, 2), (2, 4, 2), (2, 7, 1)])
def test_bruteforce_matches_plain_enumeration(beta, cap, value):
    assert adversary_min_bruteforce(beta, beta + 1, cap) == value == _brute_min_max(beta, cap)


def test_bruteforce_rejects_uneven_k():
    with pytest.raises(ParameterRange):
        adversary_min_bruteforce(2, 4, 4)
