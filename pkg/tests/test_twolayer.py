from itertools import combinations

import pytest

from layeredit.core import consistent_after_removal, layer_from_edges
from layeredit.twolayer import (
    build_clique_intersection_graph,
    max_weight_matching,
    solve_two_layer_zero_edit,
)

from conftest import random_cluster_graph


def clusters(n, *groups):
    edges = []
    for group in groups:
        edges.extend(combinations(sorted(group), 2))
    return layer_from_edges(n, edges)


def brute_force_min_marks(g1, g2):
    """Smallest D with agreement after removal, by subset enumeration."""
    n = g1.n
    for size in range(n + 1):
        for combo in combinations(range(1, n + 1), size):
            if consistent_after_removal(g1, g2, frozenset(combo)):
                return size
    raise AssertionError("removing everything always works")


class TestBuildGraph:
    def test_single_clique_both_sides(self):
        g = clusters(4, [1, 2, 3, 4])
        h = build_clique_intersection_graph(g, g)
        assert len(h.left_cliques) == len(h.right_cliques) == 1
        assert h.weights == {(0, 0): 4}

    def test_three_edge_example(self):
        g1 = clusters(3, [1, 2], [3])
        g2 = clusters(3, [1], [2, 3])
        h = build_clique_intersection_graph(g1, g2)
        assert h.left_cliques == (frozenset({1, 2}), frozenset({3}))
        assert h.right_cliques == (frozenset({1}), frozenset({2, 3}))
        assert h.weights == {(0, 0): 1, (0, 1): 1, (1, 1): 1}

    def test_all_singletons(self):
        g = clusters(5)
        h = build_clique_intersection_graph(g, g)
        assert len(h.weights) == 5
        assert all(w == 1 for w in h.weights.values())

    def test_rejects_non_cluster_input(self):
        path = layer_from_edges(3, [(1, 2), (2, 3)])
        with pytest.raises(ValueError):
            build_clique_intersection_graph(path, clusters(3, [1, 2, 3]))

    def test_at_most_n_weighted_edges(self, rng):
        for _ in range(50):
            n = rng.randint(1, 7)
            h = build_clique_intersection_graph(
                random_cluster_graph(rng, n), random_cluster_graph(rng, n))
            assert len(h.weights) <= n
            assert sum(h.weights.values()) == n


class TestMatching:
    def test_empty(self):
        g = clusters(1, [1])
        h = build_clique_intersection_graph(g, g)
        matching, weight = max_weight_matching(h)
        assert weight == 1 and matching == ((0, 0),)

    def test_three_edge_example_weight_two(self):
        g1 = clusters(3, [1, 2], [3])
        g2 = clusters(3, [1], [2, 3])
        matching, weight = max_weight_matching(build_clique_intersection_graph(g1, g2))
        assert weight == 2
        assert matching == ((0, 0), (1, 1))

    def test_single_heavy_pair(self):
        g = clusters(6, [1, 2, 3, 4, 5, 6])
        matching, weight = max_weight_matching(build_clique_intersection_graph(g, g))
        assert weight == 6

    def test_matches_exhaustive_matching(self, rng):
        for _ in range(80):
            n = rng.randint(1, 6)
            h = build_clique_intersection_graph(
                random_cluster_graph(rng, n), random_cluster_graph(rng, n))
            _, weight = max_weight_matching(h)
            assert weight == _best_matching_weight_brute(h)


def _best_matching_weight_brute(h):
    edges = sorted(h.weights.items())
    best = 0
    for size in range(len(edges) + 1):
        for combo in combinations(edges, size):
            lefts = [e[0][0] for e in combo]
            rights = [e[0][1] for e in combo]
            if len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights):
                best = max(best, sum(w for _, w in combo))
    return best


class TestSolveTwoLayer:
    def test_identical_layers_need_nothing(self):
        g = clusters(4, [1, 2], [3, 4])
        assert solve_two_layer_zero_edit(g, g, 0) == frozenset()

    def test_crossing_clusters_d1(self):
        g1 = clusters(3, [1, 2], [3])
        g2 = clusters(3, [1], [2, 3])
        d = solve_two_layer_zero_edit(g1, g2, 1)
        assert d is not None and len(d) == 1
        assert consistent_after_removal(g1, g2, d)

    def test_crossing_clusters_d0_fails(self):
        g1 = clusters(3, [1, 2], [3])
        g2 = clusters(3, [1], [2, 3])
        assert solve_two_layer_zero_edit(g1, g2, 0) is None

    def test_non_cluster_input_is_no(self):
        path = layer_from_edges(3, [(1, 2), (2, 3)])
        assert solve_two_layer_zero_edit(path, path, 3) is None

    def test_against_subset_enumeration(self, rng):
        # decision and minimal mark count match brute force for every d
        for _ in range(300):
            n = rng.randint(1, 7)
            g1 = random_cluster_graph(rng, n)
            g2 = random_cluster_graph(rng, n)
            best = brute_force_min_marks(g1, g2)
            for d in range(n + 1):
                got = solve_two_layer_zero_edit(g1, g2, d)
                if d < best:
                    assert got is None
                else:
                    assert got is not None and len(got) == best
                    assert consistent_after_removal(g1, g2, got)

    def test_deterministic(self, rng):
        for _ in range(20):
            g1 = random_cluster_graph(rng, 6)
            g2 = random_cluster_graph(rng, 6)
            assert solve_two_layer_zero_edit(g1, g2, 3) == \
                solve_two_layer_zero_edit(g1, g2, 3)
