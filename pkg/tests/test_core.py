from itertools import combinations

import pytest

from layeredit.core import (
    InputError,
    Instance,
    P3Witness,
    Solution,
    apply_edits,
    consistent_after_removal,
    count_p3_through_pair,
    find_p3,
    is_cluster_graph,
    layer_from_edges,
    verify,
)

from conftest import (
    check_solution_independently,
    ref_instance,
    ref_mlce_solution_k1_d2,
    ref_mlce_solution_k3_d1,
    ref_tce_solution,
    random_instance,
    random_layers,
)


def brute_force_p3_free(g, restrict=None):
    verts = sorted(restrict) if restrict is not None else range(1, g.n + 1)
    for a, b, c in combinations(verts, 3):
        cnt = g.has_edge(a, b) + g.has_edge(a, c) + g.has_edge(b, c)
        if cnt == 2:
            return False
    return True


class TestApplyEdits:
    def test_empty_edit_is_identity(self):
        g = layer_from_edges(4, [(1, 2), (3, 4)])
        assert apply_edits(g, frozenset()) == g

    def test_involution(self, rng):
        for _ in range(50):
            g = random_layers(rng, 5, 1)[0]
            m = frozenset({(1, 2), (2, 5), (3, 4)})
            assert apply_edits(apply_edits(g, m), m) == g

    def test_ref_layer3_plus_45_is_clique(self):
        g = ref_instance("mlce", 1, 1).layers[2]
        edited = apply_edits(g, frozenset({(4, 5)}))
        assert edited.edges == frozenset({(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)})
        assert is_cluster_graph(edited)
        assert edited.adj[1] == frozenset()

    def test_out_of_range_pair(self):
        g = layer_from_edges(3, [(1, 2)])
        with pytest.raises(InputError):
            apply_edits(g, frozenset({(2, 4)}))


class TestFindP3:
    def test_cluster_graph_has_none(self):
        g = layer_from_edges(5, [(1, 2), (1, 3), (2, 3)])
        assert find_p3(g) is None

    def test_ref_layer3_witness(self):
        g = ref_instance("mlce", 1, 1).layers[2]
        w = find_p3(g)
        assert w == P3Witness(4, 2, 5)
        assert g.has_edge(w.a, w.b) and g.has_edge(w.b, w.c) and not g.has_edge(w.a, w.c)

    def test_ref_layer1_witness_uses_pendant_edge(self):
        g = ref_instance("mlce", 1, 1).layers[0]
        w = find_p3(g)
        assert w == P3Witness(1, 4, 5)
        assert (4, 5) in w.pairs()

    def test_matches_triple_enumeration(self, rng):
        for _ in range(100):
            g = random_layers(rng, rng.randint(2, 8), 1)[0]
            restrict = frozenset(v for v in range(1, g.n + 1) if rng.random() < 0.7)
            assert (find_p3(g, restrict) is None) == brute_force_p3_free(g, restrict)

    def test_deterministic(self, rng):
        g = random_layers(rng, 7, 1)[0]
        assert find_p3(g) == find_p3(g)


class TestIsClusterGraph:
    def test_empty_graph(self):
        assert is_cluster_graph(layer_from_edges(4, []))

    def test_ref_layer2_is_not(self):
        g = ref_instance("mlce", 1, 1).layers[1]
        assert not is_cluster_graph(g)
        assert find_p3(g) == P3Witness(2, 4, 5)

    def test_ref_layer2_restricted_to_triangle(self):
        g = ref_instance("mlce", 1, 1).layers[1]
        assert is_cluster_graph(g, frozenset({2, 3, 4}))


class TestConsistentAfterRemoval:
    def test_identical_layers(self):
        g = layer_from_edges(3, [(1, 2)])
        assert consistent_after_removal(g, g, frozenset())

    def test_ref_tce_edited_pair(self):
        inst = ref_instance("tce", 1, 1)
        g1 = apply_edits(inst.layers[0], frozenset({(4, 5)}))
        g2 = apply_edits(inst.layers[1], frozenset({(4, 5)}))
        assert consistent_after_removal(g1, g2, frozenset({1}))

    def test_ref_raw_layers_disagree(self):
        inst = ref_instance("tce", 1, 1)
        assert not consistent_after_removal(inst.layers[0], inst.layers[1], frozenset())

    def test_symmetric_and_monotone(self, rng):
        for _ in range(60):
            g1, g2 = random_layers(rng, 5, 2)
            removed = frozenset(v for v in range(1, 6) if rng.random() < 0.4)
            fwd = consistent_after_removal(g1, g2, removed)
            assert fwd == consistent_after_removal(g2, g1, removed)
            if fwd:
                bigger = removed | {rng.randint(1, 5)}
                assert consistent_after_removal(g1, g2, bigger)


class TestCountP3ThroughPair:
    def test_triangle_pairs(self):
        g = layer_from_edges(3, [(1, 2), (1, 3), (2, 3)])
        for p in [(1, 2), (1, 3), (2, 3)]:
            assert count_p3_through_pair(g, p) == 0

    def test_ref_layer1_pendant(self):
        g = ref_instance("mlce", 1, 1).layers[0]
        assert count_p3_through_pair(g, (4, 5)) == 3

    def test_path_endpoints(self):
        g = layer_from_edges(3, [(1, 2), (2, 3)])
        assert count_p3_through_pair(g, (1, 3)) == 1

    def test_matches_triple_enumeration(self, rng):
        # a triple {u, v, w} with exactly two edges is an induced P3
        # involving both u and v, whatever the center is
        for _ in range(60):
            g = random_layers(rng, 6, 1)[0]
            for p in combinations(range(1, 7), 2):
                expected = 0
                for w in range(1, 7):
                    if w in p:
                        continue
                    triple = sorted([p[0], p[1], w])
                    cnt = sum(g.has_edge(a, b) for a, b in combinations(triple, 2))
                    if cnt == 2:
                        expected += 1
                assert count_p3_through_pair(g, p) == expected


class TestVerify:
    def test_ref_tce_solution_valid(self):
        inst = ref_instance("tce", 1, 1)
        sol = ref_tce_solution()
        assert verify(inst, sol).ok
        assert check_solution_independently(inst, sol) == []

    def test_ref_mlce_solutions_valid(self):
        inst = ref_instance("mlce", 1, 2)
        sol = ref_mlce_solution_k1_d2()
        assert verify(inst, sol).ok
        assert check_solution_independently(inst, sol) == []
        inst = ref_instance("mlce", 3, 1)
        sol = ref_mlce_solution_k3_d1()
        assert verify(inst, sol).ok
        assert check_solution_independently(inst, sol) == []

    def test_ref_empty_solution_invalid(self):
        inst = ref_instance("mlce", 1, 1)
        sol = Solution((frozenset(), frozenset(), frozenset()), marked=frozenset())
        report = verify(inst, sol)
        assert not report.ok
        assert any("layer 3 is not a cluster graph" in v for v in report.violations)
        assert any("differ outside marks" in v for v in report.violations)

    def test_shape_mismatch(self):
        inst = ref_instance("tce", 1, 1)
        with pytest.raises(InputError):
            verify(inst, Solution((frozenset(),) * 3, marked=frozenset()))

    def test_budget_violations_reported(self):
        inst = ref_instance("mlce", 0, 0)
        sol = Solution((frozenset({(4, 5)}),) * 3, marked=frozenset({1}))
        report = verify(inst, sol)
        assert any(v.startswith("edit budget exceeded") for v in report.violations)
        assert any(v.startswith("mark budget exceeded") for v in report.violations)

    def test_agrees_with_independent_check(self, rng):
        # random solutions, valid or not: verify().ok iff the independent
        # re-derivation of all three conditions finds nothing
        for _ in range(120):
            mode = rng.choice(["mlce", "tce"])
            inst = random_instance(rng, mode)
            edits = tuple(
                frozenset(p for p in combinations(range(1, inst.n + 1), 2)
                          if rng.random() < 0.25)
                for _ in range(inst.ell))
            if mode == "mlce":
                sol = Solution(edits, marked=frozenset(
                    v for v in range(1, inst.n + 1) if rng.random() < 0.3))
            else:
                sol = Solution(edits, marked_per_gap=tuple(
                    frozenset(v for v in range(1, inst.n + 1) if rng.random() < 0.3)
                    for _ in range(inst.ell - 1)))
            assert verify(inst, sol).ok == (check_solution_independently(inst, sol) == [])


class TestInstanceValidation:
    def test_layer_size_mismatch(self):
        with pytest.raises(InputError):
            Instance("mlce", 3, (layer_from_edges(3, []), layer_from_edges(4, [])), 0, 0)

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            Instance("layered", 3, (layer_from_edges(3, []),), 0, 0)

    def test_solution_shape(self):
        with pytest.raises(InputError):
            Solution((frozenset(),))
        with pytest.raises(InputError):
            Solution((frozenset(),), marked=frozenset(), marked_per_gap=())
