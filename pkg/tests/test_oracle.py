from __future__ import annotations

import itertools
import random

import pytest

from mwis.graph import build_graph
from mwis.oracle import exact_mwis, exact_subset

from conftest import graph_from, random_graph


def brute_force(g):
    """Third, independent route: itertools over all subsets."""
    best_w, best_set = 0.0, frozenset()
    nodes = range(g.n)
    for r in range(g.n + 1):
        for comb in itertools.combinations(nodes, r):
            cs = set(comb)
            if any(u in cs for v in comb for u in g.neighbors(v).tolist()):
                continue
            w = sum(g.node_weight(v) for v in comb)
            if w > best_w:
                best_w, best_set = w, frozenset(comb)
    return best_w, best_set


class TestExactMwis:
    def test_triangle(self):
        g = graph_from(3, [(0, 1), (1, 2), (0, 2)], [1.0, 2.0, 3.0])
        res = exact_mwis(g)
        assert res.weight == 3.0
        assert res.witness == {2}

    def test_four_cycle(self):
        g = graph_from(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [1.0, 2.0, 3.0, 4.0])
        res = exact_mwis(g)
        assert res.weight == 6.0
        assert res.witness == {1, 3}

    def test_weighted_beats_cardinality(self):
        # a,b,c (4,4,5) pairwise non-adjacent; d,e (7,9) blocked by them
        g = graph_from(5, [(0, 3), (1, 3), (1, 4), (2, 4)],
                       [4.0, 4.0, 5.0, 7.0, 9.0])
        res = exact_mwis(g)
        bw, bset = brute_force(g)
        assert res.weight == bw == 16.0
        assert res.witness == bset == {3, 4}
        # the maximum-cardinality independent set is strictly lighter
        assert len(res.witness) < 3
        assert sum(g.node_weight(v) for v in (0, 1, 2)) == 13.0

    def test_branch_and_bound_equals_enumeration(self):
        rng = random.Random(7)
        for _ in range(100):
            n = rng.randint(1, 16)
            g = random_graph(rng, n, rng.uniform(0.1, 0.6))
            a = exact_mwis(g, method="branch-and-bound")
            b = exact_mwis(g, method="enumerate")
            assert a.weight == b.weight
            assert sum(g.node_weight(v) for v in a.witness) == a.weight

    def test_witness_is_independent(self):
        rng = random.Random(8)
        for _ in range(25):
            g = random_graph(rng, 14, 0.3)
            res = exact_mwis(g)
            for v in res.witness:
                assert not any(u in res.witness for u in g.neighbors(v).tolist())

    def test_size_guards(self):
        g = graph_from(31, [])
        with pytest.raises(ValueError):
            exact_mwis(g)
        g = graph_from(21, [])
        with pytest.raises(ValueError):
            exact_mwis(g, method="enumerate")

    def test_empty_graph(self):
        g = graph_from(0, [], [])
        assert exact_mwis(g).weight == 0.0


class TestSuperOptimality:
    def test_no_heuristic_beats_the_oracle(self):
        from mwis.greedy import adaptive_greedy, greedy, randomized_greedy
        from mwis.local_search import local_search
        from mwis.solution import Solution, make_maximal

        rng = random.Random(31)
        for _ in range(40):
            g = random_graph(rng, rng.randint(6, 16), rng.uniform(0.15, 0.5))
            opt = exact_mwis(g).weight
            for s in (greedy(g), adaptive_greedy(g), randomized_greedy(g, rng=rng),
                      local_search(g, make_maximal(g, Solution(g), rng), rng=rng)):
                assert s.total_weight <= opt + 1e-9


class TestExactSubset:
    def test_no_conflicts_takes_everything(self):
        w, chosen = exact_subset([1.0, 2.0, 3.0], [])
        assert w == 6.0 and sorted(chosen) == [0, 1, 2]

    def test_complete_conflicts_takes_heaviest(self):
        w, chosen = exact_subset([1.0, 5.0, 3.0], [(0, 1), (0, 2), (1, 2)])
        assert w == 5.0 and chosen == [1]

    def test_size_guard(self):
        with pytest.raises(ValueError):
            exact_subset([1.0] * 26, [])

    def test_matches_exact_mwis_on_random_pools(self):
        rng = random.Random(9)
        for _ in range(500):
            k = rng.randint(1, 12)
            g = random_graph(rng, k, rng.uniform(0.1, 0.7))
            conflicts = [(u, int(v)) for u in range(k)
                         for v in g.neighbors(u).tolist() if u < v]
            w, chosen = exact_subset(g.weights.tolist(), conflicts)
            assert w == exact_mwis(g).weight
            assert sum(g.node_weight(v) for v in chosen) == w
