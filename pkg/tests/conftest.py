from __future__ import annotations

import random

import pytest

from mwis.graph import Graph, build_graph


def graph_from(n: int, edges, weights=None) -> Graph:
    return build_graph(n, edges, weights if weights is not None else [1.0] * n)


@pytest.fixture
def path3() -> Graph:
    """Path 0-1-2 with weights (3, 5, 3)."""
    return graph_from(3, [(0, 1), (1, 2)], [3.0, 5.0, 3.0])


@pytest.fixture
def cycle4() -> Graph:
    """4-cycle 0-1-2-3 with unit weights."""
    return graph_from(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def random_graph(rng: random.Random, n: int, p: float, max_w: int = 100) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    weights = [float(rng.randint(0, max_w)) for _ in range(n)]
    return build_graph(n, edges, weights)


def random_maximal(g: Graph, rng: random.Random):
    from mwis.solution import Solution, make_maximal

    s = Solution(g)
    return make_maximal(g, s, rng)
