"""Greedy initial-solution builders: deterministic, randomized, adaptive.

All three rank candidates by eta(v) = w(v)/degree(v). Zero-degree nodes never
enter the ranking; they are added up front, so eta is always finite.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass

from .graph import Graph
from .solution import Solution


@dataclass
class GreedyConfig:
    """k_fraction: fraction of the live nodes forming the random-pick pool."""

    k_fraction: float = 0.10
    mode: str = "adaptive"  # deterministic | randomized | adaptive

    def __post_init__(self):
        if not 0.0 < self.k_fraction <= 1.0:
            raise ValueError("k_fraction must be in (0, 1]")
        if self.mode not in ("deterministic", "randomized", "adaptive"):
            raise ValueError(f"unknown greedy mode {self.mode!r}")


def _eta_order(g: Graph) -> list[int]:
    """Non-isolated nodes sorted by eta descending, ties by ascending ID."""
    w = g.weights
    nodes = [v for v in range(g.n) if g.degree(v) > 0]
    nodes.sort(key=lambda v: (-(float(w[v]) / g.degree(v)), v))
    return nodes


def greedy(g: Graph) -> Solution:
    """Static-degree greedy scan."""
    s = Solution(g)
    blocked = [False] * g.n
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    for v in range(g.n):
        if indptr[v + 1] == indptr[v]:
            s.add(v)
    for v in _eta_order(g):
        if blocked[v]:
            continue
        s.add(v)
        blocked[v] = True
        for u in indices[indptr[v]:indptr[v + 1]]:
            blocked[u] = True
    return s


class _Fenwick:
    """Binary indexed tree over 0/1 liveness, with k-th-live selection."""

    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)
        for i in range(1, n + 1):
            self.tree[i] += 1
            j = i + (i & -i)
            if j <= n:
                self.tree[j] += self.tree[i]

    def remove(self, i: int) -> None:
        i += 1
        while i <= self.n:
            self.tree[i] -= 1
            i += i & -i

    def select(self, k: int) -> int:
        """Index of the (k+1)-th live position (0-based k)."""
        pos = 0
        step = 1 << (self.n.bit_length())
        rem = k + 1
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] < rem:
                pos = nxt
                rem -= self.tree[nxt]
            step >>= 1
        return pos  # 0-based


def randomized_greedy(g: Graph, cfg: GreedyConfig | None = None,
                      rng: random.Random | None = None) -> Solution:
    """At each step add a uniform pick among the top-k live nodes by static eta."""
    cfg = cfg or GreedyConfig()
    rng = rng or random.Random()
    s = Solution(g)
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    for v in range(g.n):
        if indptr[v + 1] == indptr[v]:
            s.add(v)
    order = _eta_order(g)
    if not order:
        return s
    pos = {v: i for i, v in enumerate(order)}
    fen = _Fenwick(len(order))
    alive = [True] * g.n
    live = len(order)

    def claim(v: int) -> None:
        nonlocal live
        alive[v] = False
        fen.remove(pos[v])
        live -= 1

    while live:
        k = max(1, math.ceil(cfg.k_fraction * live))
        v = order[fen.select(rng.randrange(k))]
        claim(v)
        s.add(v)
        for u in indices[indptr[v]:indptr[v + 1]]:
            if alive[u]:
                claim(u)
    return s


def adaptive_greedy(g: Graph) -> Solution:
    """Greedy with residual degrees and an addressable max-queue on eta.

    Implemented as a lazy-deletion binary heap: priority increases push a
    fresh entry, stale entries are recognized (stored residual degree no
    longer current) and skipped on pop. Residual-degree-zero nodes join S
    immediately. Deterministic: eta ties break by ascending node ID.
    """
    s = Solution(g)
    w = g.weights.tolist()
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    rdeg = [indptr[v + 1] - indptr[v] for v in range(g.n)]
    alive = [True] * g.n
    heap: list[tuple[float, int, int]] = []
    for v in range(g.n):
        if rdeg[v] == 0:
            s.add(v)
            alive[v] = False
        else:
            heap.append((-w[v] / rdeg[v], v, rdeg[v]))
    heapq.heapify(heap)

    while heap:
        _, v, d = heapq.heappop(heap)
        if not alive[v] or d != rdeg[v]:
            continue
        s.add(v)
        alive[v] = False
        neighbors = [u for u in indices[indptr[v]:indptr[v + 1]] if alive[u]]
        for u in neighbors:
            alive[u] = False
        for u in neighbors:
            # u leaves the residual graph together with v
            for y in indices[indptr[u]:indptr[u + 1]]:
                if not alive[y]:
                    continue
                dy = rdeg[y] - 1
                rdeg[y] = dy
                if dy == 0:
                    s.add(y)
                    alive[y] = False
                else:
                    heapq.heappush(heap, (-w[y] / dy, y, dy))
    return s


def build_initial(g: Graph, cfg: GreedyConfig, rng: random.Random) -> Solution:
    if cfg.mode == "deterministic":
        return greedy(g)
    if cfg.mode == "randomized":
        return randomized_greedy(g, cfg, rng)
    return adaptive_greedy(g)
