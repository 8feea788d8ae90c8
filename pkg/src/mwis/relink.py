"""Adaptive truncated greedy path relinking.

The walk starts at the guide (elite) solution and moves toward the greedy
source, each step applying whichever candidate move — pull in a source node
and drop its blockers, or drop a non-source member and add freed source
neighbors — maximizes the resulting weight. It truncates when the weight
factor drops below f, or when more than c_n negative-gain / c_p positive-gain
steps have been taken (step applied first, then checked). Zero gain counts as
positive. The schedule (f, c_n, c_p) tightens multiplicatively on stagnation
and resets on any weight change.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph
from .solution import Solution, make_maximal

F0 = 0.9998
CN0 = 1.0
CP0 = 0.1
F_DECAY = 0.9998
BUDGET_GROWTH = 1.5


@dataclass
class RelinkParams:
    f: float = F0
    c_n: float = CN0
    c_p: float = CP0
    f0: float = F0
    c_n0: float = CN0
    c_p0: float = CP0
    f_decay: float = F_DECAY
    budget_growth: float = BUDGET_GROWTH
    budget_mode: str = "absolute"  # or "fraction" of |source ^ guide|

    def __post_init__(self):
        if not 0.0 < self.f0 <= 1.0 or not 0.0 < self.f <= self.f0:
            raise ValueError("need 0 < f <= f0 <= 1")
        if self.c_p0 >= self.c_n0 or self.c_p > self.c_n:
            raise ValueError("positive budget must stay below the negative budget")
        if self.budget_growth <= 1.0 or not 0.0 < self.f_decay <= 1.0:
            raise ValueError("bad schedule multipliers")
        if self.budget_mode not in ("absolute", "fraction"):
            raise ValueError(f"unknown budget mode {self.budget_mode!r}")

    def on_stagnation(self) -> None:
        self.f *= self.f_decay
        self.c_n *= self.budget_growth
        self.c_p *= self.budget_growth

    def reset(self) -> None:
        self.f = self.f0
        self.c_n = self.c_n0
        self.c_p = self.c_p0


def on_stagnation(params: RelinkParams) -> None:
    params.on_stagnation()


def reset(params: RelinkParams) -> None:
    params.reset()


def path_relink(g: Graph, source: Solution, guide: Solution,
                params: RelinkParams | None = None,
                rng: random.Random | None = None,
                step_log: list[tuple[float, float]] | None = None) -> Solution:
    """Walk from `guide` toward `source`, returning the truncation point.

    Both inputs must be independent; the result is re-maximalized. If the two
    solutions are set-equal the guide is returned unchanged. step_log, when
    given, receives one (gain, weight_after_step) entry per applied step.
    """
    params = params or RelinkParams()
    rng = rng or random.Random()
    s = guide.copy()
    src_flags = source._in_set
    cur_flags = s._in_set

    to_add = {v for v in source.members() if not cur_flags[v]}    # source \ s
    to_drop = {v for v in s.members() if not src_flags[v]}        # s \ source
    if not to_add and not to_drop:
        return s

    w = g.weights.tolist()
    ptr = g.indptr.tolist()
    adj = g.indices.tolist()
    w_guide = guide.total_weight
    scale = len(to_add) + len(to_drop) if params.budget_mode == "fraction" else 1.0
    n_limit = params.c_n * scale
    p_limit = params.c_p * scale
    neg = pos = 0

    def nbrs(v: int) -> list[int]:
        return adj[ptr[v]:ptr[v + 1]]

    def eval_pull(v: int) -> float:
        return w[v] - sum(w[x] for x in nbrs(v) if cur_flags[x])

    def eval_drop(v: int) -> tuple[float, list[int]]:
        gain = -w[v]
        added: list[int] = []
        added_set: set[int] = set()
        for u in nbrs(v):
            if not src_flags[u] or cur_flags[u]:
                continue
            blocked = False
            for nb in nbrs(u):
                if nb in added_set or (cur_flags[nb] and nb != v):
                    blocked = True
                    break
            if not blocked:
                added.append(u)
                added_set.add(u)
                gain += w[u]
        return gain, added

    while to_add or to_drop:
        best_gain = float("-inf")
        best_step = None  # (kind, v, added)
        for v in sorted(to_add):
            gain = eval_pull(v)
            if gain > best_gain:
                best_gain = gain
                best_step = ("pull", v, None)
        for v in sorted(to_drop):
            gain, added = eval_drop(v)
            if gain > best_gain:
                best_gain = gain
                best_step = ("drop", v, added)
        kind, v, added = best_step
        if kind == "pull":
            for x in nbrs(v):
                if cur_flags[x]:
                    s.remove(x)
                    to_drop.discard(x)
            s.add(v)
            to_add.discard(v)
        else:
            s.remove(v)
            to_drop.discard(v)
            for u in added:
                s.add(u)
                to_add.discard(u)
        if step_log is not None:
            step_log.append((best_gain, s.total_weight))
        if best_gain < 0:
            neg += 1
        else:
            pos += 1
        if neg > n_limit or pos > p_limit:
            break
        if w_guide > 0 and s.total_weight / w_guide < params.f:
            break

    make_maximal(g, s, rng)
    return s
