"""Independent-set representation, validation, maximalization, equivalence.

A Solution keeps per-node membership flags plus an append-only member array
with lazy compaction: removal only clears the flag, and stale slots are
swapped to the tail and dropped when iteration encounters them. Reshuffle
cost is therefore proportional to the nodes actually examined, which matters
because the search loops rescan members constantly.
"""

from __future__ import annotations

import random

from .graph import Graph, GraphFormatError


class InfeasibleSolutionError(GraphFormatError):
    """An initial-solution file violates independence."""


class Solution:
    """A (not necessarily maximal) independent set with cached total weight."""

    __slots__ = ("graph", "_w", "_in_set", "_has_slot", "_order", "size", "total_weight")

    def __init__(self, graph: Graph, members=()):
        self.graph = graph
        self._w = graph.weights.tolist()
        self._in_set = [False] * graph.n
        self._has_slot = [False] * graph.n
        self._order: list[int] = []
        self.size = 0
        self.total_weight = 0.0
        for v in members:
            self.add(v)

    def __contains__(self, v: int) -> bool:
        return self._in_set[v]

    def __len__(self) -> int:
        return self.size

    def add(self, v: int) -> None:
        assert not self._in_set[v], f"node {v} already a member"
        self._in_set[v] = True
        if not self._has_slot[v]:
            self._has_slot[v] = True
            self._order.append(v)
        self.size += 1
        self.total_weight += self._w[v]

    def remove(self, v: int) -> None:
        assert self._in_set[v], f"node {v} is not a member"
        self._in_set[v] = False
        self.size -= 1
        self.total_weight -= self._w[v]

    def members(self):
        """Iterate members in slot order, compacting stale slots as found."""
        order = self._order
        i = 0
        while i < len(order):
            v = order[i]
            if self._in_set[v]:
                yield v
                i += 1
            else:
                self._has_slot[v] = False
                last = order.pop()
                if i < len(order):
                    order[i] = last

    def shuffled_members(self, rng: random.Random):
        """Iterate members in uniformly random order (lazy reshuffle).

        Picks a random live slot from the unexamined suffix each step, so the
        cost is proportional to the number of members actually consumed.
        """
        order = self._order
        i = 0
        while i < len(order):
            j = rng.randrange(i, len(order))
            order[i], order[j] = order[j], order[i]
            v = order[i]
            if self._in_set[v]:
                yield v
                i += 1
            else:
                self._has_slot[v] = False
                last = order.pop()
                if i < len(order):
                    order[i] = last

    def member_list(self) -> list[int]:
        return list(self.members())

    def as_frozenset(self) -> frozenset[int]:
        return frozenset(self.members())

    def recomputed_weight(self) -> float:
        """Sum of member weights in ascending node order (order-canonical)."""
        return sum(self._w[v] for v in sorted(self.members()))

    def copy(self) -> "Solution":
        out = Solution.__new__(Solution)
        out.graph = self.graph
        out._w = self._w
        out._in_set = self._in_set.copy()
        out._order = self.member_list()
        out._has_slot = [False] * self.graph.n
        for v in out._order:
            out._has_slot[v] = True
        out.size = self.size
        out.total_weight = self.total_weight
        return out


def is_independent(g: Graph, s: Solution) -> bool:
    """True iff no edge has both endpoints in s."""
    flags = s._in_set
    indptr, indices = g.indptr, g.indices
    for v in s.members():
        for u in indices[indptr[v]:indptr[v + 1]].tolist():
            if flags[u]:
                return False
    return True


def free_nodes(g: Graph, s: Solution) -> list[int]:
    """Nodes outside s with no neighbor in s."""
    flags = s._in_set
    indptr, indices = g.indptr, g.indices
    adj = indices.tolist()
    out = []
    for v in range(g.n):
        if flags[v]:
            continue
        lo, hi = int(indptr[v]), int(indptr[v + 1])
        if not any(flags[u] for u in adj[lo:hi]):
            out.append(v)
    return out


def make_maximal(g: Graph, s: Solution, rng: random.Random) -> Solution:
    """Insert free nodes in uniformly random order until s is maximal."""
    cand = free_nodes(g, s)
    rng.shuffle(cand)
    flags = s._in_set
    indptr, indices = g.indptr, g.indices
    for v in cand:
        lo, hi = int(indptr[v]), int(indptr[v + 1])
        if not any(flags[u] for u in indices[lo:hi].tolist()):
            s.add(v)
    return s


def solutions_equivalent(g: Graph, s1: Solution, s2: Solution,
                         move_budget: int | None = None) -> bool:
    """Bounded test for zero-gain transformability of s1 into s2.

    Returns True if s1 == s2 as sets, or a greedy search over zero-gain
    (*,1)/(1,*) swaps restricted to the symmetric difference turns s1 into s2
    within move_budget steps (default 2*|s1 ^ s2|). One-sided: a False answer
    does not prove inequivalence. Differing weights short-circuit to False.
    """
    set1 = s1.as_frozenset()
    set2 = s2.as_frozenset()
    if set1 == set2:
        return True
    w1 = s1.recomputed_weight()
    w2 = s2.recomputed_weight()
    scale = max(1.0, abs(w1), abs(w2))
    if abs(w1 - w2) > 1e-9 * scale:
        return False

    if move_budget is None:
        move_budget = 2 * len(set1 ^ set2)

    w = g.weights.tolist()
    indptr, indices = g.indptr, g.indices
    adj = indices.tolist()
    cur = set(set1)

    def nbrs(v: int) -> list[int]:
        return adj[int(indptr[v]):int(indptr[v + 1])]

    for _ in range(move_budget):
        if cur == set2:
            return True
        applied = False
        # (*,1)-style: pull in a target member whose blockers weigh exactly the same
        for v in sorted(set2 - cur):
            blockers = [x for x in nbrs(v) if x in cur]
            if sum(w[x] for x in sorted(blockers)) == w[v]:
                cur.difference_update(blockers)
                cur.add(v)
                applied = True
                break
        if applied:
            continue
        # (1,*)-style: drop a non-target member, add freed target neighbors, zero gain only
        for v in sorted(cur - set2):
            trial = set(cur)
            trial.discard(v)
            gained = 0.0
            added = []
            for u in nbrs(v):
                if u in set2 and u not in trial and not any(x in trial for x in nbrs(u)):
                    trial.add(u)
                    added.append(u)
                    gained += w[u]
            if added and gained == w[v]:
                cur = trial
                applied = True
                break
        if not applied:
            return False
    return cur == set2


def load_solution(path: str, g: Graph) -> Solution:
    """Read one node ID per line ('#' comments); fail loudly if not independent."""
    s = Solution(g)
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                v = int(line)
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: not a node ID: {line!r}") from None
            if not 0 <= v < g.n:
                raise GraphFormatError(f"{path}:{lineno}: node {v} out of range")
            if v in s:
                raise GraphFormatError(f"{path}:{lineno}: duplicate node {v}")
            s.add(v)
    if not is_independent(g, s):
        raise InfeasibleSolutionError(f"{path}: solution is not an independent set")
    return s


def save_solution(s: Solution, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for v in sorted(s.members()):
            f.write(f"{v}\n")
