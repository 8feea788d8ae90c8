"""Dynamic companion structure for the current independent set.

Tracks, for the solution S over graph g:
  rho(u)      -- |N(u) & S| (0 for members),
  delta(u)    -- w(u) - sum of member-neighbor weights (meaningful for u not in S),
  one_tight   -- per member v, the non-members whose only member neighbor is v,
  mates/two_tight -- member pairs {u,v} sharing non-members with N(w) & S == {u,v},
  s_plus/s_one/s_two -- pruning queues for the (*,1), (1,*) and (2,*) moves,
  free        -- non-members with rho == 0 (fuel for re-maximalization).

s_plus is stale-tolerant: nodes are inserted when delta turns positive and
purged on pop if delta has since dropped. s_one/s_two are consumed by move
evaluation and re-fed on any neighborhood change, so their contents depend on
evaluation history; verification therefore treats them as supersets only.

Updates are single-node: batch moves are applied as removals first, then
additions, so S stays independent throughout.
"""

from __future__ import annotations

import random

import numpy as np

from .graph import Graph
from .solution import Solution


class IndexedSet:
    """Set with O(1) add/discard/contains and O(1) uniform random pop.

    Iteration order is the backing-list order: deterministic for a fixed
    operation history, which the engine requires for reproducibility.
    """

    __slots__ = ("_items", "_pos")

    def __init__(self, items=()):
        self._items: list = []
        self._pos: dict = {}
        for x in items:
            self.add(x)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, x) -> bool:
        return x in self._pos

    def __iter__(self):
        return iter(self._items)

    def add(self, x) -> None:
        if x not in self._pos:
            self._pos[x] = len(self._items)
            self._items.append(x)

    def discard(self, x) -> None:
        i = self._pos.pop(x, None)
        if i is None:
            return
        last = self._items.pop()
        if i < len(self._items):
            self._items[i] = last
            self._pos[last] = i

    def pop_random(self, rng: random.Random):
        i = rng.randrange(len(self._items))
        x = self._items[i]
        last = self._items.pop()
        if i < len(self._items):
            self._items[i] = last
            self._pos[last] = i
        del self._pos[x]
        return x

    def as_set(self) -> set:
        return set(self._items)


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class InterstateState:
    __slots__ = ("rho", "delta", "one_tight", "owner", "mates", "two_tight",
                 "tt_pair", "s_plus", "s_one", "s_two", "free")

    def __init__(self, n: int):
        self.rho: list[int] = [0] * n
        self.delta: list[float] = [0.0] * n
        self.one_tight: dict[int, set[int]] = {}
        self.owner: list[int] = [-1] * n          # 1-tight owner of rho==1 nodes
        self.mates: dict[int, set[int]] = {}
        self.two_tight: dict[tuple[int, int], set[int]] = {}
        self.tt_pair: dict[int, tuple[int, int]] = {}  # rho==2 node -> its member pair
        self.s_plus = IndexedSet()
        self.s_one = IndexedSet()
        self.s_two = IndexedSet()
        self.free = IndexedSet()


def build(g: Graph, s: Solution) -> InterstateState:
    """Initialize the structure from scratch in linear time."""
    n = g.n
    st = InterstateState(n)
    flags = np.asarray(s._in_set, dtype=bool)
    rho = np.zeros(n, dtype=np.int64)
    blocked = np.zeros(n, dtype=np.float64)
    if g.m:
        # reduceat over nonempty rows only: empty rows would otherwise swallow
        # the last element of the preceding segment
        nonempty = g.indptr[:-1] < g.indptr[1:]
        starts = g.indptr[:-1][nonempty]
        member_w = np.where(flags, g.weights, 0.0)
        rho[nonempty] = np.add.reduceat(flags[g.indices].astype(np.int64), starts)
        blocked[nonempty] = np.add.reduceat(member_w[g.indices], starts)

    if not is_independent_fast(g, flags):
        raise ValueError("solution is not an independent set")

    w = g.weights
    in_set = s._in_set
    st.rho = [0 if in_set[v] else int(rho[v]) for v in range(n)]
    st.delta = [float(w[v]) if in_set[v] else float(w[v] - blocked[v]) for v in range(n)]

    indptr, indices = g.indptr, g.indices
    adj = indices.tolist()
    for v in range(n):
        if in_set[v]:
            continue
        r = st.rho[v]
        if r == 0:
            st.free.add(v)
        elif r == 1:
            lo, hi = int(indptr[v]), int(indptr[v + 1])
            u = next(x for x in adj[lo:hi] if in_set[x])
            st.one_tight.setdefault(u, set()).add(v)
            st.owner[v] = u
        elif r == 2:
            lo, hi = int(indptr[v]), int(indptr[v + 1])
            a, b = (x for x in adj[lo:hi] if in_set[x])
            key = _pair(a, b)
            st.mates.setdefault(a, set()).add(b)
            st.mates.setdefault(b, set()).add(a)
            st.two_tight.setdefault(key, set()).add(v)
            st.tt_pair[v] = key
        if st.delta[v] > 0:
            st.s_plus.add(v)
    for u in st.one_tight:
        st.s_one.add(u)
    for key in st.two_tight:
        st.s_two.add(key)
    return st


def is_independent_fast(g: Graph, flags: np.ndarray) -> bool:
    if not g.m:
        return True
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    return not np.any(flags[src] & flags[g.indices])


def _one_tight_changed(st: InterstateState, member: int, gained: bool) -> None:
    """Re-arm the pruning queues after a 1-tight change of `member`.

    S1 entry only on gains (a shrunken pool cannot make the deterministic
    (1,*) evaluation succeed where it failed); mate pairs re-enter S2 on any
    change of either endpoint's 1-tight set.
    """
    if gained:
        st.s_one.add(member)
    elif not st.one_tight.get(member):
        st.s_one.discard(member)
    for m in st.mates.get(member, ()):
        st.s_two.add(_pair(member, m))


def remove_member(st: InterstateState, g: Graph, s: Solution, v: int) -> None:
    """Remove member v from S and propagate all structure updates."""
    assert v in s, f"remove_member: {v} not in S"
    s.remove(v)
    w = g.weights
    wv = float(w[v])
    in_set = s._in_set

    # v's own interstate presence dissolves; owners of its former 1-tight
    # neighbors are cleared in the rho-transition loop below
    st.one_tight.pop(v, None)
    st.s_one.discard(v)
    for m in st.mates.pop(v, set()):
        key = _pair(v, m)
        st.two_tight.pop(key, None)
        mm = st.mates.get(m)
        if mm is not None:
            mm.discard(v)
            if not mm:
                del st.mates[m]
        st.s_two.discard(key)

    # S is independent, so every neighbor of v is a non-member
    indptr, indices = g.indptr, g.indices
    for x in indices[int(indptr[v]):int(indptr[v + 1])].tolist():
        r = st.rho[x] - 1
        st.rho[x] = r
        st.delta[x] += wv
        if st.delta[x] > 0:
            st.s_plus.add(x)
        if r == 0:
            st.owner[x] = -1
            st.free.add(x)
        elif r == 1:
            key = st.tt_pair.pop(x)
            other = key[0] if key[1] == v else key[1]
            st.one_tight.setdefault(other, set()).add(x)
            st.owner[x] = other
            _one_tight_changed(st, other, gained=True)
        elif r == 2:
            lo, hi = int(indptr[x]), int(indptr[x + 1])
            a, b = (y for y in indices[lo:hi].tolist() if in_set[y])
            key = _pair(a, b)
            st.mates.setdefault(a, set()).add(b)
            st.mates.setdefault(b, set()).add(a)
            st.two_tight.setdefault(key, set()).add(x)
            st.tt_pair[x] = key
            st.s_two.add(key)

    # v itself: rho stays 0, delta recomputed (no member neighbors remain)
    st.delta[v] = wv
    if wv > 0:
        st.s_plus.add(v)
    st.free.add(v)


def add_member(st: InterstateState, g: Graph, s: Solution, u: int) -> None:
    """Add non-member u (with no member neighbor) to S and propagate updates."""
    assert u not in s, f"add_member: {u} already in S"
    assert st.rho[u] == 0, f"add_member: {u} has {st.rho[u]} member neighbor(s)"
    s.add(u)
    st.free.discard(u)
    st.s_plus.discard(u)
    w = g.weights
    wu = float(w[u])

    indptr, indices = g.indptr, g.indices
    for x in indices[int(indptr[u]):int(indptr[u + 1])].tolist():
        r = st.rho[x] + 1
        st.rho[x] = r
        st.delta[x] -= wu
        if r == 1:
            st.free.discard(x)
            st.one_tight.setdefault(u, set()).add(x)
            st.owner[x] = u
            _one_tight_changed(st, u, gained=True)
        elif r == 2:
            prev = st.owner[x]
            assert prev >= 0, f"node {x} reached rho=2 without a 1-tight owner"
            st.owner[x] = -1
            po = st.one_tight.get(prev)
            if po is not None:
                po.discard(x)
                if not po:
                    del st.one_tight[prev]
            _one_tight_changed(st, prev, gained=False)
            key = _pair(u, prev)
            st.mates.setdefault(u, set()).add(prev)
            st.mates.setdefault(prev, set()).add(u)
            st.two_tight.setdefault(key, set()).add(x)
            st.tt_pair[x] = key
            st.s_two.add(key)
        elif r == 3:
            key = st.tt_pair.pop(x)
            a, b = key
            tt = st.two_tight.get(key)
            if tt is not None:
                tt.discard(x)
                if not tt:
                    del st.two_tight[key]
                    st.s_two.discard(key)
                    ma = st.mates.get(a)
                    if ma is not None:
                        ma.discard(b)
                        if not ma:
                            del st.mates[a]
                    mb = st.mates.get(b)
                    if mb is not None:
                        mb.discard(a)
                        if not mb:
                            del st.mates[b]
                else:
                    st.s_two.add(key)


def verify_against_rebuild(st: InterstateState, g: Graph, s: Solution,
                           check_pruning: bool = False) -> bool:
    return not state_mismatches(st, g, s, check_pruning)


def state_mismatches(st: InterstateState, g: Graph, s: Solution,
                     check_pruning: bool = False) -> list[str]:
    """Compare st with a from-scratch rebuild; empty list means consistent.

    delta uses relative tolerance 1e-9; everything else is exact. s_plus is
    checked for completeness only (stale extra entries are legal). With
    check_pruning, s_one/s_two/free are additionally required to cover every
    currently eligible member/pair (valid only when no evaluation has pruned
    them, e.g. in pure add/remove churn).
    """
    fresh = build(g, s)
    bad: list[str] = []
    in_set = s._in_set
    for v in range(g.n):
        if st.rho[v] != fresh.rho[v]:
            bad.append(f"rho[{v}]={st.rho[v]} expected {fresh.rho[v]}")
        if not in_set[v]:
            scale = max(1.0, abs(fresh.delta[v]))
            if abs(st.delta[v] - fresh.delta[v]) > 1e-9 * scale:
                bad.append(f"delta[{v}]={st.delta[v]} expected {fresh.delta[v]}")
            if fresh.rho[v] == 1 and st.owner[v] != fresh.owner[v]:
                bad.append(f"owner[{v}]={st.owner[v]} expected {fresh.owner[v]}")
            if fresh.rho[v] == 2 and st.tt_pair.get(v) != fresh.tt_pair.get(v):
                bad.append(f"tt_pair[{v}]={st.tt_pair.get(v)} expected {fresh.tt_pair.get(v)}")
            if fresh.delta[v] > 0 and v not in st.s_plus:
                bad.append(f"s_plus missing node {v} with delta {fresh.delta[v]}")
    if {k: v for k, v in st.one_tight.items() if v} != fresh.one_tight:
        bad.append("one_tight sets differ")
    if {k: v for k, v in st.mates.items() if v} != fresh.mates:
        bad.append("mate sets differ")
    if {k: v for k, v in st.two_tight.items() if v} != fresh.two_tight:
        bad.append("two_tight sets differ")
    if st.free.as_set() != fresh.free.as_set():
        bad.append("free sets differ")
    if check_pruning:
        if not fresh.s_one.as_set() <= st.s_one.as_set():
            bad.append("s_one lost an eligible member")
        if not fresh.s_two.as_set() <= st.s_two.as_set():
            bad.append("s_two lost an eligible pair")
    return bad
