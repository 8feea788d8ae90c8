"""Local search: (*,1), (1,*), (2,*) and alternating-augmenting-path moves.

The outer loop alternates a cheap phase {star_one, aap, one_star} with a
single (2,*) sweep, perturbs on stagnation, and returns the best solution
seen. Every committed move re-establishes maximality before the next
evaluation. Candidate draws from the pruning queues are uniform-random, so a
fixed RNG seed fixes the whole move sequence.
"""

from __future__ import annotations

import random
import time
from bisect import bisect_left
from dataclasses import dataclass, field

from .graph import Graph
from .interstate import _pair, add_member, build, remove_member, state_mismatches
from .lp_bias import RelaxedSolution, sample_biased
from .oracle import max_weight_subset
from .solution import Solution, make_maximal


@dataclass
class LocalSearchParams:
    num_iterations: int = 64        # consecutive non-improving outer iterations allowed
    exact_recursion_limit: int = 7  # max 1-tight pool size for exact subset selection
    aap_max_len: int = 32           # max vertices on an alternating path
    aap_gain_floor: float | None = None  # None: -10 * mean node weight
    aap_delta: float = 50.0         # half-width of the gain noise
    perturb_count: int = 1          # nodes forced per perturbation

    def __post_init__(self):
        if self.num_iterations < 1 or self.exact_recursion_limit < 1 \
                or self.aap_max_len < 1 or self.perturb_count < 1:
            raise ValueError("counts must be >= 1")
        if self.aap_delta < 0:
            raise ValueError("aap_delta must be >= 0")


@dataclass
class MoveOutcome:
    improved: bool
    gain: float
    nodes_added: list[int] = field(default_factory=list)
    nodes_removed: list[int] = field(default_factory=list)
    kind: str = ""


class MoveEngine:
    """Owns the (Solution, InterstateState, RNG) triple for one search run."""

    def __init__(self, g: Graph, s: Solution, rng: random.Random,
                 params: LocalSearchParams | None = None,
                 bias: RelaxedSolution | None = None,
                 move_log: list[MoveOutcome] | None = None,
                 on_commit=None, check_every: int = 0):
        self.g = g
        self.s = s
        self.rng = rng
        self.params = params or LocalSearchParams()
        self.bias = bias
        self.move_log = move_log
        self.on_commit = on_commit
        self.check_every = check_every
        self._commits = 0
        self.w = g.weights.tolist()
        self.ptr = g.indptr.tolist()
        self.adj = g.indices.tolist()
        self.state = build(g, s)
        floor = self.params.aap_gain_floor
        if floor is None:
            mean = sum(self.w) / len(self.w) if self.w else 0.0
            floor = -10.0 * mean
        self.aap_gain_floor = floor

    # -- plumbing ---------------------------------------------------------

    def _nbrs(self, v: int) -> list[int]:
        return self.adj[self.ptr[v]:self.ptr[v + 1]]

    def _adjacent(self, u: int, v: int) -> bool:
        if self.ptr[u + 1] - self.ptr[u] > self.ptr[v + 1] - self.ptr[v]:
            u, v = v, u
        lo, hi = self.ptr[u], self.ptr[u + 1]
        i = bisect_left(self.adj, v, lo, hi)
        return i < hi and self.adj[i] == v

    def _member_neighbors(self, v: int) -> list[int]:
        in_set = self.s._in_set
        return [x for x in self._nbrs(v) if in_set[x]]

    def _maximalize(self) -> list[int]:
        """Add free nodes in random order until none remain."""
        st, s = self.state, self.s
        added = []
        while len(st.free):
            v = st.free.pop_random(self.rng)
            add_member(st, self.g, s, v)
            added.append(v)
        return added

    def _commit(self, kind: str, added: list[int], removed: list[int],
                improved: bool = True) -> None:
        if self.move_log is not None or self.on_commit is not None:
            gain = sum(self.w[v] for v in added) - sum(self.w[v] for v in removed)
            out = MoveOutcome(improved=improved, gain=gain, nodes_added=added,
                              nodes_removed=removed, kind=kind)
            if self.move_log is not None:
                self.move_log.append(out)
            if self.on_commit is not None:
                self.on_commit(self, out)
        self._commits += 1
        if self.check_every and self._commits % self.check_every == 0:
            bad = state_mismatches(self.state, self.g, self.s)
            assert not bad, f"interstate drift after {kind}: {bad[:4]}"

    # -- move procedures --------------------------------------------------

    def star_one_moves(self) -> bool:
        """Drain S+: insert each verified positive-delta node, drop its blockers."""
        st, s = self.state, self.s
        improved = False
        while len(st.s_plus):
            u = st.s_plus.pop_random(self.rng)
            if u in s or st.delta[u] <= 0:
                continue  # stale entry
            removed = self._member_neighbors(u)
            for x in removed:
                remove_member(st, self.g, s, x)
            add_member(st, self.g, s, u)
            extra = self._maximalize()
            self._commit("star_one", [u] + extra, removed)
            improved = True
        return improved

    def one_star_moves(self) -> bool:
        """Drain S1: replace a member with a heavier subset of its 1-tight pool."""
        st, s = self.state, self.s
        improved = False
        limit = self.params.exact_recursion_limit
        w = self.w
        while len(st.s_one):
            v = st.s_one.pop_random(self.rng)
            if v not in s:
                continue
            pool = st.one_tight.get(v)
            if not pool:
                continue
            cand = sorted(pool, key=lambda u: (-w[u], u))
            if len(cand) <= limit:
                best_w, chosen = self._exact_subset(cand)
            else:
                best_w, chosen = self._greedy_subset(cand)
            if best_w > w[v]:
                remove_member(st, self.g, s, v)
                for u in chosen:
                    add_member(st, self.g, s, u)
                extra = self._maximalize()
                self._commit("one_star", chosen + extra, [v])
                improved = True
        return improved

    def _exact_subset(self, cand: list[int]) -> tuple[float, list[int]]:
        masks = [0] * len(cand)
        for i, u in enumerate(cand):
            for j in range(i + 1, len(cand)):
                if self._adjacent(u, cand[j]):
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        best_w, chosen_mask = max_weight_subset([self.w[u] for u in cand], masks)
        return best_w, [cand[i] for i in range(len(cand)) if chosen_mask >> i & 1]

    def _greedy_subset(self, cand: list[int]) -> tuple[float, list[int]]:
        # cand is sorted by descending weight already
        chosen: list[int] = []
        total = 0.0
        for u in cand:
            if not any(self._adjacent(u, c) for c in chosen):
                chosen.append(u)
                total += self.w[u]
        return total, chosen

    def two_star_moves(self) -> bool:
        """Evaluate S2 pairs; commit and return on the first improving move.

        Each popped pair gets one randomized trial, simulated read-only
        against the membership flags; only a success is replayed as real
        state updates, so a failed pair stays pruned until a real change.
        """
        st, s = self.state, self.s
        w = self.w
        in_set = s._in_set
        while len(st.s_two):
            key = st.s_two.pop_random(self.rng)
            u, v = key
            if not (in_set[u] and in_set[v]):
                continue
            if v not in st.mates.get(u, ()):
                continue  # no longer mates
            pool = set(st.one_tight.get(u, ()))
            pool.update(st.one_tight.get(v, ()))
            pool.update(st.two_tight.get(key, ()))
            if not pool:
                continue
            removed_pair = (u, v)
            added: list[int] = []
            added_set: set[int] = set()
            gained = 0.0
            cand = sorted(pool)
            while True:
                open_now = [c for c in cand
                            if c not in added_set and self._free_in_trial(
                                c, removed_pair, added_set)]
                if not open_now:
                    break
                c = open_now[self.rng.randrange(len(open_now))]
                added.append(c)
                added_set.add(c)
                gained += w[c]
            if gained > w[u] + w[v]:
                remove_member(st, self.g, s, u)
                remove_member(st, self.g, s, v)
                for c in added:
                    add_member(st, self.g, s, c)
                extra = self._maximalize()
                net_added = [x for x in added + extra if x not in (u, v)]
                net_removed = [x for x in (u, v) if x not in set(extra)]
                self._commit("two_star", net_added, net_removed)
                return True
        return False

    def _free_in_trial(self, c: int, removed_pair: tuple[int, int],
                       added_set: set[int]) -> bool:
        in_set = self.s._in_set
        for nb in self._nbrs(c):
            if nb in added_set:
                return False
            if in_set[nb] and nb != removed_pair[0] and nb != removed_pair[1]:
                return False
        return True

    def aap_moves(self) -> bool:
        """One pass of alternating-augmenting-path searches seeded from S1.

        S1 is snapshotted, not consumed: its consumption contract belongs to
        the (1,*) procedure that runs after this one.
        """
        st, s = self.state, self.s
        seeds = list(st.s_one)
        self.rng.shuffle(seeds)
        improved = False
        for v in seeds:
            if v not in s or not st.one_tight.get(v):
                continue
            if self._aap_from(v):
                improved = True
        return improved

    def _aap_from(self, v: int) -> bool:
        st = self.state
        w = self.w
        rng = self.rng
        delta = self.params.aap_delta

        seed = None
        seed_score = float("-inf")
        for a in st.one_tight[v]:
            score = w[a] + rng.uniform(-delta, delta)
            if score > seed_score:
                seed_score = score
                seed = a
        path_in = [v]        # members, flip candidates for removal
        path_out = [seed]    # non-members, flip candidates for insertion
        on_path = {v, seed}
        gain = w[seed] - w[v]
        best_gain = gain
        best_pairs = 1
        u = v
        while len(path_in) + len(path_out) < self.params.aap_max_len \
                and gain >= self.aap_gain_floor:
            best_step = None
            best_score = float("-inf")
            for mate in st.mates.get(u, ()):
                if mate in on_path:
                    continue
                step_base = -w[mate]
                for x in st.two_tight[_pair(u, mate)]:
                    if x in on_path:
                        continue
                    if any(self._adjacent(x, o) for o in path_out):
                        continue
                    score = gain + step_base + w[x] + rng.uniform(-delta, delta)
                    if score > best_score:
                        best_score = score
                        best_step = (x, mate)
            if best_step is None:
                break
            x, mate = best_step
            path_out.append(x)
            path_in.append(mate)
            on_path.add(x)
            on_path.add(mate)
            gain += w[x] - w[mate]
            if gain > best_gain:
                best_gain = gain
                best_pairs = len(path_in)
            u = mate
        if best_gain <= 0:
            return False
        flip_in = path_in[:best_pairs]
        flip_out = path_out[:best_pairs]
        for m in flip_in:
            remove_member(st, self.g, self.s, m)
        for o in flip_out:
            add_member(st, self.g, self.s, o)
        extra = self._maximalize()
        self._commit("aap", flip_out + extra, flip_in)
        return True

    def perturb(self) -> None:
        """Force random (optionally LP-biased) nodes into S, then re-maximalize."""
        st, s = self.state, self.s
        forced_any = False
        before = s.as_frozenset() if (self.move_log is not None
                                      or self.on_commit is not None) else None
        for _ in range(self.params.perturb_count):
            target = self._perturb_target()
            if target is None:
                break
            for x in self._member_neighbors(target):
                remove_member(st, self.g, s, x)
            add_member(st, self.g, s, target)
            forced_any = True
        if not forced_any:
            return
        self._maximalize()
        if before is not None:
            after = s.as_frozenset()
            self._commit("perturb", sorted(after - before), sorted(before - after),
                         improved=False)
        else:
            self._commit("perturb", [], [], improved=False)

    def _perturb_target(self) -> int | None:
        s = self.s
        n = self.g.n
        if s.size >= n:
            return None
        if self.bias is not None:
            for _ in range(32):
                v = sample_biased(self.bias, self.rng)
                if v not in s:
                    return v
        else:
            for _ in range(32):
                v = self.rng.randrange(n)
                if v not in s:
                    return v
        outside = [v for v in range(n) if v not in s]
        return outside[self.rng.randrange(len(outside))]


def local_search(g: Graph, s0: Solution, params: LocalSearchParams | None = None,
                 rng: random.Random | None = None,
                 bias: RelaxedSolution | None = None, *,
                 deadline: float | None = None, clock=time.monotonic,
                 move_log: list[MoveOutcome] | None = None,
                 on_commit=None, check_every: int = 0) -> Solution:
    """Run the full move loop from s0 (maximalized on entry); return best seen.

    The clock is consulted between move procedures only; on deadline the last
    clean snapshot is returned, so outputs are always maximal with delta <= 0
    everywhere outside the set.
    """
    params = params or LocalSearchParams()
    rng = rng or random.Random()
    s = s0.copy()
    make_maximal(g, s, rng)
    engine = MoveEngine(g, s, rng, params, bias, move_log, on_commit, check_every)
    # Drain S+ before the first snapshot: every snapshot this function can
    # return then satisfies delta(u) <= 0 outside the set, even on timeout.
    engine.star_one_moves()
    best = s.copy()

    def out_of_time() -> bool:
        return deadline is not None and clock() >= deadline

    i = 1
    timed_out = False
    while i <= params.num_iterations:
        while True:
            w0 = s.total_weight
            engine.star_one_moves()
            if out_of_time():
                timed_out = True
                break
            engine.aap_moves()
            if out_of_time():
                timed_out = True
                break
            engine.one_star_moves()
            if s.total_weight > w0:
                continue  # improved: restart the cheap phase, skip (2,*)
            if out_of_time():
                timed_out = True
                break
            engine.two_star_moves()
            if s.total_weight > w0:
                continue
            break
        if timed_out:
            break
        if s.total_weight > best.total_weight:
            best = s.copy()
            i = 1
        else:
            i += 1
            if i > params.num_iterations:
                break
            engine.perturb()
    return best
