"""Run orchestration: elite set, stagnation schedule, traces, summaries.

The main loop alternates randomized greedy construction, truncated path
relinking against a random elite solution, and local search, until the time
limit. The clock is injectable so that identical (config, seed) pairs can
reproduce byte-identical traces under a deterministic clock; the CLI uses
the real monotonic clock.
"""

from __future__ import annotations

import json
import logging
import random
import time
from dataclasses import dataclass, field

from .graph import Graph
from .greedy import GreedyConfig, build_initial, randomized_greedy
from .local_search import LocalSearchParams, local_search
from .lp_bias import RelaxedSolution, load_relaxed
from .relink import RelinkParams, path_relink
from .solution import Solution, load_solution, solutions_equivalent

log = logging.getLogger(__name__)


@dataclass
class TraceEvent:
    elapsed: float
    best_weight: float
    event: str  # init | local-search | relink | improve | stagnate | final


class EliteSet:
    """Bounded store of locally optimal solutions with similarity eviction."""

    def __init__(self, capacity: int = 1):
        if capacity < 1:
            raise ValueError("elite capacity must be >= 1")
        self.capacity = capacity
        self.entries: list[tuple[Solution, frozenset[int]]] = []

    def __len__(self) -> int:
        return len(self.entries)

    def try_add_and_evict(self, s: Solution) -> bool:
        fs = s.as_frozenset()
        w = s.total_weight
        if len(self.entries) < self.capacity:
            if any(fs == efs for _, efs in self.entries):
                return False
            self.entries.append((s.copy(), fs))
            return True
        evictable = [(i, e, efs) for i, (e, efs) in enumerate(self.entries)
                     if e.total_weight <= w]
        if not evictable:
            return False
        i, _, _ = min(evictable, key=lambda t: (len(t[2] ^ fs), t[1].total_weight, t[0]))
        self.entries[i] = (s.copy(), fs)
        return True

    def random_entry(self, rng: random.Random) -> Solution:
        assert self.entries, "elite set is empty"
        return self.entries[rng.randrange(len(self.entries))][0]

    def best(self) -> Solution:
        assert self.entries, "elite set is empty"
        return max(self.entries, key=lambda t: t[0].total_weight)[0]


def elite_try_add_and_evict(es: EliteSet, s: Solution) -> bool:
    return es.try_add_and_evict(s)


def elite_random(es: EliteSet, rng: random.Random) -> Solution:
    return es.random_entry(rng)


@dataclass
class RunConfig:
    time_limit: float = 10.0
    seed: int = 0
    ls_before_relinking: bool = False
    elite_capacity: int = 1
    greedy: GreedyConfig = field(default_factory=GreedyConfig)
    ls_params: LocalSearchParams = field(default_factory=LocalSearchParams)
    relink_params: RelinkParams = field(default_factory=RelinkParams)
    initial_path: str | None = None
    relaxed_path: str | None = None
    lp_epsilon: float = 0.005
    trace_path: str | None = None
    check_interstate_every: int = 0

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time_limit must be > 0")


def run(g: Graph, config: RunConfig, clock=None,
        initial: Solution | None = None,
        relaxed: RelaxedSolution | None = None) -> tuple[Solution, list[TraceEvent]]:
    """Execute one solver run; returns (best solution, trace event stream)."""
    clock = clock or time.monotonic
    rng = random.Random(config.seed)
    trace: list[TraceEvent] = []
    t0 = clock()
    deadline_at = t0 + config.time_limit

    if initial is None and config.initial_path:
        initial = load_solution(config.initial_path, g)
    if relaxed is None and config.relaxed_path:
        relaxed = load_relaxed(config.relaxed_path, g, config.lp_epsilon)

    s = initial.copy() if initial is not None else build_initial(g, config.greedy, rng)
    best_w = s.total_weight

    def emit(event: str) -> None:
        trace.append(TraceEvent(elapsed=clock() - t0, best_weight=best_w, event=event))

    emit("init")
    ls_kwargs = dict(deadline=deadline_at, clock=clock,
                     check_every=config.check_interstate_every)

    s = local_search(g, s, config.ls_params, rng, relaxed, **ls_kwargs)
    best = s.copy()
    best_w = best.total_weight
    emit("local-search")
    es = EliteSet(config.elite_capacity)
    es.try_add_and_evict(s)
    params = config.relink_params

    while clock() < deadline_at:
        s_g = randomized_greedy(g, config.greedy, rng)
        if config.ls_before_relinking:
            s_g = local_search(g, s_g, config.ls_params, rng, relaxed, **ls_kwargs)
        s_e = es.random_entry(rng)
        s2 = path_relink(g, s_g, s_e, params, rng)
        emit("relink")
        s2 = local_search(g, s2, config.ls_params, rng, relaxed, **ls_kwargs)
        w2 = s2.total_weight
        stagnated = w2 == best_w
        if stagnated:
            eq = solutions_equivalent(g, s2, best)
            log.debug("stagnation at weight %r (equivalent=%s)", w2, eq)
            params.on_stagnation()
        else:
            params.reset()
        improved = w2 > best_w
        if improved:
            best = s2.copy()
            best_w = w2
        emit("local-search")
        if improved:
            emit("improve")
        elif stagnated:
            emit("stagnate")
        es.try_add_and_evict(s2)

    emit("final")
    if config.trace_path:
        write_trace_csv(trace, config.trace_path)
    return best, trace


def write_trace_csv(trace: list[TraceEvent], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(trace_csv(trace))


def trace_csv(trace: list[TraceEvent]) -> str:
    lines = ["elapsed_s,best_weight,event"]
    for ev in trace:
        lines.append(f"{ev.elapsed!r},{ev.best_weight!r},{ev.event}")
    return "\n".join(lines) + "\n"


def _value_at(trace: list[TraceEvent], t: float) -> float | None:
    last = None
    for ev in trace:
        if ev.elapsed <= t:
            last = ev.best_weight
    return last


def summarize(g: Graph, config: RunConfig, best: Solution,
              trace: list[TraceEvent]) -> dict:
    return {
        "schema": 1,
        "best_weight": best.total_weight,
        "n": g.n,
        "m": g.m,
        "seed": config.seed,
        "time_limit": config.time_limit,
        "w_at_10pct": _value_at(trace, 0.1 * config.time_limit),
        "w_at_50pct": _value_at(trace, 0.5 * config.time_limit),
        "t_star_definition_note": (
            "t* is a cross-run statistic: the earliest time the best run reaches "
            "the worst final value over all compared runs; compute it with the "
            "'report' subcommand over several trace files."),
    }


def summary_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
