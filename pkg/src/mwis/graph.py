"""Immutable node-weighted graph storage and file formats.

Graphs are stored in compressed adjacency form: one sorted neighbor array per
node, concatenated (CSR layout). Node IDs are 0..n-1. The structure never
changes after construction, so it can be shared freely across solver runs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised for malformed graph/solution/relaxed-solution files."""


@dataclass(frozen=True)
class Graph:
    """Undirected node-weighted graph in CSR form.

    Invariants: adjacency slices are strictly sorted, free of self-loops and
    duplicates, and symmetric (u in adj[v] iff v in adj[u]); len(indices) == 2*m;
    all weights are finite and >= 0.

    parse_warnings counts dropped self-loops / duplicate edges from the source
    file and is not part of the graph's identity.
    """

    n: int
    m: int
    weights: np.ndarray  # float64 (n,)
    indptr: np.ndarray   # int64 (n+1,)
    indices: np.ndarray  # int32 (2m,)
    parse_warnings: int = field(default=0, compare=False)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def node_weight(self, v: int) -> float:
        return float(self.weights[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor IDs of v (read-only view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def is_edge(self, u: int, v: int) -> bool:
        return is_edge(self, u, v)

    def total_weight(self) -> float:
        return float(self.weights.sum())


def is_edge(g: Graph, u: int, v: int) -> bool:
    """True iff {u,v} is an edge. Binary search on the lower-degree endpoint."""
    assert 0 <= u < g.n and 0 <= v < g.n
    if u == v:
        return False
    if g.degree(u) > g.degree(v):
        u, v = v, u
    adj = g.neighbors(u)
    i = int(np.searchsorted(adj, v))
    return i < len(adj) and int(adj[i]) == v


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def node_weight(g: Graph, v: int) -> float:
    return g.node_weight(v)


def neighbors(g: Graph, v: int) -> np.ndarray:
    return g.neighbors(v)


def build_graph(n: int, edges, weights, parse_warnings: int = 0) -> Graph:
    """Assemble a Graph from an edge iterable, dropping self-loops/duplicates.

    Dropped items add to parse_warnings. Rejects negative or non-finite weights.
    """
    w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights,
                   dtype=np.float64)
    if w.shape != (n,):
        raise GraphFormatError(f"expected {n} node weights, got {w.shape[0]}")
    if not np.all(np.isfinite(w)):
        raise GraphFormatError("non-finite node weight")
    if np.any(w < 0):
        raise GraphFormatError("negative node weight")

    warn = parse_warnings
    seen: set[tuple[int, int]] = set()
    us: list[int] = []
    vs: list[int] = []
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge ({u},{v}) references a node outside 0..{n - 1}")
        if u == v:
            warn += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            warn += 1
            continue
        seen.add(key)
        us.append(key[0])
        vs.append(key[1])

    m = len(us)
    if m:
        ua = np.asarray(us, dtype=np.int64)
        va = np.asarray(vs, dtype=np.int64)
        rows = np.concatenate([ua, va])
        cols = np.concatenate([va, ua])
        order = np.lexsort((cols, rows))
        indices = cols[order].astype(np.int32)
        counts = np.bincount(rows, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
    else:
        indices = np.zeros(0, dtype=np.int32)
        indptr = np.zeros(n + 1, dtype=np.int64)

    w.flags.writeable = False
    indices.flags.writeable = False
    indptr.flags.writeable = False
    if warn:
        log.warning("graph build dropped %d self-loop/duplicate edge(s)", warn)
    return Graph(n=n, m=m, weights=w, indptr=indptr, indices=indices, parse_warnings=warn)


def _tokens(path: str, comment: str):
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split(comment, 1)[0].strip()
            if line:
                yield lineno, line.split()


def load_graph(path: str, fmt: str = "edge-list") -> Graph:
    """Load a graph file.

    fmt="edge-list": '#' comments; header "n m"; weight lines "w <id> <float>"
    (unlisted nodes default to weight 1.0); edge lines "e <u> <v>" with
    0-indexed endpoints.

    fmt="metis": '%' comments; header "n m fmt" with fmt=10 (node weights);
    then n lines "<weight> <nbr> <nbr> ...", neighbors 1-indexed.

    Self-loops and duplicate edges are dropped (counted in parse_warnings);
    negative weights are rejected; parse errors carry the line number.
    """
    if fmt == "edge-list":
        return _load_edge_list(path)
    if fmt == "metis":
        return _load_metis(path)
    raise GraphFormatError(f"unknown graph format {fmt!r}")


def _load_edge_list(path: str) -> Graph:
    lines = _tokens(path, "#")
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise GraphFormatError(f"{path}: empty file") from None
    if len(head) != 2:
        raise GraphFormatError(f"{path}:{lineno}: expected header 'n m'")
    try:
        n, _m_declared = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: bad header 'n m'") from None
    if n < 0:
        raise GraphFormatError(f"{path}:{lineno}: negative node count")

    weights = np.ones(n, dtype=np.float64)
    edges: list[tuple[int, int]] = []
    for lineno, tok in lines:
        kind = tok[0]
        try:
            if kind == "w":
                if len(tok) != 3:
                    raise ValueError
                v = int(tok[1])
                if not 0 <= v < n:
                    raise GraphFormatError(f"{path}:{lineno}: node {v} out of range")
                weights[v] = float(tok[2])
            elif kind == "e":
                if len(tok) != 3:
                    raise ValueError
                edges.append((int(tok[1]), int(tok[2])))
            else:
                raise ValueError
        except GraphFormatError:
            raise
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: cannot parse {' '.join(tok)!r}") from None
    try:
        return build_graph(n, edges, weights)
    except GraphFormatError as e:
        raise GraphFormatError(f"{path}: {e}") from None


def _load_metis(path: str) -> Graph:
    lines = _tokens(path, "%")
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise GraphFormatError(f"{path}: empty file") from None
    if len(head) < 2:
        raise GraphFormatError(f"{path}:{lineno}: expected header 'n m fmt'")
    try:
        n, _m_declared = int(head[0]), int(head[1])
        code = head[2] if len(head) > 2 else "0"
    except ValueError:
        raise GraphFormatError(f"{path}:{lineno}: bad METIS header") from None
    if code != "10":
        raise GraphFormatError(f"{path}:{lineno}: unsupported METIS fmt {code!r} (need 10)")

    weights = np.zeros(n, dtype=np.float64)
    # METIS lists every edge in both endpoints' lines; only a repeat within
    # one direction (or a self-loop) counts as a warning
    directed: set[tuple[int, int]] = set()
    warn = 0
    row = 0
    for lineno, tok in lines:
        if row >= n:
            raise GraphFormatError(f"{path}:{lineno}: more than {n} vertex lines")
        try:
            weights[row] = float(tok[0])
            for t in tok[1:]:
                nbr = int(t) - 1
                if not 0 <= nbr < n:
                    raise GraphFormatError(
                        f"{path}:{lineno}: neighbor {nbr + 1} out of range 1..{n}")
                if nbr == row or (row, nbr) in directed:
                    warn += 1
                    continue
                directed.add((row, nbr))
        except GraphFormatError:
            raise
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: cannot parse vertex line") from None
        row += 1
    if row != n:
        raise GraphFormatError(f"{path}: expected {n} vertex lines, found {row}")
    edges = {(u, v) for u, v in directed if u < v or (v, u) not in directed}
    try:
        return build_graph(n, sorted(edges), weights, parse_warnings=warn)
    except GraphFormatError as e:
        raise GraphFormatError(f"{path}: {e}") from None


def save_graph(g: Graph, path: str, fmt: str = "edge-list") -> None:
    """Write g in the given format (each undirected edge emitted once)."""
    if fmt == "edge-list":
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{g.n} {g.m}\n")
            for v in range(g.n):
                f.write(f"w {v} {float(g.weights[v])!r}\n")
            for u in range(g.n):
                for v in g.neighbors(u):
                    if u < v:
                        f.write(f"e {u} {v}\n")
    elif fmt == "metis":
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{g.n} {g.m} 10\n")
            for u in range(g.n):
                nbrs = " ".join(str(int(v) + 1) for v in g.neighbors(u))
                f.write(f"{float(g.weights[u])!r} {nbrs}".rstrip() + "\n")
    else:
        raise GraphFormatError(f"unknown graph format {fmt!r}")


def graphs_equal(a: Graph, b: Graph) -> bool:
    """Structural equality (ignores parse_warnings)."""
    return (a.n == b.n and a.m == b.m
            and np.array_equal(a.weights, b.weights)
            and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices))
