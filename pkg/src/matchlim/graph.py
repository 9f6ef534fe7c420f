"""Finite simple graphs, random generators, truncation, balls, and edge-list I/O.

Graphs are immutable after construction: adjacency is built once as a CSR
pair (indptr, indices) and generators are deterministic functions of their
parameters and seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GraphParseError, InvalidParameterError

TYPE_A = 0
TYPE_B = 1


class Graph:
    """Simple undirected graph on vertices 0..n-1, optionally bipartite-tagged.

    Parameters
    ----------
    n : int
        Vertex count.
    edges : array-like of shape (m, 2)
        Unordered vertex pairs; loops and duplicates are rejected.
    vertex_type : array-like of length n, optional
        Per-vertex tag (0 = a, 1 = b).  When present, every edge must join
        an a-vertex to a b-vertex.
    """

    __slots__ = ("n", "edges", "vertex_type", "indptr", "indices")

    def __init__(self, n, edges, vertex_type=None):
        if n < 0:
            raise InvalidParameterError("vertex count must be nonnegative")
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise InvalidParameterError("edge endpoint out of range")
            if (edges[:, 0] == edges[:, 1]).any():
                raise InvalidParameterError("loops are not allowed")
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            edges = np.stack([lo, hi], axis=1)
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            dup = (np.diff(edges[:, 0]) == 0) & (np.diff(edges[:, 1]) == 0)
            if dup.any():
                raise InvalidParameterError("parallel edges are not allowed")
        self.n = int(n)
        self.edges = edges
        self.edges.setflags(write=False)
        if vertex_type is not None:
            vertex_type = np.asarray(vertex_type, dtype=np.int8)
            if vertex_type.shape != (n,):
                raise InvalidParameterError("vertex_type must have one tag per vertex")
            if edges.size and (vertex_type[edges[:, 0]] == vertex_type[edges[:, 1]]).any():
                raise InvalidParameterError("bipartite tag violated by an edge")
            vertex_type.setflags(write=False)
        self.vertex_type = vertex_type
        # CSR adjacency, built once
        deg = np.zeros(n, dtype=np.int64)
        if edges.size:
            np.add.at(deg, edges[:, 0], 1)
            np.add.at(deg, edges[:, 1], 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        if edges.size:
            src = np.concatenate([edges[:, 0], edges[:, 1]])
            dst = np.concatenate([edges[:, 1], edges[:, 0]])
            order = np.argsort(src, kind="stable")
            indices = dst[order]
        else:
            indices = np.empty(0, dtype=np.int64)
        self.indptr = indptr
        self.indices = indices
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @property
    def m(self):
        return len(self.edges)

    @property
    def is_bipartite_tagged(self):
        return self.vertex_type is not None

    def degrees(self):
        return np.diff(self.indptr)

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def subgraph(self, vertices):
        """Induced subgraph; vertices are relabelled 0..k-1 in the given order."""
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = {int(v): i for i, v in enumerate(vertices)}
        keep = []
        for u, v in self.edges:
            if int(u) in relabel and int(v) in relabel:
                keep.append((relabel[int(u)], relabel[int(v)]))
        vt = self.vertex_type[vertices] if self.vertex_type is not None else None
        return Graph(len(vertices), np.asarray(keep, dtype=np.int64).reshape(-1, 2), vt)

    def __repr__(self):
        tag = ", bipartite" if self.is_bipartite_tagged else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.graph.n:
            raise InvalidParameterError("root is not a valid vertex index")


class Matching:
    """Subset of a host graph's edges with pairwise disjoint endpoints."""

    def __init__(self, graph, edges):
        edge_set = {(min(u, v), max(u, v)) for u, v in graph.edges}
        seen = set()
        pairs = []
        for u, v in edges:
            u, v = (min(u, v), max(u, v))
            if (u, v) not in edge_set:
                raise InvalidParameterError(f"({u},{v}) is not an edge of the host graph")
            if u in seen or v in seen:
                raise InvalidParameterError("matching edges share an endpoint")
            seen.update((u, v))
            pairs.append((u, v))
        self.graph = graph
        self.pairs = sorted(pairs)

    def __len__(self):
        return len(self.pairs)

    def vertices(self):
        out = []
        for u, v in self.pairs:
            out.extend((u, v))
        return out

    def exposed_count(self):
        return self.graph.n - 2 * len(self.pairs)


# ---------------------------------------------------------------------------
# generators


def gen_erdos_renyi(n, c, seed):
    """G(n, c/n): each pair is an edge independently with probability c/n."""
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    if c < 0:
        raise InvalidParameterError("c must be >= 0")
    p = c / n
    if p > 1:
        raise InvalidParameterError("c/n must be <= 1")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    if p == 0 or total == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    if p == 1:
        i, j = np.triu_indices(n, k=1)
        return Graph(n, np.stack([i, j], axis=1))
    # geometric skipping over pair ranks
    picks = []
    pos = -1
    batch = max(1024, int(1.5 * total * p) + 16)
    while pos < total:
        skips = rng.geometric(p, size=batch)
        ranks = pos + np.cumsum(skips)
        picks.append(ranks[ranks < total])
        if len(picks[-1]) < len(ranks):
            break
        pos = int(ranks[-1])
    ranks = np.concatenate(picks)
    # decode rank -> (i, j) with i < j, row-major in i
    # rank of first pair in row i: S(i) = i*n - i*(i+1)/2 - i ... use cumulative search
    row_starts = np.cumsum(np.concatenate([[0], np.arange(n - 1, 0, -1)]))
    i = np.searchsorted(row_starts, ranks, side="right") - 1
    j = ranks - row_starts[i] + i + 1
    return Graph(n, np.stack([i, j], axis=1))


def _sample_degrees(rng, pmf, size):
    return rng.choice(len(pmf), size=size, p=pmf)


def gen_configuration(n, pmf, seed):
    """Configuration model with degree pmf, erased variant (simple graph).

    An odd degree sum is fixed by resampling one vertex's degree.
    """
    pmf = np.asarray(pmf, dtype=np.float64)
    if len(pmf) > n:
        raise InvalidParameterError("pmf support exceeds n-1")
    if abs(pmf.sum() - 1.0) > 1e-9 or (pmf < 0).any():
        raise InvalidParameterError("pmf must be a probability vector")
    rng = np.random.default_rng(seed)
    deg = _sample_degrees(rng, pmf, n)
    tries = 0
    while deg.sum() % 2 == 1:
        v = rng.integers(n)
        deg[v] = _sample_degrees(rng, pmf, 1)[0]
        tries += 1
        if tries > 10000:  # pmf concentrated on odd degrees with odd n
            deg[v] = max(0, deg[v] - 1)
    stubs = np.repeat(np.arange(n, dtype=np.int64), deg)
    rng.shuffle(stubs)
    u = stubs[0::2]
    v = stubs[1::2]
    keep = u != v
    u, v = u[keep], v[keep]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    edges = np.unique(np.stack([lo, hi], axis=1), axis=0)
    return Graph(n, edges)


def gen_left_regular(m, alpha, k, seed):
    """Bipartite graph: floor(alpha*m) a-vertices, each linked to k distinct
    uniform b-vertices out of m."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    if k > m:
        raise InvalidParameterError("k must be <= m")
    n_a = int(np.floor(alpha * m))
    if n_a < 1:
        raise InvalidParameterError("floor(alpha*m) must be >= 1")
    rng = np.random.default_rng(seed)
    choice = rng.integers(0, m, size=(n_a, k))
    if k > 1:
        # redraw rows containing duplicates
        while True:
            s = np.sort(choice, axis=1)
            bad = (np.diff(s, axis=1) == 0).any(axis=1)
            if not bad.any():
                break
            choice[bad] = rng.integers(0, m, size=(int(bad.sum()), k))
    a = np.repeat(np.arange(n_a, dtype=np.int64), k)
    b = n_a + choice.reshape(-1)
    n = n_a + m
    vt = np.concatenate([np.full(n_a, TYPE_A, np.int8), np.full(m, TYPE_B, np.int8)])
    return Graph(n, np.stack([a, b], axis=1), vt)


def gen_bipartite(m, alpha, pmf_a, pmf_b, seed):
    """Bipartite configuration model: floor(alpha*m) a-vertices with degree
    pmf_a, m b-vertices with degree pmf_b, uniform stub pairing, erased.

    The caller is responsible for picking alpha = mean_b / mean_a so the two
    sides' half-edge counts balance in expectation.
    """
    pmf_a = np.asarray(pmf_a, dtype=np.float64)
    pmf_b = np.asarray(pmf_b, dtype=np.float64)
    n_a = int(np.floor(alpha * m))
    if n_a < 1:
        raise InvalidParameterError("floor(alpha*m) must be >= 1")
    rng = np.random.default_rng(seed)
    da = _sample_degrees(rng, pmf_a, n_a)
    db = _sample_degrees(rng, pmf_b, m)
    # equalize half-edge counts by resampling single vertices on the heavy side
    for _ in range(100 * (n_a + m)):
        diff = da.sum() - db.sum()
        if diff == 0:
            break
        if diff > 0:
            v = rng.integers(n_a)
            da[v] = _sample_degrees(rng, pmf_a, 1)[0]
        else:
            v = rng.integers(m)
            db[v] = _sample_degrees(rng, pmf_b, 1)[0]
    else:
        raise InvalidParameterError("could not balance half-edge counts")
    stubs_a = np.repeat(np.arange(n_a, dtype=np.int64), da)
    stubs_b = np.repeat(n_a + np.arange(m, dtype=np.int64), db)
    rng.shuffle(stubs_b)
    edges = np.unique(np.stack([stubs_a, stubs_b], axis=1), axis=0)
    n = n_a + m
    vt = np.concatenate([np.full(n_a, TYPE_A, np.int8), np.full(m, TYPE_B, np.int8)])
    return Graph(n, edges, vt)


# ---------------------------------------------------------------------------
# transformations


def truncate_degree(g, d):
    """Isolate every vertex of degree > d: drop all edges incident to one.

    nu(G^d) <= nu(G) <= nu(G^d) + #{v : deg(v) > d}.
    """
    if d < 0:
        raise InvalidParameterError("d must be >= 0")
    deg = g.degrees()
    if g.m == 0:
        return Graph(g.n, g.edges, g.vertex_type)
    keep = (deg[g.edges[:, 0]] <= d) & (deg[g.edges[:, 1]] <= d)
    return Graph(g.n, g.edges[keep], g.vertex_type)


def ball(rg, k):
    """Induced subgraph on vertices within distance k of the root, re-rooted.

    Vertices are relabelled in BFS discovery order, so the new root is 0.
    """
    if k < 0:
        raise InvalidParameterError("k must be >= 0")
    g = rg.graph
    dist = {rg.root: 0}
    frontier = [rg.root]
    order = [rg.root]
    depth = 0
    while frontier and depth < k:
        depth += 1
        nxt = []
        for u in frontier:
            for v in g.neighbors(u):
                v = int(v)
                if v not in dist:
                    dist[v] = depth
                    nxt.append(v)
                    order.append(v)
        frontier = nxt
    return RootedGraph(g.subgraph(order), 0)


# ---------------------------------------------------------------------------
# edge-list text I/O


def write_edge_list(g):
    """Serialize deterministically: header, optional type line, sorted edges."""
    lines = []
    if g.is_bipartite_tagged:
        lines.append(f"{g.n} {g.m} bipartite")
        lines.append(" ".join("a" if t == TYPE_A else "b" for t in g.vertex_type))
    else:
        lines.append(f"{g.n} {g.m}")
    for u, v in g.edges:
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def read_edge_list(text):
    lines = text.splitlines()
    if not lines:
        raise GraphParseError("empty input", line=1)
    head = lines[0].split()
    if len(head) not in (2, 3) or (len(head) == 3 and head[2] != "bipartite"):
        raise GraphParseError("header must be 'n m' or 'n m bipartite'", line=1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphParseError("header must be 'n m' or 'n m bipartite'", line=1) from None
    bipartite = len(head) == 3
    vt = None
    at = 1
    if bipartite:
        if len(lines) < 2:
            raise GraphParseError("missing type line", line=2)
        tags = lines[1].split()
        if len(tags) != n or any(t not in ("a", "b") for t in tags):
            raise GraphParseError("type line must hold n tags in {a,b}", line=2)
        vt = np.array([TYPE_A if t == "a" else TYPE_B for t in tags], dtype=np.int8)
        at = 2
    edges = []
    seen = set()
    for k in range(m):
        lineno = at + k + 1
        if at + k >= len(lines):
            raise GraphParseError("fewer edges than declared", line=lineno)
        parts = lines[at + k].split()
        if len(parts) != 2:
            raise GraphParseError("expected 'u v'", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError("expected integer endpoints", line=lineno) from None
        if u == v:
            raise GraphParseError("loop forbidden", line=lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError("endpoint out of range", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError("duplicate edge", line=lineno)
        seen.add(key)
        edges.append(key)
    try:
        return Graph(n, np.asarray(edges, dtype=np.int64).reshape(-1, 2), vt)
    except InvalidParameterError as exc:
        raise GraphParseError(str(exc)) from exc
