"""Maximum-matching algorithms and the Karp-Sipser heuristic.

Hot loops (Hopcroft-Karp and the Edmonds blossom search) operate on CSR
arrays and carry numba @njit; set MATCHLIM_NO_NUMBA=1 for the plain-Python
fallback path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ._accel import maybe_njit
from .errors import BudgetError, InvalidParameterError
from .graph import Graph, Matching, TYPE_A

GENERAL_EXACT_CAP = 20_000
BIPARTITE_EXACT_CAP = 1_000_000


# ---------------------------------------------------------------------------
# Hopcroft-Karp (bipartite)


@maybe_njit
def _hopcroft_karp(n_left, n_right, indptr, indices):
    """Maximum bipartite matching; left vertices 0..n_left-1, CSR adjacency
    maps left vertices to right indices 0..n_right-1."""
    INF = np.int64(1 << 60)
    match_l = np.full(n_left, -1, np.int64)
    match_r = np.full(n_right, -1, np.int64)
    dist = np.empty(n_left, np.int64)
    queue = np.empty(n_left, np.int64)
    # greedy warm start
    size = 0
    for u in range(n_left):
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if match_r[v] == -1:
                match_l[u] = v
                match_r[v] = u
                size += 1
                break
    stack_u = np.empty(n_left + 1, np.int64)
    stack_k = np.empty(n_left + 1, np.int64)
    while True:
        # BFS layers from free left vertices
        head = 0
        tail = 0
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = INF
        found = False
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[k]]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        if not found:
            return match_l, match_r, size
        # DFS phase (iterative)
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            top = 0
            stack_u[0] = root
            stack_k[0] = indptr[root]
            while top >= 0:
                u = stack_u[top]
                k = stack_k[top]
                if k >= indptr[u + 1]:
                    dist[u] = INF  # dead end; prune
                    top -= 1
                    continue
                stack_k[top] = k + 1
                v = indices[k]
                w = match_r[v]
                if w == -1:
                    # augment along the stack
                    size += 1
                    for t in range(top, -1, -1):
                        uu = stack_u[t]
                        vv = indices[stack_k[t] - 1]
                        match_l[uu] = vv
                        match_r[vv] = uu
                    top = -1
                elif dist[w] == dist[u] + 1:
                    top += 1
                    stack_u[top] = w
                    stack_k[top] = indptr[w]
    return match_l, match_r, size  # unreachable


def maximum_matching_bipartite(g):
    """Exact maximum matching of a bipartite-tagged graph via Hopcroft-Karp."""
    if not g.is_bipartite_tagged:
        raise InvalidParameterError("graph is not bipartite-tagged")
    left = np.flatnonzero(g.vertex_type == TYPE_A)
    right = np.flatnonzero(g.vertex_type != TYPE_A)
    lpos = np.full(g.n, -1, np.int64)
    rpos = np.full(g.n, -1, np.int64)
    lpos[left] = np.arange(len(left))
    rpos[right] = np.arange(len(right))
    if g.m == 0:
        return Matching(g, [])
    eu = g.edges[:, 0]
    ev = g.edges[:, 1]
    swap = g.vertex_type[eu] != TYPE_A
    a = np.where(swap, ev, eu)
    b = np.where(swap, eu, ev)
    la = lpos[a]
    rb = rpos[b]
    order = np.argsort(la, kind="stable")
    counts = np.bincount(la, minlength=len(left))
    indptr = np.zeros(len(left) + 1, np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = rb[order]
    match_l, _, _ = _hopcroft_karp(len(left), len(right), indptr, indices)
    pairs = [
        (int(left[i]), int(right[match_l[i]]))
        for i in range(len(left))
        if match_l[i] != -1
    ]
    return Matching(g, pairs)


# ---------------------------------------------------------------------------
# Edmonds blossom (general graphs)


@maybe_njit
def _blossom(n, indptr, indices):
    """Maximum matching on a general graph; returns the match array.

    Array-based Edmonds search with lazy (stamped) per-phase state, greedy
    warm start, and blossom contraction restricted to tree vertices.
    """
    match = np.full(n, -1, np.int64)
    # greedy warm start
    for u in range(n):
        if match[u] == -1:
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if match[v] == -1:
                    match[u] = v
                    match[v] = u
                    break
    p = np.full(n, -1, np.int64)
    base = np.arange(n)
    used = np.zeros(n, np.bool_)
    bloss = np.zeros(n, np.bool_)
    lca_used = np.zeros(n, np.bool_)
    p_st = np.zeros(n, np.int64)
    base_st = np.zeros(n, np.int64)
    used_st = np.zeros(n, np.int64)
    bloss_st = np.zeros(n, np.int64)
    lca_st = np.zeros(n, np.int64)
    stamp = np.int64(0)
    bstamp = np.int64(0)
    lstamp = np.int64(0)
    queue = np.empty(n, np.int64)
    tree = np.empty(2 * n + 2, np.int64)  # vertices touched this phase

    for root in range(n):
        if match[root] != -1:
            continue
        stamp += 1
        used[root] = True
        used_st[root] = stamp
        ntree = 0
        tree[ntree] = root
        ntree += 1
        queue[0] = root
        head = 0
        tail = 1
        aug_end = np.int64(-1)
        while head < tail and aug_end == -1:
            v = queue[head]
            head += 1
            for k in range(indptr[v], indptr[v + 1]):
                to = indices[k]
                bv = base[v] if base_st[v] == stamp else v
                bto = base[to] if base_st[to] == stamp else to
                if bv == bto or match[v] == to:
                    continue
                p_to = p[to] if p_st[to] == stamp else -1
                mt = match[to]
                p_mt = -1
                if mt != -1 and p_st[mt] == stamp:
                    p_mt = p[mt]
                if to == root or (mt != -1 and p_mt != -1):
                    # odd cycle: contract the blossom at lca(v, to)
                    lstamp += 1
                    a = v
                    while True:
                        a = base[a] if base_st[a] == stamp else a
                        lca_used[a] = True
                        lca_st[a] = lstamp
                        if match[a] == -1:
                            break
                        a = p[match[a]] if p_st[match[a]] == stamp else -1
                        if a == -1:
                            break
                    b = to
                    curbase = np.int64(-1)
                    while True:
                        b = base[b] if base_st[b] == stamp else b
                        if lca_st[b] == lstamp and lca_used[b]:
                            curbase = b
                            break
                        b = p[match[b]] if p_st[match[b]] == stamp else -1
                        if b == -1:
                            break
                    if curbase == -1:
                        continue
                    bstamp += 1
                    # mark both paths down to curbase
                    for leg in range(2):
                        x = v if leg == 0 else to
                        child = to if leg == 0 else v
                        while True:
                            bx = base[x] if base_st[x] == stamp else x
                            if bx == curbase:
                                break
                            mx = match[x]
                            bmx = base[mx] if base_st[mx] == stamp else mx
                            bloss[bx] = True
                            bloss_st[bx] = bstamp
                            bloss[bmx] = True
                            bloss_st[bmx] = bstamp
                            p[x] = child
                            p_st[x] = stamp
                            child = mx
                            x = p[mx] if p_st[mx] == stamp else -1
                            if x == -1:
                                break
                    for t in range(ntree):
                        i = tree[t]
                        bi = base[i] if base_st[i] == stamp else i
                        if bloss_st[bi] == bstamp and bloss[bi]:
                            base[i] = curbase
                            base_st[i] = stamp
                            if not (used_st[i] == stamp and used[i]):
                                used[i] = True
                                used_st[i] = stamp
                                queue[tail] = i
                                tail += 1
                elif p_to == -1:
                    p[to] = v
                    p_st[to] = stamp
                    tree[ntree] = to
                    ntree += 1
                    if mt == -1:
                        aug_end = to
                        break
                    used[mt] = True
                    used_st[mt] = stamp
                    tree[ntree] = mt
                    ntree += 1
                    queue[tail] = mt
                    tail += 1
        if aug_end != -1:
            u = aug_end
            while u != -1:
                pv = p[u]
                ppv = match[pv]
                match[u] = pv
                match[pv] = u
                u = ppv
    return match


def maximum_matching_general(g):
    """Exact maximum matching of a general graph via the blossom algorithm."""
    match = _blossom(g.n, g.indptr, g.indices)
    pairs = [(u, int(match[u])) for u in range(g.n) if match[u] > u]
    return Matching(g, pairs)


def matching_number(g, force=False):
    """Exact nu(G).  Hopcroft-Karp when bipartite-tagged, blossom otherwise.

    General graphs above the exact-validation cap are refused unless
    force=True, to keep accidental super-linear runs out of pipelines.
    """
    if g.is_bipartite_tagged:
        if g.n > BIPARTITE_EXACT_CAP and not force:
            raise BudgetError(
                f"bipartite exact matching capped at {BIPARTITE_EXACT_CAP} vertices"
            )
        return len(maximum_matching_bipartite(g))
    if g.n > GENERAL_EXACT_CAP and not force:
        raise BudgetError(
            f"general exact matching capped at {GENERAL_EXACT_CAP} vertices; "
            "pass force=True to override"
        )
    return len(maximum_matching_general(g))


def independence_number_bipartite(g):
    """|V| - nu(G), by Koenig's theorem; bipartite-tagged graphs only."""
    if not g.is_bipartite_tagged:
        raise InvalidParameterError("graph is not bipartite-tagged")
    return g.n - len(maximum_matching_bipartite(g))


# ---------------------------------------------------------------------------
# Karp-Sipser


@dataclass
class KarpSipserReport:
    matching: Matching
    leaf_phase_edges: int
    core_vertex_count: int
    core_exposed_count: int


class _UniformSet:
    """Dynamic set supporting O(1) add/discard and uniform sampling."""

    def __init__(self):
        self.items = []
        self.pos = {}

    def add(self, x):
        if x not in self.pos:
            self.pos[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def __len__(self):
        return len(self.items)

    def sample(self, rng):
        return self.items[rng.randrange(len(self.items))]


def karp_sipser(g, seed):
    """Greedy matching by pendant-edge removal, then uniform core edges.

    Phase 1 matches a uniform pendant edge and deletes adjacent edges until
    no degree-1 vertex remains; phase 2 matches a uniform surviving edge and
    leaf removal restarts.  The returned matching is maximal.
    """
    rng = random.Random(seed)
    n = g.n
    deg = [g.degree(v) for v in range(n)]
    alive = [True] * n
    matched = [-1] * n
    adj = [None] * n  # lazily materialized neighbor lists
    pend = _UniformSet()
    for v in range(n):
        if deg[v] == 1:
            pend.add(v)
    edge_pool = _UniformSet()
    for eid in range(g.m):
        edge_pool.add(eid)
    edges = g.edges
    pairs = []
    leaf_phase_edges = 0
    core_snapshot = None

    def nbrs(v):
        if adj[v] is None:
            adj[v] = [int(x) for x in g.neighbors(v)]
        return adj[v]

    def remove_vertex(v):
        alive[v] = False
        pend.discard(v)
        for u in nbrs(v):
            if alive[u]:
                deg[u] -= 1
                if deg[u] == 1:
                    pend.add(u)
                elif deg[u] == 0:
                    pend.discard(u)

    def take_pendant():
        # uniform over pendant edges: pick a degree-1 vertex, accept an
        # isolated edge (both endpoints degree 1) with probability 1/2
        while len(pend) > 0:
            v = pend.sample(rng)
            if not alive[v] or deg[v] != 1:
                pend.discard(v)
                continue
            u = -1
            for w in nbrs(v):
                if alive[w] and matched[w] == -1:
                    u = w
                    break
            if u == -1:
                pend.discard(v)
                deg[v] = 0
                continue
            if deg[u] == 1 and rng.random() < 0.5:
                continue
            return v, u
        return None

    while True:
        hit = take_pendant()
        if hit is not None:
            v, u = hit
            matched[v] = u
            matched[u] = v
            pairs.append((v, u))
            leaf_phase_edges += 1
            remove_vertex(v)
            remove_vertex(u)
            continue
        # no pendant edge; fall through to the core
        if core_snapshot is None:
            core = [v for v in range(n) if alive[v] and deg[v] >= 2]
            if core:
                core_snapshot = core
        # uniform surviving edge
        picked = None
        while len(edge_pool) > 0:
            eid = edge_pool.sample(rng)
            u, v = int(edges[eid][0]), int(edges[eid][1])
            if not (alive[u] and alive[v]):
                edge_pool.discard(eid)
                continue
            picked = (u, v)
            break
        if picked is None:
            break
        u, v = picked
        matched[u] = v
        matched[v] = u
        pairs.append((u, v))
        remove_vertex(u)
        remove_vertex(v)

    core = core_snapshot or []
    core_exposed = sum(1 for v in core if matched[v] == -1)
    return KarpSipserReport(
        matching=Matching(g, pairs),
        leaf_phase_edges=leaf_phase_edges,
        core_vertex_count=len(core),
        core_exposed_count=core_exposed,
    )
