"""Exact small-graph oracles built on the matching polynomial.

Everything here is exact: coefficients are Python big integers and the
probability-valued quantities come out as Fractions where the contract
demands exactness.  The vertex budget is 24; larger graphs get a
BudgetError pointing callers at the Monte-Carlo estimators.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import BudgetError, InvalidParameterError
from .graph import Matching, RootedGraph

EXACT_BUDGET = 24


def _check_budget(g):
    if g.n > EXACT_BUDGET:
        raise BudgetError(
            f"{g.n} vertices exceeds the exact budget of {EXACT_BUDGET}; "
            "use the path-tree / population estimators instead"
        )


def _adj_masks(g):
    masks = [0] * g.n
    for u, v in g.edges:
        u, v = int(u), int(v)
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _match_counts(mask, adj, cache):
    """Counts of matchings of the induced subgraph `mask` by edge count.

    Recursion on the lowest surviving vertex u: either u stays exposed, or
    it is matched to one of its surviving neighbors.
    """
    if mask == 0:
        return (1,)
    got = cache.get(mask)
    if got is not None:
        return got
    u = (mask & -mask).bit_length() - 1
    rest = mask & ~(1 << u)
    counts = list(_match_counts(rest, adj, cache))
    nb = adj[u] & rest
    while nb:
        v = (nb & -nb).bit_length() - 1
        nb &= nb - 1
        sub = _match_counts(rest & ~(1 << v), adj, cache)
        for j, c in enumerate(sub):
            if j + 1 >= len(counts):
                counts.append(0)
            counts[j + 1] += c
    counts = tuple(counts)
    cache[mask] = counts
    return counts


class MatchingPolynomial:
    """P_G(z) = sum over matchings of z^(exposed count), stored by exposed count."""

    def __init__(self, n, counts_by_edges):
        self.n = n
        coeffs = [0] * (n + 1)
        for j, c in enumerate(counts_by_edges):
            coeffs[n - 2 * j] = c
        self.coeffs = tuple(coeffs)

    def __call__(self, z):
        return sum(c * z**u for u, c in enumerate(self.coeffs) if c)

    def derivative(self, z):
        return sum(c * u * z ** (u - 1) for u, c in enumerate(self.coeffs) if c and u)

    @property
    def total_matchings(self):
        return self(1)

    @property
    def min_exposed(self):
        for u, c in enumerate(self.coeffs):
            if c:
                return u
        return self.n  # n == 0: empty product, one empty matching

    @property
    def matching_number(self):
        return (self.n - self.min_exposed) // 2

    @property
    def num_maximum_matchings(self):
        return self.coeffs[self.min_exposed]


def matching_polynomial(g):
    _check_budget(g)
    adj = _adj_masks(g)
    counts = _match_counts((1 << g.n) - 1, adj, {})
    return MatchingPolynomial(g.n, counts)


class ExactEngine:
    """Shared memo table over induced-subgraph masks of one graph.

    All module-level helpers route through a throwaway engine; sampling
    loops should hold one to amortize the recursion.
    """

    def __init__(self, g):
        _check_budget(g)
        self.g = g
        self.adj = _adj_masks(g)
        self.full = (1 << g.n) - 1
        self.cache = {}

    def counts(self, mask):
        return _match_counts(mask, self.adj, self.cache)

    def poly(self, mask):
        n_sub = bin(mask).count("1")
        return MatchingPolynomial(n_sub, self.counts(mask))

    def rep(self, mask, root, z):
        """z * P_{H-root}(z) / P_H(z) on the induced subgraph H = mask."""
        if z < 0:
            raise InvalidParameterError("z must be >= 0")
        if z == 0:
            return float(self.exposure_max(mask, root))
        num = self.poly(mask & ~(1 << root))
        den = self.poly(mask)
        return z * num(z) / den(z)

    def exposure_max(self, mask, root):
        """P(root exposed in a uniform maximum matching of H), exact Fraction."""
        sub = self.poly(mask & ~(1 << root))
        full = self.poly(mask)
        if sub.matching_number != full.matching_number:
            return Fraction(0)
        return Fraction(sub.num_maximum_matchings, full.num_maximum_matchings)


def rep_exact(rg, z):
    """Root-exposure probability at temperature z (z=0 falls back to the
    uniform-maximum-matching exposure probability)."""
    eng = ExactEngine(rg.graph)
    return eng.rep(eng.full, rg.root, z)


def exposure_prob_max(rg):
    eng = ExactEngine(rg.graph)
    return eng.exposure_max(eng.full, rg.root)


def cylinder_marginal(g, m, z):
    """mu_G^z(M subset of the random matching) via the REP product formula."""
    if not isinstance(m, Matching):
        m = Matching(g, m)
    eng = ExactEngine(g)
    mask = eng.full
    out = z ** (-2 * len(m))
    for v in m.vertices():
        out *= eng.rep(mask, v, z)
        mask &= ~(1 << v)
    return out


def free_energy(g, z):
    """(1/|V|) log(P_G(z) / P_G(1))."""
    if z <= 0:
        raise InvalidParameterError("z must be > 0")
    if g.n == 0:
        return 0.0
    poly = matching_polynomial(g)
    return (math.log(poly(z)) - math.log(poly(1))) / g.n


def sample_boltzmann(g, z, seed, engine=None):
    """Exact sample from the Boltzmann distribution over matchings.

    Visits vertices in index order; each surviving unmatched vertex is left
    exposed with probability equal to its current REP, otherwise matched to
    a neighbor v with probability proportional to P_{H-circ-v}(z).

    Pass a shared ExactEngine to amortize the polynomial memo across many
    samples of the same graph.
    """
    import random

    if z <= 0:
        raise InvalidParameterError("z must be > 0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    eng = engine if engine is not None else ExactEngine(g)
    mask = eng.full
    pairs = []
    for v in range(g.n):
        if not (mask >> v) & 1:
            continue
        if rng.random() < eng.rep(mask, v, z):
            mask &= ~(1 << v)  # exposed
            continue
        rest = mask & ~(1 << v)
        nbrs = []
        weights = []
        nb = eng.adj[v] & rest
        while nb:
            u = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            nbrs.append(u)
            weights.append(eng.poly(rest & ~(1 << u))(z))
        total = sum(weights)
        r = rng.random() * total
        acc = 0.0
        pick = nbrs[-1]
        for u, w in zip(nbrs, weights):
            acc += w
            if r < acc:
                pick = u
                break
        pairs.append((v, pick))
        mask = rest & ~(1 << pick)
    return Matching(g, pairs)


def brute_force_matchings(g):
    """Independent oracle: enumerate every matching by edge-by-edge branching."""
    edges = [tuple(map(int, e)) for e in g.edges]
    out = []

    def rec(i, used, acc):
        if i == len(edges):
            out.append(tuple(acc))
            return
        rec(i + 1, used, acc)
        u, v = edges[i]
        if u not in used and v not in used:
            acc.append((u, v))
            rec(i + 1, used | {u, v}, acc)
            acc.pop()

    rec(0, frozenset(), [])
    return out


def rooted(g, root):
    return RootedGraph(g, root)
