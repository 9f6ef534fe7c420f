"""Shared fixtures: named graphs and the seeded random suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from matchlim import Graph, gen_erdos_renyi


def named_graphs():
    """Small graphs with hand-checkable structure, keyed by name."""
    petersen_edges = [
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),  # outer cycle
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),  # inner pentagram
        (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),  # spokes
    ]
    return {
        "K2": Graph(2, [(0, 1)]),
        "P3": Graph(3, [(0, 1), (1, 2)]),
        "P4": Graph(4, [(0, 1), (1, 2), (2, 3)]),
        "K3": Graph(3, [(0, 1), (0, 2), (1, 2)]),
        "K13": Graph(4, [(0, 1), (0, 2), (0, 3)]),
        "C4": Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
        "Petersen": Graph(10, petersen_edges),
    }


def random_suite(count, max_n, seed=20240901):
    """Deterministic collection of sparse-to-moderate random graphs."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        c = float(rng.uniform(0.0, min(float(n), 4.0)))
        out.append(gen_erdos_renyi(n, c, seed=int(rng.integers(1 << 31))))
    return out


@pytest.fixture(scope="session")
def named():
    return named_graphs()


@pytest.fixture(scope="session")
def suite12():
    """The acceptance suite: 500 random graphs with |V| <= 12."""
    return random_suite(500, 12)


@pytest.fixture(scope="session")
def suite14():
    """Graphs with |V| <= 14 for the free-energy identity."""
    return random_suite(120, 14, seed=20240902)


def all_vertices(graphs):
    for g in graphs:
        for v in range(g.n):
            yield g, v


def take(iterable, k):
    return list(itertools.islice(iterable, k))
