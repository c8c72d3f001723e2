"""Shared helpers: independent re-implementations used as oracles in tests."""

from __future__ import annotations

import numpy as np
import pytest

from minecc.hypergraph import EdgeColoredHypergraph, hypergraph


def naive_cost(h: EdgeColoredHypergraph, coloring) -> tuple[float, set[int]]:
    """Second, independent objective evaluation (set-based, per edge)."""
    mistakes = set()
    total = 0.0
    for j, e in enumerate(h.edges):
        colors_seen = {coloring[v] for v in e.members}
        if colors_seen != {e.color}:
            mistakes.add(j)
            total += e.weight
    return total, mistakes


def exhaustive_ecc(h: EdgeColoredHypergraph) -> float:
    """Plain exhaustive minimum over all colorings (no pruning); tiny instances only."""
    import itertools

    k, n = h.num_colors, h.num_nodes
    best = float("inf")
    for assignment in itertools.product(range(1, k + 1), repeat=n):
        best = min(best, naive_cost(h, assignment)[0])
    return best


def random_instance(rng: np.random.Generator, n: int, m: int, k: int, max_size: int = 3):
    """Unstructured random instance (not planted), for adversarial-ish coverage."""
    edges = []
    for _ in range(m):
        size = int(rng.integers(1, max_size + 1))
        members = rng.choice(n, size=min(size, n), replace=False)
        edges.append((tuple(int(v) for v in members), int(rng.integers(1, k + 1))))
    return hypergraph(n, k, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
