"""Small graph builders shared across test modules."""

from __future__ import annotations

import numpy as np

from polarnet.graph import AnnotatedGraph


def graph_from_edges(n, edges, opinions=None) -> AnnotatedGraph:
    return AnnotatedGraph.from_edge_array(
        n,
        np.array(edges, dtype=np.int64).reshape(-1, 2),
        opinions=None if opinions is None else np.array(opinions, dtype=np.uint8),
    )


def complete_edges(n) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def star_edges(leaves) -> list[tuple[int, int]]:
    return [(0, i) for i in range(1, leaves + 1)]


def path_edges(n) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def random_edges(rng, n, p) -> list[tuple[int, int]]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                out.append((i, j))
    return out


def random_annotated(rng, n, p) -> AnnotatedGraph:
    opinions = (rng.random(n) < 0.5).astype(np.uint8)
    return graph_from_edges(n, random_edges(rng, n, p), opinions)
