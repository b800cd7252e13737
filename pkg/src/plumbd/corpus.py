"""Seeded random negative-definite plumbing trees and a few named fixtures."""

from __future__ import annotations

import random
from typing import Dict, Iterator, List, Optional, Tuple

from .plumbing import PlumbingGraph, PlumbingMatrix, build_matrix

WEIGHT_RANGE = (-5, -1)


def prufer_edges(seq: List[int], n: int) -> List[Tuple[int, int]]:
    """Edges (on vertices 1..n) of the labelled tree with Prüfer sequence ``seq``."""
    if n == 1:
        return []
    if len(seq) != n - 2:
        raise ValueError("Prüfer sequence must have length n - 2")
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(1, n + 1) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(1, n + 1) if degree[x] == 1)
    edges.append((u, w))
    return edges


def random_tree(rng: random.Random, s: int, weights: Tuple[int, int] = WEIGHT_RANGE) -> PlumbingGraph:
    seq = [rng.randint(1, s) for _ in range(s - 2)] if s > 2 else []
    ws = [rng.randint(*weights) for _ in range(s)]
    return PlumbingGraph.from_weights(ws, prufer_edges(seq, s))


def random_negative_definite_trees(count: int, seed: int = 0, max_vertices: int = 5,
                                   weights: Tuple[int, int] = WEIGHT_RANGE,
                                   ) -> Iterator[Tuple[PlumbingGraph, PlumbingMatrix]]:
    """``count`` trees with 1..max_vertices vertices, rejecting non-negative-definite ones."""
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        g = random_tree(rng, rng.randint(1, max_vertices), weights)
        try:
            m = build_matrix(g)
        except ValueError:  # singular
            continue
        if not m.negative_definite:
            continue
        produced += 1
        yield g, m


def linear_chain(weights: List[int]) -> PlumbingGraph:
    return PlumbingGraph.from_weights(weights, [(i, i + 1) for i in range(1, len(weights))])


def star(center: int, legs: List[List[int]]) -> PlumbingGraph:
    """Star-shaped graph: a central vertex with linear legs attached to it."""
    weights = [center]
    edges = []
    for leg in legs:
        prev = 1
        for w in leg:
            weights.append(w)
            edges.append((prev, len(weights)))
            prev = len(weights)
    return PlumbingGraph.from_weights(weights, edges)


def e8() -> PlumbingGraph:
    """Negative E8: a chain of seven -2 vertices with an eighth on the third."""
    return star(-2, [[-2, -2], [-2, -2, -2, -2], [-2]])


def named_fixtures() -> Dict[str, PlumbingGraph]:
    fixtures = {
        "unknot_-1": PlumbingGraph.from_weights([-1]),
        "lens_-2": PlumbingGraph.from_weights([-2]),
        "lens_-3": PlumbingGraph.from_weights([-3]),
        "lens_-7": PlumbingGraph.from_weights([-7]),
        "chain_-2_-3": linear_chain([-2, -3]),
        "chain_-3_-2_-4": linear_chain([-3, -2, -4]),
        "e8": e8(),
        "brieskorn_2_3_7": star(-1, [[-2], [-3], [-7]]),
        "star_-2_three_-2": star(-2, [[-2], [-2], [-2]]),
        "star_-3_mixed": star(-3, [[-2, -2], [-3], [-5]]),
    }
    return fixtures


def corpus(seed: int = 0, random_count: int = 20, max_vertices: int = 5,
           extra: Optional[Dict[str, PlumbingGraph]] = None) -> List[Tuple[str, PlumbingGraph, PlumbingMatrix]]:
    """Named fixtures followed by seeded random trees, all accepted."""
    out = []
    for name, g in {**named_fixtures(), **(extra or {})}.items():
        out.append((name, g, build_matrix(g)))
    for k, (g, m) in enumerate(random_negative_definite_trees(random_count, seed, max_vertices)):
        out.append((f"random_{seed}_{k}", g, m))
    return out
