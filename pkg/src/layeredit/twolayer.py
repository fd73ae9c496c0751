"""Exact zero-edit two-layer solver via maximum-weight bipartite matching.

Both layers must already be cluster graphs.  Each side of the bipartite
graph holds one node per connected component (maximal clique); edge weights
are intersection sizes.  A marking set of size at most d exists iff the
maximum matching weight is at least n - d, and the marked set is the
complement of the union of matched-clique intersections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import InputError, LayerGraph, is_cluster_graph


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    """Clique-intersection graph of two cluster graphs.

    ``weights`` stores only pairs with nonempty intersection, keyed by
    (left index, right index); at most n such pairs exist.
    """

    left_cliques: tuple[frozenset[int], ...]
    right_cliques: tuple[frozenset[int], ...]
    weights: dict[tuple[int, int], int]


def build_clique_intersection_graph(g1: LayerGraph, g2: LayerGraph) -> WeightedBipartiteGraph:
    """One node per component of each layer; weight = intersection size."""
    if g1.n != g2.n:
        raise InputError("layer size mismatch")
    if not is_cluster_graph(g1) or not is_cluster_graph(g2):
        raise ValueError("both layers must be cluster graphs")
    left = tuple(sorted(g1.components(), key=min))
    right = tuple(sorted(g2.components(), key=min))
    left_of = {v: i for i, comp in enumerate(left) for v in comp}
    right_of = {v: i for i, comp in enumerate(right) for v in comp}
    weights: dict[tuple[int, int], int] = {}
    for v in range(1, g1.n + 1):
        key = (left_of[v], right_of[v])
        weights[key] = weights.get(key, 0) + 1
    return WeightedBipartiteGraph(left, right, weights)


def max_weight_matching(h: WeightedBipartiteGraph) -> tuple[tuple[tuple[int, int], ...], int]:
    """Maximum-weight matching of the clique-intersection graph.

    Returns the matching as (left, right) index pairs together with its
    total weight.  Among all maximum-weight matchings the lexicographically
    smallest one (by sorted pair list) is returned, so downstream mark-set
    extraction is deterministic.
    """
    nl, nr = len(h.left_cliques), len(h.right_cliques)
    if not h.weights:
        return (), 0
    w = np.zeros((nl, nr), dtype=np.int64)
    for (i, j), val in h.weights.items():
        w[i, j] = val
    best = _assignment_weight(w)

    # Greedy lexicographic fixing: a positive-weight edge is kept exactly
    # when some maximum-weight matching contains it together with all
    # previously fixed edges.
    chosen: list[tuple[int, int]] = []
    used_l: set[int] = set()
    used_r: set[int] = set()
    bonus = int(w.sum()) + 1
    forced = np.zeros_like(w)
    for (i, j) in sorted(h.weights):
        if i in used_l or j in used_r:
            continue
        forced[i, j] = bonus
        trial = _assignment_weight(w + forced)
        if trial == best + bonus * (len(chosen) + 1):
            chosen.append((i, j))
            used_l.add(i)
            used_r.add(j)
        else:
            forced[i, j] = 0
    return tuple(chosen), best


def _assignment_weight(w: np.ndarray) -> int:
    rows, cols = linear_sum_assignment(w, maximize=True)
    return int(w[rows, cols].sum())


def solve_two_layer_zero_edit(g1: LayerGraph, g2: LayerGraph, d: int) -> Optional[frozenset[int]]:
    """Marking set D with |D| <= d making the two layers equal, or None.

    Handles non-cluster inputs (answer is then always None).  The returned
    set has minimum size among all valid marking sets.
    """
    if g1.n != g2.n:
        raise InputError("layer size mismatch")
    if not is_cluster_graph(g1) or not is_cluster_graph(g2):
        return None
    h = build_clique_intersection_graph(g1, g2)
    matching, weight = max_weight_matching(h)
    if weight < g1.n - d:
        return None
    kept: set[int] = set()
    for i, j in matching:
        kept |= h.left_cliques[i] & h.right_cliques[j]
    return frozenset(range(1, g1.n + 1)) - kept
