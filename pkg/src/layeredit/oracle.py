"""Independent exhaustive solvers, used as ground truth in tests.

Two interchangeable enumeration routes decide an instance exactly:

* mark-first: run through every candidate mark set in (size, lex) order and
  look for one edited graph per layer agreeing outside the marks;
* edits-first: run through every combination of per-layer edit sets and
  check that the pairs on which the edited layers still disagree can be
  covered by at most d marked vertices (complete two-way branching).

Both are exhaustive; the cheaper one is chosen per instance, and a
capability error is raised when neither fits the desk-scale work caps.
A structured enumeration over vertex partitions is provided as a second,
fully independent oracle for the multi-layer mode.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb
from typing import Iterator, Optional, Sequence

from .core import (
    MLCE,
    TCE,
    InputError,
    Instance,
    Pair,
    Solution,
    pair,
)
from .tcepath import enumerate_cluster_editing_sets

MAX_ORACLE_K = 4
MAX_ORACLE_ELL = 4
ENUM_WORK_CAP = 60_000      # per-layer subsets filtered during edit enumeration
MARK_SETS_CAP = 300_000     # candidate mark sets in the mark-first route
COMBINATIONS_CAP = 20_000   # edit-set combinations in the edits-first route
GAP_SUBSETS_CAP = 200_000   # candidate mark sets per layer gap (temporal)


class CapabilityError(RuntimeError):
    """The instance exceeds the oracle's desk-scale guard."""


def _guard_common(inst: Instance) -> None:
    if inst.k > MAX_ORACLE_K:
        raise CapabilityError(f"oracle guard: k={inst.k} > {MAX_ORACLE_K}")
    if inst.ell > MAX_ORACLE_ELL:
        raise CapabilityError(f"oracle guard: ell={inst.ell} > {MAX_ORACLE_ELL}")


def _enum_work(n: int, k: int) -> int:
    return sum(comb(comb(n, 2), j) for j in range(k + 1))


def _guard_enummed(n: int, budgets: Sequence[int]) -> None:
    work = max(_enum_work(n, b) for b in budgets)
    if work > ENUM_WORK_CAP:
        raise CapabilityError(f"oracle guard: edit enumeration needs {work} subset checks")


def _mark_candidates(vertices: Sequence[int], d: int) -> Iterator[frozenset[int]]:
    for size in range(min(d, len(vertices)) + 1):
        for combo in combinations(vertices, size):
            yield frozenset(combo)


def _cover_within(pairs: frozenset[Pair], budget: int) -> Optional[frozenset[int]]:
    """Some vertex set of size <= budget touching every pair, or None.

    Complete branching: a max-degree vertex is either in the cover or all
    its partners are.
    """
    if not pairs:
        return frozenset()
    if budget <= 0:
        return None
    degree: dict[int, int] = {}
    for u, v in pairs:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    x = min(degree, key=lambda v: (-degree[v], v))
    rest = frozenset(p for p in pairs if x not in p)
    sub = _cover_within(rest, budget - 1)
    if sub is not None:
        return sub | {x}
    partners = frozenset(u if v == x else v for u, v in pairs if x in (u, v))
    if len(partners) <= budget:
        rest2 = frozenset(p for p in pairs
                          if p[0] not in partners and p[1] not in partners)
        sub = _cover_within(rest2, budget - len(partners))
        if sub is not None:
            return sub | partners
    return None


def _solve_mlce_exhaustive(mode_n: int, layers, budgets: Sequence[int],
                           d: int) -> Optional[Solution]:
    n = mode_n
    _guard_enummed(n, budgets)
    cands = [enumerate_cluster_editing_sets(g, b) for g, b in zip(layers, budgets)]
    edited = [[g.edges ^ m for m in layer_cands]
              for g, layer_cands in zip(layers, cands)]

    mark_sets = sum(comb(n, j) for j in range(min(d, n) + 1))
    if mark_sets <= MARK_SETS_CAP:
        vertices = list(range(1, n + 1))
        for dset in _mark_candidates(vertices, d):
            rests = []
            for layer_edited in edited[1:]:
                layer_rest: dict[frozenset[Pair], int] = {}
                for idx, es in enumerate(layer_edited):
                    fp = frozenset(p for p in es
                                   if p[0] not in dset and p[1] not in dset)
                    layer_rest.setdefault(fp, idx)
                rests.append(layer_rest)
            for idx0, es in enumerate(edited[0]):
                fp = frozenset(p for p in es
                               if p[0] not in dset and p[1] not in dset)
                picks = [idx0]
                for layer_rest in rests:
                    hit = layer_rest.get(fp)
                    if hit is None:
                        break
                    picks.append(hit)
                else:
                    return Solution(
                        tuple(cands[i][j] for i, j in enumerate(picks)),
                        marked=dset)
        return None

    total = 1
    for layer_cands in cands:
        total *= len(layer_cands)
        if total > COMBINATIONS_CAP:
            raise CapabilityError(
                f"oracle guard: more than {COMBINATIONS_CAP} edit combinations")
    for combo in product(*(range(len(c)) for c in cands)):
        disagree: set[Pair] = set()
        for i, j in combinations(range(len(layers)), 2):
            disagree |= edited[i][combo[i]] ^ edited[j][combo[j]]
        cover = _cover_within(frozenset(disagree), d)
        if cover is not None:
            return Solution(tuple(cands[i][j] for i, j in enumerate(combo)),
                            marked=cover)
    return None


def oracle_mlce(inst: Instance, budgets: Optional[Sequence[int]] = None) -> Optional[Solution]:
    """Exhaustive multi-layer solver.  ``budgets`` optionally replaces the
    uniform edit budget with per-layer ones (used by kernel soundness tests)."""
    if inst.mode != MLCE:
        raise InputError("oracle_mlce expects an mlce instance")
    _guard_common(inst)
    bud = list(budgets) if budgets is not None else [inst.k] * inst.ell
    if any(b < 0 for b in bud):
        return None
    return _solve_mlce_exhaustive(inst.n, inst.layers, bud, inst.d)


def oracle_tce(inst: Instance, budgets: Optional[Sequence[int]] = None,
               gap_method: str = "enumerate") -> Optional[Solution]:
    """Exhaustive temporal solver.

    Consecutive pairs of edited layers are connected when some mark set of
    size at most d hides their disagreements; by default that set is found
    by plain subset enumeration over the endpoints of disagreeing pairs
    (keeping this oracle independent of the matching-based solver), with
    ``gap_method="matching"`` as the alternative.
    """
    if inst.mode != TCE:
        raise InputError("oracle_tce expects a tce instance")
    if gap_method not in ("enumerate", "matching"):
        raise InputError(f"unknown gap method {gap_method!r}")
    _guard_common(inst)
    bud = list(budgets) if budgets is not None else [inst.k] * inst.ell
    if any(b < 0 for b in bud):
        return None
    _guard_enummed(inst.n, bud)

    cands = [enumerate_cluster_editing_sets(g, b)
             for g, b in zip(inst.layers, bud)]
    edited = [[g.edges ^ m for m in layer_cands]
              for g, layer_cands in zip(inst.layers, cands)]

    def gap_witness(es1: frozenset[Pair], es2: frozenset[Pair]) -> Optional[frozenset[int]]:
        diff = es1 ^ es2
        if not diff:
            return frozenset()
        if gap_method == "matching":
            from .core import LayerGraph
            from .twolayer import solve_two_layer_zero_edit
            return solve_two_layer_zero_edit(
                LayerGraph(inst.n, es1), LayerGraph(inst.n, es2), inst.d)
        endpoints = sorted({v for p in diff for v in p})
        work = sum(comb(len(endpoints), j)
                   for j in range(min(inst.d, len(endpoints)) + 1))
        if work > GAP_SUBSETS_CAP:
            raise CapabilityError(
                f"oracle guard: gap check needs {work} mark-set candidates")
        for dset in _mark_candidates(endpoints, inst.d):
            if all(p[0] in dset or p[1] in dset for p in diff):
                return dset
        return None

    reachable = list(range(len(cands[0])))
    preds: list[list[Optional[int]]] = [[None] * len(cands[0])]
    for i in range(1, inst.ell):
        layer_preds: list[Optional[int]] = []
        for es in edited[i]:
            hit = next((j for j in reachable
                        if gap_witness(edited[i - 1][j], es) is not None), None)
            layer_preds.append(hit)
        preds.append(layer_preds)
        reachable = [idx for idx, p in enumerate(layer_preds) if p is not None]
        if not reachable:
            return None
    if not reachable:
        return None

    node = reachable[0]
    path = [node]
    for i in range(inst.ell - 1, 0, -1):
        node = preds[i][node]
        path.append(node)
    path.reverse()
    marks = []
    for i in range(inst.ell - 1):
        witness = gap_witness(edited[i][path[i]], edited[i + 1][path[i + 1]])
        if witness is None:
            raise RuntimeError("gap witness vanished during reconstruction")
        marks.append(witness)
    return Solution(tuple(cands[i][j] for i, j in enumerate(path)),
                    marked_per_gap=tuple(marks))


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """Every partition of ``items`` exactly once (first-occurrence order)."""
    items = list(items)

    def rec(i: int, parts: list[list[int]]) -> Iterator[list[list[int]]]:
        if i == len(items):
            yield [list(p) for p in parts]
            return
        x = items[i]
        for p in parts:
            p.append(x)
            yield from rec(i + 1, parts)
            p.pop()
        parts.append([x])
        yield from rec(i + 1, parts)
        parts.pop()

    yield from rec(0, [])


def structured_mlce(inst: Instance) -> Optional[Solution]:
    """Partition-based exhaustive multi-layer solver.

    Guesses the marked vertices, then a common clustering of the rest, then
    per layer (independently) an assignment of the marked vertices to
    existing or fresh clusters; a layer's edit cost is read off the
    partition directly.
    """
    if inst.mode != MLCE:
        raise InputError("structured_mlce expects an mlce instance")
    if inst.n > 8:
        raise CapabilityError(f"structured oracle guard: n={inst.n} > 8")

    vertices = list(range(1, inst.n + 1))
    for dset in _mark_candidates(vertices, inst.d):
        common = [v for v in vertices if v not in dset]
        for partition in set_partitions(common):
            cluster_of = {v: idx for idx, block in enumerate(partition) for v in block}
            base = [_base_cost(inst, i, cluster_of) for i in range(inst.ell)]
            picks = []
            for i in range(inst.ell):
                best = _best_marked_assignment(
                    inst, i, sorted(dset), partition, cluster_of,
                    inst.k - base[i])
                if best is None:
                    break
                picks.append(best)
            else:
                edits = tuple(
                    _edits_for_assignment(inst, i, cluster_of, picks[i])
                    for i in range(inst.ell))
                return Solution(edits, marked=frozenset(dset))
    return None


def _base_cost(inst: Instance, i: int, cluster_of: dict[int, int]) -> int:
    g = inst.layers[i]
    cost = 0
    items = sorted(cluster_of)
    for a, b in combinations(items, 2):
        together = cluster_of[a] == cluster_of[b]
        if together != (b in g.adj[a]):
            cost += 1
    return cost


def _best_marked_assignment(inst: Instance, i: int, marked: list[int],
                            partition: list[list[int]], cluster_of: dict[int, int],
                            budget: int):
    """Cheapest way to place the marked vertices into existing or new
    clusters for layer i, or None if every way exceeds the budget."""
    if budget < 0:
        return None
    if not marked:
        return {}
    g = inst.layers[i]
    best_cost: Optional[int] = None
    best = None
    existing = len(partition)
    for q in set_partitions(marked):
        for targets in _attachments(len(q), existing):
            placement: dict[int, int] = {}
            fresh = existing
            for block, tgt in zip(q, targets):
                label = tgt
                if label is None:
                    label = fresh
                    fresh += 1
                for v in block:
                    placement[v] = label
            cost = _marked_cost(g, marked, placement, cluster_of)
            if cost <= budget and (best_cost is None or cost < best_cost):
                best_cost, best = cost, placement
    return best


def _attachments(blocks: int, clusters: int) -> Iterator[tuple[Optional[int], ...]]:
    """Assign each block to a distinct existing cluster or to None (fresh)."""
    def rec(i: int, used: set[int], acc: list[Optional[int]]) -> Iterator[tuple[Optional[int], ...]]:
        if i == blocks:
            yield tuple(acc)
            return
        acc.append(None)
        yield from rec(i + 1, used, acc)
        acc.pop()
        for c in range(clusters):
            if c not in used:
                used.add(c)
                acc.append(c)
                yield from rec(i + 1, used, acc)
                acc.pop()
                used.discard(c)

    yield from rec(0, set(), [])


def _marked_cost(g, marked: list[int], placement: dict[int, int],
                 cluster_of: dict[int, int]) -> int:
    cost = 0
    for a, b in combinations(marked, 2):
        together = placement[a] == placement[b]
        if together != (b in g.adj[a]):
            cost += 1
    for a in marked:
        for b in cluster_of:
            together = placement[a] == cluster_of[b]
            if together != (pair(a, b) in g.edges):
                cost += 1
    return cost


def _edits_for_assignment(inst: Instance, i: int, cluster_of: dict[int, int],
                          placement: dict[int, int]) -> frozenset[Pair]:
    final = dict(cluster_of)
    final.update(placement)
    g = inst.layers[i]
    edits = set()
    items = sorted(final)
    for a, b in combinations(items, 2):
        together = final[a] == final[b]
        if together != (pair(a, b) in g.edges):
            edits.add(pair(a, b))
    return frozenset(edits)
