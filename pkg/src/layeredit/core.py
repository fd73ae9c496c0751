"""Data model for multi-layer / temporal graphs and solution checking.

Vertices are dense integers 1..n.  A vertex pair is a tuple (u, v) with
u < v; edge sets and edit sets are frozensets of such pairs.  All values
are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

Pair = tuple[int, int]

MLCE = "mlce"
TCE = "tce"
MODES = (MLCE, TCE)


class InputError(ValueError):
    """Raised on malformed user-supplied data (bad pairs, shape mismatch)."""


def pair(u: int, v: int) -> Pair:
    """Canonical unordered vertex pair: smaller endpoint first."""
    if u == v:
        raise InputError(f"degenerate pair ({u}, {v})")
    return (u, v) if u < v else (v, u)


def pairs_of(vertices: Iterable[int]) -> list[Pair]:
    """All canonical pairs within a vertex collection, in lexicographic order."""
    return [pair(u, v) for u, v in combinations(sorted(vertices), 2)]


def all_pairs(n: int) -> list[Pair]:
    return pairs_of(range(1, n + 1))


@dataclass(frozen=True)
class LayerGraph:
    """One layer: a simple graph on vertices 1..n given by its edge set."""

    n: int
    edges: frozenset[Pair]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise InputError(f"edge ({u}, {v}) out of range for n={self.n}")

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        """Adjacency sets, indexed 1..n (index 0 unused)."""
        nbrs: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def has_edge(self, u: int, v: int) -> bool:
        return (pair(u, v)) in self.edges

    def components(self) -> list[frozenset[int]]:
        """Connected components, ordered by smallest contained vertex."""
        seen: set[int] = set()
        comps = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            stack = [start]
            comp = {start}
            seen.add(start)
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in comp:
                        comp.add(y)
                        seen.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return comps


def layer_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> LayerGraph:
    return LayerGraph(n, frozenset(pair(u, v) for u, v in edges))


def apply_edits(g: LayerGraph, m: frozenset[Pair] | set[Pair]) -> LayerGraph:
    """Toggle every pair of ``m`` in ``g`` (symmetric difference); involutive."""
    for u, v in m:
        if not (1 <= u < v <= g.n):
            raise InputError(f"edit pair ({u}, {v}) out of range for n={g.n}")
    return LayerGraph(g.n, g.edges ^ frozenset(m))


@dataclass(frozen=True)
class P3Witness:
    """An induced path a - b - c (edge a-b, edge b-c, non-edge a-c)."""

    a: int
    b: int
    c: int

    def pairs(self) -> tuple[Pair, Pair, Pair]:
        return pair(self.a, self.b), pair(self.b, self.c), pair(self.a, self.c)


def find_p3(g: LayerGraph, restrict: Optional[frozenset[int]] = None) -> Optional[P3Witness]:
    """First induced P3 of g[restrict], scanning centers then neighbor pairs
    in increasing vertex order.  Deterministic; None if the restriction is a
    cluster graph."""
    if restrict is None:
        members = range(1, g.n + 1)
        inside = None
    else:
        members = sorted(restrict)
        inside = restrict
    for b in members:
        nbrs = sorted(x for x in g.adj[b] if inside is None or x in inside)
        for i, a in enumerate(nbrs):
            for c in nbrs[i + 1:]:
                if c not in g.adj[a]:
                    return P3Witness(a, b, c)
    return None


def is_cluster_graph(g: LayerGraph, restrict: Optional[frozenset[int]] = None) -> bool:
    """True iff every connected component of g[restrict] is a clique."""
    return find_p3(g, restrict) is None


def count_p3_through_pair(g: LayerGraph, p: Pair) -> int:
    """Number of vertices w for which g[{u, v, w}] is an induced P3.

    Covers both cases: if {u, v} is an edge, w sees exactly one endpoint;
    if it is a non-edge, w sees both.
    """
    u, v = p
    au, av = g.adj[u], g.adj[v]
    if v in au:
        return sum(1 for w in au ^ av if w not in (u, v))
    return sum(1 for w in au & av if w not in (u, v))


def consistent_after_removal(g1: LayerGraph, g2: LayerGraph,
                             removed: frozenset[int] | set[int]) -> bool:
    """True iff the two edge sets agree on all pairs disjoint from ``removed``."""
    if g1.n != g2.n:
        raise InputError("layer size mismatch")
    for u, v in g1.edges ^ g2.edges:
        if u not in removed and v not in removed:
            return False
    return True


def restricted_edges(g: LayerGraph, removed: frozenset[int] | set[int]) -> frozenset[Pair]:
    return frozenset(p for p in g.edges if p[0] not in removed and p[1] not in removed)


@dataclass(frozen=True)
class Instance:
    """A multi-layer (mode=mlce) or temporal (mode=tce) editing instance."""

    mode: str
    n: int
    layers: tuple[LayerGraph, ...]
    k: int
    d: int

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if not self.layers:
            raise InputError("instance needs at least one layer")
        if any(g.n != self.n for g in self.layers):
            raise InputError("all layers must share the vertex count")
        if self.k < 0 or self.d < 0:
            raise InputError("budgets must be nonnegative")

    @property
    def ell(self) -> int:
        return len(self.layers)

    def vertices(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))


@dataclass(frozen=True)
class Solution:
    """Per-layer edit sets plus marked vertices.

    ``marked`` is the single mark set of an mlce solution; ``marked_per_gap``
    holds one set per consecutive layer pair of a tce solution.  Exactly one
    of the two is present.
    """

    edits: tuple[frozenset[Pair], ...]
    marked: Optional[frozenset[int]] = None
    marked_per_gap: Optional[tuple[frozenset[int], ...]] = None

    def __post_init__(self) -> None:
        if (self.marked is None) == (self.marked_per_gap is None):
            raise InputError("exactly one of marked / marked_per_gap must be set")


@dataclass(frozen=True)
class VerifyReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


def edited_layers(inst: Instance, sol: Solution) -> tuple[LayerGraph, ...]:
    return tuple(apply_edits(g, m) for g, m in zip(inst.layers, sol.edits))


def verify(inst: Instance, sol: Solution) -> VerifyReport:
    """Check a solution against every condition of the problem definition.

    The report lists all violations: edit-budget overflow, mark-budget
    overflow, a layer that is not a cluster graph after its edits (with a P3
    witness), and consistency failures (with the witnessing pair and layers).
    An empty report means the solution is valid.
    """
    if len(sol.edits) != inst.ell:
        raise InputError(f"solution has {len(sol.edits)} edit sets, instance has {inst.ell} layers")
    if inst.mode == MLCE and sol.marked is None:
        raise InputError("mlce solution must carry a single mark set")
    if inst.mode == TCE and sol.marked_per_gap is None:
        raise InputError("tce solution must carry one mark set per layer gap")
    if inst.mode == TCE and len(sol.marked_per_gap) != inst.ell - 1:
        raise InputError(
            f"tce solution has {len(sol.marked_per_gap)} mark sets, expected {inst.ell - 1}")

    violations: list[str] = []
    for i, m in enumerate(sol.edits, start=1):
        if len(m) > inst.k:
            violations.append(f"edit budget exceeded in layer {i}: {len(m)} > k={inst.k}")
    mark_sets = [sol.marked] if inst.mode == MLCE else list(sol.marked_per_gap)
    for i, dset in enumerate(mark_sets, start=1):
        if any(not 1 <= v <= inst.n for v in dset):
            raise InputError(f"marked vertex out of range in mark set {i}")
        if len(dset) > inst.d:
            where = "" if inst.mode == MLCE else f" at gap {i}"
            violations.append(f"mark budget exceeded{where}: {len(dset)} > d={inst.d}")

    edited = edited_layers(inst, sol)
    for i, g in enumerate(edited, start=1):
        w = find_p3(g)
        if w is not None:
            violations.append(
                f"layer {i} is not a cluster graph after edits: induced P3 ({w.a},{w.b},{w.c})")

    if inst.mode == MLCE:
        for i, j in combinations(range(inst.ell), 2):
            bad = _first_disagreement(edited[i], edited[j], sol.marked)
            if bad is not None:
                violations.append(
                    f"layers {i + 1} and {j + 1} differ outside marks on pair {bad}")
    else:
        for i in range(inst.ell - 1):
            bad = _first_disagreement(edited[i], edited[i + 1], sol.marked_per_gap[i])
            if bad is not None:
                violations.append(
                    f"layers {i + 1} and {i + 2} differ outside marks on pair {bad} (gap {i + 1})")
    return VerifyReport(tuple(violations))


def _first_disagreement(g1: LayerGraph, g2: LayerGraph,
                        removed: frozenset[int]) -> Optional[Pair]:
    diff = sorted(p for p in g1.edges ^ g2.edges
                  if p[0] not in removed and p[1] not in removed)
    return diff[0] if diff else None
