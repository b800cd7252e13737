"""Lattice-homology gradings and graded roots.

Generators of the lattice complex are ``U^i [K, E]`` with ``K`` characteristic
and ``E`` a set of vertices. The weight of a vertex subset ``I`` is

    2 f(K, I) = sum_{v in I} K(v) + sum_{v, v' in I} v . v'

where the second sum runs over ordered pairs including ``v = v'``; with
``E_I`` the indicator vector of ``I`` this is ``f(K, I) = -chi(K, E_I)``.
The minimal weight ``g([K, E])`` is the minimum of ``f`` over subsets of ``E``
and the absolute grading is

    gr(U^i [K, E]) = -2 i + 2 g([K, E]) + |E| + (K^2 + s) / 4.

The graded root of ``K`` is the merge tree of the connected components of
the sublevel sets ``{x : chi(K, x) <= t}``; a node at level ``t`` has
grading ``(K^2 + s) / 4 - 2 t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .charlattice import Vector, require_characteristic, square
from .optimizer import min_chi, sublevel_points
from .plumbing import PlumbingMatrix, topology_invariants

DEFAULT_SUBSET_CAP = 20
DEFAULT_ROOT_DEPTH = 8


class UnknownVertex(KeyError):
    pass


class SubsetCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class LatticeGenerator:
    K: Vector
    E: FrozenSet[int] = frozenset()
    u_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "K", tuple(self.K))
        object.__setattr__(self, "E", frozenset(self.E))
        if self.u_power < 0:
            raise ValueError("U-power must be nonnegative")


def _indices(vertices: Iterable[int], m: PlumbingMatrix) -> List[int]:
    out = []
    for v in vertices:
        try:
            out.append(m.index_of(v))
        except KeyError:
            raise UnknownVertex(v) from None
    return sorted(set(out))


def f_weight(K: Sequence[int], I: Iterable[int], m: PlumbingMatrix) -> int:
    """Weight ``f(K, I)`` of a vertex subset ``I`` (given by vertex ids)."""
    K = require_characteristic(K, m)
    idx = _indices(I, m)
    total = sum(K[i] for i in idx) + sum(m.M[i][j] for i in idx for j in idx)
    assert total % 2 == 0
    return total // 2


def g_weight(K: Sequence[int], E: Iterable[int], m: PlumbingMatrix,
             cap: int = DEFAULT_SUBSET_CAP) -> int:
    """Minimal weight ``min_{I subset of E} f(K, I)``; always ``<= 0``."""
    K = require_characteristic(K, m)
    idx = _indices(E, m)
    if len(idx) > cap:
        raise SubsetCapExceeded(f"|E| = {len(idx)} exceeds the subset cap {cap}")
    M = m.M
    best = 0

    # Depth-first over include/exclude decisions; 2f(I + v) = 2f(I) + K(v) + M_vv + 2 sum_{w in I} M_vw.
    def rec(pos: int, chosen: List[int], twice_f: int) -> None:
        nonlocal best
        if pos == len(idx):
            best = min(best, twice_f // 2)
            return
        rec(pos + 1, chosen, twice_f)
        v = idx[pos]
        step = K[v] + M[v][v] + 2 * sum(M[v][w] for w in chosen)
        chosen.append(v)
        rec(pos + 1, chosen, twice_f + step)
        chosen.pop()

    rec(0, [], 0)
    return best


def grading(gen: LatticeGenerator, m: PlumbingMatrix, cap: int = DEFAULT_SUBSET_CAP) -> Fraction:
    """Absolute grading of ``U^i [K, E]``."""
    shift = topology_invariants(m).grading_shift
    K = require_characteristic(gen.K, m)
    return (-2 * gen.u_power + 2 * g_weight(K, gen.E, m, cap) + len(gen.E)
            + square(K, m) / 4 + shift)


class UnionFind:
    """Disjoint sets over hashable items, with path halving and union by size."""

    def __init__(self):
        self._parent: Dict = {}
        self._size: Dict = {}

    def add(self, a) -> None:
        if a not in self._parent:
            self._parent[a] = a
            self._size[a] = 1

    def __contains__(self, a) -> bool:
        return a in self._parent

    def find(self, a):
        parent = self._parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]
        return True

    def groups(self) -> Dict:
        out: Dict = {}
        for a in self._parent:
            out.setdefault(self.find(a), []).append(a)
        return out


def _neighbours(x: Vector):
    for i in range(len(x)):
        for step in (1, -1):
            y = list(x)
            y[i] += step
            yield tuple(y)


def _components(points: Iterable[Vector]) -> List[List[Vector]]:
    uf = UnionFind()
    pts = list(points)
    for x in pts:
        uf.add(x)
    for x in pts:
        for y in _neighbours(x):
            if y in uf:
                uf.union(x, y)
    comps = [sorted(group) for group in uf.groups().values()]
    comps.sort(key=lambda comp: comp[0])
    return comps


def sublevel_components(K: Sequence[int], t: int, m: PlumbingMatrix) -> List[List[Vector]]:
    """Connected components (unit-step adjacency) of ``{x : chi(K, x) <= t}``.

    Each component is a sorted list of points; components are ordered by
    their smallest point. Below the global minimum of chi the set is empty
    and so is the result.
    """
    return _components(x for x, _ in sublevel_points(K, m, t))


@dataclass(frozen=True)
class RootNode:
    node_id: str
    level: int
    grading: Fraction
    size: int
    min_point: Vector


@dataclass
class GradedRoot:
    """Merge tree of sublevel components from ``min_level`` up to ``cutoff``."""

    K: Vector
    s: int
    min_level: int
    cutoff: int
    nodes: List[RootNode] = field(default_factory=list)
    parent: Dict[str, str] = field(default_factory=dict)
    members: Dict[str, FrozenSet[Vector]] = field(default_factory=dict, repr=False)
    class_index: Optional[int] = None

    def nodes_at(self, level: int) -> List[RootNode]:
        return [n for n in self.nodes if n.level == level]

    def check_nesting(self) -> bool:
        """Every node's points lie inside its parent, and top-level nodes have none."""
        for node in self.nodes:
            par = self.parent.get(node.node_id)
            if node.level == self.cutoff:
                if par is not None:
                    return False
                continue
            if par is None or not self.members[node.node_id] <= self.members[par]:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "class_index": self.class_index,
            "K": list(self.K),
            "min_level": self.min_level,
            "cutoff": self.cutoff,
            "nodes": [
                {"id": n.node_id, "level": n.level, "grading": n.grading, "size": n.size,
                 "min_point": list(n.min_point), "parent": self.parent.get(n.node_id)}
                for n in self.nodes
            ],
        }


def graded_root(K: Sequence[int], m: PlumbingMatrix, t_max: Optional[int] = None,
                class_index: Optional[int] = None) -> GradedRoot:
    """Graded root of ``K`` truncated at level ``t_max`` (default ``min chi + 8``).

    Built by one sweep over the sublevel set at ``t_max``: points are added in
    order of their chi value and merged with already-present neighbours, so
    the union-find state after finishing level ``t`` is exactly the component
    structure at ``t``.
    """
    K = require_characteristic(K, m)
    t_min = min_chi(K, m).min_value
    if t_max is None:
        t_max = t_min + DEFAULT_ROOT_DEPTH
    if t_max < t_min:
        raise ValueError(f"t_max = {t_max} is below the minimum level {t_min}")
    top = square(K, m) + m.s
    root = GradedRoot(K=K, s=m.s, min_level=t_min, cutoff=t_max, class_index=class_index)

    by_level: Dict[int, List[Vector]] = {}
    for x, value in sublevel_points(K, m, t_max):
        by_level.setdefault(value, []).append(x)

    uf = UnionFind()
    previous: List[Tuple[str, Vector]] = []  # (node id, a member point) at level t - 1
    for t in range(t_min, t_max + 1):
        for x in by_level.get(t, []):
            uf.add(x)
        for x in by_level.get(t, []):
            for y in _neighbours(x):
                if y in uf:
                    uf.union(x, y)
        groups = sorted((sorted(g) for g in uf.groups().values()), key=lambda g: g[0])
        grading_t = top / 4 - 2 * t
        current = []
        owner = {}
        for k, comp in enumerate(groups):
            node_id = f"t{t}_{k}"
            root.nodes.append(RootNode(node_id, t, grading_t, len(comp), comp[0]))
            root.members[node_id] = frozenset(comp)
            owner[uf.find(comp[0])] = node_id
            current.append((node_id, comp[0]))
        for node_id, point in previous:
            root.parent[node_id] = owner[uf.find(point)]
        previous = current
    return root


def d_from_root(root: GradedRoot) -> Fraction:
    """Grading of the lowest level of the root, ``(K^2 + s)/4 - 2 min chi``."""
    lowest = root.nodes_at(root.min_level)
    return lowest[0].grading


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def root_to_dot(root: GradedRoot, name: Optional[str] = None) -> str:
    """Graphviz digraph; edges run from level-t nodes to their level-(t+1) parents."""
    if name is None:
        name = f"spinc_{root.class_index}" if root.class_index is not None else "graded_root"
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for n in root.nodes:
        lines.append(f'  {n.node_id} [label="t={n.level} λ={_fmt(n.grading)}"];')
    for child, par in root.parent.items():
        lines.append(f"  {child} -> {par};")
    lines.append("}")
    return "\n".join(lines) + "\n"
