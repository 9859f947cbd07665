"""Treewidth and pathwidth: exact search for small graphs, heuristics and lower bounds otherwise."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .graph import Multigraph, PathDecomposition, TreeDecomposition

if os.environ.get("JSJTRI_PURE_PYTHON"):
    from . import _pykernels as _kernels
else:
    try:
        from . import _ckernels as _kernels
    except ImportError:  # extension not built
        from . import _pykernels as _kernels

BACKEND: str = _kernels.BACKEND
DEFAULT_BUDGET = 25
MAX_EXACT_NODES = 64  # bitmask width of the search kernels

EXACT = "exact"
UPPER = "upper_bound"
LOWER = "lower_bound"


class BudgetExceeded(ValueError):
    """Graph too large for the exact solver; use the heuristic bounds instead."""


@dataclass(frozen=True)
class WidthResult:
    value: int
    witness: TreeDecomposition | PathDecomposition | None
    kind: str  # EXACT, UPPER or LOWER

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind}


def use_backend(name: str) -> None:
    """Switch kernels at runtime ("python" or "compiled"); used by benchmarks and tests."""
    global _kernels, BACKEND
    if name == "python":
        from . import _pykernels as mod
    elif name == "compiled":
        from . import _ckernels as mod
    else:
        raise ValueError(f"unknown backend {name!r}")
    _kernels = mod
    BACKEND = mod.BACKEND


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True


# ------------------------------------------------------------- conversions

def _masks(g: Multigraph) -> list[int]:
    adj = [0] * g.node_count
    for v, nbrs in enumerate(g.neighbors()):
        for u in nbrs:
            adj[v] |= 1 << u
    return adj


def decomposition_from_elimination(g: Multigraph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition whose bags are each vertex with its later neighbours in the fill graph."""
    n = g.node_count
    if n == 0:
        return TreeDecomposition((frozenset(),), ())
    pos = {v: i for i, v in enumerate(order)}
    if sorted(pos) != list(range(n)):
        raise ValueError("ordering must list every node exactly once")
    nbrs = [set(s) for s in g.neighbors()]
    bags = []
    for v in order:
        later = {u for u in nbrs[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        for a in later:
            nbrs[a] |= later - {a}
    arcs = []
    roots = []
    for i, v in enumerate(order):
        later = bags[i] - {v}
        if later:
            arcs.append((i, min(pos[u] for u in later)))
        else:
            roots.append(i)
    arcs += [(roots[j], roots[j + 1]) for j in range(len(roots) - 1)]
    return TreeDecomposition(tuple(bags), tuple(arcs))


def decomposition_from_separation(g: Multigraph, order: Sequence[int]) -> PathDecomposition:
    """Path decomposition: bag i holds v_i plus the earlier vertices still adjacent to later ones."""
    n = g.node_count
    if n == 0:
        return PathDecomposition((frozenset(),))
    pos = {v: i for i, v in enumerate(order)}
    nbrs = g.neighbors()
    last = [max([pos[v]] + [pos[u] for u in nbrs[v]]) for v in range(n)]
    bags = []
    for i, v in enumerate(order):
        bags.append(frozenset({v} | {u for u in order[:i] if last[u] >= i}))
    return PathDecomposition(tuple(bags))


def separation_width(g: Multigraph, order: Sequence[int]) -> int:
    return decomposition_from_separation(g, order).width


# ------------------------------------------------------------ lower bounds

def degeneracy(g: Multigraph) -> int:
    nbrs = [set(s) for s in g.neighbors()]
    alive = set(range(g.node_count))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (len(nbrs[x]), x))
        best = max(best, len(nbrs[v]))
        for u in nbrs[v]:
            nbrs[u].discard(v)
        alive.discard(v)
    return best


def minor_min_width(g: Multigraph) -> int:
    """Contract each min-degree vertex into its min-degree neighbour; the largest degree seen bounds tw."""
    nbrs = [set(s) for s in g.neighbors()]
    alive = set(range(g.node_count))
    best = 0
    while len(alive) > 1:
        v = min(alive, key=lambda x: (len(nbrs[x]), x))
        best = max(best, len(nbrs[v]))
        if not nbrs[v]:
            alive.discard(v)
            continue
        w = min(nbrs[v], key=lambda x: (len(nbrs[x]), x))
        for u in nbrs[v]:
            nbrs[u].discard(v)
            if u != w:
                nbrs[u].add(w)
                nbrs[w].add(u)
        alive.discard(v)
    return best


def treewidth_lower(g: Multigraph) -> WidthResult:
    return WidthResult(max(degeneracy(g), minor_min_width(g)), None, LOWER)


# -------------------------------------------------------------- heuristics

def _greedy_elimination(g: Multigraph, score) -> list[int]:
    nbrs = [set(s) for s in g.neighbors()]
    alive = set(range(g.node_count))
    order = []
    while alive:
        v = min(alive, key=lambda x: (score(nbrs, x), x))
        order.append(v)
        for a in nbrs[v]:
            nbrs[a] |= nbrs[v] - {a}
            nbrs[a].discard(v)
        alive.discard(v)
    return order


def _degree(nbrs, v):
    return len(nbrs[v])


def _fill_in(nbrs, v):
    ns = list(nbrs[v])
    missing = 0
    for i, a in enumerate(ns):
        na = nbrs[a]
        missing += sum(1 for b in ns[i + 1:] if b not in na)
    return missing


def treewidth_upper(g: Multigraph) -> WidthResult:
    """Best of min-degree and min-fill elimination (lowest index breaks ties)."""
    simple = g.simplify()
    best = None
    for score in (_degree, _fill_in):
        d = decomposition_from_elimination(simple, _greedy_elimination(simple, score))
        if best is None or d.width < best.width:
            best = d
    return WidthResult(best.width, best, UPPER)


def _greedy_separation(nbrs: list[set[int]], start: int) -> list[int]:
    n = len(nbrs)
    placed = [False] * n
    outside_count = [len(s) for s in nbrs]  # neighbours not yet placed
    order = []
    frontier = {start}
    while len(order) < n:
        if not frontier:
            frontier = {min(v for v in range(n) if not placed[v])}

        def cost(v):
            closes = sum(1 for u in nbrs[v] if placed[u] and outside_count[u] == 1)
            opens = 1 if outside_count[v] > 0 else 0
            return (opens - closes, outside_count[v], v)

        v = min(frontier, key=cost)
        frontier.discard(v)
        placed[v] = True
        order.append(v)
        for u in nbrs[v]:
            outside_count[u] -= 1
            if not placed[u]:
                frontier.add(u)
    return order


def _peripheral(nbrs: list[set[int]], start: int) -> int:
    far = start
    for _ in range(2):
        dist = {far: 0}
        queue = [far]
        for v in queue:
            for u in sorted(nbrs[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        far = max(dist, key=lambda x: (dist[x], -x))
    return far


def pathwidth_upper(g: Multigraph) -> WidthResult:
    """Greedy vertex-separation orderings from a few deterministic starts; keep the best."""
    simple = g.simplify()
    n = simple.node_count
    if n == 0:
        empty = PathDecomposition((frozenset(),))
        return WidthResult(empty.width, empty, UPPER)
    nbrs = simple.neighbors()
    starts = sorted({0, min(range(n), key=lambda v: (len(nbrs[v]), v)), _peripheral(nbrs, 0)})
    best = None
    for s in starts:
        d = decomposition_from_separation(simple, _greedy_separation(nbrs, s))
        if best is None or d.width < best.width:
            best = d
    return WidthResult(best.width, best, UPPER)


# ------------------------------------------------------------------- exact

def _check_budget(g: Multigraph, budget: int) -> None:
    if g.node_count > budget:
        raise BudgetExceeded(f"{g.node_count} nodes exceeds the exact-solver budget of {budget}; "
                             "use treewidth_upper/pathwidth_upper instead")
    if g.node_count > MAX_EXACT_NODES:
        raise BudgetExceeded(f"exact search supports at most {MAX_EXACT_NODES} nodes")


def treewidth_exact(g: Multigraph, budget: int = DEFAULT_BUDGET) -> WidthResult:
    _check_budget(g, budget)
    simple = g.simplify()
    upper = treewidth_upper(simple)
    low = treewidth_lower(simple).value
    adj = _masks(simple)
    for k in range(low, upper.value):
        order = _kernels.elimination_order(adj, k)
        if order is not None:
            d = decomposition_from_elimination(simple, order)
            return WidthResult(d.width, d, EXACT)
    return WidthResult(upper.value, upper.witness, EXACT)


def pathwidth_exact(g: Multigraph, budget: int = DEFAULT_BUDGET) -> WidthResult:
    _check_budget(g, budget)
    simple = g.simplify()
    upper = pathwidth_upper(simple)
    low = treewidth_lower(simple).value
    adj = _masks(simple)
    for k in range(low, upper.value):
        order = _kernels.vertex_separation_order(adj, k)
        if order is not None:
            d = decomposition_from_separation(simple, order)
            return WidthResult(d.width, d, EXACT)
    return WidthResult(upper.value, upper.witness, EXACT)


def treewidth(g: Multigraph, budget: int = DEFAULT_BUDGET) -> WidthResult:
    """Exact when the graph fits the budget, otherwise the heuristic upper bound."""
    if g.node_count <= min(budget, MAX_EXACT_NODES):
        return treewidth_exact(g, budget)
    return treewidth_upper(g)


def pathwidth(g: Multigraph, budget: int = DEFAULT_BUDGET) -> WidthResult:
    if g.node_count <= min(budget, MAX_EXACT_NODES):
        return pathwidth_exact(g, budget)
    return pathwidth_upper(g)
