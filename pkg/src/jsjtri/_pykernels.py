"""Pure-Python search kernels for exact treewidth and pathwidth.

Graphs arrive as lists of neighbour bitmasks (``adj[v]`` has bit ``u`` set
when ``u`` and ``v`` are adjacent).  Both searches decide "width <= k" and
return a witness ordering or ``None``.  The compiled module exposes the same
functions with identical results.
"""

from __future__ import annotations

import sys

BACKEND = "python"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _inner_boundary(adj: list[int], placed: int) -> int:
    outside = ~placed
    return sum(1 for u in _bits(placed) if adj[u] & outside)


def vertex_separation_order(adj: list[int], k: int, node_limit: int = 0) -> list[int] | None:
    """An ordering whose every prefix has at most ``k`` vertices with a later neighbour.

    Adding a vertex that does not grow the boundary is always safe
    (the boundary size is submodular), so such moves are taken greedily
    without branching.  ``node_limit`` caps the number of expanded states
    (0 means unlimited); exceeding it raises ``RuntimeError``.
    """
    n = len(adj)
    full = (1 << n) - 1
    failed: set[int] = set()
    expanded = 0

    def boundary_after(placed: int, v: int) -> int:
        s = placed | (1 << v)
        out = full & ~s
        return sum(1 for u in _bits(s) if adj[u] & out)

    def search(placed: int, b: int) -> list[int] | None:
        nonlocal expanded
        if placed == full:
            return []
        if placed in failed:
            return None
        expanded += 1
        if node_limit and expanded > node_limit:
            raise RuntimeError("search state limit exceeded")
        rest = full & ~placed
        for v in _bits(rest):
            nb = boundary_after(placed, v)
            if nb <= b:
                tail = search(placed | (1 << v), nb)
                if tail is None:
                    failed.add(placed)
                    return None
                return [v] + tail
        for v in _bits(rest):
            nb = boundary_after(placed, v)
            if nb <= k:
                tail = search(placed | (1 << v), nb)
                if tail is not None:
                    return [v] + tail
        failed.add(placed)
        return None

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        return search(0, 0)
    finally:
        sys.setrecursionlimit(limit)


def _eliminated_neighbourhoods(adj: list[int], eliminated: int, full: int) -> list[int]:
    """Neighbourhoods in the graph left after eliminating ``eliminated``.

    Each connected component of the eliminated set turns its neighbourhood
    into a clique.
    """
    n = len(adj)
    rest = full & ~eliminated
    nb = [adj[v] & rest for v in range(n)]
    seen = 0
    for s in _bits(eliminated):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            grow = 0
            for u in _bits(frontier):
                grow |= adj[u]
            grow &= eliminated & ~comp
            comp |= grow
            frontier = grow
        seen |= comp
        border = 0
        for u in _bits(comp):
            border |= adj[u]
        border &= rest
        for v in _bits(border):
            nb[v] |= border & ~(1 << v)
    return nb


def _is_clique(nb: list[int], members: int) -> bool:
    for u in _bits(members):
        if (members & ~(1 << u)) & ~nb[u]:
            return False
    return True


def elimination_order(adj: list[int], k: int, node_limit: int = 0) -> list[int] | None:
    """An elimination ordering of width at most ``k``, or ``None``.

    Simplicial and almost-simplicial vertices of degree <= k are eliminated
    without branching; failed eliminated sets are memoized.
    """
    n = len(adj)
    full = (1 << n) - 1
    failed: set[int] = set()
    expanded = 0

    def search(eliminated: int) -> list[int] | None:
        nonlocal expanded
        rest = full & ~eliminated
        if rest.bit_count() <= k + 1:
            return list(_bits(rest))
        if eliminated in failed:
            return None
        expanded += 1
        if node_limit and expanded > node_limit:
            raise RuntimeError("search state limit exceeded")
        nb = _eliminated_neighbourhoods(adj, eliminated, full)
        candidates = []
        forced = -1
        for v in _bits(rest):
            d = nb[v].bit_count()
            if d > k:
                continue
            candidates.append(v)
            if _is_clique(nb, nb[v]):
                forced = v
                break
            for w in _bits(nb[v]):
                if _is_clique(nb, nb[v] & ~(1 << w)):
                    forced = v
                    break
            if forced >= 0:
                break
        if forced >= 0:
            tail = search(eliminated | (1 << forced))
            if tail is None:
                failed.add(eliminated)
                return None
            return [forced] + tail
        for v in candidates:
            tail = search(eliminated | (1 << v))
            if tail is not None:
                return [v] + tail
        failed.add(eliminated)
        return None

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))
    try:
        return search(0)
    finally:
        sys.setrecursionlimit(limit)
