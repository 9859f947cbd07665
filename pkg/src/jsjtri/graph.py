"""Multigraphs, tree/path decompositions and the graph families used by the pipeline."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GraphParseError(ValueError):
    """Malformed edge-list document."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on nodes ``0..node_count-1``.

    Arcs are stored as normalized pairs ``(u, v)`` with ``u <= v``; parallel
    arcs appear repeatedly and loops are ``(v, v)``.
    """

    node_count: int
    arcs: tuple[tuple[int, int], ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        arcs = tuple(_norm(int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u < 0 or v >= self.node_count:
                raise ValueError(f"arc ({u}, {v}) references a missing node")
        object.__setattr__(self, "arcs", arcs)
        if self.labels is not None and len(self.labels) != self.node_count:
            raise ValueError("labels must name every node")

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def degree(self, v: int) -> int:
        # a loop contributes both of its ends
        return sum((a == v) + (b == v) for a, b in self.arcs)

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for u, v in self.arcs:
            deg[u] += 1
            deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def arc_multiset(self) -> Counter:
        return Counter(self.arcs)

    def neighbors(self) -> list[set[int]]:
        """Simple-graph neighbourhoods (loops and multiplicities dropped)."""
        nbrs: list[set[int]] = [set() for _ in range(self.node_count)]
        for u, v in self.arcs:
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
        return nbrs

    def simplify(self) -> "Multigraph":
        """Drop loops and collapse parallel arcs."""
        simple = sorted({a for a in self.arcs if a[0] != a[1]})
        return Multigraph(self.node_count, tuple(simple), self.labels)

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return True
        nbrs = self.neighbors()
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.node_count

    def same_as(self, other: "Multigraph") -> bool:
        """Labeled equality: same node count and same arc multiset."""
        return (self.node_count == other.node_count
                and self.arc_multiset() == other.arc_multiset())


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by host-tree nodes ``0..len(bags)-1``."""

    bags: tuple[frozenset[int], ...]
    host_arcs: tuple[tuple[int, int], ...] = ()

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def host_is_tree(self) -> bool:
        n = len(self.bags)
        if n == 0:
            return False
        if len(self.host_arcs) != n - 1:
            return False
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.host_arcs:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True


@dataclass(frozen=True)
class PathDecomposition:
    """Ordered bags; the host is the path through them in order."""

    bags: tuple[frozenset[int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def as_tree(self) -> TreeDecomposition:
        arcs = tuple((i, i + 1) for i in range(len(self.bags) - 1))
        return TreeDecomposition(self.bags, arcs)


@dataclass
class DecompositionReport:
    host_ok: bool
    node_coverage: bool
    arc_coverage: bool
    subtree_property: bool
    width: int
    problems: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (self.host_ok and self.node_coverage and self.arc_coverage
                and self.subtree_property)


def validate_tree_decomposition(g: Multigraph, d: TreeDecomposition | PathDecomposition
                                ) -> DecompositionReport:
    """Check the three decomposition conditions independently.

    A report is always returned; ``problems`` names a counter-witness for each
    failed condition.
    """
    if isinstance(d, PathDecomposition):
        d = d.as_tree()
    problems = []
    host_ok = d.host_is_tree()
    if not host_ok:
        problems.append("host is not a tree")

    covered = set().union(*d.bags) if d.bags else set()
    missing = [v for v in range(g.node_count) if v not in covered]
    if missing:
        problems.append(f"nodes not covered: {missing[:10]}")

    uncovered_arcs = []
    for u, v in set(g.arcs):
        if not any(u in b and v in b for b in d.bags):
            uncovered_arcs.append((u, v))
    if uncovered_arcs:
        problems.append(f"arcs not covered: {sorted(uncovered_arcs)[:10]}")

    host_nbrs: list[list[int]] = [[] for _ in d.bags]
    for a, b in d.host_arcs:
        host_nbrs[a].append(b)
        host_nbrs[b].append(a)
    broken = []
    for v in sorted(covered):
        holders = {i for i, b in enumerate(d.bags) if v in b}
        start = next(iter(holders))
        seen = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in host_nbrs[i]:
                if j in holders and j not in seen:
                    seen.add(j)
                    queue.append(j)
        if seen != holders:
            broken.append(v)
    if broken:
        problems.append(f"bags holding node {broken[0]} are not connected in the host")

    return DecompositionReport(
        host_ok=host_ok,
        node_coverage=not missing,
        arc_coverage=not uncovered_arcs,
        subtree_property=not broken,
        width=d.width,
        problems=problems,
    )


def subdivide_arcs(g: Multigraph, plan: Mapping[int, int]) -> Multigraph:
    """Replace arc ``g.arcs[i]`` by a path with ``plan[i]`` fresh inner nodes.

    Keys of ``plan`` are positions in ``g.arcs`` so parallel arcs can be
    addressed individually.
    """
    for i, times in plan.items():
        if not 0 <= i < g.arc_count:
            raise KeyError(f"unknown arc index {i}")
        if times < 0:
            raise ValueError("subdivision counts must be non-negative")
    arcs = []
    n = g.node_count
    for i, (u, v) in enumerate(g.arcs):
        times = plan.get(i, 0)
        prev = u
        for _ in range(times):
            arcs.append((prev, n))
            prev = n
            n += 1
        arcs.append((prev, v))
    return Multigraph(n, tuple(arcs))


# ---------------------------------------------------------------- generators

def path_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Multigraph:
    if n < 1:
        raise ValueError("cycle needs at least one node")
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_binary_tree(h: int) -> Multigraph:
    """Complete binary tree of height ``h`` (heap numbering, root 0)."""
    if h < 0:
        raise ValueError("height must be >= 0")
    n = 2 ** (h + 1) - 1
    return Multigraph(n, tuple(((i - 1) // 2, i) for i in range(1, n)))


def grid(k: int) -> Multigraph:
    """The k x k grid; node ``r*k + c``."""
    if k < 1:
        raise ValueError("side must be >= 1")
    arcs = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if c + 1 < k:
                arcs.append((v, v + 1))
            if r + 1 < k:
                arcs.append((v, v + k))
    return Multigraph(k * k, tuple(arcs))


# ----------------------------------------------------------------------- I/O

def parse_graph(text: str) -> Multigraph:
    """Parse the edge-list format (``p <n>`` header optional, ``#`` comments)."""
    arcs = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if declared is not None or arcs:
                raise GraphParseError(lineno, "header must come first and only once")
            if len(parts) != 2:
                raise GraphParseError(lineno, "expected 'p <node_count>'")
            declared = _parse_index(parts[1], lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError(lineno, f"expected two node indices, got {line!r}")
        arcs.append((_parse_index(parts[0], lineno), _parse_index(parts[1], lineno)))
    top = max((max(a) for a in arcs), default=-1)
    n = top + 1 if declared is None else declared
    if top >= n:
        raise GraphParseError(0, f"arc endpoint {top} exceeds declared node count {n}")
    return Multigraph(n, tuple(arcs))


def _parse_index(tok: str, lineno: int) -> int:
    try:
        value = int(tok, 10)
    except ValueError:
        raise GraphParseError(lineno, f"not an integer: {tok!r}") from None
    if value < 0:
        raise GraphParseError(lineno, f"negative node index {value}")
    return value


def write_graph(g: Multigraph) -> str:
    lines = [f"p {g.node_count}"]
    lines += [f"{u} {v}" for u, v in g.arcs]
    return "\n".join(lines) + "\n"


def from_arcs(arcs: Iterable[Sequence[int]], node_count: int | None = None) -> Multigraph:
    arcs = [tuple(a) for a in arcs]
    if node_count is None:
        node_count = max((max(a) for a in arcs), default=-1) + 1
    return Multigraph(node_count, tuple(arcs))
