"""Generalized 3-dimensional triangulations stored as face-gluing tables.

Tetrahedron ``t`` has vertices labelled 0..3 and face ``f`` is the face
opposite vertex ``f``.  A glued slot is ``(partner, partner_face, perm)``
where ``perm[i]`` is the partner label that vertex ``i`` is sent to; the
unglued vertex ``f`` maps to ``partner_face``.
"""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .graph import Multigraph

Perm = tuple[int, int, int, int]
Slot = Optional[tuple[int, int, Perm]]

IDENTITY: Perm = (0, 1, 2, 3)
EDGES = tuple(combinations(range(4), 2))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}


class StructureError(ValueError):
    """Gluing table violates the face-pairing invariants."""


class TriangulationParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def perm_inverse(p: Sequence[int]) -> Perm:
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_sign(p: Sequence[int]) -> int:
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[q[i]] for i in range(4))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _ParityUnionFind:
    """Union-find carrying a Z/2 label relative to the root."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n
        self.conflict: set[int] = set()

    def find(self, x: int) -> tuple[int, int]:
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, a: int, b: int, rel: int) -> None:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa ^ pb != rel:
                self.conflict.add(ra)
            return
        lo, hi = min(ra, rb), max(ra, rb)
        self.parent[hi] = lo
        self.parity[hi] = pa ^ pb ^ rel
        if hi in self.conflict:
            self.conflict.discard(hi)
            self.conflict.add(lo)

    def conflicted(self, x: int) -> bool:
        return self.find(x)[0] in self.conflict


@dataclass(frozen=True)
class Triangulation:
    gluings: tuple[tuple[Slot, Slot, Slot, Slot], ...]

    def __post_init__(self):
        normalized = []
        for slots in self.gluings:
            if len(slots) != 4:
                raise StructureError("every tetrahedron needs exactly 4 face slots")
            row = []
            for s in slots:
                if s is None:
                    row.append(None)
                else:
                    t, f, p = s
                    row.append((int(t), int(f), tuple(int(x) for x in p)))
            normalized.append(tuple(row))
        object.__setattr__(self, "gluings", tuple(normalized))
        self.check()

    @property
    def size(self) -> int:
        return len(self.gluings)

    def check(self) -> None:
        """Raise :class:`StructureError` on the first slot breaking the involution."""
        n = len(self.gluings)
        for t, slots in enumerate(self.gluings):
            for f, s in enumerate(slots):
                if s is None:
                    continue
                u, g, p = s
                where = f"tetrahedron {t} face {f}"
                if not 0 <= u < n:
                    raise StructureError(f"{where}: partner {u} does not exist")
                if not 0 <= g < 4:
                    raise StructureError(f"{where}: partner face {g} out of range")
                if sorted(p) != [0, 1, 2, 3]:
                    raise StructureError(f"{where}: {p} is not a permutation")
                if p[f] != g:
                    raise StructureError(f"{where}: permutation does not send face {f} to face {g}")
                if (u, g) == (t, f):
                    raise StructureError(f"{where}: face glued to itself")
                back = self.gluings[u][g]
                if back is None or back[0] != t or back[1] != f or back[2] != perm_inverse(p):
                    raise StructureError(f"{where}: partner slot ({u}, {g}) does not point back")

    def boundary_faces(self) -> list[tuple[int, int]]:
        return [(t, f) for t, slots in enumerate(self.gluings)
                for f, s in enumerate(slots) if s is None]

    def face_pairs(self) -> list[tuple[int, int, int, int]]:
        """Each internal gluing once, as ``(t, f, t2, f2)`` with ``(t, f) < (t2, f2)``."""
        pairs = []
        for t, slots in enumerate(self.gluings):
            for f, s in enumerate(slots):
                if s is not None and (t, f) < (s[0], s[1]):
                    pairs.append((t, f, s[0], s[1]))
        return pairs


class TriangulationBuilder:
    """Mutable gluing table used while stitching pieces together."""

    def __init__(self, size: int = 0):
        self.slots: list[list[Slot]] = [[None] * 4 for _ in range(size)]

    @property
    def size(self) -> int:
        return len(self.slots)

    def add(self, count: int = 1) -> int:
        first = len(self.slots)
        self.slots.extend([None] * 4 for _ in range(count))
        return first

    def extend(self, tri: Triangulation) -> int:
        """Append a copy of ``tri``; returns the index offset."""
        off = len(self.slots)
        for slots in tri.gluings:
            self.slots.append([None if s is None else (s[0] + off, s[1], s[2]) for s in slots])
        return off

    def glue(self, t: int, f: int, u: int, perm: Sequence[int]) -> None:
        perm = tuple(perm)
        g = perm[f]
        if self.slots[t][f] is not None or self.slots[u][g] is not None:
            raise StructureError(f"face ({t}, {f}) or ({u}, {g}) is already glued")
        if (t, f) == (u, g):
            raise StructureError(f"face ({t}, {f}) cannot be glued to itself")
        self.slots[t][f] = (u, g, perm)
        self.slots[u][g] = (t, f, perm_inverse(perm))

    def freeze(self) -> Triangulation:
        return Triangulation(tuple(tuple(row) for row in self.slots))


# ------------------------------------------------------------- dual graph

def dual_graph(tri: Triangulation) -> Multigraph:
    """One node per tetrahedron, one arc per internal face pair."""
    return Multigraph(tri.size, tuple((t, u) for t, _, u, _ in tri.face_pairs()))


# -------------------------------------------------------------- skeleton

@dataclass
class Skeleton:
    vertex_of: list[int]  # (t*4 + v) -> vertex class id
    edge_of: list[int]  # (t*6 + e) -> edge class id
    reversed_edges: set[int]  # edge classes identified with themselves reversed
    vertices: int
    edges: int
    triangles: int
    tetrahedra: int

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.triangles - self.tetrahedra


def _relabel(find, count: int) -> tuple[list[int], int]:
    ids: dict[int, int] = {}
    out = []
    for i in range(count):
        r = find(i)
        if r not in ids:
            ids[r] = len(ids)
        out.append(ids[r])
    return out, len(ids)


def skeleton(tri: Triangulation) -> Skeleton:
    n = tri.size
    verts = _UnionFind(4 * n)
    edges = _ParityUnionFind(6 * n)
    for t, f, u, _ in tri.face_pairs():
        p = tri.gluings[t][f][2]
        for v in range(4):
            if v != f:
                verts.union(4 * t + v, 4 * u + p[v])
        for i, j in EDGES:
            if f in (i, j):
                continue
            a, b = p[i], p[j]
            rel = 1 if a > b else 0
            edges.union(6 * t + EDGE_INDEX[(i, j)], 6 * u + EDGE_INDEX[(min(a, b), max(a, b))], rel)
    vertex_of, nv = _relabel(verts.find, 4 * n)
    edge_of, ne = _relabel(lambda x: edges.find(x)[0], 6 * n)
    reversed_classes = {edge_of[x] for x in range(6 * n) if edges.conflicted(x)}
    nf = 4 * n - len(tri.face_pairs())
    return Skeleton(vertex_of, edge_of, reversed_classes, nv, ne, nf, n)


def skeleton_counts(tri: Triangulation) -> tuple[int, int, int, int]:
    s = skeleton(tri)
    return s.vertices, s.edges, s.triangles, s.tetrahedra


def euler_characteristic(tri: Triangulation) -> int:
    return skeleton(tri).euler_characteristic


def is_closed(tri: Triangulation) -> bool:
    return not tri.boundary_faces()


def orientation(tri: Triangulation) -> list[int] | None:
    """Return a consistent +-1 sign per tetrahedron, or None if non-orientable.

    Tetrahedra with signs ``a`` and ``b`` glued by ``perm`` are consistent when
    ``a * b * sign(perm) == -1``.
    """
    n = tri.size
    sign = [0] * n
    for start in range(n):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for s in tri.gluings[t]:
                if s is None:
                    continue
                u, _, p = s
                want = -sign[t] * perm_sign(p)
                if sign[u] == 0:
                    sign[u] = want
                    queue.append(u)
                elif sign[u] != want:
                    return None
    return sign


def is_orientable(tri: Triangulation) -> bool:
    return orientation(tri) is not None


# ------------------------------------------------------------ link checks

@dataclass
class VertexLink:
    vertex: int
    triangles: int
    euler_characteristic: int
    closed: bool

    @property
    def ok(self) -> bool:
        return (self.closed and self.euler_characteristic == 2) or (
            not self.closed and self.euler_characteristic == 1)

    @property
    def kind(self) -> str:
        if self.closed:
            return "sphere" if self.euler_characteristic == 2 else f"closed(chi={self.euler_characteristic})"
        return "disk" if self.euler_characteristic == 1 else f"bounded(chi={self.euler_characteristic})"


@dataclass
class LinkReport:
    vertices: list[VertexLink]
    reversed_edges: list[int]

    @property
    def ok(self) -> bool:
        return not self.reversed_edges and all(v.ok for v in self.vertices)

    @property
    def all_spheres(self) -> bool:
        return all(v.closed and v.euler_characteristic == 2 for v in self.vertices)

    def failures(self) -> list[str]:
        out = [f"vertex {v.vertex}: link is {v.kind}" for v in self.vertices if not v.ok]
        out += [f"edge {e} is identified with itself in reverse" for e in self.reversed_edges]
        return out


def vertex_link_check(tri: Triangulation, sk: Skeleton | None = None) -> LinkReport:
    """Build every vertex link and classify it.

    Link triangles are the corners ``(t, v)``; link vertices are edge-ends
    ``(t, v, w)``; link edges are the face slots ``(t, v, f)`` with ``f != v``.
    """
    sk = sk or skeleton(tri)
    n = tri.size
    ends = _UnionFind(12 * n)

    def end_id(t, v, w):
        return 12 * t + 3 * v + (w if w < v else w - 1)

    boundary_sides = Counter()
    for t, slots in enumerate(tri.gluings):
        for f, s in enumerate(slots):
            if s is None:
                for v in range(4):
                    if v != f:
                        boundary_sides[sk.vertex_of[4 * t + v]] += 1
                continue
            u, _, p = s
            if (t, f) > (u, s[1]):
                continue
            for v in range(4):
                if v == f:
                    continue
                for w in range(4):
                    if w != f and w != v:
                        ends.union(end_id(t, v, w), end_id(u, p[v], p[w]))

    corners = Counter(sk.vertex_of)
    link_vertices: dict[int, set[int]] = defaultdict(set)
    for t in range(n):
        for v in range(4):
            cls = sk.vertex_of[4 * t + v]
            for w in range(4):
                if w != v:
                    link_vertices[cls].add(ends.find(end_id(t, v, w)))

    reports = []
    for cls in range(sk.vertices):
        fl = corners[cls]
        bl = boundary_sides[cls]
        el = (3 * fl + bl) // 2
        chi = len(link_vertices[cls]) - el + fl
        reports.append(VertexLink(cls, fl, chi, bl == 0))
    return LinkReport(reports, sorted(sk.reversed_edges))


# ------------------------------------------------------ boundary surfaces

@dataclass
class BoundaryComponent:
    faces: list[tuple[int, int]]
    vertices: int
    edges: int

    @property
    def triangles(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.triangles

    @property
    def genus(self) -> Optional[int]:
        chi = self.euler_characteristic
        return 1 - chi // 2 if chi % 2 == 0 else None


@dataclass
class SurfaceSummary:
    components: list[BoundaryComponent] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.components)


def boundary_summary(tri: Triangulation, sk: Skeleton | None = None) -> SurfaceSummary:
    sk = sk or skeleton(tri)
    faces = tri.boundary_faces()
    uf = _UnionFind(len(faces))
    by_edge: dict[int, int] = {}
    face_edges = []
    face_verts = []
    for k, (t, f) in enumerate(faces):
        vs = [v for v in range(4) if v != f]
        es = [sk.edge_of[6 * t + EDGE_INDEX[(a, b)]] for a, b in combinations(vs, 2)]
        face_edges.append(es)
        face_verts.append([sk.vertex_of[4 * t + v] for v in vs])
        for e in es:
            if e in by_edge:
                uf.union(k, by_edge[e])
            else:
                by_edge[e] = k
    groups: dict[int, list[int]] = defaultdict(list)
    for k in range(len(faces)):
        groups[uf.find(k)].append(k)
    comps = []
    for root in sorted(groups):
        ks = groups[root]
        comps.append(BoundaryComponent(
            faces=[faces[k] for k in ks],
            vertices=len({v for k in ks for v in face_verts[k]}),
            edges=len({e for k in ks for e in face_edges[k]}),
        ))
    return SurfaceSummary(comps)


# ------------------------------------------------------------------- I/O

def write_triangulation(tri: Triangulation) -> str:
    lines = [f"tri {tri.size}"]
    for slots in tri.gluings:
        cells = []
        for s in slots:
            if s is None:
                cells.append("bdry")
            else:
                cells.append(f"{s[0]}:{s[1]}:{''.join(map(str, s[2]))}")
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def read_triangulation(text: str) -> Triangulation:
    rows: list[tuple[int, list[str]]] = []
    count = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if count is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "tri" or not parts[1].isdigit():
                raise TriangulationParseError(lineno, "expected header 'tri <count>'")
            count = int(parts[1])
            continue
        rows.append((lineno, line.split()))
    if count is None:
        raise TriangulationParseError(0, "missing 'tri' header")
    if len(rows) != count:
        raise TriangulationParseError(rows[-1][0] if rows else 0,
                                      f"header declares {count} tetrahedra, found {len(rows)}")
    gluings = []
    for lineno, cells in rows:
        if len(cells) != 4:
            raise TriangulationParseError(lineno, f"expected 4 slots, found {len(cells)}")
        slots = []
        for cell in cells:
            if cell == "bdry":
                slots.append(None)
                continue
            parts = cell.split(":")
            if (len(parts) != 3 or not parts[0].isdigit() or parts[1] not in "0123"
                    or len(parts[1]) != 1 or len(parts[2]) != 4 or sorted(parts[2]) != list("0123")):
                raise TriangulationParseError(lineno, f"malformed slot {cell!r}")
            slots.append((int(parts[0]), int(parts[1]), tuple(int(c) for c in parts[2])))
        gluings.append(tuple(slots))
    try:
        return Triangulation(tuple(gluings))
    except StructureError as exc:
        raise TriangulationParseError(0, str(exc)) from None


def from_gluings(gluings: Iterable[Sequence[Slot]]) -> Triangulation:
    return Triangulation(tuple(tuple(row) for row in gluings))
