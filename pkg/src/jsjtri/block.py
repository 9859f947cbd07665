"""Triangulated blocks: (torus with k holes) x circle.

The punctured torus is built as an ordered 2-complex (every triangle lists
its corners so that edge orientations agree on both sides), which lets each
prism ``triangle x [0, 1]`` be cut into three tetrahedra by the staircase
rule without any diagonal conflicts between neighbouring prisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .triangulation import Triangulation, TriangulationBuilder, boundary_summary, orientation

Vec = tuple[int, int]


class BlockConstructionError(RuntimeError):
    pass


@dataclass
class PuncturedTorus:
    """Ordered 2-complex: triangle ``i`` has corner vertices and edges at (01, 12, 02)."""

    vertex_count: int
    corners: list[tuple[int, int, int]]
    edges: list[tuple[int, int, int]]
    edge_count: int
    holes: list[int]  # boundary edge id of each hole, in creation order
    hole_triangle: list[int]  # triangle holding that boundary edge at position 01

    @property
    def triangle_count(self) -> int:
        return len(self.corners)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.triangle_count

    def boundary_edges(self) -> list[int]:
        uses = [0] * self.edge_count
        for es in self.edges:
            for e in es:
                uses[e] += 1
        return [e for e, n in enumerate(uses) if n == 1]


def triangulate_punctured_torus(k: int) -> PuncturedTorus:
    """Torus with ``k`` holes in ``3k + 2`` triangles, each hole a one-vertex loop.

    Start from the two-triangle torus and repeatedly replace a triangle
    ``(a, b, c)`` by four triangles around a new vertex ``x`` carrying a loop
    ``x -> x`` that bounds the hole.
    """
    if k < 1:
        raise ValueError("a block needs at least one boundary torus (k >= 1)")
    # one vertex; edges 0 = horizontal, 1 = vertical, 2 = diagonal
    corners = [(0, 0, 0), (0, 0, 0)]
    edges = [(0, 1, 2), (1, 0, 2)]
    nv, ne = 1, 3
    holes, hole_tri = [], []
    target = 1
    for _ in range(k):
        a, b, c = corners[target]
        ab, bc, ac = edges[target]
        x = nv
        nv += 1
        loop, e1, e2, xb, xc = range(ne, ne + 5)
        ne += 5
        corners[target] = (x, x, a)
        edges[target] = (loop, e2, e1)
        holes.append(loop)
        hole_tri.append(target)
        corners += [(x, a, b), (x, b, c), (x, a, c)]
        edges += [(e2, ab, xb), (xb, bc, xc), (e1, ac, xc)]
        target = len(corners) - 2  # next hole goes into the (x, b, c) triangle
    return PuncturedTorus(nv, corners, edges, ne, holes, hole_tri)


# face slots of the three prism tetrahedra
#   A = [v0 v1 v2 w2], B = [v0 v1 w1 w2], C = [v0 w0 w1 w2]
# square over edge position (i, j): lower triangle [vi vj wj], upper [vi wi wj]
_SQUARES = {
    0: ((1, 3, (0, 1, 2)), (2, 3, (0, 1, 2))),  # edge 01
    1: ((0, 0, (1, 2, 3)), (1, 0, (1, 2, 3))),  # edge 12
    2: ((0, 1, (0, 2, 3)), (2, 2, (0, 1, 3))),  # edge 02
}


@dataclass
class BoundaryTorus:
    """One boundary torus with lattice positions of its two triangles' corners.

    Positions are in the ``(meridian, fiber)`` basis, translated so that each
    triangle is a unimodular lattice triangle; the framing is normalized so
    that every torus of every block has the same handedness.
    """

    faces: list[tuple[int, int, dict[int, Vec]]]
    meridian: Vec = (1, 0)
    fiber: Vec = (0, 1)

    def shifted(self, offset: int) -> "BoundaryTorus":
        return BoundaryTorus([(t + offset, f, dict(pos)) for t, f, pos in self.faces],
                             self.meridian, self.fiber)


@dataclass
class Block:
    k: int
    triangulation: Triangulation
    tori: list[BoundaryTorus] = field(default_factory=list)
    surface: PuncturedTorus | None = None

    @property
    def fiber_slope(self) -> Vec:
        return (0, 1)

    def boundary_index(self) -> list[dict]:
        out = []
        for i, torus in enumerate(self.tori):
            out.append({
                "torus": i,
                "triangles": [[t, f] for t, f, _ in torus.faces],
                "corner_positions": [{str(lab): list(p) for lab, p in sorted(pos.items())}
                                     for _, _, pos in torus.faces],
                "meridian": list(torus.meridian),
                "fiber": list(torus.fiber),
            })
        return out


def _face_orientation(sign: int, face: int, pos: dict[int, Vec]) -> int:
    """Orientation of the boundary face in the lattice plane, relative to the tetrahedron sign."""
    a, b, c = sorted(pos)
    (x0, y0), (x1, y1), (x2, y2) = pos[a], pos[b], pos[c]
    area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
    return sign * (-1) ** face * (1 if area > 0 else -1)


def build_block(k: int) -> Block:
    """Triangulate (torus with ``k`` holes) x circle with ``9k + 6`` tetrahedra."""
    surf = triangulate_punctured_torus(k)
    n = surf.triangle_count
    b = TriangulationBuilder(3 * n)
    for i in range(n):
        ta, tb, tc = 3 * i, 3 * i + 1, 3 * i + 2
        b.glue(ta, 2, tb, (0, 1, 2, 3))  # [v0 v1 w2]
        b.glue(tb, 1, tc, (0, 1, 2, 3))  # [v0 w1 w2]
        b.glue(tc, 0, ta, (3, 0, 1, 2))  # top [w0 w1 w2] onto the bottom of the prism above

    # pair up the squares over every interior edge
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for i, es in enumerate(surf.edges):
        for position, e in enumerate(es):
            occurrences.setdefault(e, []).append((i, position))
    for e, occ in occurrences.items():
        if len(occ) == 1:
            continue
        if len(occ) != 2:
            raise BlockConstructionError(f"edge {e} lies on {len(occ)} triangles")
        (i, pi), (j, pj) = occ
        for half in (0, 1):
            ti, fi, li = _SQUARES[pi][half]
            tj, fj, lj = _SQUARES[pj][half]
            perm = [0] * 4
            for x, y in zip(li, lj):
                perm[x] = y
            perm[fi] = fj
            b.glue(3 * i + ti, fi, 3 * j + tj, perm)

    tri = b.freeze()
    signs = orientation(tri)
    if signs is None:
        raise BlockConstructionError(f"block k={k} came out non-orientable")

    tori = []
    for e, i in zip(surf.holes, surf.hole_triangle):
        if surf.edges[i][0] != e:
            raise BlockConstructionError("hole loop must sit at position 01")
        (tl, fl, ll), (tu, fu, lu) = _SQUARES[0]
        lower = {ll[0]: (0, 0), ll[1]: (1, 0), ll[2]: (1, 1)}  # v0 v1 w1
        upper = {lu[0]: (0, 0), lu[1]: (0, 1), lu[2]: (1, 1)}  # v0 w0 w1
        faces = [(3 * i + tl, fl, lower), (3 * i + tu, fu, upper)]
        hands = {_face_orientation(signs[t], f, pos) for t, f, pos in faces}
        if len(hands) != 1:
            raise BlockConstructionError("boundary torus triangles disagree on orientation")
        if hands.pop() < 0:
            # reverse the meridian so all tori share one handedness
            faces = [(t, f, {lab: (-x, y) for lab, (x, y) in pos.items()}) for t, f, pos in faces]
        tori.append(BoundaryTorus(faces))

    block = Block(k, tri, tori, surf)
    _check_block(block)
    return block


def _check_block(block: Block) -> None:
    k = block.k
    tri = block.triangulation
    if tri.size != 9 * k + 6:
        raise BlockConstructionError(f"expected {9 * k + 6} tetrahedra, built {tri.size}")
    summary = boundary_summary(tri)
    if summary.count != k:
        raise BlockConstructionError(f"expected {k} boundary tori, found {summary.count}")
    for comp in summary.components:
        if comp.triangles != 2 or comp.vertices != 1 or comp.euler_characteristic != 0:
            raise BlockConstructionError("boundary component is not a two-triangle one-vertex torus")
    listed = {(t, f) for torus in block.tori for t, f, _ in torus.faces}
    if listed != set(tri.boundary_faces()):
        raise BlockConstructionError("recorded boundary tori do not match the boundary faces")


def handedness(tri: Triangulation, torus: BoundaryTorus, signs: list[int] | None = None) -> int:
    signs = signs if signs is not None else orientation(tri)
    values = {_face_orientation(signs[t], f, pos) for t, f, pos in torus.faces}
    if len(values) != 1:
        raise BlockConstructionError("inconsistent boundary orientation")
    return values.pop()


__all__ = ["Block", "BoundaryTorus", "PuncturedTorus", "BlockConstructionError",
           "build_block", "triangulate_punctured_torus", "handedness"]
