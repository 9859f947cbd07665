"""Torus slopes, Farey distance and layered realizations of torus gluings.

Coordinates on a boundary torus are integer vectors in the block's
``(meridian, fiber)`` basis.  A one-vertex torus triangulation is a
*tiling*: its three edges have slopes ``{a, b, a + b}`` forming a Farey
triangle, and the standard tiling is ``{(1, 0), (0, 1), (1, 1)}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, int]
Mat = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Mat = ((1, 0), (0, 1))
SWAP: Mat = ((0, 1), (1, 0))
STANDARD_TILING: frozenset = frozenset({(1, 0), (0, 1), (1, 1)})

# partial-quotient-2 steps: each pair of layers pushes the fiber one Farey step further
_L2: Mat = ((1, 2), (0, 1))
_R2: Mat = ((1, 0), (2, 1))


class GluingError(RuntimeError):
    """A torus map could not be realized on the given boundary framing."""


# ------------------------------------------------------------------ slopes

@dataclass(frozen=True, order=True)
class Slope:
    """Unoriented primitive class ``p/q``; canonical with ``q > 0`` or ``(1, 0)``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if (p, q) == (0, 0) or gcd(p, q) != 1:
            raise ValueError(f"({p}, {q}) is not a primitive vector")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, v: Sequence[int]) -> "Slope":
        return cls(v[0], v[1])

    def vec(self) -> Vec:
        return (self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def canonical(v: Sequence[int]) -> Vec:
    return Slope.of(v).vec()


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def farey_adjacent(a: Slope, b: Slope) -> bool:
    return abs(det2(a.vec(), b.vec())) == 1


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def _distance_from_infinity(x: int, y: int) -> int:
    """Farey distance from 1/0 to x/y (y > 0, gcd 1).

    Geodesics stay inside the ladder of fans spanned by the convergents of
    x/y, and each pair of consecutive convergents separates the ladder, so
    d(c_k) = min(d(c_{k-1}) + 1, d(c_{k-2}) + a_k): either step across from
    the previous convergent or walk the whole rim of fan k.
    """
    if y == 1:
        return 1
    # translation fixes infinity, so work with x/y = [0; a1, ..., an]
    prev, cur = 0, 1  # distances to 1/0 and 0/1
    p, q = y, x % y
    while q:
        a = p // q
        p, q = q, p - a * q
        prev, cur = cur, min(cur + 1, prev + a)
    return cur


def farey_distance(a: Slope | Sequence[int], b: Slope | Sequence[int]) -> int:
    """Graph distance between two slopes in the Farey graph."""
    a = a if isinstance(a, Slope) else Slope.of(a)
    b = b if isinstance(b, Slope) else Slope.of(b)
    if a == b:
        return 0
    p, q = a.p, a.q
    _, s, r = _ext_gcd(p, q)  # p*s + q*r = 1
    # rows of the SL2 matrix sending (p, q) to (1, 0)
    x = s * b.p + r * b.q
    y = -q * b.p + p * b.q
    if y < 0:
        x, y = -x, -y
    if y == 0:
        return 0
    return _distance_from_infinity(x, y)


def slopes_in_box(bound: int) -> list[Slope]:
    out = []
    for q in range(0, bound + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) == 1 and (q > 0 or p == 1):
                out.append(Slope(p, q))
    return out


def farey_bfs(source: Slope, bound: int) -> dict[Slope, int]:
    """Brute-force BFS in the Farey graph restricted to ``|p|, |q| <= bound``."""
    nodes = slopes_in_box(bound)
    seen = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in nodes:
            if v not in seen and abs(u.p * v.q - u.q * v.p) == 1:
                seen[v] = seen[u] + 1
                queue.append(v)
    return seen


# -------------------------------------------------------------- torus maps

def mat_mul(a: Mat, b: Mat) -> Mat:
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def mat_det(a: Mat) -> int:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def mat_inv(a: Mat) -> Mat:
    d = mat_det(a)
    if abs(d) != 1:
        raise ValueError("matrix is not unimodular")
    return ((a[1][1] * d, -a[0][1] * d), (-a[1][0] * d, a[0][0] * d))


def mat_apply(a: Mat, v: Sequence[int]) -> Vec:
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


def mat_from_columns(u: Vec, v: Vec) -> Mat:
    return ((u[0], v[0]), (u[1], v[1]))


def mat_product(mats: Iterable[Mat]) -> Mat:
    out = IDENTITY
    for m in mats:
        out = mat_mul(out, m)
    return out


@dataclass(frozen=True)
class TorusMap:
    """Unimodular matrix sending source-basis coordinates to target-basis coordinates."""

    matrix: Mat

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if abs(mat_det(m)) != 1:
            raise ValueError(f"{m} has determinant {mat_det(m)}, expected +-1")

    @property
    def det(self) -> int:
        return mat_det(self.matrix)

    def __call__(self, v: Sequence[int]) -> Vec:
        return mat_apply(self.matrix, v)

    def slope_image(self, s: Slope) -> Slope:
        return Slope.of(self(s.vec()))


def gluing_distance(a: TorusMap | Mat, fiber_src: Slope, fiber_dst: Slope) -> int:
    """Farey distance between the image of the source fiber and the target fiber."""
    a = a if isinstance(a, TorusMap) else TorusMap(a)
    return farey_distance(a.slope_image(fiber_src), fiber_dst)


def _basis_to(s: Slope) -> Mat:
    """An SL2 matrix sending (0, 1) to the vector of ``s``."""
    _, x, y = _ext_gcd(s.p, s.q)  # p*x + q*y = 1
    return ((y, s.p), (-x, s.q))


def pick_high_distance_map(distance: int, fiber_src: Slope = Slope(0, 1),
                           fiber_dst: Slope = Slope(0, 1), variant: int = 0) -> TorusMap:
    """Deterministic orientation-reversing map whose fiber distance is >= ``distance``.

    The core word alternates ``L^2`` and ``R^2`` (continued fraction with all
    partial quotients 2) and uses at most ``2 * distance`` layers.
    ``variant`` (0..3) selects among symmetric copies with identical distance
    and layer count.
    """
    if distance < 1:
        raise ValueError("distance must be >= 1")
    word = IDENTITY
    # fiber distance of word*swap is 1 + 2*floor(factors/2), at 2 layers per factor
    factors = distance - 1 if distance % 2 else distance
    for i in range(factors):
        word = mat_mul(word, _L2 if i % 2 == 0 else _R2)
    core = mat_mul(word, SWAP)
    sym = ((1, 0), (1, -1))  # fixes the fiber slope and the standard tiling
    if variant & 1:
        core = mat_mul(mat_mul(sym, core), sym)
    if variant & 2:
        core = tuple(tuple(-x for x in row) for row in core)
    full = mat_mul(mat_mul(_basis_to(fiber_dst), core), mat_inv(_basis_to(fiber_src)))
    return TorusMap(full)


# ------------------------------------------------------- layered tilings

def tiling_of(m: Mat) -> frozenset:
    a = (m[0][0], m[1][0])
    b = (m[0][1], m[1][1])
    return frozenset({canonical(a), canonical(b), canonical((a[0] + b[0], a[1] + b[1]))})


def _l1(v: Vec) -> int:
    return abs(v[0]) + abs(v[1])


def _tiling_basis(tiling: frozenset) -> Mat:
    """Columns ``u, v`` with ``u + v`` the third edge of the tiling (u, v the two shortest)."""
    vecs = sorted(tiling, key=lambda v: (_l1(v), v))
    u, v, w = vecs
    if canonical((u[0] + v[0], u[1] + v[1])) != w:
        v = (-v[0], -v[1])
    return mat_from_columns(u, v)


def tiling_path(target: frozenset) -> list[frozenset]:
    """Geodesic in the Farey dual tree from the standard tiling to ``target``."""
    path = [target]
    cur = target
    while cur != STANDARD_TILING:
        ranked = sorted(cur, key=_l1)
        big = ranked[2]
        if _l1(ranked[1]) == _l1(big):
            raise GluingError(f"tiling {sorted(cur)} has no unique newest edge")
        u, v = ranked[0], ranked[1]
        plus, minus = canonical((u[0] + v[0], u[1] + v[1])), canonical((u[0] - v[0], u[1] - v[1]))
        smaller = minus if plus == big else plus
        cur = frozenset({u, v, smaller})
        path.append(cur)
    path.reverse()
    return path


def is_flip_matrix(e: Mat) -> bool:
    """True when the standard tiling and its image under ``e`` differ by one flip."""
    return len(STANDARD_TILING & tiling_of(e)) == 2


@dataclass(frozen=True)
class Layer:
    removed: Vec  # edge slope covered by the new tetrahedron
    added: Vec  # new boundary edge slope
    matrix: Mat  # change of framing performed by this flip


@dataclass
class LayeredGluing:
    map: TorusMap
    layers: list[Layer] = field(default_factory=list)
    achieved_distance: int = 0

    @property
    def tetrahedron_count(self) -> int:
        return len(self.layers)

    def composite(self) -> Mat:
        return mat_product(layer.matrix for layer in self.layers)


def realize_as_layers(a: TorusMap | Mat, fiber_src: Slope = Slope(0, 1),
                      fiber_dst: Slope = Slope(0, 1)) -> LayeredGluing:
    """Flip sequence carrying the standard tiling onto ``a(standard tiling)``.

    Each layer's matrix is the framing change of one flip; their ordered
    product equals ``a`` exactly.
    """
    a = a if isinstance(a, TorusMap) else TorusMap(a)
    path = tiling_path(tiling_of(a.matrix))
    if len(path) == 1 and a.matrix != IDENTITY:
        # a symmetry of the standard tiling: flip one edge and flip it back
        path = [STANDARD_TILING, tiling_of(((1, 1), (0, 1))), STANDARD_TILING]
    bases = [IDENTITY] + [_tiling_basis(t) for t in path[1:-1]] + ([a.matrix] if len(path) > 1 else [])
    layers = []
    for i in range(1, len(path)):
        before, after = path[i - 1], path[i]
        (removed,) = before - after
        (added,) = after - before
        e = mat_mul(mat_inv(bases[i - 1]), bases[i])
        if not is_flip_matrix(e):
            raise GluingError(f"step {i} is not a single flip")
        layers.append(Layer(removed, added, e))
    if mat_product(l.matrix for l in layers) != a.matrix:
        raise GluingError("flip product does not reproduce the map")
    return LayeredGluing(a, layers, gluing_distance(a, fiber_src, fiber_dst))


# ------------------------------------------- stitching layers into a table

Face = tuple[int, int, dict]  # (tetrahedron, face, {vertex label: lattice position})


def _sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _edge_along(face: Face, direction: Vec) -> tuple[int, int]:
    pos = face[2]
    labels = sorted(pos)
    want = canonical(direction)
    for i, x in enumerate(labels):
        for y in labels[i + 1:]:
            if canonical(_sub(pos[y], pos[x])) == want:
                return x, y
    raise GluingError(f"face {face[:2]} has no edge of slope {want}")


def layer_tetrahedron(builder, faces: Sequence[Face], removed: Vec) -> list[Face]:
    """Attach one tetrahedron over the two boundary triangles, flipping edge ``removed``.

    ``faces`` are the two triangles of a one-vertex boundary torus, with
    corner positions in a common lattice.  Returns the two new boundary
    triangles in the same lattice.
    """
    p_face, q_face = faces
    ps, pe = _edge_along(p_face, removed)
    qs, qe = _edge_along(q_face, removed)
    ppos, qpos = p_face[2], q_face[2]
    a, b = ppos[ps], ppos[pe]
    if _sub(qpos[qe], qpos[qs]) == _sub(b, a):
        shift = _sub(a, qpos[qs])
    elif _sub(qpos[qs], qpos[qe]) == _sub(b, a):
        shift = _sub(a, qpos[qe])
    else:
        raise GluingError("boundary triangles do not share the flipped edge")
    (p3,) = set(ppos) - {ps, pe}
    (q3,) = set(qpos) - {qs, qe}
    c = ppos[p3]
    d = _add(qpos[q3], shift)
    if det2(_sub(b, a), _sub(c, a)) * det2(_sub(b, a), _sub(d, a)) >= 0:
        raise GluingError("boundary triangles do not form a parallelogram")

    t = builder.add()
    new_pos = {0: a, 1: b, 2: c, 3: d}
    _glue_by_position(builder, t, 3, new_pos, p_face, (0, 0))
    _glue_by_position(builder, t, 2, new_pos, q_face, shift)
    return [(t, 0, {1: b, 2: c, 3: d}), (t, 1, {0: a, 2: c, 3: d})]


def _glue_by_position(builder, t: int, f: int, pos: dict, other: Face, shift: Vec) -> None:
    u, g, upos = other
    at = {_add(p, shift): lab for lab, p in upos.items()}
    perm = [0] * 4
    for lab, p in pos.items():
        if lab == f:
            continue
        if p not in at:
            raise GluingError(f"corner at {p} has no partner on face {other[:2]}")
        perm[lab] = at[p]
    perm[f] = g
    builder.glue(t, f, u, perm)


def paste_tori(builder, top: Sequence[Face], source: Sequence[Face], a: TorusMap) -> None:
    """Glue ``source`` triangles onto ``top`` so that lattice positions correspond under ``a``."""
    free = list(top)
    for s_t, s_f, s_pos in source:
        image = {lab: a(p) for lab, p in s_pos.items()}
        for k, (x_t, x_f, x_pos) in enumerate(free):
            targets = set(x_pos.values())
            anchor = next(iter(image.values()))
            match = None
            for xp in targets:
                shift = _sub(xp, anchor)
                if {_add(p, shift) for p in image.values()} == targets:
                    match = shift
                    break
            if match is None:
                continue
            _glue_by_position(builder, s_t, s_f, {lab: _add(p, match) for lab, p in image.items()},
                              (x_t, x_f, x_pos), (0, 0))
            free.pop(k)
            break
        else:
            raise GluingError(f"no boundary triangle matches the image of face ({s_t}, {s_f})")


def build_chain(builder, target: Sequence[Face], source: Sequence[Face],
                gluing: LayeredGluing) -> tuple[int, int]:
    """Layer ``gluing`` onto the ``target`` torus and close it up against ``source``.

    Returns the half-open tetrahedron range used by the chain.
    """
    start = builder.size
    faces = list(target)
    for layer in gluing.layers:
        faces = layer_tetrahedron(builder, faces, layer.removed)
        got = frozenset(canonical(_sub(p[j], p[i])) for _, _, p in faces
                        for i in p for j in p if i < j)
        if layer.added not in got or layer.removed in got:
            raise GluingError("layer did not perform the recorded flip")
    paste_tori(builder, faces, source, gluing.map)
    return start, builder.size
