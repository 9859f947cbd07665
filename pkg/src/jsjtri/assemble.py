"""Graph in, closed triangulated 3-manifold out.

Each node ``v`` becomes a block with ``deg(v)`` boundary tori; each arc
becomes a layered chain whose torus map has fiber distance at least
``K * delta`` and which joins one free torus at each end.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field

from .block import Block, build_block
from .graph import Multigraph
from .torus import (LayeredGluing, TorusMap, gluing_distance, build_chain,
                    pick_high_distance_map, realize_as_layers, Slope)
from .triangulation import Triangulation, TriangulationBuilder
from .widths import (DEFAULT_BUDGET, MAX_EXACT_NODES, WidthResult, pathwidth_exact, pathwidth_upper,
                     treewidth_exact, treewidth_upper)

WIDTH_MODES = ("auto", "exact", "heuristic")


class AssemblyError(ValueError):
    """The input graph cannot be assembled (isolated node, disconnected, ...)."""


@dataclass(frozen=True)
class AssemblyConfig:
    K: int = 1
    delta_override: int | None = None
    width_mode: str = "auto"  # auto: exact within budget, else heuristic upper bounds
    seed: int = 0
    width_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.delta_override is not None and self.delta_override < 1:
            raise ValueError("delta override must be >= 1")
        if self.width_mode not in WIDTH_MODES:
            raise ValueError(f"width mode must be one of {WIDTH_MODES}")


@dataclass
class NodeRecord:
    node: int
    k: int
    start: int
    end: int


@dataclass
class ArcRecord:
    arc: int
    ends: tuple[int, int]
    tori: tuple[int, int]  # torus index used at each end
    matrix: tuple[tuple[int, int], tuple[int, int]]  # maps the ends[0] torus basis to the ends[1] basis
    variant: int
    achieved_distance: int
    layers: int
    start: int
    end: int


@dataclass
class AssemblyMetadata:
    delta: int
    K: int
    tw: dict
    pw: dict
    seed: int
    nodes: list[NodeRecord] = field(default_factory=list)
    arcs: list[ArcRecord] = field(default_factory=list)
    total: int = 0

    @property
    def required_distance(self) -> int:
        return self.K * self.delta

    def provenance(self) -> list[tuple[str, int, int]]:
        """Per tetrahedron: ("block", node, offset) or ("arc", arc, layer index)."""
        out: list[tuple[str, int, int] | None] = [None] * self.total
        for r in self.nodes:
            for t in range(r.start, r.end):
                out[t] = ("block", r.node, t - r.start)
        for r in self.arcs:
            for t in range(r.start, r.end):
                out[t] = ("arc", r.arc, t - r.start)
        if any(x is None for x in out):
            raise AssemblyError("metadata ranges do not cover the triangulation")
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AssemblyMetadata":
        raw = json.loads(text)
        nodes = [NodeRecord(**r) for r in raw.pop("nodes")]
        arcs = []
        for r in raw.pop("arcs"):
            r["ends"] = tuple(r["ends"])
            r["tori"] = tuple(r["tori"])
            r["matrix"] = tuple(tuple(row) for row in r["matrix"])
            arcs.append(ArcRecord(**r))
        return cls(nodes=nodes, arcs=arcs, **raw)


def _result_dict(r: WidthResult) -> dict:
    return {"value": r.value, "kind": r.kind}


def graph_widths(g: Multigraph, config: AssemblyConfig = AssemblyConfig()) -> tuple[WidthResult, WidthResult]:
    """tw and pw of ``g`` under the configured policy."""
    fits = g.node_count <= min(config.width_budget, MAX_EXACT_NODES)
    try:
        if config.width_mode == "exact" or (config.width_mode == "auto" and fits):
            return (treewidth_exact(g, config.width_budget), pathwidth_exact(g, config.width_budget))
        return treewidth_upper(g), pathwidth_upper(g)
    except Exception as exc:
        raise AssemblyError(f"width computation failed: {exc}") from exc


def delta_formula(tw: int, pw: int) -> int:
    return max(18 * (tw + 1), 4 * (3 * pw + 1))


def compute_delta(g: Multigraph, config: AssemblyConfig = AssemblyConfig()) -> int:
    if config.delta_override is not None:
        return config.delta_override
    tw, pw = graph_widths(g, config)
    return delta_formula(tw.value, pw.value)


def _validate_input(g: Multigraph) -> None:
    if g.node_count == 0:
        raise AssemblyError("graph has no nodes")
    isolated = [v for v, d in enumerate(g.degrees()) if d == 0]
    if isolated:
        raise AssemblyError(f"node {isolated[0]} has degree 0; its block would have no boundary to glue")
    if not g.is_connected():
        raise AssemblyError("graph is disconnected; assemble each component separately")


def sorted_arc_indices(g: Multigraph) -> list[int]:
    return sorted(range(g.arc_count), key=lambda i: (g.arcs[i], i))


def assign_boundary_tori(g: Multigraph) -> dict[tuple[int, int], int]:
    """Map ``(arc index, end)`` to a torus of the end's block; end 0 is the smaller node."""
    used = [0] * g.node_count
    out = {}
    for i in sorted_arc_indices(g):
        for end, v in enumerate(g.arcs[i]):
            out[(i, end)] = used[v]
            used[v] += 1
    return out


def arc_variant(seed: int, arc: int) -> int:
    return random.Random(f"{seed}:{arc}").randrange(4)


def build_manifold(g: Multigraph, config: AssemblyConfig = AssemblyConfig()
                   ) -> tuple[Triangulation, AssemblyMetadata]:
    _validate_input(g)
    tw, pw = graph_widths(g, config)
    delta = config.delta_override if config.delta_override is not None else delta_formula(tw.value, pw.value)
    need = config.K * delta
    meta = AssemblyMetadata(delta=delta, K=config.K, tw=_result_dict(tw), pw=_result_dict(pw),
                            seed=config.seed)

    builder = TriangulationBuilder()
    blocks: dict[int, Block] = {}
    placed: list[tuple[Block, int]] = []
    for v, d in enumerate(g.degrees()):
        if d not in blocks:
            blocks[d] = build_block(d)
        start = builder.extend(blocks[d].triangulation)
        placed.append((blocks[d], start))
        meta.nodes.append(NodeRecord(v, d, start, builder.size))

    tori = assign_boundary_tori(g)
    fiber = Slope(0, 1)
    for i in sorted_arc_indices(g):
        u, v = g.arcs[i]
        variant = arc_variant(config.seed, i)
        gluing: LayeredGluing = realize_as_layers(pick_high_distance_map(need, fiber, fiber, variant))
        if gluing.achieved_distance < need or gluing.tetrahedron_count > 2 * need:
            raise AssemblyError(f"arc {i}: layered gluing misses the distance budget")
        (bu, ou), (bv, ov) = placed[u], placed[v]
        source = bu.tori[tori[(i, 0)]].shifted(ou)
        target = bv.tori[tori[(i, 1)]].shifted(ov)
        start, end = build_chain(builder, target.faces, source.faces, gluing)
        meta.arcs.append(ArcRecord(i, (u, v), (tori[(i, 0)], tori[(i, 1)]), gluing.map.matrix, variant,
                                   gluing.achieved_distance, gluing.tetrahedron_count, start, end))
    meta.total = builder.size
    tri = builder.freeze()
    if tri.boundary_faces():
        raise AssemblyError("assembled triangulation still has boundary faces")
    return tri, meta


def recheck_distances(meta: AssemblyMetadata) -> list[int]:
    """Arc indices whose recorded map does not reach the distance budget when recomputed."""
    fiber = Slope(0, 1)
    return [r.arc for r in meta.arcs
            if gluing_distance(TorusMap(r.matrix), fiber, fiber) < meta.required_distance]


def size_bound(g: Multigraph, meta: AssemblyMetadata) -> int:
    return sum(9 * d + 6 for d in g.degrees()) + g.arc_count * 2 * meta.required_distance
