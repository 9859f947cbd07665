"""Checks run against assembled manifolds, plus the graph-width facts the construction relies on."""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .assemble import (AssemblyConfig, AssemblyMetadata, build_manifold, delta_formula,
                       recheck_distances, size_bound)
from .graph import (Multigraph, complete_binary_tree, complete_graph, cycle_graph, grid, path_graph,
                    star_graph, subdivide_arcs, validate_tree_decomposition)
from .triangulation import (Triangulation, dual_graph, euler_characteristic, is_closed, orientation,
                            vertex_link_check)
from .widths import (MAX_EXACT_NODES, pathwidth_exact, pathwidth_upper, treewidth_exact,
                     treewidth_upper)


class StructureMismatch(ValueError):
    """Metadata does not describe the given triangulation."""


@dataclass
class CheckResult:
    name: str
    passed: bool
    numbers: dict = field(default_factory=dict)
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", **numbers) -> CheckResult:
        c = CheckResult(name, bool(passed), numbers, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks += other.checks
        return self

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            nums = " ".join(f"{k}={_fmt(v)}" for k, v in c.numbers.items())
            line = f"[{'PASS' if c.passed else 'FAIL'}] {c.name}"
            if nums:
                line += f"  {nums}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        records = [{"name": c.name, "verdict": "pass" if c.passed else "fail", "numbers": c.numbers,
                    "detail": c.detail} for c in self.checks]
        return json.dumps({"passed": self.passed, "checks": records}, indent=1, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


# ------------------------------------------------------------- manifold

def check_manifold(tri: Triangulation) -> VerificationReport:
    rep = VerificationReport()
    rep.add("closed", is_closed(tri), boundary_faces=len(tri.boundary_faces()))
    rep.add("orientable", orientation(tri) is not None)
    chi = euler_characteristic(tri)
    rep.add("euler_characteristic_zero", chi == 0, chi=chi)
    links = vertex_link_check(tri)
    bad = links.failures()
    rep.add("vertex_links_spheres", links.all_spheres and links.ok,
            "; ".join(bad[:3]), vertices=len(links.vertices))
    return rep


# ------------------------------------------------------------- structure

def _connected(nodes: set[int], arcs: list[tuple[int, int]]) -> bool:
    if not nodes:
        return False
    nbrs: dict[int, set[int]] = {v: set() for v in nodes}
    for a, b in arcs:
        nbrs[a].add(b)
        nbrs[b].add(a)
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for w in nbrs[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == nodes


def contract_dual_graph(tri: Triangulation, meta: AssemblyMetadata
                        ) -> tuple[Multigraph, list[str]]:
    """Collapse block ranges to nodes and chain ranges to arcs; return the quotient and any defects."""
    if meta.total != tri.size:
        raise StructureMismatch(f"metadata covers {meta.total} tetrahedra, triangulation has {tri.size}")
    prov = meta.provenance()
    dual = dual_graph(tri)
    problems = []
    block_arcs: dict[int, list[tuple[int, int]]] = {r.node: [] for r in meta.nodes}
    chain_arcs: dict[int, Counter] = {r.arc: Counter() for r in meta.arcs}
    chain_exits: dict[int, list[tuple[int, int]]] = {r.arc: [] for r in meta.arcs}  # (chain tet, node)
    for a, b in dual.arcs:
        (ka, ia, _), (kb, ib, _) = prov[a], prov[b]
        if ka == "block" and kb == "block":
            if ia != ib:
                problems.append(f"tetrahedra {a} and {b} join blocks {ia} and {ib} directly")
            else:
                block_arcs[ia].append((a, b))
        elif ka == "arc" and kb == "arc":
            if ia != ib:
                problems.append(f"tetrahedra {a} and {b} join chains {ia} and {ib} directly")
            else:
                chain_arcs[ia][(a, b)] += 1
        else:
            chain, other = (a, b) if ka == "arc" else (b, a)
            chain_exits[prov[chain][1]].append((chain, prov[other][1]))

    for r in meta.nodes:
        if not _connected(set(range(r.start, r.end)), block_arcs[r.node]):
            problems.append(f"block of node {r.node} is not connected in the dual graph")

    quotient = []
    for r in meta.arcs:
        n = r.end - r.start
        expected = Counter({(t, t + 1): 2 for t in range(r.start, r.end - 1)})
        if n < 1 or chain_arcs[r.arc] != expected:
            problems.append(f"chain of arc {r.arc} is not a daisy chain")
        exits = chain_exits[r.arc]
        ends = Counter(node for _, node in exits)
        if len(exits) != 4 or any(c % 2 for c in ends.values()):
            problems.append(f"chain of arc {r.arc} meets blocks {sorted(ends.elements())}, "
                            "expected two faces at each end")
            continue
        if n > 1:
            first = sorted(node for t, node in exits if t == r.start)
            last = sorted(node for t, node in exits if t == r.end - 1)
            if len(first) != 2 or len(last) != 2 or first[0] != first[1] or last[0] != last[1]:
                problems.append(f"chain of arc {r.arc} does not attach at its two ends")
                continue
            quotient.append((last[0], first[0]))
        else:
            nodes = sorted(set(ends))
            quotient.append((nodes[0], nodes[-1]))
    return Multigraph(len(meta.nodes), tuple(quotient)), problems


def check_dual_structure(g: Multigraph, tri: Triangulation, meta: AssemblyMetadata) -> VerificationReport:
    rep = VerificationReport()
    quotient, problems = contract_dual_graph(tri, meta)
    same = quotient.same_as(g)
    if not same:
        missing = g.arc_multiset() - quotient.arc_multiset()
        extra = quotient.arc_multiset() - g.arc_multiset()
        problems.append(f"quotient differs: missing {sorted(missing.elements())[:5]}, "
                        f"extra {sorted(extra.elements())[:5]}")
    degrees_ok = [r.k for r in meta.nodes] == g.degrees()
    if not degrees_ok:
        problems.append("block boundary counts differ from the degree sequence")
    rep.add("dual_graph_contracts_to_input", same and degrees_ok and not problems,
            "; ".join(problems[:4]), nodes=quotient.node_count, arcs=quotient.arc_count)
    return rep


# ---------------------------------------------------------------- widths

def _graph_width_pair(g: Multigraph, budget: int):
    if g.node_count <= min(budget, MAX_EXACT_NODES):
        return treewidth_exact(g, budget), pathwidth_exact(g, budget)
    return treewidth_upper(g), pathwidth_upper(g)


def check_width_inequalities(g: Multigraph, tri: Triangulation, meta: AssemblyMetadata,
                             budget: int = 25) -> VerificationReport:
    """Assert tw(G) <= 18(tw_ub(dual)+1) and pw(G) <= 4(3 pw_ub(dual)+1); report the reverse ratios."""
    rep = VerificationReport()
    tw_g, pw_g = _graph_width_pair(g, budget)
    dual = dual_graph(tri)
    tw_d, pw_d = treewidth_upper(dual), pathwidth_upper(dual)
    note = "" if tw_g.kind == "exact" else "graph widths are upper bounds"
    for name, r in (("tw_dual_witness_valid", tw_d), ("pw_dual_witness_valid", pw_d)):
        rep.add(name, validate_tree_decomposition(dual, r.witness).valid, width=r.value)
    rep.add("tw_graph_bounded_by_dual", tw_g.value <= 18 * (tw_d.value + 1), note,
            tw_graph=tw_g.value, tw_dual_ub=tw_d.value, rhs=18 * (tw_d.value + 1))
    rep.add("pw_graph_bounded_by_dual", pw_g.value <= 4 * (3 * pw_d.value + 1), note,
            pw_graph=pw_g.value, pw_dual_ub=pw_d.value, rhs=4 * (3 * pw_d.value + 1))
    max_deg = g.max_degree()
    tw_ratio = tw_d.value / (max_deg * tw_g.value) if max_deg * tw_g.value else None
    pw_ratio = pw_d.value / (max_deg * pw_g.value) if max_deg * pw_g.value else None
    finite = all(x is None or math.isfinite(x) for x in (tw_ratio, pw_ratio))
    rep.add("width_ratios_reported", finite, "reported, not bounded",
            tw_ratio=tw_ratio, pw_ratio=pw_ratio, max_degree=max_deg)
    return rep


def check_size_and_budget(g: Multigraph, tri: Triangulation, meta: AssemblyMetadata) -> VerificationReport:
    rep = VerificationReport()
    bound = size_bound(g, meta)
    rep.add("size_within_bound", meta.total == tri.size and meta.total <= bound,
            total=meta.total, bound=bound)
    expected = delta_formula(meta.tw["value"], meta.pw["value"])
    rep.add("delta_matches_formula", meta.delta == expected, delta=meta.delta, formula=expected)
    short = recheck_distances(meta)
    rep.add("arc_distances_meet_budget", not short and all(r.achieved_distance >= meta.required_distance
                                                           for r in meta.arcs),
            f"short arcs {short}" if short else "", required=meta.required_distance,
            min_achieved=min((r.achieved_distance for r in meta.arcs), default=0))
    ranges = sorted([(r.start, r.end) for r in meta.nodes] + [(r.start, r.end) for r in meta.arcs])
    tiled = all(a[1] == b[0] for a, b in zip(ranges, ranges[1:])) and ranges[0][0] == 0 \
        and ranges[-1][1] == meta.total
    rep.add("ranges_partition_tetrahedra", tiled)
    n = g.node_count
    scale = max(g.max_degree(), 1) * meta.K * max(meta.pw["value"], 1) * n
    rep.add("size_constant_reported", True, "reported, not bounded", size_ratio=meta.total / scale)
    return rep


def verify_assembly(g: Multigraph, tri: Triangulation, meta: AssemblyMetadata,
                    budget: int = 25) -> VerificationReport:
    rep = check_manifold(tri)
    rep.extend(check_dual_structure(g, tri, meta))
    rep.extend(check_size_and_budget(g, tri, meta))
    rep.extend(check_width_inequalities(g, tri, meta, budget))
    return rep


# ------------------------------------------------------------ suites

def random_graph(rng: random.Random, max_nodes: int = 10, p: float = 0.4) -> Multigraph:
    n = rng.randint(1, max_nodes)
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


def _edge_cases() -> list[Multigraph]:
    return [path_graph(1), path_graph(2), path_graph(6), star_graph(3), star_graph(5),
            complete_binary_tree(2), cycle_graph(3), cycle_graph(5), complete_graph(4),
            complete_graph(5), grid(3), Multigraph(2, ((0, 1), (0, 1), (1, 1)))]


def _subdivision_plan(g: Multigraph, rng: random.Random, max_times: int) -> dict[int, int]:
    chosen = [i for i in range(g.arc_count) if rng.random() < 0.5]
    return {i: rng.randint(1, max_times) for i in chosen}


def subdivision_invariance_suite(seed: int = 0, trials: int = 200, max_nodes: int = 10,
                            max_times: int = 3, budget: int = MAX_EXACT_NODES) -> VerificationReport:
    """Random subdivisions never raise pw by more than 2 nor tw above max(tw, 3)."""
    rng = random.Random(seed)
    rep = VerificationReport()
    graphs = _edge_cases() + [random_graph(rng, max_nodes) for _ in range(max(trials - len(_edge_cases()), 0))]
    violations = []
    largest = 0
    for idx, g in enumerate(graphs):
        plan = {} if idx == 0 else _subdivision_plan(g, rng, max_times)
        h = subdivide_arcs(g, plan)
        largest = max(largest, h.node_count)
        tw_g, pw_g = treewidth_exact(g, budget).value, pathwidth_exact(g, budget).value
        tw_h, pw_h = treewidth_exact(h, budget).value, pathwidth_exact(h, budget).value
        if pw_h > pw_g + 2 or tw_h > max(tw_g, 3):
            violations.append(f"trial {idx}: n={g.node_count} arcs={list(g.arcs)} plan={plan} "
                              f"tw {tw_g}->{tw_h} pw {pw_g}->{pw_h}")
    rep.add("subdivision_preserves_widths", not violations, "; ".join(violations[:3]),
            trials=len(graphs), violations=len(violations), largest_subdivided=largest)
    return rep


def width_family_suite(max_height: int = 5, max_side: int = 4,
                           config: AssemblyConfig = AssemblyConfig()) -> VerificationReport:
    rep = VerificationReport()
    for h in range(max_height + 1):
        t = complete_binary_tree(h)
        pw = pathwidth_exact(t, budget=MAX_EXACT_NODES).value
        rep.add(f"pathwidth_binary_tree_h{h}", pw == (h + 1) // 2, pw=pw, expected=(h + 1) // 2)
    for k in range(1, max_side + 1):
        gk = grid(k)
        tw, pw = treewidth_exact(gk).value, pathwidth_exact(gk).value
        expected = k if k > 1 else 0  # the 1 x 1 grid is a single node
        rep.add(f"widths_grid_{k}", tw == pw == expected, tw=tw, pw=pw, expected=expected)
    for name, g in (("binary_tree_h1", complete_binary_tree(1)), ("binary_tree_h2", complete_binary_tree(2)),
                    ("grid_2", grid(2))):
        tri, meta = build_manifold(g, config)
        sub = verify_assembly(g, tri, meta)
        rep.add(f"assembled_{name}", sub.passed,
                "; ".join(c.name for c in sub.failures()), tetrahedra=tri.size)
    return rep
