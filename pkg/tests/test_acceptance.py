"""Acceptance gate: one test per criterion, each printed as a pass/fail line in the summary."""

import math
import time

import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from jsjtri.assemble import AssemblyConfig, build_manifold, delta_formula, size_bound
from jsjtri.block import build_block
from jsjtri.cli import run
from jsjtri.graph import complete_binary_tree, complete_graph, cycle_graph, grid, path_graph
from jsjtri.torus import (Slope, farey_distance, mat_product, pick_high_distance_map,
                          realize_as_layers, slopes_in_box)
from jsjtri.triangulation import (boundary_summary, dual_graph, euler_characteristic, is_closed, is_orientable,
                                  read_triangulation, vertex_link_check)
from jsjtri.verify import check_dual_structure, check_width_inequalities, subdivision_invariance_suite
from jsjtri.widths import pathwidth_exact, pathwidth_upper, treewidth_exact, treewidth_upper

INSTANCES = {
    "P2": path_graph(2),
    "P3": path_graph(3),
    "C3": cycle_graph(3),
    "K4": complete_graph(4),
    "T2": complete_binary_tree(2),
    "grid2": grid(2),
}

_built: dict = {}


def assembled(name: str, seed: int = 0):
    key = (name, seed)
    if key not in _built:
        start = time.perf_counter()
        tri, meta = build_manifold(INSTANCES[name], AssemblyConfig(seed=seed))
        _built[key] = (tri, meta, time.perf_counter() - start)
    return _built[key]


def measured(record_property, text: str) -> None:
    record_property("measured", text)


@pytest.mark.criterion(1, "block k emits 9k+6 tetrahedra with k two-triangle one-vertex tori")
@pytest.mark.parametrize("k", range(1, 6))
def test_criterion_1_block_counts(k, capsys, record_property):
    start = time.perf_counter()
    code = run(["block", str(k)])
    elapsed = time.perf_counter() - start
    tri = read_triangulation(capsys.readouterr().out)
    assert code == 0
    assert tri.size == 9 * k + 6 == [15, 24, 33, 42, 51][k - 1]
    summary = boundary_summary(tri)
    assert summary.count == k
    assert all((c.triangles, c.vertices) == (2, 1) for c in summary.components)
    assert build_block(k).triangulation == tri
    assert elapsed < 1.0
    measured(record_property, f"k={k}: {tri.size} tets {elapsed:.2f}s")


@pytest.mark.criterion(2, "assembled instances are closed, orientable, chi=0, sphere links")
@pytest.mark.parametrize("name", INSTANCES)
def test_criterion_2_manifold_validity(name, record_property):
    tri, meta, build_time = assembled(name)
    start = time.perf_counter()
    assert is_closed(tri)
    assert is_orientable(tri)
    assert euler_characteristic(tri) == 0
    links = vertex_link_check(tri)
    assert links.ok and links.all_spheres, links.failures()
    elapsed = build_time + time.perf_counter() - start
    assert elapsed < 30
    measured(record_property, f"{name}: {tri.size} tets {elapsed:.1f}s")


@pytest.mark.criterion(3, "dual graph contracts to exactly G with multiplicities")
@pytest.mark.parametrize("name", INSTANCES)
def test_criterion_3_structure_recovery(name):
    tri, meta, _ = assembled(name)
    start = time.perf_counter()
    report = check_dual_structure(INSTANCES[name], tri, meta)
    assert report.passed, report.to_text()
    assert time.perf_counter() - start < 30


@pytest.mark.criterion(4, "layered gluings reach distance D with at most 2D layers, D = 1..20")
def test_criterion_4_layered_certificate(record_property):
    start = time.perf_counter()
    fiber = Slope(0, 1)
    most = 0.0
    for d in range(1, 21):
        a = pick_high_distance_map(d, fiber, fiber)
        gluing = realize_as_layers(a, fiber, fiber)
        assert gluing.achieved_distance >= d
        assert farey_distance(a.slope_image(fiber), fiber) == gluing.achieved_distance
        assert gluing.tetrahedron_count <= 2 * d
        assert mat_product(layer.matrix for layer in gluing.layers) == a.matrix
        most = max(most, gluing.tetrahedron_count / (2 * d))
    elapsed = time.perf_counter() - start
    assert elapsed < 5
    measured(record_property, f"max layers/2D={most:.2f} {elapsed:.2f}s")


@pytest.mark.criterion(5, "continued-fraction distance equals BFS for all slope pairs in the box 50")
def test_criterion_5_farey_oracle(record_property):
    start = time.perf_counter()
    slopes = slopes_in_box(50)
    p = np.array([s.p for s in slopes], dtype=np.int64)
    q = np.array([s.q for s in slopes], dtype=np.int64)
    adjacent = np.abs(np.outer(p, q) - np.outer(q, p)) == 1
    oracle = shortest_path(csr_matrix(adjacent), method="D", unweighted=True, directed=False)
    assert not np.isinf(oracle).any()
    mismatches = 0
    pairs = 0
    for i, a in enumerate(slopes):
        row = np.array([farey_distance(a, b) for b in slopes[i:]])
        mismatches += int((row != oracle[i, i:]).sum())
        pairs += len(row)
    elapsed = time.perf_counter() - start
    measured(record_property, f"{pairs} pairs, {mismatches} mismatches, {elapsed:.1f}s")
    assert mismatches == 0
    assert elapsed < 60


@pytest.mark.criterion(6, "pw(T_h) = ceil(h/2) for h <= 5; tw(grid k) = pw(grid k) = k for k <= 4")
def test_criterion_6_width_families(record_property):
    start = time.perf_counter()
    failures = []
    for h in range(6):
        pw = pathwidth_exact(complete_binary_tree(h), budget=64).value
        if pw != math.ceil(h / 2):
            failures.append(f"pw(T_{h})={pw}")
    for k in range(1, 5):
        tw, pw = treewidth_exact(grid(k)).value, pathwidth_exact(grid(k)).value
        if not tw == pw == k:
            failures.append(f"grid({k}): tw={tw} pw={pw}, expected {k}")
    elapsed = time.perf_counter() - start
    assert elapsed < 300
    measured(record_property, ", ".join(failures) if failures else f"all families match {elapsed:.1f}s")
    assert not failures, "; ".join(failures)


@pytest.mark.criterion(7, "subdividing arcs preserves widths over at least 200 random trials")
def test_criterion_7_subdivision_invariance(record_property):
    start = time.perf_counter()
    report = subdivision_invariance_suite(seed=2024, trials=200, max_nodes=10, max_times=3)
    elapsed = time.perf_counter() - start
    check = report.checks[0]
    measured(record_property, f"{check.numbers['trials']} trials, {check.numbers['violations']} violations, "
                              f"{elapsed:.1f}s")
    assert report.passed, report.to_text()
    assert check.numbers["trials"] >= 200
    assert elapsed < 300


@pytest.mark.criterion(8, "tw(G) <= 18(tw_ub(dual)+1), pw(G) <= 4(3pw_ub(dual)+1); ratios stable across seeds")
@pytest.mark.parametrize("name", INSTANCES)
def test_criterion_8_width_inheritance(name, record_property):
    g = INSTANCES[name]
    tw_g, pw_g = treewidth_exact(g).value, pathwidth_exact(g).value
    ratios = []
    for seed in (0, 1, 2):
        tri, meta, _ = assembled(name, seed)
        report = check_width_inequalities(g, tri, meta)
        assert report.passed, report.to_text()
        dual = dual_graph(tri)
        tw_d, pw_d = treewidth_upper(dual).value, pathwidth_upper(dual).value
        assert tw_g <= 18 * (tw_d + 1)
        assert pw_g <= 4 * (3 * pw_d + 1)
        ratios.append(tw_d / (g.max_degree() * tw_g))
    assert all(math.isfinite(r) for r in ratios)
    mean = sum(ratios) / len(ratios)
    assert all(abs(r - mean) <= 0.2 * mean for r in ratios)
    measured(record_property, f"{name}: tw ratio {mean:.2f}")


@pytest.mark.criterion(9, "total tetrahedra within the size bound; delta matches the formula")
@pytest.mark.parametrize("name", INSTANCES)
def test_criterion_9_size_bound(name, record_property):
    g = INSTANCES[name]
    tri, meta, _ = assembled(name)
    expected_delta = delta_formula(treewidth_exact(g).value, pathwidth_exact(g).value)
    assert meta.delta == expected_delta
    bound = sum(9 * d + 6 for d in g.degrees()) + g.arc_count * 2 * meta.K * expected_delta
    assert bound == size_bound(g, meta)
    counted = sum(r.end - r.start for r in meta.nodes) + sum(r.layers for r in meta.arcs)
    assert counted == meta.total == tri.size <= bound
    measured(record_property, f"{name}: {tri.size} <= {bound}")
