import itertools
import random

import pytest

from jsjtri import _pykernels, widths
from jsjtri.graph import (Multigraph, complete_binary_tree, complete_graph, cycle_graph, grid,
                          path_graph, star_graph, validate_tree_decomposition)
from jsjtri.widths import (BudgetExceeded, decomposition_from_elimination, degeneracy,
                           pathwidth_exact, pathwidth_upper, separation_width, treewidth_exact,
                           treewidth_lower, treewidth_upper)


def brute_treewidth(g):
    return min(decomposition_from_elimination(g, p).width for p in itertools.permutations(range(g.node_count)))


def brute_pathwidth(g):
    return min(separation_width(g, p) for p in itertools.permutations(range(g.node_count)))


def random_simple(rng, n, p):
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


def assert_witness(g, result):
    assert result.witness is not None
    assert validate_tree_decomposition(g, result.witness).valid
    assert result.witness.width == result.value


class TestExactExamples:
    def test_grid3(self):
        assert treewidth_exact(grid(3)).value == 3

    def test_single_node(self):
        r = treewidth_exact(Multigraph(1))
        assert r.value == 0 and r.kind == "exact"
        assert pathwidth_exact(Multigraph(1)).value == 0

    def test_k4(self):
        assert treewidth_exact(complete_graph(4)).value == 3 == brute_treewidth(complete_graph(4))

    def test_binary_tree_4(self):
        assert pathwidth_exact(complete_binary_tree(4), budget=31).value == 2

    def test_p2(self):
        assert pathwidth_exact(path_graph(2)).value == 1

    def test_c5(self):
        assert pathwidth_exact(cycle_graph(5)).value == 2 == brute_pathwidth(cycle_graph(5))

    def test_no_nodes(self):
        # one empty bag: width -1 by the bag-size convention
        assert treewidth_exact(Multigraph(0)).value == pathwidth_exact(Multigraph(0)).value == -1

    def test_budget(self):
        with pytest.raises(BudgetExceeded, match="upper"):
            treewidth_exact(path_graph(30))
        assert treewidth_exact(path_graph(30), budget=30).value == 1

    def test_multigraph_reduces_to_simple(self):
        g = Multigraph(3, ((0, 1), (0, 1), (1, 1), (1, 2), (2, 2)))
        assert treewidth_exact(g).value == treewidth_exact(g.simplify()).value == 1
        assert_witness(g, treewidth_exact(g))


@pytest.mark.parametrize("seed", range(40))
def test_exact_against_brute_force(seed):
    rng = random.Random(seed)
    g = random_simple(rng, rng.randint(1, 7), rng.choice([0.3, 0.5, 0.7]))
    tw, pw = treewidth_exact(g), pathwidth_exact(g)
    assert tw.value == brute_treewidth(g)
    assert pw.value == brute_pathwidth(g)
    assert_witness(g, tw)
    assert_witness(g, pw)


@pytest.mark.parametrize("seed", range(30))
def test_bounds_sandwich(seed):
    rng = random.Random(100 + seed)
    g = random_simple(rng, rng.randint(1, 12), 0.35)
    lo, ex, hi = treewidth_lower(g), treewidth_exact(g), treewidth_upper(g)
    assert lo.kind == "lower_bound" and hi.kind == "upper_bound"
    assert lo.value <= ex.value <= hi.value
    pw = pathwidth_exact(g)
    assert pw.value >= ex.value
    assert pw.value <= pathwidth_upper(g).value
    assert_witness(g, hi)
    assert_witness(g, pathwidth_upper(g))


class TestHeuristics:
    @pytest.mark.parametrize("g", [path_graph(9), star_graph(6), complete_binary_tree(4)])
    def test_trees(self, g):
        assert treewidth_upper(g).value == 1

    def test_grid4(self):
        assert treewidth_upper(grid(4)).value >= treewidth_exact(grid(4)).value == 4

    def test_edgeless(self):
        assert treewidth_upper(Multigraph(5)).value == 0
        assert pathwidth_upper(Multigraph(5)).value == 0

    def test_deterministic(self):
        g = grid(5)
        assert treewidth_upper(g) == treewidth_upper(g)
        assert pathwidth_upper(g) == pathwidth_upper(g)


class TestLowerBounds:
    def test_clique(self):
        assert treewidth_lower(complete_graph(4)).value >= 3

    def test_grid_degeneracy(self):
        assert degeneracy(grid(3)) == 2
        assert treewidth_lower(grid(3)).value >= 2

    def test_forest(self):
        assert treewidth_lower(path_graph(4)).value >= 1
        assert treewidth_lower(Multigraph(3)).value == 0


@pytest.mark.skipif(not widths.compiled_available(), reason="compiled kernels not built")
@pytest.mark.parametrize("seed", range(25))
def test_backends_agree(seed):
    from jsjtri import _ckernels
    rng = random.Random(seed)
    g = random_simple(rng, rng.randint(1, 14), 0.35)
    adj = widths._masks(g)
    for k in range(5):
        assert _pykernels.elimination_order(adj, k) == _ckernels.elimination_order(adj, k)
        assert _pykernels.vertex_separation_order(adj, k) == _ckernels.vertex_separation_order(adj, k)


def test_python_backend_switch():
    before = widths.BACKEND
    try:
        widths.use_backend("python")
        assert widths.BACKEND == "python"
        assert pathwidth_exact(complete_binary_tree(3)).value == 2
    finally:
        widths.use_backend("compiled" if before == "compiled" else "python")
    with pytest.raises(ValueError):
        widths.use_backend("fortran")


def test_state_limit():
    adj = widths._masks(complete_binary_tree(5))
    with pytest.raises(RuntimeError):
        _pykernels.vertex_separation_order(adj, 2, node_limit=5)
