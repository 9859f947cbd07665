import itertools
import random

import pytest

from jsjtri.block import build_block
from jsjtri.torus import (IDENTITY, STANDARD_TILING, SWAP, GluingError, Slope, TorusMap, build_chain,
                          canonical, farey_bfs, farey_distance, gluing_distance, is_flip_matrix,
                          layer_tetrahedron,
                          mat_det, mat_product, pick_high_distance_map, realize_as_layers,
                          slopes_in_box, tiling_of, tiling_path)
from jsjtri.triangulation import (TriangulationBuilder, dual_graph, euler_characteristic, is_closed,
                                  is_orientable, vertex_link_check)

FIBER = Slope(0, 1)


class TestSlope:
    def test_normalization(self):
        assert Slope(-3, -5) == Slope(3, 5)
        assert Slope(-1, 0) == Slope(1, 0)
        assert Slope(2, -7).vec() == (-2, 7)
        assert canonical((0, -1)) == (0, 1)

    @pytest.mark.parametrize("p, q", [(0, 0), (2, 4), (3, 0)])
    def test_rejects_non_primitive(self, p, q):
        with pytest.raises(ValueError):
            Slope(p, q)


class TestFareyDistance:
    def test_examples(self):
        assert farey_distance((0, 1), (0, 1)) == 0
        assert farey_distance((0, 1), (1, 0)) == 1
        assert farey_distance((0, 1), (3, 5)) == 2

    def test_example_against_bfs(self):
        assert farey_bfs(FIBER, 6)[Slope(3, 5)] == 2

    def test_matches_bfs_in_small_box(self):
        box = 8
        slopes = slopes_in_box(box)
        for s in slopes[::3]:
            bfs = farey_bfs(s, box)
            for t in slopes:
                # distances realized inside the box are never shorter than the true ones
                assert farey_distance(s, t) <= bfs[t]
        # from the fiber, box-restricted paths are already geodesic
        bfs = farey_bfs(FIBER, box)
        assert all(farey_distance(FIBER, t) == bfs[t] for t in slopes)

    @pytest.mark.parametrize("seed", range(5))
    def test_metric(self, seed):
        rng = random.Random(seed)
        slopes = slopes_in_box(15)
        for _ in range(200):
            a, b, c = (rng.choice(slopes) for _ in range(3))
            dab = farey_distance(a, b)
            assert dab == farey_distance(b, a)
            assert (dab == 0) == (a == b)
            assert farey_distance(a, c) <= dab + farey_distance(b, c)

    @pytest.mark.parametrize("seed", range(3))
    def test_invariant_under_sl2(self, seed):
        rng = random.Random(seed)
        gens = [((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0))]
        slopes = slopes_in_box(10)
        for _ in range(100):
            m = mat_product(rng.choice(gens) for _ in range(rng.randint(1, 6)))
            a, b = rng.choice(slopes), rng.choice(slopes)
            f = TorusMap(m)
            assert farey_distance(f.slope_image(a), f.slope_image(b)) == farey_distance(a, b)


class TestGluingDistance:
    def test_identity_aligns(self):
        assert gluing_distance(IDENTITY, FIBER, FIBER) == 0

    def test_swap(self):
        assert gluing_distance(SWAP, FIBER, FIBER) == 1

    def test_shear_image_of_meridian(self):
        a = TorusMap(((1, 0), (5, 1)))
        assert a((1, 0)) == (1, 5)
        assert farey_distance(a((1, 0)), FIBER) == farey_bfs(FIBER, 6)[Slope(1, 5)]

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            TorusMap(((2, 0), (0, 1)))


class TestHighDistanceMaps:
    @pytest.mark.parametrize("d", range(1, 21))
    def test_distance_and_layers(self, d):
        a = pick_high_distance_map(d)
        assert a.det == -1
        got = gluing_distance(a, FIBER, FIBER)
        assert got >= d
        g = realize_as_layers(a)
        assert g.tetrahedron_count <= 2 * d
        assert g.composite() == a.matrix
        assert g.achieved_distance == got

    def test_small_distance_by_bfs(self):
        bfs = farey_bfs(FIBER, 40)
        for d in (1, 2, 3, 4):
            image = pick_high_distance_map(d).slope_image(FIBER)
            assert bfs[image] >= d

    def test_monotone(self):
        got = [gluing_distance(pick_high_distance_map(d), FIBER, FIBER) for d in range(1, 21)]
        assert got == sorted(got)

    def test_deterministic(self):
        assert pick_high_distance_map(7) == pick_high_distance_map(7)

    @pytest.mark.parametrize("variant", range(4))
    def test_variants_agree(self, variant):
        base = realize_as_layers(pick_high_distance_map(9))
        other = realize_as_layers(pick_high_distance_map(9, variant=variant))
        assert other.achieved_distance == base.achieved_distance
        assert other.tetrahedron_count == base.tetrahedron_count

    def test_other_fibers(self):
        src, dst = Slope(2, 3), Slope(-1, 4)
        a = pick_high_distance_map(6, src, dst)
        assert gluing_distance(a, src, dst) >= 6

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            pick_high_distance_map(0)


class TestLayers:
    def test_identity_needs_no_layers(self):
        assert realize_as_layers(IDENTITY).tetrahedron_count == 0

    def test_symmetry_uses_back_and_forth(self):
        g = realize_as_layers(SWAP)
        assert g.tetrahedron_count == 2 and g.composite() == SWAP

    def test_single_flip_maps_by_enumeration(self):
        """Every map carrying the standard tiling one flip away is realized by one layer."""
        found = 0
        for entries in itertools.product(range(-2, 3), repeat=4):
            m = (entries[:2], entries[2:])
            if abs(mat_det(m)) != 1 or not is_flip_matrix(m):
                continue
            found += 1
            g = realize_as_layers(m)
            assert g.tetrahedron_count == 1 and g.composite() == m
        assert found > 0

    def test_tiling_path_steps_are_flips(self):
        a = pick_high_distance_map(8)
        path = tiling_path(tiling_of(a.matrix))
        assert path[0] == STANDARD_TILING
        for before, after in zip(path, path[1:]):
            assert len(before & after) == 2

    def test_layers_record_flips(self):
        for layer in realize_as_layers(pick_high_distance_map(5)).layers:
            assert is_flip_matrix(layer.matrix)
            assert layer.removed != layer.added


def _glue_two_blocks(m):
    b1, b2 = build_block(1), build_block(1)
    tb = TriangulationBuilder()
    o1, o2 = tb.extend(b1.triangulation), tb.extend(b2.triangulation)
    start, end = build_chain(tb, b2.tori[0].shifted(o2).faces, b1.tori[0].shifted(o1).faces,
                             realize_as_layers(m))
    return tb.freeze(), start, end


@pytest.mark.parametrize("d", [1, 2, 5, 36])
def test_chain_between_blocks(d):
    tri, start, end = _glue_two_blocks(pick_high_distance_map(d))
    assert is_closed(tri) and is_orientable(tri) and euler_characteristic(tri) == 0
    assert vertex_link_check(tri).all_spheres
    # daisy chain: consecutive layers share both faces
    dual = dual_graph(tri).arc_multiset()
    for t in range(start, end - 1):
        assert dual[(t, t + 1)] == 2


def test_orientation_reversing_convention():
    """Closing a block onto itself is orientable exactly when the map reverses orientation."""
    for m, expected in [(pick_high_distance_map(3).matrix, True), (((1, 2), (0, 1)), False)]:
        block = build_block(2)
        tb = TriangulationBuilder()
        off = tb.extend(block.triangulation)
        build_chain(tb, block.tori[1].shifted(off).faces, block.tori[0].shifted(off).faces,
                    realize_as_layers(m))
        tri = tb.freeze()
        assert is_closed(tri)
        assert is_orientable(tri) is expected


def test_chain_rejects_mismatched_faces():
    block = build_block(1)
    tb = TriangulationBuilder()
    tb.extend(block.triangulation)
    faces = block.tori[0].faces
    with pytest.raises(GluingError):
        layer_tetrahedron(tb, faces, (2, 1))
