import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dottrees.trees import Tree

from dottrees import (
    DotProductIndex,
    WeightedTree,
    alpha_hyperplane,
    count_embeddings,
    dot,
    count_homomorphisms,
    count_segment_crossings,
    distinct_dot_products,
    distinct_weight_tuples,
    hyperplane_descent,
    incidences,
    integer_grid,
    make_path,
    make_star,
    max_pinned,
    pinned_set,
    pinned_weight_tuples,
    point,
    point_set,
    product_set,
    proof_graph_edges,
    proof_multigraph,
    radial_histogram,
    random_point_set,
)
from dottrees.constructions import build_column_construction
from oracles import (
    ROTATION_2D,
    apply_matrix,
    naive_count_embeddings,
    naive_count_homomorphisms,
    naive_crossings,
    naive_pinned_weight_tuples,
    naive_weight_tuples,
    scale_points,
)

pt = point
COLLINEAR = point_set([(1, 0), (2, 0), (3, 0)])


def random_instance(seed, max_points=12, dim=2, low=-4, high=4):
    rng = random.Random(seed)
    n = rng.randint(4, max_points)
    return random_point_set(n, dim, seed=seed * 7 + 1, low=low, high=high)


class TestDotProductIndex:
    def test_pair_total_excludes_diagonal(self):
        ps = point_set([(1, 2), (3, 4), (5, 6), (-1, 1)])
        idx = DotProductIndex(ps, include_zero=True)
        assert idx.pair_total() == len(ps) ** 2 - len(ps)

    def test_disjoint_pair_total(self):
        left = point_set([(1, 2), (3, 4)])
        right = point_set([(5, 6), (7, 8), (9, 1)])
        idx = DotProductIndex(left, right, include_zero=True)
        assert idx.pair_total() == len(left) * len(right)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            DotProductIndex(point_set([(1, 2)]), point_set([(1, 2, 3)]))

    def test_int_value_coercion(self):
        ps = point_set([(1, 0), (2, 0)])
        idx = DotProductIndex(ps)
        assert idx.pairs(2) == idx.pairs(Q(2))
        assert idx.partners(pt(1, 0), 2) == idx.partners(pt(1, 0), Q(2))

    def test_pair_total_minus_zeros(self):
        ps = point_set([(1, 0), (0, 1), (1, 1)])
        idx = DotProductIndex(ps)
        zero_pairs = sum(
            1
            for p in ps.points
            for q in ps.points
            if p != q and p[0] * q[0] + p[1] * q[1] == 0
        )
        assert idx.pair_total() == len(ps) ** 2 - len(ps) - zero_pairs

    def test_partners_include_self_match(self):
        ps = point_set([(1, 0), (2, 0)])
        idx = DotProductIndex(ps)
        assert pt(1, 0) in idx.partners(pt(1, 0), 1)

    def test_multiplicity_sum_invariant(self):
        for seed in range(5):
            ps = random_instance(seed)
            idx = DotProductIndex(ps, include_zero=True)
            assert idx.pair_total() == len(ps) ** 2 - len(ps)


class TestPinnedSet:
    def test_basic(self):
        ps = point_set([(1, 0), (2, 0), (0, 5)])
        assert pinned_set(pt(1, 0), ps) == {Q(1), Q(2)}

    def test_include_zero(self):
        ps = point_set([(1, 0), (2, 0), (0, 5)])
        assert pinned_set(pt(1, 0), ps, include_zero=True) == {Q(0), Q(1), Q(2)}

    def test_grid_pin_matches_brute_force(self):
        grid = integer_grid(3, start=0)
        expected = {
            Q(p[0] + p[1])
            for p in grid.points
            if p[0] + p[1] != 0
        }
        assert pinned_set(pt(1, 1), grid) == expected

    def test_origin_pin_rejected(self):
        with pytest.raises(ValueError):
            pinned_set(pt(0, 0), COLLINEAR)


class TestDistinctDotProducts:
    def test_collinear(self):
        summary = distinct_dot_products(COLLINEAR)
        assert summary.distinct == 3  # {2, 3, 6}
        assert summary.max_multiplicity == 2  # each from both orders

    def test_nonzero_present(self):
        assert distinct_dot_products(point_set([(1, 1), (2, 2)])).distinct >= 1

    def test_all_products_zero_gives_empty_summary(self):
        ps = point_set([(1, 0), (0, 1)])
        assert distinct_dot_products(ps) == (0, 0)
        assert distinct_dot_products(ps, include_zero=True) == (1, 2)

    def test_matches_brute_force(self):
        for seed in range(6):
            ps = random_instance(seed)
            values = {}
            for p in ps.points:
                for q in ps.points:
                    if p == q:
                        continue
                    v = sum(a * b for a, b in zip(p, q))
                    if v == 0:
                        continue
                    values[v] = values.get(v, 0) + 1
            summary = distinct_dot_products(ps)
            assert summary.distinct == len(values)
            assert summary.max_multiplicity == (max(values.values()) if values else 0)


class TestCountEmbeddings:
    def test_single_edge_both_orders(self):
        wt = WeightedTree(make_path(1), (Q(2),))
        assert count_embeddings(wt, point_set([(1, 0), (2, 0)])) == 2

    def test_injectivity_blocks_fold(self):
        wt = WeightedTree(make_path(2), (Q(2), Q(2)))
        assert count_embeddings(wt, point_set([(1, 0), (2, 0)])) == 0

    def test_column_construction_oracle(self):
        result = build_column_construction(make_path(2), 9)
        assert naive_count_embeddings(result.weighted_tree, result.points) == 16
        assert count_embeddings(result.weighted_tree, result.points) == 16

    def test_zero_weight_needs_flag(self):
        wt = WeightedTree(make_path(1), (Q(0),))
        ps = point_set([(1, 0), (0, 1)])
        with pytest.raises(ValueError):
            count_embeddings(wt, ps)
        assert count_embeddings(wt, ps, include_zero=True) == 2

    def test_too_few_points(self):
        wt = WeightedTree(make_path(3), (Q(1), Q(1), Q(1)))
        assert count_embeddings(wt, point_set([(1, 0), (2, 0)])) == 0

    @pytest.mark.parametrize("seed", range(8))
    def test_exhaustive_oracle_equivalence(self, seed):
        # Engine == naive enumeration on every small random instance.
        rng = random.Random(seed)
        ps = random_instance(seed)
        tree = [make_path(1), make_path(2), make_path(3), make_star(3)][seed % 4]
        idx = DotProductIndex(ps, include_zero=True)
        values = sorted(idx.values())
        weights = tuple(rng.choice(values) for _ in tree.edges)
        wt = WeightedTree(tree, weights)
        assert count_embeddings(wt, ps, include_zero=True) == naive_count_embeddings(
            wt, ps
        )

    def test_disconnected_edge_prefix(self):
        # Canonical order (1,4),(2,3),(3,4) leaves edge (2,3) with neither
        # endpoint placed after the first edge, forcing the pair-driven
        # branch of the backtracker mid-recursion.
        tree = Tree.from_edges(4, [(1, 4), (2, 3), (3, 4)])
        assert tree.edges == ((1, 4), (2, 3), (3, 4))
        for seed in range(4):
            ps = random_instance(seed, max_points=8)
            rng = random.Random(seed + 50)
            idx = DotProductIndex(ps, include_zero=True)
            values = sorted(idx.values())
            weights = tuple(rng.choice(values) for _ in tree.edges)
            wt = WeightedTree(tree, weights)
            assert count_embeddings(
                wt, ps, include_zero=True
            ) == naive_count_embeddings(wt, ps)

    @given(st.integers(min_value=0, max_value=10**9))
    @settings(max_examples=40, deadline=None)
    def test_oracle_equivalence_random_trees(self, seed):
        # Random labeled trees with up to 3 edges against random point sets.
        rng = random.Random(seed)
        k = rng.randint(1, 3)
        edges = [(rng.randint(1, i), i + 1) for i in range(1, k + 1)]
        tree = Tree.from_edges(k + 1, edges)
        ps = random_point_set(
            rng.randint(k + 1, 9), seed=rng.randint(0, 10**6), low=-3, high=3
        )
        idx = DotProductIndex(ps, include_zero=True)
        values = sorted(idx.values())
        weights = tuple(rng.choice(values) for _ in tree.edges)
        wt = WeightedTree(tree, weights)
        assert count_embeddings(wt, ps, include_zero=True) == naive_count_embeddings(
            wt, ps
        )

    def test_thread_counts_agree(self):
        result = build_column_construction(make_star(3), 16)
        wt, ps = result.weighted_tree, result.points
        counts = {count_embeddings(wt, ps, threads=t) for t in (1, 2, 4)}
        assert counts == {result.predicted_count}

    def test_prebuilt_index_reused(self):
        result = build_column_construction(make_path(2), 12)
        wt, ps = result.weighted_tree, result.points
        idx = DotProductIndex(ps)
        assert count_embeddings(wt, ps, index=idx) == count_embeddings(wt, ps)
        assert count_homomorphisms(wt, ps, index=idx) == count_homomorphisms(wt, ps)

    def test_one_vertex_tree_counts_points(self):
        from dottrees.trees import Tree

        wt = WeightedTree(Tree(1, ()), ())
        assert count_embeddings(wt, COLLINEAR) == 3
        assert count_homomorphisms(wt, COLLINEAR) == 3

    def test_rotation_invariance(self):
        ps = random_instance(3)
        tree = make_path(2)
        idx = DotProductIndex(ps, include_zero=True)
        weights = tuple(sorted(idx.values())[:2])
        wt = WeightedTree(tree, weights)
        rotated = apply_matrix(ROTATION_2D, ps)
        assert count_embeddings(wt, ps, include_zero=True) == count_embeddings(
            wt, rotated, include_zero=True
        )

    def test_scaling_covariance(self):
        ps = random_instance(4)
        lam = Q(3, 2)
        idx = DotProductIndex(ps, include_zero=True)
        weights = tuple(sorted(idx.values())[-2:])
        wt = WeightedTree(make_path(2), weights)
        scaled_wt = WeightedTree(make_path(2), tuple(lam * lam * w for w in weights))
        assert count_embeddings(wt, ps, include_zero=True) == count_embeddings(
            scaled_wt, scale_points(ps, lam), include_zero=True
        )


class TestCountHomomorphisms:
    def test_fold_allowed(self):
        wt = WeightedTree(make_path(2), (Q(2), Q(2)))
        assert count_homomorphisms(wt, point_set([(1, 0), (2, 0)])) == 2

    def test_single_edge_equals_embeddings(self):
        wt = WeightedTree(make_path(1), (Q(2),))
        ps = point_set([(1, 0), (2, 0)])
        assert count_homomorphisms(wt, ps) == count_embeddings(wt, ps) == 2

    def test_column_construction_dominates(self):
        result = build_column_construction(make_path(2), 9)
        wt, ps = result.weighted_tree, result.points
        homs = count_homomorphisms(wt, ps)
        assert homs == naive_count_homomorphisms(wt, ps)
        assert homs >= count_embeddings(wt, ps)

    @pytest.mark.parametrize("seed", range(6))
    def test_oracle_equivalence_and_dominance(self, seed):
        rng = random.Random(seed + 100)
        ps = random_instance(seed, max_points=8)
        tree = [make_path(1), make_path(2), make_star(3)][seed % 3]
        idx = DotProductIndex(ps, include_zero=True)
        values = sorted(idx.values())
        weights = tuple(rng.choice(values) for _ in tree.edges)
        wt = WeightedTree(tree, weights)
        homs = count_homomorphisms(wt, ps, include_zero=True)
        assert homs == naive_count_homomorphisms(wt, ps)
        assert homs >= count_embeddings(wt, ps, include_zero=True)


class TestDistinctWeightTuples:
    def test_single_edge_collinear(self):
        assert distinct_weight_tuples(make_path(1), COLLINEAR) == 3

    def test_path_two_collinear(self):
        count, tuples = distinct_weight_tuples(make_path(2), COLLINEAR, collect=True)
        assert count == 6
        assert tuples == {
            (Q(2), Q(6)),
            (Q(3), Q(6)),
            (Q(2), Q(3)),
            (Q(6), Q(3)),
            (Q(3), Q(2)),
            (Q(6), Q(2)),
        }

    def test_single_point_gives_zero(self):
        solo = point_set([(1, 1)])
        assert distinct_weight_tuples(make_path(1), solo) == 0

    def test_star_versus_path_labelings(self):
        ps = random_instance(9, max_points=7)
        star = distinct_weight_tuples(make_star(2), ps)
        path = distinct_weight_tuples(make_path(2), ps)
        assert star == len(naive_weight_tuples(make_star(2), ps))
        assert path == len(naive_weight_tuples(make_path(2), ps))

    def test_one_vertex_tree_rejected(self):
        from dottrees.trees import Tree

        with pytest.raises(ValueError):
            distinct_weight_tuples(Tree(1, ()), COLLINEAR)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_naive(self, seed):
        ps = random_instance(seed, max_points=7)
        tree = [make_path(2), make_star(3), make_path(3)][seed % 3]
        if tree.num_vertices > len(ps):
            return
        count = distinct_weight_tuples(tree, ps)
        assert count == len(naive_weight_tuples(tree, ps))

    def test_include_zero(self):
        ps = point_set([(1, 0), (0, 1), (1, 1)])
        with_zero = distinct_weight_tuples(make_path(1), ps, include_zero=True)
        without = distinct_weight_tuples(make_path(1), ps)
        assert with_zero == len(naive_weight_tuples(make_path(1), ps, include_zero=True))
        assert without == len(naive_weight_tuples(make_path(1), ps))
        assert with_zero > without

    def test_spill_mode_matches(self, tmp_path):
        ps = random_instance(2, max_points=9)
        tree = make_path(2)
        in_memory = distinct_weight_tuples(tree, ps)
        spilled = distinct_weight_tuples(
            tree, ps, spill_dir=str(tmp_path), spill_chunk=16
        )
        assert spilled == in_memory

    def test_scaling_invariance(self):
        ps = random_instance(5, max_points=7)
        tree = make_path(2)
        scaled = scale_points(ps, Q(5, 3))
        assert distinct_weight_tuples(tree, ps) == distinct_weight_tuples(tree, scaled)


class TestPinnedWeightTuples:
    def test_single_edge_pinned(self):
        assert pinned_weight_tuples(make_path(1), 1, pt(1, 0), COLLINEAR) == 2

    def test_path_pinned_at_center(self):
        assert pinned_weight_tuples(make_path(2), 2, pt(2, 0), COLLINEAR) == 2

    def test_pin_not_in_set(self):
        with pytest.raises(ValueError):
            pinned_weight_tuples(make_path(1), 1, pt(9, 9), COLLINEAR)

    def test_bounded_by_unpinned(self):
        for seed in range(4):
            ps = random_instance(seed, max_points=7)
            tree = make_path(2)
            total = distinct_weight_tuples(tree, ps)
            for x in list(ps.points)[:3]:
                pinned = pinned_weight_tuples(tree, 1, x, ps)
                assert pinned <= total

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_naive(self, seed):
        ps = random_instance(seed, max_points=7)
        tree = make_star(3) if seed % 2 else make_path(2)
        if tree.num_vertices > len(ps):
            return
        x = ps.points[seed % len(ps)]
        v = 1 + seed % tree.num_vertices
        assert pinned_weight_tuples(tree, v, x, ps) == len(
            naive_pinned_weight_tuples(tree, v, x, ps)
        )


class TestProductSet:
    def test_enumeration(self):
        a = {Q(1), Q(2), Q(3)}
        assert product_set(a, a) == {Q(1), Q(2), Q(3), Q(4), Q(6), Q(9)}

    def test_identity_element(self):
        b = {Q(5), Q(-2), Q(1, 3)}
        assert product_set({Q(1)}, b) == frozenset(b)

    @given(
        st.sets(
            st.fractions(min_value=Q(1, 9), max_value=9, max_denominator=9),
            min_size=1,
            max_size=8,
        ),
        st.sets(
            st.fractions(min_value=Q(1, 9), max_value=9, max_denominator=9),
            min_size=1,
            max_size=8,
        ),
    )
    def test_size_lower_bound_without_zero(self, a, b):
        assert len(product_set(a, b)) >= max(len(a), len(b))


class TestIncidences:
    def test_three_collinear_on_their_line(self):
        line = alpha_hyperplane(pt(0, 1), 0)  # the x-axis
        assert incidences(COLLINEAR, [line]) == 3

    def test_grid_and_axis_lines(self):
        grid = integer_grid(2)  # {1,2}^2
        lines = [
            alpha_hyperplane(pt(1, 0), 1),
            alpha_hyperplane(pt(1, 0), 2),
            alpha_hyperplane(pt(0, 1), 1),
            alpha_hyperplane(pt(0, 1), 2),
        ]
        assert incidences(grid, lines) == 8

    def test_empty_lines(self):
        assert incidences(COLLINEAR, []) == 0

    def test_dimension_guard(self):
        ps = point_set([(1, 0, 0), (0, 1, 0)])
        with pytest.raises(ValueError):
            incidences(ps, [])


class TestRadialHistogram:
    def test_buckets(self):
        ps = point_set([(1, 0), (2, 0), (3, 3)])
        hist = radial_histogram(ps)
        as_tuples = {d.primitive: c for d, c in hist.buckets.items()}
        assert as_tuples == {(1, 0): 2, (1, 1): 1}
        assert hist.max_count == 2

    def test_counts_sum(self):
        for seed in range(5):
            ps = random_instance(seed)
            hist = radial_histogram(ps)
            assert sum(hist.buckets.values()) == len(ps)

    def test_single_radial_line_fails_cap(self):
        ps = point_set([(i, i) for i in range(1, 28)])
        hist = radial_histogram(ps)
        assert hist.max_count == 27
        assert not hist.within_cap(1)
        assert hist.within_cap(3)

    def test_origin_guard(self):
        ps = point_set([(0, 0), (1, 0)])
        with pytest.raises(ValueError):
            radial_histogram(ps)
        hist = radial_histogram(ps, allow_origin=True)
        assert hist.total == 1

    def test_column_construction_shares_x_axis_direction(self):
        result = build_column_construction(make_path(2), 9)
        hist = radial_histogram(result.points)
        as_tuples = {d.primitive: c for d, c in hist.buckets.items()}
        assert as_tuples[(1, 0)] == 1  # only the V point sits on the x-axis


class TestProofMultigraph:
    def test_worked_example(self):
        ps = point_set([(1, 0), (2, 0), (1, 1)])
        stats = proof_multigraph(ps)
        assert stats.vertices == 3
        assert stats.edges == 3
        assert stats.max_multiplicity == 2
        assert stats.max_pinned_size == 2
        assert stats.drawing_crossings == 0
        double = (pt(1, 0), pt(1, 1))
        edges = proof_graph_edges(ps)
        assert edges[double] == 2

    def test_collinear_points_give_no_edges(self):
        stats = proof_multigraph(COLLINEAR)
        assert stats.edges == 0
        assert stats.max_multiplicity == 0

    def test_multiplicity_one_without_radial_coincidence(self):
        for seed in range(10):
            ps = random_point_set(18, seed=seed + 500, low=-9, high=9)
            if radial_histogram(ps).max_count != 1:
                continue
            stats = proof_multigraph(ps)
            if stats.edges:
                assert stats.max_multiplicity == 1

    def test_edge_total_formula(self):
        for seed in range(5):
            ps = random_instance(seed, max_points=14)
            stats = proof_multigraph(ps)
            expected = 0
            for p in ps.points:
                for alpha in pinned_set(p, ps):
                    members = sum(
                        1 for q in ps.points if sum(a * b for a, b in zip(p, q)) == alpha
                    )
                    if members >= 2:
                        expected += members - 1
            assert stats.edges == expected

    def test_crossing_bound(self):
        for seed in range(5):
            ps = random_point_set(24, seed=seed + 900, low=-12, high=12)
            stats = proof_multigraph(ps)
            assert stats.drawing_crossings <= len(ps) ** 2 * stats.max_pinned_size**2
            assert stats.crossing_bound_ok

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            proof_multigraph(point_set([(0, 0), (1, 0)]))

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            proof_multigraph(point_set([(1, 0, 0), (2, 0, 0)]))

    def test_two_set_form(self):
        # One pin, three second-set points on its value-2 line x=2,
        # sorted along the line into two consecutive segments.
        pins = point_set([(1, 0)])
        targets = point_set([(2, 1), (2, 5), (2, -3)])
        stats = proof_multigraph(pins, targets)
        assert stats.vertices == 4
        assert stats.edges == 2
        assert stats.max_multiplicity == 1
        assert stats.max_pinned_size == 1
        edges = proof_graph_edges(pins, targets)
        assert set(edges) == {
            (pt(2, -3), pt(2, 1)),
            (pt(2, 1), pt(2, 5)),
        }

    def test_two_set_radial_coincidence_multiplicity(self):
        # Two pins on one radial line see the same geometric line x=3
        # (values 3 and 6 respectively), doubling the single segment.
        pins = point_set([(1, 0), (2, 0)])
        targets = point_set([(3, 1), (3, 2)])
        stats = proof_multigraph(pins, targets)
        assert stats.vertices == 4
        assert stats.edges == 2
        assert stats.max_multiplicity == 2
        assert stats.drawing_crossings == 0

    def test_overlapping_sets(self):
        # The shared point (1,1) lies on its own value-2 line of the second
        # pin, so it must appear in that line's point list.
        pins = point_set([(1, 0), (1, 1)])
        targets = point_set([(1, 1), (1, 2), (2, 0)])
        stats = proof_multigraph(pins, targets)
        assert stats.vertices == 4
        assert stats.edges == 2
        assert stats.max_multiplicity == 1
        assert stats.max_pinned_size == 2
        edges = proof_graph_edges(pins, targets)
        assert set(edges) == {
            (pt(1, 1), pt(1, 2)),
            (pt(1, 1), pt(2, 0)),
        }


class TestSegmentCrossings:
    def test_plain_cross(self):
        segs = [(pt(0, 0), pt(2, 2)), (pt(0, 2), pt(2, 0))]
        assert count_segment_crossings(segs) == 1

    def test_shared_endpoint_not_counted(self):
        segs = [(pt(0, 0), pt(2, 2)), (pt(2, 2), pt(4, 0))]
        assert count_segment_crossings(segs) == 0

    def test_touching_not_counted(self):
        segs = [(pt(0, 0), pt(4, 0)), (pt(2, 0), pt(2, 3))]
        assert count_segment_crossings(segs) == 0

    def test_collinear_disjoint(self):
        segs = [(pt(0, 0), pt(1, 0)), (pt(2, 0), pt(3, 0))]
        assert count_segment_crossings(segs) == 0

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_naive(self, seed):
        rng = random.Random(seed)
        segs = []
        for _ in range(30):
            a = (Q(rng.randint(-9, 9)), Q(rng.randint(-9, 9)))
            b = (Q(rng.randint(-9, 9)), Q(rng.randint(-9, 9)))
            if a != b:
                segs.append((a, b))
        assert count_segment_crossings(segs) == naive_crossings(segs)


class TestMaxPinned:
    def test_collinear(self):
        pin, count = max_pinned(COLLINEAR)
        assert pin == pt(1, 0) and count == 3

    def test_single_pair(self):
        pin, count = max_pinned(point_set([(1, 1), (2, 3)]))
        assert count >= 1

    def test_shifted_cube_grid(self):
        grid = integer_grid(4, dim=3)
        pin, count = max_pinned(grid)
        brute = max(len(pinned_set(p, grid)) for p in grid.points)
        assert count == brute
        from dottrees import meets_power_bound

        assert meets_power_bound(count, len(grid), Q(2, 5), 1)

    def test_union_bound(self):
        for seed in range(5):
            ps = random_instance(seed)
            summary = distinct_dot_products(ps)
            _, count = max_pinned(ps)
            assert count * len(ps) >= summary.distinct

    def test_too_small(self):
        with pytest.raises(ValueError):
            max_pinned(point_set([(1, 1)]))


class TestHyperplaneDescent:
    def test_cube_grid_trace(self):
        grid = integer_grid(3, dim=3)
        trace = hyperplane_descent(grid)
        assert len(trace.levels) == 1
        level = trace.levels[0]
        # Brute-force recomputation of the first level.
        best = max(len(pinned_set(p, grid)) for p in grid.points)
        assert level.distinct_count == best
        assert level.points_remaining * level.distinct_count >= len(grid)
        assert level.hyperplane.normal == level.pin
        assert trace.reported_count >= max(
            [lvl.distinct_count for lvl in trace.levels] + [trace.final_pinned_count]
        )

    def test_planar_degenerate_stops_immediately(self):
        ps = point_set([(x, y, 1) for x in range(1, 4) for y in range(1, 4)])
        trace = hyperplane_descent(ps)
        assert trace.levels == ()
        assert trace.final_points == len(ps)

    def test_pigeonhole_each_level(self):
        grid = integer_grid(3, dim=4, start=2)
        trace = hyperplane_descent(grid)
        remaining = len(grid)
        for level in trace.levels:
            assert level.points_remaining * level.distinct_count >= remaining
            remaining = level.points_remaining

    def test_trace_matches_independent_retrace(self):
        # Replay the descent with nothing but pinned_set and dot.
        grid = integer_grid(3, dim=4, start=2)
        trace = hyperplane_descent(grid)
        current = list(grid.points)
        for level in trace.levels:
            sizes = {}
            for p in current:
                sizes[p] = len(pinned_set(p, point_set(current)))
            best = max(sizes.values())
            assert level.distinct_count == best
            assert sizes[level.pin] == best
            members = [
                y for y in current if dot(level.pin, y) == level.hyperplane.value
            ]
            assert len(members) == level.points_remaining
            heaviest = max(
                len([y for y in current if dot(level.pin, y) == a and a != 0])
                for a in pinned_set(level.pin, point_set(current))
            )
            assert len(members) == heaviest
            current = members
        if len(current) >= 2:
            final_best = max(
                len(pinned_set(p, point_set(current))) for p in current
            )
            assert trace.final_pinned_count == final_best

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            hyperplane_descent(COLLINEAR)


class TestRotationAndScaling:
    def test_counts_rotation_invariant(self):
        ps = random_instance(7, max_points=9)
        rotated = apply_matrix(ROTATION_2D, ps)
        assert distinct_dot_products(ps) == distinct_dot_products(rotated)
        assert max_pinned(ps)[1] == max_pinned(rotated)[1]
        assert radial_histogram(ps).max_count == radial_histogram(rotated).max_count
        tree = make_path(2)
        assert distinct_weight_tuples(tree, ps) == distinct_weight_tuples(tree, rotated)
