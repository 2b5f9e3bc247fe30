import io
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dottrees import (
    AlphaHyperplane,
    Direction,
    ParseError,
    PointSet,
    alpha_hyperplane,
    dot,
    format_point_set,
    format_scalar,
    parse_point_set,
    parse_scalar,
    point,
    point_set,
    radial_direction,
    random_point_set,
    read_point_set,
)
from oracles import ROTATION_2D, apply_matrix

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def pt(*coords):
    return point(*coords)


class TestScalar:
    def test_parse_reduces(self):
        assert parse_scalar("4/8") == Q(1, 2)
        assert parse_scalar("-6/4") == Q(-3, 2)
        assert parse_scalar("+7") == 7

    def test_format_canonical(self):
        assert format_scalar(Q(4, 8)) == "1/2"
        assert format_scalar(Q(-3, 1)) == "-3"

    @pytest.mark.parametrize("bad", ["", "1.5", "1/0", "a/b", "1/-2", "2 3"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_scalar(bad)

    @given(rationals)
    def test_roundtrip(self, q):
        assert parse_scalar(format_scalar(q)) == q


class TestDot:
    def test_orthogonal_axes(self):
        assert dot(pt(1, 0), pt(0, 1)) == 0

    def test_x_axis_pin_ignores_free_coordinate(self):
        for y in (0, 1, Q(7, 3), -5):
            assert dot(pt(6, 0), pt(8, y)) == 48

    def test_rational_example(self):
        # Independent arithmetic: 3/4*4 = 3 and 5/16*8/5 = 1/2, total 7/2.
        assert dot(pt(Q(3, 4), Q(5, 16)), pt(4, Q(8, 5))) == Q(7, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            dot(pt(1, 2), pt(1, 2, 3))

    @given(st.tuples(rationals, rationals), st.tuples(rationals, rationals))
    def test_symmetric(self, p, q):
        assert dot(p, q) == dot(q, p)

    @given(
        st.tuples(rationals, rationals),
        st.tuples(rationals, rationals),
        st.tuples(rationals, rationals),
    )
    def test_bilinear(self, p, q, r):
        q_plus_r = tuple(a + b for a, b in zip(q, r))
        assert dot(p, q_plus_r) == dot(p, q) + dot(p, r)

    @given(st.tuples(rationals, rationals), st.tuples(rationals, rationals))
    def test_rotation_invariant(self, p, q):
        ps = PointSet(2, (p,)) if p != q else None
        rot = lambda x: tuple(
            sum(r * c for r, c in zip(row, x)) for row in ROTATION_2D
        )
        assert dot(rot(p), rot(q)) == dot(p, q)

    @given(st.tuples(rationals, rationals), st.tuples(rationals, rationals), rationals)
    def test_scaling_covariant(self, p, q, lam):
        lp = tuple(lam * c for c in p)
        lq = tuple(lam * c for c in q)
        assert dot(lp, lq) == lam * lam * dot(p, q)


class TestAlphaHyperplane:
    def test_vertical_line(self):
        line = alpha_hyperplane(pt(1, 0), 2)
        assert line.contains(pt(2, 5)) and line.contains(pt(2, -7))
        assert not line.contains(pt(3, 0))

    def test_horizontal_line(self):
        line = alpha_hyperplane(pt(0, 3), 6)
        assert line.contains(pt(100, 2)) and not line.contains(pt(0, 3))

    def test_diagonal_line_members(self):
        line = alpha_hyperplane(pt(1, 1), 1)
        assert line.contains(pt(1, 0)) and line.contains(pt(0, 1))

    def test_origin_pin_rejected(self):
        with pytest.raises(ValueError):
            alpha_hyperplane(pt(0, 0), 1)

    @given(
        st.tuples(rationals, rationals),
        st.tuples(rationals, rationals),
        rationals.filter(lambda a: a != 0),
    )
    def test_distinct_pins_give_distinct_lines(self, p, q, alpha):
        # Two sample points of the alpha-line of p cannot both lie on q's
        # line unless p = q.
        if p == q or all(c == 0 for c in p) or all(c == 0 for c in q):
            return
        norm = dot(p, p)
        base = tuple(alpha * c / norm for c in p)
        perp = (-p[1], p[0])
        other = tuple(b + d for b, d in zip(base, perp))
        line_q = alpha_hyperplane(q, alpha)
        assert not (line_q.contains(base) and line_q.contains(other))


class TestDirection:
    @pytest.mark.parametrize(
        "coords,expected",
        [((2, 0), (1, 0)), ((3, 3), (1, 1)), ((-4, -6), (2, 3))],
    )
    def test_canonical(self, coords, expected):
        assert radial_direction(pt(*coords)).primitive == expected

    def test_clears_denominators(self):
        assert radial_direction(pt(Q(1, 2), Q(3, 4))).primitive == (2, 3)

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            radial_direction(pt(0, 0))

    @given(st.tuples(rationals, rationals), rationals.filter(lambda a: a != 0))
    def test_scaling_invariant(self, p, lam):
        if all(c == 0 for c in p):
            return
        scaled = tuple(lam * c for c in p)
        assert radial_direction(p) == radial_direction(scaled)

    def test_validation(self):
        with pytest.raises(ValueError):
            Direction((2, 4))
        with pytest.raises(ValueError):
            Direction((-1, 2))


class TestPointSet:
    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            point_set([(1, 0), (1, 0)])

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            point(0.5, 1)
        with pytest.raises(TypeError):
            point_set([(0.1, 2)])

    def test_dim_too_small(self):
        with pytest.raises(ValueError):
            PointSet(1, ((Q(1),),))

    def test_mixed_dimension_rejected(self):
        with pytest.raises(ValueError):
            point_set([(1, 0), (1, 0, 0)])

    def test_empty_needs_dimension(self):
        with pytest.raises(ValueError):
            point_set([])
        assert len(point_set([], dim=2)) == 0


class TestPtsFormat:
    def test_basic(self):
        ps = parse_point_set("d 2\n1 0\n2 0\n")
        assert ps.dim == 2 and ps.points == (pt(1, 0), pt(2, 0))

    def test_rational_point(self):
        ps = parse_point_set("d 2\n3/4 5/16\n")
        assert ps.points == (pt(Q(3, 4), Q(5, 16)),)

    def test_duplicate_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_point_set("d 2\n1 0\n1 0\n")
        assert exc.value.line_no == 3

    def test_unreduced_input_reduced_on_load(self):
        ps = parse_point_set("d 2\n2/4 6/8\n")
        assert ps.points == (pt(Q(1, 2), Q(3, 4)),)

    def test_comments_and_blanks(self):
        ps = parse_point_set("# header\n\nd 2\n# p\n1 2\n")
        assert len(ps) == 1

    @pytest.mark.parametrize(
        "text",
        [
            "1 0\n",  # missing header
            "d 2\n1\n",  # wrong arity
            "d 2\n1 x\n",  # bad coordinate
            "d 1\n1\n",  # bad dimension
            "",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_point_set(text)

    def test_roundtrip_random_sets(self):
        for seed in range(5):
            ps = random_point_set(17, dim=2, seed=seed)
            assert parse_point_set(format_point_set(ps)) == ps

    @given(
        st.lists(
            st.tuples(rationals, rationals),
            min_size=1,
            max_size=8,
            unique=True,
        )
    )
    def test_roundtrip_rational_sets(self, rows):
        ps = PointSet(2, tuple(rows))
        assert parse_point_set(format_point_set(ps)) == ps

    def test_written_output_is_reduced(self):
        ps = parse_point_set("d 2\n2/4 1\n")
        assert "1/2" in format_point_set(ps)

    def test_stream_io(self):
        ps = point_set([(1, 2), (3, 4)])
        buf = io.StringIO()
        from dottrees import write_point_set

        write_point_set(ps, buf)
        buf.seek(0)
        assert read_point_set(buf) == ps


class TestRandomPointSet:
    def test_deterministic(self):
        a = random_point_set(25, seed=7)
        b = random_point_set(25, seed=7)
        assert a == b

    def test_excludes_origin(self):
        ps = random_point_set(24, seed=1, low=-2, high=2)
        assert pt(0, 0) not in ps

    def test_box_capacity_check(self):
        with pytest.raises(ValueError):
            random_point_set(30, seed=1, low=0, high=4, dim=1 + 1)


class TestRotationInvariance:
    def test_apply_matrix_preserves_dots(self):
        ps = point_set([(1, 2), (3, 4), (5, 6)])
        rotated = apply_matrix(ROTATION_2D, ps)
        for p, q in zip(ps.points, rotated.points):
            assert dot(p, p) == dot(q, q)
