import numpy as np
import pytest
from hypothesis import given, strategies as st

from epecnash.lp import LinearProgram, LpStatus, solve_lp
from epecnash.polyhedra import (
    ComplementaritySet,
    EmptyPieceList,
    EncodingLengthMismatch,
    Polyhedron,
    TooManyComplementarities,
    balas_hull,
    contains,
    enumerate_pieces,
    is_feasible,
    optimize_over_set,
    polyhedral_relaxation,
    selected_polyhedron,
)
from epecnash.rng import Lcg

from tests.helpers import box_set, interval_of, random_comp_set, scalar_set, split_interval_set


class TestFeasibility:
    def test_simple(self):
        assert is_feasible(Polyhedron(np.array([[1.0], [-1.0]]), np.array([1.0, 0.0])))
        assert not is_feasible(
            Polyhedron(np.array([[1.0], [-1.0]]), np.array([0.0, -1.0]))
        )

    def test_sum_bound(self):
        # x1 + x2 <= 1 with both >= 0.6 is empty
        a = np.array([[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        b = np.array([1.0, -0.6, -0.6])
        assert not is_feasible(Polyhedron(a, b))


class TestRelaxation:
    def test_no_pairs_is_identity(self):
        s = box_set(0.0, 1.0)
        relax = polyhedral_relaxation(s)
        assert relax.m == 2
        assert interval_of(relax, 0) == pytest.approx((0.0, 1.0))

    def test_scalar_both_signs(self):
        # {0 <= x perp x - 1 >= 0} relaxes to [1, inf)
        s = scalar_set(1.0, -1.0)
        relax = polyhedral_relaxation(s)
        lo, hi = interval_of(relax, 0)
        assert lo == pytest.approx(1.0, abs=1e-9)
        assert hi == np.inf

    def test_split_interval_relaxes_to_full_interval(self):
        relax = polyhedral_relaxation(split_interval_set())
        assert interval_of(relax, 0) == pytest.approx((-5.0, 5.0), abs=1e-9)


class TestSelectedPolyhedron:
    def test_scalar_sides(self):
        # {0 <= x perp 1 - x >= 0}
        s = scalar_set(-1.0, 1.0)
        zero_side = selected_polyhedron(s, (0,))
        assert interval_of(zero_side, 0) == pytest.approx((0.0, 0.0), abs=1e-9)
        one_side = selected_polyhedron(s, (1,))
        assert interval_of(one_side, 0) == pytest.approx((1.0, 1.0), abs=1e-9)

    def test_split_interval_empty_encodings(self):
        s = split_interval_set()
        assert not is_feasible(selected_polyhedron(s, (0, 0)))
        assert not is_feasible(selected_polyhedron(s, (1, 1)))

    def test_length_mismatch(self):
        with pytest.raises(EncodingLengthMismatch):
            selected_polyhedron(split_interval_set(), (0,))


class TestEnumeration:
    def test_no_pairs(self):
        pieces = enumerate_pieces(box_set(0.0, 2.0))
        assert len(pieces) == 1
        assert pieces[0][0] == ()

    def test_split_interval_pieces(self):
        pieces = enumerate_pieces(split_interval_set())
        assert [e for e, _ in pieces] == [(0, 1), (1, 0)]
        spans = {e: interval_of(poly, 0) for e, poly in pieces}
        assert spans[(0, 1)] == pytest.approx((1.0, 5.0), abs=1e-9)
        assert spans[(1, 0)] == pytest.approx((-5.0, -1.0), abs=1e-9)

    def test_scalar_single_piece(self):
        # {0 <= x perp x + 1 >= 0}: the z-pinned side is empty, x pinned gives {0}
        pieces = enumerate_pieces(scalar_set(1.0, 1.0))
        assert [e for e, _ in pieces] == [(0,)]
        assert interval_of(pieces[0][1], 0) == pytest.approx((0.0, 0.0), abs=1e-9)

    def test_cap(self):
        n = 5
        s = ComplementaritySet(
            a=np.zeros((0, n)),
            b=np.zeros(0),
            m_mat=np.eye(n),
            q=np.ones(n),
            comp=tuple(range(n)),
        )
        with pytest.raises(TooManyComplementarities):
            enumerate_pieces(s, cap=4)


def _hull_min(hull, c_agg):
    c = np.zeros(hull.num_vars)
    c[hull.agg_slice] = c_agg
    out = solve_lp(LinearProgram(c, hull.a, hull.b))
    return out


class TestBalasHull:
    def test_single_piece(self):
        piece = Polyhedron(np.array([[1.0], [-1.0]]), np.array([1.0, 0.0]))
        hull = balas_hull([piece])
        lo = _hull_min(hull, np.array([1.0]))
        hi = _hull_min(hull, np.array([-1.0]))
        assert lo.value == pytest.approx(0.0, abs=1e-9)
        assert -hi.value == pytest.approx(1.0, abs=1e-9)
        assert lo.point[hull.delta_index(0)] == pytest.approx(1.0, abs=1e-9)

    def test_two_intervals(self):
        mk = lambda lo, hi: Polyhedron(np.array([[1.0], [-1.0]]), np.array([hi, -lo]))
        hull = balas_hull([mk(0.0, 1.0), mk(2.0, 3.0)])
        assert _hull_min(hull, np.array([1.0])).value == pytest.approx(0.0, abs=1e-9)
        assert _hull_min(hull, np.array([-1.0])).value == pytest.approx(-3.0, abs=1e-9)

    def test_two_points_give_segment(self):
        point = lambda v: Polyhedron(
            np.vstack([np.eye(2), -np.eye(2)]),
            np.concatenate([v, -v]),
        )
        hull = balas_hull([point(np.zeros(2)), point(np.ones(2))])
        # the projection is the segment x1 = x2 in [0, 1]
        for c, expect in [
            (np.array([1.0, 0.0]), 0.0),
            (np.array([-1.0, 0.0]), -1.0),
            (np.array([1.0, -1.0]), 0.0),
            (np.array([-1.0, 1.0]), 0.0),
        ]:
            assert _hull_min(hull, c).value == pytest.approx(expect, abs=1e-9)

    def test_rejects_empty_input(self):
        with pytest.raises(EmptyPieceList):
            balas_hull([])

    @given(st.integers(0, 30))
    def test_hull_matches_piecewise_minimum_on_random_boxes(self, seed):
        rng = Lcg(4000 + seed)
        pieces = []
        for _ in range(1 + rng.randint(3)):
            lo = np.array([rng.uniform(-3, 3) for _ in range(2)])
            hi = lo + np.array([rng.uniform(0.1, 2) for _ in range(2)])
            pieces.append(
                Polyhedron(np.vstack([np.eye(2), -np.eye(2)]), np.concatenate([hi, -lo]))
            )
        hull = balas_hull(pieces)
        for _ in range(16):
            c = np.array([rng.uniform(-1, 1) for _ in range(2)])
            hull_val = _hull_min(hull, c).value
            piece_val = min(
                solve_lp(LinearProgram(c, p.a, p.b)).value for p in pieces
            )
            assert hull_val == pytest.approx(piece_val, abs=1e-7)


class TestContains:
    def test_scalar_examples(self):
        s = scalar_set(1.0, -1.0)  # {0 <= x perp x-1 >= 0}
        assert contains(s, np.array([1.0]))
        assert not contains(s, np.array([0.5]))  # z = -0.5 < 0
        assert not contains(s, np.array([2.0]))  # x*z = 2

    def test_relaxation_containment(self):
        s = split_interval_set()
        for e, poly in enumerate_pieces(s):
            out = solve_lp(LinearProgram(np.ones(4), poly.a, poly.b))
            assert contains(s, out.point, 1e-7)
            relax = polyhedral_relaxation(s)
            assert (np.asarray(relax.a @ out.point).ravel() - relax.b).max() <= 1e-7


class TestOptimizeOverSet:
    def test_split_interval_linear_min(self):
        s = split_interval_set()
        c = np.array([1.0, 0.0, 0.0, 0.0])
        out = optimize_over_set(s, c)
        assert out.status is LpStatus.OPTIMAL
        assert out.point[0] == pytest.approx(-5.0, abs=1e-7)

    def test_box_min(self):
        out = optimize_over_set(box_set(0.0, 1.0), np.array([1.0]))
        assert out.status is LpStatus.OPTIMAL
        assert out.value == pytest.approx(0.0, abs=1e-9)

    def test_halfline_unbounded(self):
        s = ComplementaritySet(
            a=np.array([[-1.0]]),
            b=np.array([0.0]),
            m_mat=np.zeros((0, 1)),
            q=np.zeros(0),
            comp=(),
        )
        out = optimize_over_set(s, np.array([-5.0]))
        assert out.status is LpStatus.UNBOUNDED
        assert out.ray is not None and out.ray[0] > 0

    def test_feasibility_mode_returns_member(self):
        s = split_interval_set()
        out = optimize_over_set(s, np.zeros(4))
        assert out.status is LpStatus.OPTIMAL
        assert contains(s, out.point, 1e-6)

    @given(st.integers(0, 60))
    def test_branch_and_bound_matches_piece_enumeration(self, seed):
        s = random_comp_set(9000 + seed)
        rng = Lcg(77 + seed)
        c = np.array([round(rng.uniform(-1, 1), 2) for _ in range(s.n)])
        pieces = enumerate_pieces(s)
        bb = optimize_over_set(s, c)
        if not pieces:
            assert bb.status is LpStatus.INFEASIBLE
            return
        piece_outs = [solve_lp(LinearProgram(c, p.a, p.b)) for _, p in pieces]
        if any(o.status is LpStatus.UNBOUNDED for o in piece_outs):
            assert bb.status is LpStatus.UNBOUNDED
            return
        best = min(o.value for o in piece_outs)
        assert bb.status is LpStatus.OPTIMAL
        assert bb.value == pytest.approx(best, abs=1e-7)

    @given(st.integers(0, 25))
    def test_piece_union_soundness(self, seed):
        s = random_comp_set(12000 + seed)
        rng = Lcg(5 + seed)
        for e, poly in enumerate_pieces(s):
            c = np.array([rng.uniform(-1, 1) for _ in range(s.n)])
            out = solve_lp(LinearProgram(c, poly.a, poly.b))
            if out.status is LpStatus.OPTIMAL:
                assert contains(s, out.point, 1e-6)
