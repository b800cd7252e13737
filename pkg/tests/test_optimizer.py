from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import coset_max_bruteforce, nd_matrices
from plumbd.charlattice import chi, enumerate_spinc, same_spinc, square, translate
from plumbd.optimizer import (RadiusTooSmall, box_radius_for, brute_force_max_square,
                              brute_force_min_chi, continuous_minimizer, d_invariant, d_invariant_of,
                              d_invariants_all, lambda_lower_bound, max_square_in_class, min_chi,
                              sublevel_points)
from plumbd.plumbing import PlumbingGraph, build_matrix


class TestContinuousMinimizer:
    def test_examples(self, m_minus1, m_minus2, m_e8):
        assert continuous_minimizer((0,) * 8, m_e8) == (0,) * 8
        assert continuous_minimizer((-1,), m_minus1) == (Fraction(-1, 2),)
        assert continuous_minimizer((-2,), m_minus2) == (Fraction(-1, 2),)

    @given(nd_matrices(), st.data())
    def test_stationary(self, m, data):
        c = tuple(w + 2 * data.draw(st.integers(-4, 4)) for w in m.weights)
        xs = continuous_minimizer(c, m)
        # gradient of -(c.x + x^T M x)/2 is -(c + 2 M x)/2
        assert all(ci + 2 * sum(mij * xj for mij, xj in zip(row, xs)) == 0 for ci, row in zip(c, m.M))


class TestLambdaLowerBound:
    def test_examples(self, m_minus1, m_minus2, m_chain23):
        assert lambda_lower_bound(m_minus1) == 1
        assert lambda_lower_bound(m_minus2) == 2
        assert lambda_lower_bound(m_chain23) == Fraction(5, 4)

    @given(nd_matrices(max_vertices=5))
    def test_below_smallest_eigenvalue(self, m):
        # floating point only as a sanity check on the exact bound
        lam = min(np.linalg.eigvalsh(-np.array(m.M, dtype=float)))
        assert float(lambda_lower_bound(m)) <= lam + 1e-9


class TestMinChi:
    def test_unknot(self, m_minus1):
        res = min_chi((-1,), m_minus1)
        assert (res.min_value, res.argmin, res.minimizers) == (0, (-1,), ((-1,), (0,)))

    def test_e8(self, m_e8):
        res = min_chi((0,) * 8, m_e8)
        assert (res.min_value, res.argmin) == (0, (0,) * 8)

    def test_lens2(self, m_minus2):
        res = min_chi((-2,), m_minus2)
        assert (res.min_value, res.argmin) == (0, (-1,))

    @given(nd_matrices(max_vertices=4), st.data())
    @settings(max_examples=60, deadline=None)
    def test_against_bruteforce(self, m, data):
        c = tuple(w + 2 * data.draw(st.integers(-6, 6)) for w in m.weights)
        res = min_chi(c, m)
        assert chi(c, res.argmin, m) == res.min_value
        brute = brute_force_min_chi(c, m, box_radius_for(res.certified_radius_sq))
        assert (brute.min_value, brute.argmin, brute.minimizers) == (res.min_value, res.argmin, res.minimizers)
        assert brute.certified_radius_sq == res.certified_radius_sq
        assert res.points_scanned >= 1


class TestBruteForce:
    def test_examples(self, m_minus1, m_minus2, m_e8):
        assert brute_force_min_chi((-1,), m_minus1, 5).min_value == 0
        res = brute_force_min_chi((0,), m_minus2, 5)
        assert (res.min_value, res.argmin) == (0, (0,))
        res = brute_force_min_chi((0,) * 8, m_e8, 2)
        assert (res.min_value, res.argmin, res.points_scanned) == (0, (0,) * 8, 5 ** 8)

    def test_radius_too_small(self):
        m = build_matrix(PlumbingGraph.from_weights([-1, -5, -5, -5], [(1, 2), (1, 3), (1, 4)]))
        c = tuple(w + 20 for w in m.weights)
        with pytest.raises(RadiusTooSmall):
            brute_force_min_chi(c, m, 0)

    @given(nd_matrices(max_vertices=3), st.data())
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_radius(self, m, data):
        c = tuple(w + 2 * data.draw(st.integers(-6, 6)) for w in m.weights)
        r = box_radius_for(min_chi(c, m).certified_radius_sq)
        values = {brute_force_min_chi(c, m, r + k).min_value for k in range(3)}
        assert len(values) == 1


class TestMaxSquare:
    def test_examples(self, m_minus1, m_minus2):
        assert max_square_in_class((0,), m_minus2) == (0, (0,))
        assert max_square_in_class((-2,), m_minus2) == (-2, (-2,))
        assert max_square_in_class((-1,), m_minus1) == (-1, (-1,))

    @given(nd_matrices(max_vertices=3), st.data())
    @settings(max_examples=30, deadline=None)
    def test_against_coset_search(self, m, data):
        c = tuple(w + 2 * data.draw(st.integers(-4, 4)) for w in m.weights)
        sq, k = max_square_in_class(c, m)
        assert same_spinc(k, c, m) and square(k, m) == sq
        radius = box_radius_for(min_chi(c, m).certified_radius_sq)
        assert brute_force_max_square(c, m, radius) == (sq, k)


class TestDInvariant:
    def test_unknot(self, m_minus1):
        (report,) = d_invariants_all(m_minus1)
        assert report.d == 0

    def test_lens2(self, m_minus2):
        assert sorted(r.d for r in d_invariants_all(m_minus2)) == [Fraction(-1, 4), Fraction(1, 4)]

    def test_e8(self, m_e8):
        (report,) = d_invariants_all(m_e8)
        assert report.d == 2 and report.maximizer == (0,) * 8

    def test_chain(self, m_chain23):
        reports = d_invariants_all(m_chain23)
        assert len(reports) == 5
        assert [r.class_index for r in reports] == list(range(5))
        assert d_invariant_of((0, 1), m_chain23).d == Fraction(2, 5)
        # independent: exhaustive coset search in a box of radius 10 around the origin
        sq, _ = coset_max_bruteforce((0, 1), m_chain23.M, 10)
        assert (sq + 2) / 4 == Fraction(2, 5)

    def test_d_bounded_by_quarter_s(self, acceptance_corpus):
        for _, g, m in acceptance_corpus[:30]:
            all_even = all(w % 2 == 0 for w in m.weights)
            for r in d_invariants_all(m):
                assert r.d <= Fraction(m.s, 4)
                if r.d == Fraction(m.s, 4):
                    assert all_even and not any(r.maximizer)

    @given(nd_matrices(max_vertices=4), st.data())
    @settings(max_examples=30, deadline=None)
    def test_coset_invariance(self, m, data):
        cls = enumerate_spinc(m)[data.draw(st.integers(0, abs(m.det) - 1))]
        x = tuple(data.draw(st.integers(-5, 5)) for _ in range(m.s))
        assert d_invariant_of(translate(cls.rep, x, m), m).d == d_invariant(cls, m).d

    def test_parallel_matches_serial(self, m_chain23):
        assert d_invariants_all(m_chain23, parallel=True) == d_invariants_all(m_chain23)


def test_sublevel_points_match_ball_filter(m_chain23):
    import itertools
    c = (0, 1)
    for level in range(0, 4):
        pts = sublevel_points(c, m_chain23, level)
        ref = sorted((x, chi(c, x, m_chain23)) for x in itertools.product(range(-6, 7), repeat=2)
                     if chi(c, x, m_chain23) <= level)
        assert pts == ref
