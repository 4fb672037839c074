import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reflectionless import (HerglotzRep, StepFunction, abs_boundary,
                            boundary_value, correction_factor, free_krein,
                            herglotz_eval, hilbert_transform)
from reflectionless.krein import log_abs_on_arc

from conftest import interior_points, random_step


def free_rep(bound=2.0):
    return HerglotzRep(free_krein(bound))


class TestStepFunction:
    def test_canonical_merges_equal_neighbors(self):
        s = StepFunction(2.0, (-2.0, -1.0, 0.0, 2.0), (0.5, 0.5, 0.0))
        assert s.breakpoints == (-2.0, 0.0, 2.0)
        assert s.values == (0.5, 0.0)

    def test_zero_width_pieces_dropped(self):
        s = StepFunction(2.0, (-2.0, 0.0, 0.0, 2.0), (0.5, 1.0, 0.0))
        assert s.breakpoints == (-2.0, 0.0, 2.0)

    def test_value_lookup_and_breakpoint_rejection(self):
        s = free_krein(3.0)
        assert s.value_at(1.0) == 0.5
        assert s.value_at(-2.5) == 1.0
        with pytest.raises(ValueError):
            s.value_at(2.0)
        with pytest.raises(ValueError):
            s.value_at(3.5)

    def test_values_outside_unit_interval_rejected(self):
        with pytest.raises(ValueError):
            StepFunction(2.0, (-2.0, 2.0), (1.5,))

    def test_with_value_splices(self):
        s = free_krein(3.0).with_value(2.0, 2.5, 0.5)
        assert s.value_at(2.2) == 0.5
        assert s.value_at(2.7) == 0.0
        # merged with the central 1/2 piece
        assert s.breakpoints == (-3.0, -2.0, 2.5, 3.0)

    def test_integral_exact(self):
        s = free_krein(3.0)
        assert s.integral() == pytest.approx(1.0 + 2.0, abs=0)
        assert s.integral(-2.0, 2.0) == 2.0

    def test_json_roundtrip(self):
        s = free_krein(2.5)
        assert StepFunction.from_dict(s.to_dict()) == s

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_distances_vanish_only_on_equal(self, seed):
        rng = np.random.default_rng(seed)
        s = random_step(rng)
        assert s.l1_distance(s) == 0.0
        t = random_step(rng, bound=s.bound)
        assert s.l1_distance(t) >= 0.0
        assert abs(s.l1_distance(t) - t.l1_distance(s)) < 1e-14


class TestFreeKrein:
    def test_minimal_bound_single_piece(self):
        s = free_krein(2.0)
        assert list(s.pieces()) == [(-2.0, 2.0, 0.5)]

    def test_three_piece_shape(self):
        s = free_krein(3.0)
        assert list(s.pieces()) == [(-3.0, -2.0, 1.0), (-2.0, 2.0, 0.5), (2.0, 3.0, 0.0)]

    def test_band_value(self):
        assert free_krein(2.0).value_at(1.0) == 0.5

    def test_bound_below_band_rejected(self):
        with pytest.raises(ValueError):
            free_krein(1.5)


class TestHerglotzEval:
    def test_free_at_2i(self):
        h = herglotz_eval(free_rep(), 2j)
        assert h == pytest.approx(2.0 * math.sqrt(2.0) * 1j, abs=1e-12)

    def test_free_right_of_band(self):
        assert herglotz_eval(free_rep(), 3.0) == pytest.approx(math.sqrt(5.0), abs=1e-12)

    def test_full_value_piece_telescopes(self):
        rep = HerglotzRep(StepFunction.constant(3.0, 1.0))
        assert herglotz_eval(rep, 4.0) == pytest.approx(1.0, abs=1e-12)

    def test_free_matches_square_root_branch(self):
        rng = np.random.default_rng(3)
        z = rng.uniform(-5, 5, 200) + 1j * 10.0 ** rng.uniform(-3, 1, 200)
        h = herglotz_eval(free_rep(), z)
        ref = z * np.sqrt(1.0 - 4.0 / z**2)
        assert np.max(np.abs(h - ref) / np.abs(ref)) < 1e-12

    def test_rejects_points_on_the_cut(self):
        with pytest.raises(ValueError):
            herglotz_eval(free_rep(), 1.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_upper_half_plane_maps_to_itself(self, seed):
        rng = np.random.default_rng(seed)
        rep = HerglotzRep(random_step(rng))
        z = rng.uniform(-6, 6, 25) + 1j * 10.0 ** rng.uniform(-3, 1, 25)
        assert np.all(herglotz_eval(rep, z).imag > 0.0)

    def test_linear_growth_along_imaginary_axis(self):
        rng = np.random.default_rng(5)
        rep = HerglotzRep(random_step(rng))
        ratios = [abs(herglotz_eval(rep, 1j * y) / (1j * y) - 1.0)
                  for y in (1e3, 1e4, 1e5, 1e6)]
        assert ratios == sorted(ratios, reverse=True)
        assert ratios[-1] < 1e-5


class TestBoundaryValues:
    def test_free_center(self):
        assert boundary_value(free_rep(), 0.0) == pytest.approx(2j, abs=1e-12)

    def test_free_inside_band(self):
        assert boundary_value(free_rep(), 1.0) == pytest.approx(math.sqrt(3.0) * 1j, abs=1e-12)

    def test_zero_piece_gives_positive_real(self):
        assert boundary_value(free_rep(3.0), 2.5) == pytest.approx(1.5, abs=1e-12)

    def test_breakpoint_rejected(self):
        with pytest.raises(ValueError):
            boundary_value(free_rep(3.0), 2.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_modulus_identity_against_vertical_limit(self, seed):
        # |H(x)| from the log-modulus formula must agree with the limit of
        # |H(x + i eta)| computed through the complex principal powers.
        rng = np.random.default_rng(seed)
        xi = random_step(rng, max_pieces=4, min_width=0.3)
        rep = HerglotzRep(xi)
        xs = interior_points(xi, rng, 20)
        closed = abs_boundary(rep, xs)
        eta = 1e-4
        v1 = np.abs(herglotz_eval(rep, xs + 1j * eta))
        v2 = np.abs(herglotz_eval(rep, xs + 0.5j * eta))
        v3 = np.abs(herglotz_eval(rep, xs + 0.25j * eta))
        extrap = (8.0 * v3 - 6.0 * v2 + v1) / 3.0
        assert np.max(np.abs(extrap - closed) / np.maximum(1.0, closed)) < 1e-6

    def test_modulus_shares_the_log_formula(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            xi = random_step(rng, max_pieces=5)
            rep = HerglotzRep(xi)
            for x in interior_points(xi, rng, 10):
                assert abs(boundary_value(rep, x)) == pytest.approx(
                    float(abs_boundary(rep, x)), rel=1e-10)

    def test_phase_matches_vertical_limit(self):
        rng = np.random.default_rng(11)
        xi = random_step(rng, max_pieces=4, min_width=0.3)
        rep = HerglotzRep(xi)
        for x in interior_points(xi, rng, 10):
            bv = boundary_value(rep, x)
            h1 = herglotz_eval(rep, x + 1e-5j)
            h2 = herglotz_eval(rep, x + 5e-6j)
            assert abs(2.0 * h2 - h1 - bv) < 1e-6 * max(1.0, abs(bv))


class TestHilbertTransform:
    def test_indicator_right_of_support(self):
        f = StepFunction.indicator(2.0, 0.0, 1.0)
        assert hilbert_transform(f, 2.0) == pytest.approx(-math.log(2.0), abs=1e-14)

    def test_principal_value_symmetry_point(self):
        f = StepFunction.indicator(2.0, 0.0, 1.0)
        assert hilbert_transform(f, 0.5) == 0.0

    def test_indicator_left_of_support(self):
        f = StepFunction.indicator(2.0, 0.0, 1.0)
        assert hilbert_transform(f, -1.0) == pytest.approx(math.log(2.0), abs=1e-14)

    def test_jump_point_rejected(self):
        f = StepFunction.indicator(2.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            hilbert_transform(f, 1.0)

    def test_l2_convergence_carries_to_transform(self):
        # T is linear, so xi_n = xi + (eta - xi)/n converging in L^2 forces
        # T xi_n -> T xi at the same rate on any off-breakpoint grid.
        rng = np.random.default_rng(7)
        r = 3.0
        edges = (-3.0, -1.0, 0.5, 3.0)
        xi = StepFunction(r, edges, (0.2, 0.8, 0.4))
        eta = StepFunction(r, edges, (0.6, 0.1, 0.9))
        grid = np.array([-2.0, -0.3, 1.7, 2.4, 4.0])
        base = hilbert_transform(xi, grid)
        d1 = None
        for n in (1, 2, 4, 8, 16):
            mixed = StepFunction(r, edges, tuple(
                v + (w - v) / n for v, w in zip(xi.values, eta.values)))
            dn = float(np.max(np.abs(hilbert_transform(mixed, grid) - base)))
            if d1 is None:
                d1 = dn
            assert dn <= 1.01 * d1 / n

    def test_arc_evaluation_matches_interior_formula(self):
        rng = np.random.default_rng(13)
        xi = random_step(rng, max_pieces=4, min_width=0.3)
        rep = HerglotzRep(xi)
        lo, hi, _ = list(xi.pieces())[0]
        theta = np.linspace(-1.2, 1.2, 7)
        t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.sin(theta)
        assert np.allclose(np.exp(log_abs_on_arc(rep, lo, hi, theta)),
                           abs_boundary(rep, t), rtol=1e-12)


class TestCorrectionFactor:
    def test_free_reference_is_one(self):
        for r in (2.0, 2.5, 3.0, 4.0):
            assert correction_factor(free_rep(r), 0.3) == pytest.approx(1.0, abs=1e-14)

    def test_right_half_piece(self):
        xi = StepFunction.from_pieces(
            2.5, [(-2.5, -2.0, 1.0), (-2.0, 2.0, 0.5), (2.0, 2.5, 0.5)])
        assert correction_factor(HerglotzRep(xi), 0.0) == pytest.approx(
            math.sqrt(1.25), abs=1e-14)

    def test_left_zero_piece(self):
        xi = StepFunction.from_pieces(
            3.0, [(-3.0, -2.0, 0.0), (-2.0, 2.0, 0.5), (2.0, 3.0, 0.0)])
        assert correction_factor(HerglotzRep(xi), 0.0) == pytest.approx(1.5, abs=1e-14)

    def test_requires_half_on_the_band(self):
        xi = StepFunction.constant(3.0, 0.4)
        with pytest.raises(ValueError):
            correction_factor(HerglotzRep(xi), 0.0)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_never_below_one_for_admissible_inputs(self, seed):
        rng = np.random.default_rng(seed)
        r = float(rng.uniform(2.2, 4.0))
        pieces = [(-2.0, 2.0, 0.5)]
        cut_l = float(rng.uniform(-r + 0.1, -2.05))
        pieces += [(-r, cut_l, float(rng.uniform(0, 1))),
                   (cut_l, -2.0, float(rng.uniform(0, 1)))]
        cut_r = float(rng.uniform(2.05, r - 0.1))
        pieces += [(2.0, cut_r, float(rng.uniform(0, 1))),
                   (cut_r, r, float(rng.uniform(0, 1)))]
        rep = HerglotzRep(StepFunction.from_pieces(r, pieces))
        for x in rng.uniform(-1.9, 1.9, 10):
            assert correction_factor(rep, float(x)) >= 1.0 - 1e-13

    def test_matches_modulus_ratio(self):
        xi = StepFunction.from_pieces(
            3.0, [(-3.0, -2.4, 0.0), (-2.4, -2.0, 1.0), (-2.0, 2.0, 0.5),
                  (2.0, 2.7, 1.0), (2.7, 3.0, 0.0)])
        rep = HerglotzRep(xi)
        for x in (-1.5, -0.2, 0.9, 1.8):
            ratio = abs_boundary(rep, x) / abs_boundary(free_rep(), x)
            assert correction_factor(rep, x) == pytest.approx(float(ratio), rel=1e-12)
