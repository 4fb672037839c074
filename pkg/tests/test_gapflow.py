import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reflectionless import (CanonicalKrein, CompactSet, StepFunction,
                            flow_steps, flow_to_canonical, free_krein,
                            gap_jump_masses, gap_modify, hilbert_transform,
                            is_canonical)
from reflectionless.experiments import random_admissible_krein, random_compact_set


def half_on(k_set, rng, bound=None):
    return random_admissible_krein(rng, k_set, bound)


class TestGapModify:
    def test_half_mass_splits_the_gap(self):
        xi = StepFunction.constant(2.0, 0.5)
        out = gap_modify(xi, (0.0, 1.0))
        assert out.value_at(0.25) == 0.0
        assert out.value_at(0.75) == 1.0
        assert 0.5 in out.breakpoints

    def test_empty_gap_mass_unchanged(self):
        xi = free_krein(3.0)  # value 0 on (2, 3)
        assert gap_modify(xi, (2.0, 3.0)) == xi

    def test_full_gap_mass_unchanged(self):
        xi = free_krein(3.0)  # value 1 on (-3, -2)
        assert gap_modify(xi, (-3.0, -2.0)) == xi

    def test_mass_preserved_exactly(self, rng):
        for _ in range(20):
            k_set = random_compact_set(rng)
            xi = half_on(k_set, rng)
            for gap in k_set.gaps():
                before = xi.integral(*gap)
                after = gap_modify(xi, gap).integral(*gap)
                assert after == pytest.approx(before, abs=1e-14)

    def test_gap_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            gap_modify(free_krein(2.0), (1.0, 3.0))


class TestFlow:
    def test_no_gap_no_tail_identity(self):
        xi = free_krein(2.0)
        k_set = CompactSet(((-2.0, 2.0),))
        assert flow_to_canonical(xi, k_set).xi == xi

    def test_tail_assignment_only(self):
        xi = StepFunction.constant(3.0, 0.5)
        k_set = CompactSet(((-2.0, 2.0),))
        out = flow_to_canonical(xi, k_set).xi
        assert list(out.pieces()) == [(-3.0, -2.0, 1.0), (-2.0, 2.0, 0.5),
                                      (2.0, 3.0, 0.0)]

    def test_partial_gap_mass_right_packs(self):
        xi = StepFunction.from_pieces(
            3.0, [(-2.0, 0.0, 0.5), (0.0, 1.0, 0.3), (1.0, 2.0, 0.5)], fill=0.5)
        k_set = CompactSet(((-2.0, 0.0), (1.0, 2.0)))
        out = flow_to_canonical(xi, k_set)
        assert out.jumps() == pytest.approx((0.3,), abs=1e-15)
        assert out.xi.value_at(0.5) == 0.0
        assert out.xi.value_at(0.85) == 1.0
        # the transform dropped on the bands
        pts = k_set.interior_grid(25)
        assert np.all(hilbert_transform(out.xi, pts) <= hilbert_transform(xi, pts) + 1e-12)

    def test_requires_half_on_bands(self):
        xi = StepFunction.constant(3.0, 0.4)
        with pytest.raises(ValueError):
            flow_to_canonical(xi, CompactSet(((-2.0, 2.0),)))

    def test_idempotent_up_to_rounding(self, rng):
        for _ in range(10):
            k_set = random_compact_set(rng)
            xi = half_on(k_set, rng)
            once = flow_to_canonical(xi, k_set).xi
            twice = flow_to_canonical(once, k_set).xi
            assert twice.approx_equal(once, tol=1e-12)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_transform_never_increases_on_bands(self, seed):
        rng = np.random.default_rng(seed)
        k_set = random_compact_set(rng)
        xi = half_on(k_set, rng)
        pts = k_set.interior_grid(50)
        prev = xi
        for _, cur in flow_steps(xi, k_set):
            drop = hilbert_transform(prev, pts) - hilbert_transform(cur, pts)
            assert np.min(drop) >= -1e-12
            prev = cur

    def test_strict_decrease_for_visible_modification(self, rng):
        k_set = CompactSet(((-2.0, -0.5), (0.5, 2.0)))
        xi = free_krein(3.0).with_value(-0.5, 0.5, 0.5)
        out = gap_modify(xi, (-0.5, 0.5))
        assert xi.l1_distance(out) > 0.1  # visibly modified
        for x in rng.uniform(0.55, 1.95, 10):
            drop = hilbert_transform(xi, float(x)) - hilbert_transform(out, float(x))
            assert drop > 1e-12


class TestCanonicalShape:
    def test_flow_output_is_canonical(self, rng):
        for _ in range(10):
            k_set = random_compact_set(rng)
            xi = half_on(k_set, rng)
            assert is_canonical(flow_to_canonical(xi, k_set).xi, k_set)

    def test_fractional_gap_value_is_not_canonical(self):
        k_set = CompactSet(((-2.0, 0.0), (1.0, 2.0)))
        xi = StepFunction.from_pieces(
            3.0, [(-3.0, -2.0, 1.0), (-2.0, 0.0, 0.5), (0.0, 1.0, 0.3),
                  (1.0, 2.0, 0.5), (2.0, 3.0, 0.0)])
        assert not is_canonical(xi, k_set)

    def test_wrong_left_tail_is_not_canonical(self):
        k_set = CompactSet(((-2.0, 2.0),))
        xi = StepFunction.from_pieces(3.0, [(-2.0, 2.0, 0.5)], fill=0.0)
        assert not is_canonical(xi, k_set)

    def test_left_packed_gap_is_not_canonical(self):
        k_set = CompactSet(((-2.0, -0.5), (0.5, 2.0)))
        xi = StepFunction.from_pieces(
            3.0, [(-3.0, -2.0, 1.0), (-2.0, -0.5, 0.5), (-0.5, 0.0, 1.0),
                  (0.0, 0.5, 0.0), (0.5, 2.0, 0.5), (2.0, 3.0, 0.0)])
        assert not is_canonical(xi, k_set)

    def test_certificate_constructor_validates(self):
        k_set = CompactSet(((-2.0, 2.0),))
        with pytest.raises(ValueError):
            CanonicalKrein(StepFunction.constant(3.0, 0.5), k_set)

    def test_jump_mass_extraction(self):
        k_set = CompactSet(((-2.0, -0.5), (0.5, 2.0)))
        xi = free_krein(3.0).with_value(-0.5, 0.5, 0.5)
        assert gap_jump_masses(xi, k_set) == pytest.approx((0.5,), abs=0)
