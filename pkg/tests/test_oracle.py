import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbounds.bounds import (
    CLASSIC,
    HERTZ,
    ORDER2_MOMENT,
    BoundedSupport,
    mgf_bound,
    moment_caps,
    order_k,
)
from kbounds.oracle import (
    S_GRID,
    FinitePmf,
    exact_log_mgf,
    extremal_two_point,
    mc_sum_tail,
    moment_matched_pmf,
    moments,
    random_mean_zero_pmf,
    validity_gap,
)

S11 = BoundedSupport(-1, 1)
S51 = BoundedSupport(-5, 1)


class TestFinitePmf:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            FinitePmf((-1.0, 1.0), (0.4, 0.4), S11)

    def test_rejects_nonzero_mean(self):
        with pytest.raises(ValueError):
            FinitePmf((-1.0, 1.0), (0.3, 0.7), S11)

    def test_rejects_atoms_outside_support(self):
        with pytest.raises(ValueError):
            FinitePmf((-2.0, 2.0), (0.5, 0.5), S11)

    def test_rejects_negative_mass(self):
        with pytest.raises(ValueError):
            FinitePmf((-1.0, 0.0, 1.0), (0.6, -0.2, 0.6), S11)


class TestExactLogMgf:
    def test_point_mass_at_zero(self):
        pmf = FinitePmf((0.0,), (1.0,), S11)
        for s in (0.3, 1.0, 7.0):
            assert exact_log_mgf(pmf, s) == pytest.approx(0.0, abs=1e-15)

    def test_symmetric_two_point_is_log_cosh(self):
        pmf = FinitePmf((-1.0, 1.0), (0.5, 0.5), S11)
        assert exact_log_mgf(pmf, 1.0) == pytest.approx(math.log(math.cosh(1.0)), rel=1e-12)

    def test_vectorized_matches_scalar(self):
        pmf = extremal_two_point(S51)
        grid = np.array([0.1, 1.0, 10.0])
        vec = exact_log_mgf(pmf, grid)
        assert vec == pytest.approx([exact_log_mgf(pmf, float(s)) for s in grid])

    def test_no_overflow_at_large_s(self):
        pmf = extremal_two_point(BoundedSupport(-1, 5))
        assert math.isfinite(exact_log_mgf(pmf, 500.0))

    def test_extremal_stays_under_every_applicable_bound(self):
        pmf = extremal_two_point(S51)
        measured = BoundedSupport(-5, 1, m2=moments(pmf, 2))
        for tag in (CLASSIC, HERTZ, order_k(2), order_k(5), ORDER2_MOMENT):
            assert validity_gap(pmf, mgf_bound(measured, tag)) <= 0.0


class TestMoments:
    def test_symmetric_two_point(self):
        pmf = FinitePmf((-1.0, 1.0), (0.5, 0.5), S11)
        assert moments(pmf, 2) == 1.0
        assert moments(pmf, 3) == 0.0

    def test_extremal_attains_both_caps(self):
        pmf = extremal_two_point(S51)
        cap2, cap4 = moment_caps(S51)
        assert moments(pmf, 2) == pytest.approx(cap2, rel=1e-12)
        assert moments(pmf, 4) == pytest.approx(cap4, rel=1e-12)

    def test_rejects_order_zero(self):
        with pytest.raises(ValueError):
            moments(extremal_two_point(S11), 0)


class TestRandomPmf:
    def test_deterministic_in_seed(self):
        one = random_mean_zero_pmf(S51, 5, seed=42)
        two = random_mean_zero_pmf(S51, 5, seed=42)
        assert one.xs == two.xs and one.ps == two.ps
        other = random_mean_zero_pmf(S51, 5, seed=43)
        assert one.xs != other.xs

    def test_two_atom_case_is_the_unique_zero_mean_law(self):
        pmf = random_mean_zero_pmf(S11, 2, seed=3)
        x_neg, x_pos = sorted(pmf.xs)
        p_of = dict(zip(pmf.xs, pmf.ps))
        # unique solution of p*x_neg + q*x_pos = 0, p + q = 1
        assert p_of[x_neg] == pytest.approx(x_pos / (x_pos - x_neg), rel=1e-10)

    def test_moment_caps_hold_over_many_draws(self):
        cap2, cap4 = moment_caps(S51)
        for seed in range(300):
            pmf = random_mean_zero_pmf(S51, 2 + seed % 7, seed=seed)
            assert moments(pmf, 2) <= cap2 * (1 + 1e-12)
            assert moments(pmf, 4) <= cap4 * (1 + 1e-12)

    def test_rejects_single_atom(self):
        with pytest.raises(ValueError):
            random_mean_zero_pmf(S11, 1, seed=0)

    @given(st.integers(0, 10 ** 6), st.integers(2, 9))
    @settings(max_examples=60, deadline=None)
    def test_invariants_for_arbitrary_seeds(self, seed, atoms):
        pmf = random_mean_zero_pmf(BoundedSupport(-2, 3), atoms, seed=seed)
        ps = np.asarray(pmf.ps)
        xs = np.asarray(pmf.xs)
        assert abs(ps.sum() - 1.0) < 1e-12
        assert abs(float(ps @ xs)) < 1e-12
        assert np.all(ps >= 0.0)


class TestMomentMatchedPmf:
    def test_plain_support_gives_random_pmf(self):
        pmf = moment_matched_pmf(S11, seed=1)
        assert abs(moments(pmf, 1)) < 1e-12

    def test_m2_is_hit_exactly(self):
        support = BoundedSupport(-5, 5, m2=5.0)
        pmf = moment_matched_pmf(support)
        assert moments(pmf, 2) == pytest.approx(5.0, rel=1e-12)

    def test_symmetric_m2_m4(self):
        support = BoundedSupport(-2, 2, m2=1.0, m4=2.5, odd_moments_zero=True)
        pmf = moment_matched_pmf(support)
        assert moments(pmf, 2) == pytest.approx(1.0, rel=1e-12)
        assert moments(pmf, 4) == pytest.approx(2.5, rel=1e-12)
        assert moments(pmf, 3) == pytest.approx(0.0, abs=1e-15)

    def test_unmatchable_moments_rejected(self):
        with pytest.raises(ValueError):
            moment_matched_pmf(BoundedSupport(-1, 5, m2=3.0, m4=9.5))


class TestMcSumTail:
    def test_sure_events(self):
        pmf = FinitePmf((-1.0, 1.0), (0.5, 0.5), S11)
        below, _ = mc_sum_tail([pmf], -2.0, 1000, seed=0)
        above, _ = mc_sum_tail([pmf], 2.5, 1000, seed=0)
        assert below == 1.0
        assert above == 0.0

    def test_deterministic_in_seed(self):
        pmf = random_mean_zero_pmf(S51, 4, seed=9)
        assert mc_sum_tail([pmf], 0.3, 5000, seed=7) == mc_sum_tail(
            [pmf], 0.3, 5000, seed=7
        )

    def test_matches_exact_binomial_tail(self):
        # sum of 8 fair +-1 coins: P(S >= 3) = P(heads >= 6) = 37/256
        pmf = FinitePmf((-1.0, 1.0), (0.5, 0.5), S11)
        exact = sum(math.comb(8, h) for h in range(6, 9)) / 2 ** 8
        for seed in range(3):
            estimate, se = mc_sum_tail([pmf] * 8, 3.0, 10 ** 5, seed=seed)
            assert abs(estimate - exact) <= 4.0 * se

    def test_rejects_tiny_sample_counts(self):
        pmf = FinitePmf((-1.0, 1.0), (0.5, 0.5), S11)
        with pytest.raises(ValueError):
            mc_sum_tail([pmf], 0.5, 999, seed=0)


def test_four_variable_instantiation_respects_group_one_certificate():
    # any valid instantiation of the four shipped intervals (with E[X2^2]=5)
    # must sit under the all-orders-one certificate exp(-0.45) at t = 6
    variables = (
        S11,
        BoundedSupport(-5, 5, m2=5.0),
        BoundedSupport(-1, 5),
        BoundedSupport(-5, 1),
    )
    pmfs = [moment_matched_pmf(v, seed=i) for i, v in enumerate(variables)]
    assert moments(pmfs[1], 2) == pytest.approx(5.0, rel=1e-12)
    estimate, se = mc_sum_tail(pmfs, 6.0, 10 ** 5, seed=0)
    assert estimate <= math.exp(-0.45) + 3.0 * se


class TestTightness:
    def test_hertz_curvature_matches_extremal_at_small_s(self):
        # with |a| >= b the Hertz rate is |a|b/2: exactly half the extremal
        # second moment, so the bound is curvature-tight at s -> 0
        for support in (S51, BoundedSupport(-2, 1), S11):
            pmf = extremal_two_point(support)
            bound = mgf_bound(support, HERTZ)
            s = 1e-4
            curvature = 2.0 * exact_log_mgf(pmf, s) / (s * s)
            assert curvature == pytest.approx(2.0 * bound.rate, rel=1e-3)

    def test_validity_gap_is_negative_but_small_for_extremal(self):
        gap = validity_gap(extremal_two_point(S51), mgf_bound(S51, HERTZ), S_GRID)
        assert -1e-2 < gap <= 0.0
