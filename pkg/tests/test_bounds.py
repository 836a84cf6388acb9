"""
Unit tests for VC complexity, deviation bounds and random tree tail bounds
"""
import math
import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from bounds import (
    BoundSpec,
    balls_on_grid,
    cart_bound,
    cart_min_leaf_threshold,
    empirical_mass_bounds,
    intervals_on_grid,
    knn_applicable,
    knn_bound,
    knn_min_neighbors_threshold,
    large_sample_threshold,
    log_sauer,
    optimal_rate_bound,
    pointwise_bound,
    rectangles_from_boxes,
    rectangles_on_grid,
    sauer_binomial_sum,
    sauer_bound,
    shatter_count,
    sup_statistic_bound,
    tree_deviations,
    vapnik_mass_upper,
    variance_term,
    vc_dim_bruteforce,
    volume_bound,
)
from errors import DegenerateCellError, EmptyCellError, ParameterRangeError

DIAMOND = [(0, 1), (1, 0), (2, 1), (1, 2)]
HALF_GRID = [-0.5, 0.5, 1.5, 2.5, 3.5]


def ball_class():
    steps = np.arange(-1.0, 3.0 + 1e-9, 0.25)
    centers = [(a, b) for a in steps for b in steps]
    radii = np.arange(0.25, 3.0 + 1e-9, 0.25)
    return balls_on_grid(centers, radii)


class TestSauer:
    """Tests for the Sauer bound and its binomial form"""

    def test_sauer_examples(self):
        """Test (n+1)^v on small inputs"""
        assert sauer_bound(1, 1) == 2
        assert sauer_bound(3, 2) == 16

    def test_log_sauer_matches(self):
        """Test that the log form agrees with the direct value"""
        assert log_sauer(3, 2) == pytest.approx(math.log(16))

    def test_sauer_overflow_is_infinite(self):
        """Test that a huge bound is reported as inf, its log stays finite"""
        assert sauer_bound(10 ** 6, 200) == math.inf
        assert math.isfinite(log_sauer(10 ** 6, 200))

    def test_binomial_form_is_tighter(self):
        """Test sum_{i<=v} C(n,i) <= (n+1)^v"""
        for n in range(1, 12):
            for v in range(1, 5):
                assert sauer_binomial_sum(n, v) <= sauer_bound(n, v)

    def test_rejects_bad_inputs(self):
        """Test that n or v below 1 raise"""
        with pytest.raises(ParameterRangeError):
            sauer_bound(0, 1)
        with pytest.raises(ParameterRangeError):
            sauer_bound(3, 0)


class TestShattering:
    """Tests for brute-force shattering counts and VC dimensions"""

    def test_intervals_on_three_points(self):
        """Test that intervals realize 7 patterns on {1, 2, 3}"""
        cls = intervals_on_grid([0.5, 1.5, 2.5, 3.5])
        count = shatter_count(cls, [1.0, 2.0, 3.0])
        assert count == 7
        assert count <= sauer_bound(3, 2)

    def test_single_point_two_patterns(self):
        """Test that a class with the empty set and a full set gives 2 patterns on 1 point"""
        cls = intervals_on_grid([0.0, 1.0])
        assert shatter_count(cls, [0.5]) == 2

    def test_rectangles_shatter_diamond(self):
        """Test that grid rectangles shatter 4 points in convex position"""
        cls = rectangles_on_grid(HALF_GRID, 2)
        assert shatter_count(cls, DIAMOND) == 16

    def test_duplicate_points_rejected(self):
        """Test that repeated points raise"""
        cls = intervals_on_grid([0.5, 1.5, 2.5])
        with pytest.raises(DegenerateCellError):
            shatter_count(cls, [1.0, 1.0])

    def test_vc_intervals(self):
        """Test that intervals in d=1 have VC dimension 2"""
        cls = intervals_on_grid(HALF_GRID)
        assert vc_dim_bruteforce(cls, [0.0, 1.0, 2.0, 3.0], max_n=3) == 2

    def test_vc_rectangles(self):
        """Test that rectangles in d=2 have VC dimension 4"""
        cls = rectangles_on_grid(HALF_GRID, 2)
        assert vc_dim_bruteforce(cls, DIAMOND + [(1, 1)], max_n=5) == 4

    def test_vc_balls(self):
        """Test that balls in d=2 have VC dimension 3"""
        pool = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (3, 1), (1, 3)]
        assert vc_dim_bruteforce(ball_class(), pool, max_n=4) == 3

    def test_vc_rejects_large_max_n(self):
        """Test that the brute-force search is capped"""
        with pytest.raises(ParameterRangeError):
            vc_dim_bruteforce(intervals_on_grid(HALF_GRID), [0.0, 1.0], max_n=9)

    def test_sauer_lemma_on_small_instances(self):
        """Test shatter count <= min(2^n, (n+1)^vc) on random subsets"""
        cls = rectangles_on_grid(HALF_GRID, 2)
        rng = np.random.default_rng(5)
        pool = [(a, b) for a in range(4) for b in range(4)]
        for _ in range(30):
            n = int(rng.integers(1, 7))
            idx = rng.choice(len(pool), size=n, replace=False)
            points = [pool[i] for i in idx]
            assert shatter_count(cls, points) <= min(2 ** n, sauer_bound(n, 4))

    def test_explicit_boxes(self):
        """Test that a one-box class gives two patterns"""
        cls = rectangles_from_boxes([[0.0, 0.0]], [[0.5, 0.5]])
        assert shatter_count(cls, [(0.25, 0.25), (0.75, 0.75)]) == 2


class TestDeviationBounds:
    """Tests for the variance envelope, thresholds and estimator bounds"""

    def test_variance_term_example(self):
        """Test sqrt(2 log 4) for sigma2=1, n=1, v=1, delta=0.5, one point"""
        spec = BoundSpec(n=1, delta=0.5, v=1, sigma2=1.0)
        assert variance_term(spec, 1) == pytest.approx(1.66511, abs=1e-5)

    def test_variance_term_scaling(self):
        """Test that doubling the count divides the term by sqrt(2)"""
        spec = BoundSpec(n=100, delta=0.1, v=2, sigma2=0.5)
        assert variance_term(spec, 20) == pytest.approx(variance_term(spec, 10) / math.sqrt(2))

    def test_variance_term_noiseless(self):
        """Test that sigma2=0 gives 0"""
        assert variance_term(BoundSpec(n=10, delta=0.1, v=1, sigma2=0.0), 3) == 0.0

    def test_variance_term_empty_cell(self):
        """Test that an empty cell raises"""
        with pytest.raises(EmptyCellError):
            variance_term(BoundSpec(n=10, delta=0.1, v=1), 0)

    def test_pointwise_adds_bias(self):
        """Test that the pointwise bound is variance plus L diam"""
        spec = BoundSpec(n=50, delta=0.1, v=2, lipschitz=2.0)
        assert pointwise_bound(spec, 5, 0.25) == pytest.approx(variance_term(spec, 5) + 0.5)
        assert pointwise_bound(spec, 5, 0.25, local_lipschitz=0.0) == pytest.approx(variance_term(spec, 5))

    def test_pointwise_requires_small_delta(self):
        """Test that delta >= 1/2 is refused"""
        with pytest.raises(ParameterRangeError):
            pointwise_bound(BoundSpec(n=5, delta=0.5, v=1), 1, 0.1)

    def test_large_sample_threshold(self):
        """Test 8 log 24 and monotonicity in v and delta"""
        assert large_sample_threshold(1, 1, 0.5) == pytest.approx(8 * math.log(24))
        assert large_sample_threshold(1, 1, 0.5) == pytest.approx(25.423, abs=1e-3)
        assert large_sample_threshold(100, 3, 0.1) > large_sample_threshold(100, 2, 0.1)
        assert large_sample_threshold(100, 2, 0.01) > large_sample_threshold(100, 2, 0.1)

    def test_large_sample_threshold_rejects_delta(self):
        """Test that delta outside (0, 1) raises"""
        with pytest.raises(ParameterRangeError):
            large_sample_threshold(1, 1, 4 / 3)

    def test_cart_and_knn_thresholds(self):
        """Test the leaf-size and neighbor-count variants"""
        assert cart_min_leaf_threshold(10, 2, 0.1) == pytest.approx(4 * math.log(4 * 21 ** 4 / 0.1))
        assert knn_min_neighbors_threshold(10, 2, 0.1) == pytest.approx(8 * math.log(4 * 21 ** 3 / 0.1))

    def test_mass_bounds_clamp(self):
        """Test that the lower envelopes clamp at 0 in the vacuous regime"""
        bounds = empirical_mass_bounds(n=10, p=0.01, delta=0.05, shatter_log=1.0)
        assert bounds.lower == 0.0
        assert bounds.chernoff_lower == 0.0

    def test_mass_bounds_limit(self):
        """Test that the Chernoff lower envelope approaches 1 when p=1"""
        small = empirical_mass_bounds(n=100, p=1.0, delta=0.05, shatter_log=0.0)
        large = empirical_mass_bounds(n=10 ** 8, p=1.0, delta=0.05, shatter_log=0.0)
        assert small.chernoff_lower < large.chernoff_lower < 1.0
        assert large.chernoff_lower > 0.999

    def test_chernoff_lower_monte_carlo(self):
        """Test that Binomial(1000, 0.3)/1000 falls below the Chernoff envelope at most about 5% of the time"""
        rng = np.random.default_rng(2024)
        envelope = empirical_mass_bounds(n=1000, p=0.3, delta=0.05, shatter_log=0.0).chernoff_lower
        masses = rng.binomial(1000, 0.3, size=10_000) / 1000
        freq = float(np.mean(masses < envelope))
        assert freq <= 0.05 + 3 * math.sqrt(0.05 * 0.95 / 10_000)

    def test_vapnik_upper(self):
        """Test P(A) <= 4/n log(4 S(2n)/delta) + 2 P_n(A)"""
        value = vapnik_mass_upper(100, 0.1, 0.05, math.log(10))
        assert value == pytest.approx(0.04 * math.log(4 * 10 / 0.05) + 0.2)

    def test_sup_statistic_bound(self):
        """Test sqrt(2 sigma2 log(S / delta))"""
        assert sup_statistic_bound(1.0, math.log(51), 0.05) == pytest.approx(math.sqrt(2 * math.log(51 / 0.05)))

    def test_volume_bound_requires_positive_volume(self):
        """Test that a zero-volume cell raises"""
        spec = BoundSpec(n=100, delta=0.1, v=4)
        with pytest.raises(DegenerateCellError):
            volume_bound(spec, 1.0, 0.0, 0.1)

    def test_volume_bound_decreases_with_volume(self):
        """Test that larger cells have a smaller variance part"""
        spec = BoundSpec(n=1000, delta=0.1, v=4)
        assert volume_bound(spec, 1.0, 0.1, 0.0) < volume_bound(spec, 1.0, 0.01, 0.0)

    def test_optimal_rate_bound_decreases(self):
        """Test that the rate bound decreases in n"""
        small = BoundSpec(n=1000, delta=0.1, v=4, lipschitz=1.0, d=2)
        large = BoundSpec(n=100000, delta=0.1, v=4, lipschitz=1.0, d=2)
        assert optimal_rate_bound(large, 2.0) < optimal_rate_bound(small, 2.0)

    def test_knn_bound(self):
        """Test the k-NN bound formula and its applicability conditions"""
        spec = BoundSpec(n=10000, delta=0.1, v=2, sigma2=0.25, lipschitz=1.0, d=1)
        expected = math.sqrt(0.5 * (2 * math.log(10001) - math.log(0.1)) / 400) + 2 * (800 / 10000)
        assert knn_bound(spec, 400, 1.0) == pytest.approx(expected)
        assert knn_applicable(spec, 400, 1.0)
        assert not knn_applicable(spec, 10, 1.0)

    def test_cart_bound(self):
        """Test the CART-like bound formula"""
        spec = BoundSpec(n=10000, delta=0.1, v=2, sigma2=1.0, lipschitz=1.0, d=2)
        variance = math.sqrt(2 * (4 * math.log(10001) - math.log(0.1)) / 100)
        bias = 2.0 * math.sqrt(2) * (500 / 10000) ** 0.5
        assert cart_bound(spec, 100, 2.0, 1.0) == pytest.approx(variance + bias)

    def test_bound_spec_validation(self):
        """Test that invalid constants raise"""
        with pytest.raises(ParameterRangeError):
            BoundSpec(n=0, delta=0.1, v=1)
        with pytest.raises(ParameterRangeError):
            BoundSpec(n=1, delta=1.5, v=1)
        with pytest.raises(ParameterRangeError):
            knn_bound(BoundSpec(n=10, delta=0.1, v=1), 3, 1.0)


class TestTreeDeviations:
    """Tests for the random tree tail bounds"""

    def test_uniform_diameter_upper(self):
        """Test threshold sqrt(d) e^(-N/d + N beta) and probability d e^(-N d beta^2/4)"""
        bound = tree_deviations.uniform_diameter_upper(2, 50, 0.3)
        assert bound.threshold == pytest.approx(math.sqrt(2) * math.exp(-25 + 15))
        assert bound.probability == pytest.approx(2 * math.exp(-50 * 2 * 0.09 / 4))
        assert bound.event(bound.threshold)

    def test_uniform_diameter_lower_range(self):
        """Test that beta outside (0, 2/d) raises"""
        with pytest.raises(ParameterRangeError):
            tree_deviations.uniform_diameter_lower(2, 50, 1.0)

    def test_uniform_volume_tails(self):
        """Test (alpha e^(1-alpha))^N and the alpha ranges"""
        bound = tree_deviations.uniform_volume_lower(30, 2.0)
        assert bound.threshold == pytest.approx(math.exp(-60))
        assert bound.probability == pytest.approx((2 * math.exp(-1)) ** 30)
        with pytest.raises(ParameterRangeError):
            tree_deviations.uniform_volume_lower(30, 0.5)
        with pytest.raises(ParameterRangeError):
            tree_deviations.uniform_volume_upper(30, 2.0)

    def test_centered_volume_is_deterministic(self):
        """Test that the centered volume event has probability 0 or 1"""
        assert tree_deviations.centered_volume(10, 0.5).probability == 1.0
        assert tree_deviations.centered_volume(10, 1.0).probability == 0.0

    def test_centered_diameter_needs_d2(self):
        """Test that centered diameter bounds refuse d=1"""
        with pytest.raises(ParameterRangeError):
            tree_deviations.centered_diameter_upper(1, 10, 0.5)

    def test_not_shape_regular_floors(self):
        """Test the 1/11 and 1/14 floors and their thresholds"""
        uniform = tree_deviations.not_shape_regular('uniform', 2, 50)
        centered = tree_deviations.not_shape_regular('centered', 2, 50)
        assert uniform.probability == pytest.approx(1 / 11)
        assert uniform.threshold == pytest.approx(math.exp(5))
        assert centered.probability == pytest.approx(1 / 14)
        assert centered.threshold == pytest.approx(2 ** 5)
        with pytest.raises(ParameterRangeError):
            tree_deviations.not_shape_regular('uniform', 1, 50)
        with pytest.raises(KeyError):
            tree_deviations.not_shape_regular('mondrian', 2, 50)

    def test_mondrian_ratio_bound(self):
        """Test 5 d log(delta/d) / log(1-delta) at d=2, delta=0.1"""
        bound = tree_deviations.mondrian_ratio(2, 0.1)
        assert bound.threshold == pytest.approx(284.3, abs=0.1)
        assert bound.probability == pytest.approx(0.8)

    def test_mondrian_ratio_at_max_delta(self):
        """Test that the bound stays finite and positive at the largest delta"""
        delta = tree_deviations.mondrian_delta_max(3)
        bound = tree_deviations.mondrian_ratio(3, delta)
        assert math.isfinite(bound.threshold) and bound.threshold > 0
        with pytest.raises(ParameterRangeError):
            tree_deviations.mondrian_ratio(3, delta + 0.01)
