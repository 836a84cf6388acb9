"""
Unit tests for purely random trees followed along one path
"""
import math
import os
import sys

import numpy as np
import pytest
from scipy import stats

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from errors import ParameterRangeError
from generators.random_trees import (
    CenteredTree,
    MondrianParams,
    MondrianTree,
    RandomTreeFactory,
    SplitSequence,
    UniformTree,
    grow_path,
    mondrian_cell,
    mondrian_path,
    volume_invariance_check,
)
from geometry import HyperRectangle, shape_ratio, unit_cube, volume


class TestRandomTreeFactory:
    """Tests for the tree registry"""

    def test_all_kinds_registered(self):
        """Test that uniform, centered and mondrian are registered"""
        assert RandomTreeFactory.get_all_kinds() == ['centered', 'mondrian', 'uniform']

    def test_get_generator_returns_correct_type(self):
        """Test that the factory builds the right classes"""
        assert isinstance(RandomTreeFactory.get_generator('uniform'), UniformTree)
        assert isinstance(RandomTreeFactory.get_generator('centered'), CenteredTree)
        assert isinstance(RandomTreeFactory.get_generator('mondrian', lifetime=2.0), MondrianTree)

    def test_unknown_kind_raises(self):
        """Test that an unknown kind raises KeyError"""
        with pytest.raises(KeyError):
            RandomTreeFactory.get_generator('extra-trees')
        with pytest.raises(KeyError):
            grow_path('mondrian', [0.5], 1, 3, 0)


class TestPaths:
    """Tests for uniform and centered paths"""

    def test_zero_depth(self):
        """Test that N=0 leaves the unit cube and an empty sequence"""
        cell, seq = grow_path('uniform', [0.2, 0.7], 2, 0, 1)
        assert cell == unit_cube(2)
        assert len(seq) == 0
        assert volume_invariance_check(cell, seq)

    @pytest.mark.parametrize('d', [1, 2, 5])
    def test_centered_volume_exact(self, d):
        """Test that a centered cell after N splits has volume exactly 2^-N"""
        rng = np.random.default_rng(d)
        for seed in range(100):
            N = int(rng.integers(0, 31))
            cell, _ = grow_path('centered', rng.random(d), d, N, seed)
            assert volume(cell) == 2.0 ** -N

    def test_centered_three_splits(self):
        """Test the 1/8 example"""
        cell, seq = grow_path('centered', [0.3], 1, 3, 0)
        assert volume(cell) == 0.125
        assert seq.reduction_product() == 0.125
        assert volume_invariance_check(cell, seq)

    def test_centered_dyadic_interval(self):
        """Test that a centered cell in d=1 is the dyadic interval holding x"""
        x, N = 0.3, 6
        cell, _ = grow_path('centered', [x], 1, N, 4)
        k = math.ceil(x * 2 ** N) - 1
        assert cell.lower == (k / 2 ** N,)
        assert cell.upper == ((k + 1) / 2 ** N,)

    def test_uniform_at_origin(self):
        """Test that x=0 always stays left, so the cell is [0, prod S]"""
        cell, seq = grow_path('uniform', [0.0], 1, 25, 13)
        fractions = [step.S for step in seq.steps]
        assert all(step.S_bar == step.S for step in seq.steps)
        assert cell.lower == (0.0,)
        assert cell.upper[0] == math.prod(fractions)
        assert cell.widths[0] == seq.reduction_product()

    def test_side_lengths_follow_directions(self):
        """Test log h_k = sum of log S_bar over splits of coordinate k"""
        cell, seq = grow_path('uniform', [0.4, 0.9, 0.1], 3, 40, 8)
        for k in range(3):
            expected = sum(math.log(s.S_bar) for s in seq.steps if s.D == k)
            assert math.log(cell.widths[k]) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_volume_invariance_random_paths(self):
        """Test volume = product of reductions on random uniform and centered paths"""
        rng = np.random.default_rng(2025)
        for seed in range(2000):
            kind = ('uniform', 'centered')[seed % 2]
            d = (1, 2, 5)[seed % 3]
            N = int(rng.integers(0, 51))
            cell, seq = grow_path(kind, rng.random(d), d, N, seed)
            assert volume_invariance_check(cell, seq)

    def test_volume_invariance_reads_coordinates(self):
        """Test that a cell whose bounds disagree with its tracked widths fails the check"""
        cell, seq = grow_path('uniform', [0.4, 0.6], 2, 10, 3)
        assert volume_invariance_check(cell, seq)
        shifted = list(cell.upper)
        shifted[0] = cell.lower[0] + cell.widths[0] / 2
        tampered = HyperRectangle(cell.lower, tuple(shifted), widths=cell.widths)
        assert volume(tampered) == volume(cell)
        assert not volume_invariance_check(tampered, seq)

    def test_volume_invariance_deep_halving(self):
        """Test that sixty halvings pass although the bounds collapse to one float"""
        cell, seq = grow_path('centered', [0.7], 1, 60, 0)
        assert volume(cell) == 2.0 ** -60
        assert volume_invariance_check(cell, seq)

    def test_centered_shape_ratio_from_counts(self):
        """Test that direction counts (a, b) give ratio 2^|a-b|"""
        for seed in range(20):
            cell, seq = grow_path('centered', [0.3, 0.6], 2, 4, seed)
            a, b = seq.direction_counts(2)
            assert shape_ratio(cell) == 2.0 ** abs(a - b)

    def test_d1_always_shape_regular(self):
        """Test that intervals have shape ratio 1"""
        cell, _ = grow_path('uniform', [0.7], 1, 30, 2)
        assert shape_ratio(cell) == 1.0

    def test_same_seed_same_path(self):
        """Test that a path is a pure function of its seed"""
        a = grow_path('uniform', [0.5, 0.5], 2, 20, 77)
        b = grow_path('uniform', [0.5, 0.5], 2, 20, 77)
        assert a[0] == b[0]
        assert a[1].to_dict() == b[1].to_dict()

    def test_query_outside_cube(self):
        """Test that x outside [0,1]^d raises"""
        with pytest.raises(ParameterRangeError):
            grow_path('uniform', [1.2], 1, 3, 0)
        with pytest.raises(ParameterRangeError):
            grow_path('uniform', [0.5], 2, 3, 0)

    def test_split_record(self):
        """Test the JSON form of the split sequence"""
        _, seq = grow_path('centered', [0.2, 0.2], 2, 2, 3)
        record = seq.to_dict()
        assert [r['step'] for r in record] == [0, 1]
        assert all(r['S'] == 0.5 and r['S_bar'] == 0.5 for r in record)
        with pytest.raises(ParameterRangeError):
            SplitSequence().append(0, 1.0, 0.0)


class TestMondrian:
    """Tests for the Mondrian cell of a point"""

    def test_volume_invariance(self):
        """Test volume = product of reductions on Mondrian paths"""
        params = MondrianParams(5.0, 3)
        rng = np.random.default_rng(6)
        for seed in range(300):
            cell, seq = mondrian_path(params, rng.random(3), seed)
            assert volume_invariance_check(cell, seq)

    def test_short_lifetime_keeps_cube(self):
        """Test P(no split) = exp(-lambda d) for a short lifetime"""
        params = MondrianParams(0.05, 2)
        reps = 2000
        unsplit = sum(mondrian_cell(params, [0.5, 0.5], seed) == unit_cube(2) for seed in range(reps))
        p = math.exp(-0.05 * 2)
        assert abs(unsplit / reps - p) <= 3 * math.sqrt(p * (1 - p) / reps)

    def test_mean_side_decreases_with_lifetime(self):
        """Test that the mean side length in d=1 decreases over lifetimes 1, 2, 4"""
        rng = np.random.default_rng(10)
        xs = rng.random(3000)
        means = []
        for lifetime in (1.0, 2.0, 4.0):
            params = MondrianParams(lifetime, 1)
            means.append(np.mean([mondrian_cell(params, [x], i).widths[0] for i, x in enumerate(xs)]))
        assert means[0] > means[1] > means[2]

    def test_side_law_far_from_boundary(self):
        """Test that sides at the cube center follow Gamma(2, lambda) for a long lifetime"""
        lifetime, reps = 20.0, 2000
        params = MondrianParams(lifetime, 2)
        sides = np.array([mondrian_cell(params, [0.5, 0.5], seed).widths[0] for seed in range(reps)])
        law = stats.gamma(a=2.0, scale=1.0 / lifetime)
        result = stats.kstest(sides, law.cdf)
        assert result.statistic < 1.95 / math.sqrt(reps)

    def test_median_ratio_is_scale_free(self):
        """Test that doubling the lifetime changes the median shape ratio by less than 2x"""
        medians = []
        for lifetime in (10.0, 20.0):
            params = MondrianParams(lifetime, 2)
            ratios = [shape_ratio(mondrian_cell(params, [0.5, 0.5], seed)) for seed in range(1000)]
            medians.append(float(np.median(ratios)))
        assert 0.5 < medians[1] / medians[0] < 2.0

    def test_invalid_parameters(self):
        """Test that a nonpositive lifetime raises"""
        with pytest.raises(ParameterRangeError):
            MondrianParams(0.0, 2)
        with pytest.raises(ParameterRangeError):
            MondrianTree(-1.0)
