"""
Unit tests for cell geometry
"""
import math
import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from errors import DegenerateCellError, ParameterRangeError
from geometry import (
    Ball,
    HyperRectangle,
    ShapeParams,
    beta_to_gamma,
    diameter,
    gamma_ratio,
    gamma_to_beta,
    is_beta_sr,
    is_gamma_sr,
    shape_ratio,
    side_extremes,
    unit_cube,
    volume,
)


def random_rectangle(rng, d):
    a = rng.random(d)
    b = rng.random(d)
    return HyperRectangle(tuple(np.minimum(a, b)), tuple(np.maximum(a, b)))


class TestHyperRectangle:
    """Tests for HyperRectangle construction and splitting"""

    def test_rejects_inverted_bounds(self):
        """Test that lower > upper raises"""
        with pytest.raises(ValueError):
            HyperRectangle((0.5,), (0.25,))

    def test_rejects_dimension_mismatch(self):
        """Test that bounds of different lengths raise"""
        with pytest.raises(ValueError):
            HyperRectangle((0.0, 0.0), (1.0,))

    def test_split_tiles_parent(self):
        """Test that a split gives [a, a+(b-a)u] on the left and the rest on the right"""
        left, right = unit_cube(2).split(1, 0.25)
        assert left.upper == (1.0, 0.25)
        assert right.lower == (0.0, 0.25)
        assert volume(left) + volume(right) == pytest.approx(1.0, rel=1e-15)

    def test_split_tracks_widths_multiplicatively(self):
        """Test that repeated splits keep volumes at full relative precision"""
        cell = unit_cube(1)
        for _ in range(60):
            _, cell = cell.split(0, 0.5)
        # bounds collapse to 1.0 in double precision, widths do not
        assert cell.upper[0] - cell.lower[0] == 0.0
        assert volume(cell) == 2.0 ** -60

    def test_split_rejects_bad_fraction(self):
        """Test that a fraction outside (0, 1) is refused"""
        with pytest.raises(ParameterRangeError):
            unit_cube(2).split(0, 1.0)
        with pytest.raises(ParameterRangeError):
            unit_cube(2).split(2, 0.5)


class TestMeasures:
    """Tests for diameter, volume and side extremes"""

    def test_diameter_unit_square(self):
        """Test the diagonal of the unit square"""
        assert diameter(unit_cube(2)) == pytest.approx(1.41421356, abs=1e-8)

    def test_diameter_half_rectangle(self):
        """Test the diameter of [0,1]x[0,0.5]"""
        assert diameter(HyperRectangle((0, 0), (1, 0.5))) == pytest.approx(1.11803399, abs=1e-8)

    def test_diameter_point_cell(self):
        """Test that a point cell has diameter 0"""
        assert diameter(HyperRectangle((0.3, 0.3), (0.3, 0.3))) == 0.0

    def test_volume_unit_cube(self):
        """Test that the unit cube has volume 1 in any dimension"""
        for d in (1, 2, 5, 10):
            assert volume(unit_cube(d)) == 1.0

    def test_volume_after_centered_splits(self):
        """Test that N halvings give volume 2^-N"""
        cell = unit_cube(3)
        for i in range(9):
            cell, _ = cell.split(i % 3, 0.5)
        assert volume(cell) == 2.0 ** -9

    def test_volume_half_rectangle(self):
        """Test the volume of [0,1]x[0,0.5]"""
        assert volume(HyperRectangle((0, 0), (1, 0.5))) == 0.5

    def test_side_extremes(self):
        """Test smallest and largest side lengths"""
        assert side_extremes(unit_cube(2)) == (1.0, 1.0)
        assert side_extremes(HyperRectangle((0, 0), (1, 0.1))) == (0.1, 1.0)
        assert side_extremes(HyperRectangle((0, 0, 0), (0.25, 0.5, 1))) == (0.25, 1.0)

    def test_measure_inequalities_random(self):
        """Test h+ <= diam <= sqrt(d) h+ and volume <= h+^d on random rectangles"""
        rng = np.random.default_rng(11)
        for _ in range(500):
            d = int(rng.integers(1, 6))
            cell = random_rectangle(rng, d)
            _, h_plus = side_extremes(cell)
            assert h_plus <= diameter(cell) * (1 + 1e-12)
            assert diameter(cell) <= math.sqrt(d) * h_plus * (1 + 1e-12)
            assert volume(cell) <= h_plus ** d * (1 + 1e-12)

    def test_ball_measures(self):
        """Test the diameter and volume of a closed ball"""
        ball = Ball((0.0, 0.0), 1.0)
        assert ball.diameter() == 2.0
        assert ball.volume() == pytest.approx(math.pi)


class TestShapeRegularity:
    """Tests for the beta and gamma shape-regularity predicates"""

    def test_beta_sr_examples(self):
        """Test the reference beta-SR cases"""
        assert is_beta_sr(unit_cube(2), 1.0)
        assert not is_beta_sr(HyperRectangle((0, 0), (1, 0.1)), 5.0)
        assert is_beta_sr(HyperRectangle((0, 0), (1, 0.5)), 2.0)

    def test_beta_sr_zero_side_is_degenerate(self):
        """Test that a zero side next to a positive one raises"""
        with pytest.raises(DegenerateCellError):
            is_beta_sr(HyperRectangle((0, 0), (1, 0)), 2.0)

    def test_beta_sr_rejects_beta_below_one(self):
        """Test that beta < 1 raises"""
        with pytest.raises(ParameterRangeError):
            is_beta_sr(unit_cube(2), 0.5)

    def test_gamma_sr_examples(self):
        """Test the reference gamma-SR cases"""
        assert is_gamma_sr(math.sqrt(2), 1.0, 2, 2.0)
        assert not is_gamma_sr(math.sqrt(2), 1.0, 2, 1.9)
        assert is_gamma_sr(2 * 0.3, 2 * 0.3, 1, 1.0)

    def test_gamma_sr_zero_volume_is_degenerate(self):
        """Test that a zero volume raises"""
        with pytest.raises(DegenerateCellError):
            is_gamma_sr(1.0, 0.0, 2, 5.0)

    def test_conversions(self):
        """Test beta -> gamma = beta^d d^(d/2) and gamma -> beta = gamma"""
        assert beta_to_gamma(2, 2) == pytest.approx(8.0)
        assert beta_to_gamma(1, 1) == 1.0
        assert gamma_to_beta(7.5) == 7.5

    def test_beta_sr_implies_gamma_sr(self):
        """Test that random beta-SR rectangles are gamma-SR with the converted constant"""
        rng = np.random.default_rng(3)
        checked = 0
        for _ in range(2000):
            d = int(rng.integers(1, 5))
            cell = random_rectangle(rng, d)
            if min(cell.widths) <= 0:
                continue
            beta = shape_ratio(cell)
            assert is_beta_sr(cell, beta)
            assert is_gamma_sr(diameter(cell), volume(cell), d, beta_to_gamma(beta, d))
            checked += 1
        assert checked > 1000

    def test_gamma_sr_implies_beta_sr(self):
        """Test that a gamma-SR rectangle is beta-SR with beta = gamma"""
        cell = HyperRectangle((0, 0), (1, 0.2))
        assert is_beta_sr(cell, gamma_to_beta(gamma_ratio(cell)))

    def test_shape_ratio(self):
        """Test shape ratios of a cube, an interval and a centered cell"""
        assert shape_ratio(unit_cube(3)) == 1.0
        assert shape_ratio(HyperRectangle((0.2,), (0.3,))) == 1.0
        cell = HyperRectangle((0, 0), (2.0 ** -3, 2.0 ** -1))
        assert shape_ratio(cell) == 4.0

    def test_gamma_ratio_of_cube(self):
        """Test that the cube has gamma ratio d^(d/2)"""
        assert gamma_ratio(unit_cube(2)) == pytest.approx(2.0)
        assert gamma_ratio(unit_cube(4)) == pytest.approx(16.0)

    def test_shape_params_from_beta(self):
        """Test ShapeParams derives gamma from beta"""
        params = ShapeParams.from_beta(2.0, 3)
        assert params.gamma == pytest.approx(8.0 * 3 ** 1.5)
        with pytest.raises(ParameterRangeError):
            ShapeParams(beta=0.5, gamma=1.0, d=1)
