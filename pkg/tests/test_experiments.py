"""
Tests for the Monte Carlo experiment harness
"""
import json
import math
import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from errors import ParameterRangeError, SeedRequiredError
from experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    binomial_se,
    derive_seed,
    fit_exponent,
    get_all_experiments,
    run_experiment,
    run_replicates,
)
from experiments.rates import elongation_for, evaluation_lattice, probe_oracle_mse
from experiments.report import FAIL, INFO, PASS, frequency_row


def count_replicate(cfg, index, seed):
    return {'index': float(index), 'seed': float(seed % 1000)}


class TestSeeds:
    """Tests for replicate seed derivation"""

    def test_derive_seed_is_deterministic(self):
        """Test that the same inputs give the same 63-bit seed"""
        a = derive_seed(42, 'deviation', 7)
        assert a == derive_seed(42, 'deviation', 7)
        assert 0 <= a < 2 ** 63

    def test_derive_seed_separates_inputs(self):
        """Test that master seed, experiment id and index all change the seed"""
        base = derive_seed(42, 'deviation', 7)
        assert base != derive_seed(43, 'deviation', 7)
        assert base != derive_seed(42, 'envelope', 7)
        assert base != derive_seed(42, 'deviation', 8)

    def test_replicates_in_index_order(self):
        """Test that results come back in index order whatever the batching"""
        cfg = ExperimentConfig('volume-invariance', seed=1, replicates=37)
        serial = run_replicates('count', cfg, count_replicate, threads=1)
        parallel = run_replicates('count', cfg, count_replicate, threads=3)
        assert [s['index'] for s in serial] == list(range(37))
        assert serial == parallel


class TestExperimentConfig:
    """Tests for experiment configuration validation"""

    def test_seed_required(self):
        """Test that a missing master seed raises"""
        with pytest.raises(SeedRequiredError):
            ExperimentConfig('deviation')

    def test_frequency_experiments_need_replicates(self):
        """Test that frequency experiments refuse R < 100"""
        with pytest.raises(ParameterRangeError):
            ExperimentConfig('deviation', seed=1, replicates=99)
        ExperimentConfig('volume-invariance', seed=1, replicates=10)

    def test_rate_curve_grid(self):
        """Test that rate curves need four strictly increasing sample sizes"""
        with pytest.raises(ParameterRangeError):
            ExperimentConfig('rate-curve', seed=1, n_grid=(100, 200, 400))
        with pytest.raises(ParameterRangeError):
            ExperimentConfig('rate-curve', seed=1, n_grid=(100, 200, 200, 400))
        ExperimentConfig('rate-curve', seed=1, n_grid=(100, 200, 400, 800))

    def test_from_dict_rejects_unknown_keys(self):
        """Test that typos in config files are caught"""
        with pytest.raises(ParameterRangeError, match="replicatez"):
            ExperimentConfig.from_dict({'experiment': 'deviation', 'seed': 1, 'replicatez': 10})

    def test_to_dict_is_json(self):
        """Test that the config round-trips through JSON"""
        cfg = ExperimentConfig('rate-curve', seed=5, n_grid=[100, 200, 400, 800])
        payload = json.loads(json.dumps(cfg.to_dict()))
        assert ExperimentConfig.from_dict(payload) == cfg

    def test_bad_delta(self):
        """Test that delta outside (0, 1) raises"""
        with pytest.raises(ParameterRangeError):
            ExperimentConfig('deviation', seed=1, delta=1.0)


class TestReport:
    """Tests for report rows and verdicts"""

    def test_binomial_se(self):
        """Test sqrt(p(1-p)/R)"""
        assert binomial_se(0.5, 100) == pytest.approx(0.05)
        assert binomial_se(0.0, 100) == 0.0

    def test_frequency_row_band(self):
        """Test the three standard error acceptance band"""
        assert frequency_row('a', 10, 100, 0.05).verdict == PASS
        assert frequency_row('b', 30, 100, 0.05).verdict == FAIL
        assert frequency_row('c', 5, 100, 0.2, kind='at_least').verdict == FAIL

    def test_report_keys(self):
        """Test the top-level report document"""
        cfg = ExperimentConfig('volume-invariance', seed=3, replicates=50, depth=10)
        payload = run_experiment(cfg).to_dict()
        assert set(payload) == {'experiment', 'config', 'results', 'runtime_seconds', 'seed', 'passed'}
        assert payload['runtime_seconds'] is None
        assert payload['config']['seed'] == 3
        row = payload['results'][0]
        assert set(row) == {'name', 'value', 'se', 'bound', 'verdict', 'rule', 'details'}

    def test_timing_is_opt_in(self):
        """Test that runtime is recorded only when asked"""
        cfg = ExperimentConfig('volume-invariance', seed=3, replicates=20, depth=5)
        assert run_experiment(cfg, timing=True).runtime_seconds >= 0.0

    def test_unknown_experiment(self):
        """Test that an unknown experiment raises KeyError"""
        with pytest.raises(KeyError):
            run_experiment(ExperimentConfig('bootstrap', seed=1))
        assert get_all_experiments() == sorted(EXPERIMENTS)


class TestTreeEvents:
    """Tests for the purely random tree experiments"""

    @pytest.mark.parametrize('kind', ['uniform', 'centered', 'mondrian'])
    def test_volume_invariance_passes(self, kind):
        """Test that no path violates volume = product of reductions"""
        cfg = ExperimentConfig('volume-invariance', seed=11, replicates=200, depth=40, tree_kind=kind, lifetime=5.0)
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].value == 0.0
        assert report.results[1].verdict == INFO

    def test_volume_lower_tail(self):
        """Test the volume lower tail of uniform trees"""
        cfg = ExperimentConfig('deviation', seed=2, replicates=300, event='uniform-volume-lower', alpha=2.0)
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].details['statistic'] == 'volume'

    @pytest.mark.parametrize('alpha,expected', [(0.5, 1.0), (1.0, 0.0)])
    def test_centered_volume_is_certain_or_impossible(self, alpha, expected):
        """Test that centered volume events have frequency exactly 0 or 1"""
        cfg = ExperimentConfig('deviation', seed=2, replicates=100, event='centered-volume', alpha=alpha)
        row = run_experiment(cfg).results[0]
        assert row.value == expected
        assert row.reference == expected
        assert row.verdict == PASS

    @pytest.mark.parametrize('event,params', [
        ('uniform-diam-upper', {'spread': 0.4}),
        ('uniform-diam-lower', {'spread': 0.5}),
        ('uniform-volume-upper', {'alpha': 0.2}),
        ('centered-diam-upper', {'alpha': 0.3}),
        ('centered-diam-lower', {'alpha': 0.7}),
    ])
    def test_tail_frequency_within_bound(self, event, params):
        """Test d=2, N=50 tail frequencies against bounds below 1"""
        cfg = ExperimentConfig('deviation', seed=5, replicates=400, event=event, **params)
        row = run_experiment(cfg).results[0]
        assert row.reference < 1.0
        assert 0.0 <= row.value <= 1.0
        assert row.verdict == PASS

    def test_volume_upper_tail_reports_size_bias(self):
        """Test that the upper volume tail at alpha=0.9 is reported as FAIL"""
        # the kept reductions are size-biased, so -log volume concentrates near N/2, far below 0.9 N
        cfg = ExperimentConfig('deviation', seed=5, replicates=200, event='uniform-volume-upper', alpha=0.9)
        row = run_experiment(cfg).results[0]
        assert row.value >= 0.99
        assert row.reference == pytest.approx(math.exp(50 * (math.log(0.9) + 0.1)))
        assert row.verdict == FAIL

    def test_unknown_event(self):
        """Test that an unknown event raises KeyError"""
        with pytest.raises(KeyError):
            run_experiment(ExperimentConfig('deviation', seed=1, replicates=100, event='mondrian-diam'))

    def test_not_shape_regular_floor(self):
        """Test that elongated uniform cells are at least as frequent as the floor"""
        cfg = ExperimentConfig('not-shape-regular', seed=4, replicates=400, depth=50, tree_kind='uniform')
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].reference == pytest.approx(1.0 / 11.0)

    def test_centered_not_shape_regular_floor(self):
        """Test that ratios of at least 2^5 are at least as frequent as 1/14 for centered trees"""
        cfg = ExperimentConfig('not-shape-regular', seed=4, replicates=400, depth=50, tree_kind='centered')
        report = run_experiment(cfg)
        assert report.passed
        row = report.results[0]
        assert row.reference == pytest.approx(1.0 / 14.0)
        assert row.details['threshold'] == 32.0
        # |N_1 - N_2| >= 6 with N_1 ~ Bin(50, 1/2) has probability 0.48
        assert row.value > 0.3

    def test_not_shape_regular_refuses_d1(self):
        """Test that d=1 is refused"""
        cfg = ExperimentConfig('not-shape-regular', seed=4, replicates=100, d=1)
        with pytest.raises(ParameterRangeError):
            run_experiment(cfg)

    def test_mondrian_ratio(self):
        """Test the Mondrian ratio bound at delta = 0.05"""
        cfg = ExperimentConfig('mondrian-ratio', seed=9, replicates=200, lifetime=10.0, delta=0.05)
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].reference == pytest.approx(0.9)
        assert [r.name for r in report.results] == ['mondrian-ratio', 'median-ratio', 'mean-splits']

    def test_threads_do_not_change_report(self):
        """Test that 1 and 2 workers give identical reports"""
        cfg = ExperimentConfig('mondrian-ratio', seed=9, replicates=120, lifetime=4.0)
        assert run_experiment(cfg, threads=1).to_dict() == run_experiment(cfg, threads=2).to_dict()


class TestRates:
    """Tests for exponent fits and rate curves"""

    @pytest.mark.parametrize('exponent', [-1.0 / 3.0, -0.25])
    def test_fit_exponent_exact_power(self, exponent):
        """Test that an exact power law gives its exponent"""
        pairs = [(n, 2.0 * n ** exponent) for n in (100, 200, 400, 800, 1600)]
        slope, se = fit_exponent(pairs)
        assert slope == pytest.approx(exponent, abs=1e-10)
        assert se == pytest.approx(0.0, abs=1e-8)

    def test_fit_exponent_needs_four_points(self):
        """Test that three points are refused"""
        with pytest.raises(ParameterRangeError):
            fit_exponent([(10, 1.0), (20, 0.5), (40, 0.25)])
        with pytest.raises(ParameterRangeError):
            fit_exponent([(10, 1.0), (20, 0.0), (40, 0.25), (80, 0.1)])

    def test_lattice(self):
        """Test the midpoint lattice size and refusal above d=6"""
        assert evaluation_lattice(2).shape == (10_000, 2)
        assert evaluation_lattice(1, 4).tolist() == [[0.125], [0.375], [0.625], [0.875]]
        with pytest.raises(ParameterRangeError):
            evaluation_lattice(7)

    @pytest.mark.parametrize('estimator', ['knn', 'grid', 'cart'])
    def test_noiseless_constant_is_exact(self, estimator):
        """Test that a constant function without noise gives vanishing errors"""
        cfg = ExperimentConfig(
            'rate-curve', seed=1, d=1, n_grid=(50, 100, 200, 400), replicates=3,
            g='constant_c', sigma2=0.0, estimator=estimator, lattice_per_axis=20,
        )
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].value is None
        assert report.results[0].details['median_error'] == [0.0] * 4

    def test_noisy_knn_slope(self):
        """Test the sup-norm slope of noisy k-NN in d=1 against -1/3 with a wide tolerance"""
        cfg = ExperimentConfig(
            'rate-curve', seed=8, d=1, n_grid=(200, 400, 800, 1600, 3200), replicates=15,
            g='sum_coords', sigma2=0.25, estimator='knn', tolerance=0.2,
        )
        report = run_experiment(cfg)
        sup, point = report.results
        assert sup.name == 'knn-sup-slope'
        assert sup.verdict == PASS
        assert abs(sup.value + 1.0 / 3.0) <= 0.2
        assert sup.se > 0
        errors = sup.details['median_error']
        assert errors[0] > errors[-1] > 0
        assert point.verdict == INFO

    def test_rate_curve_refuses_high_dimension(self):
        """Test that d > 6 is refused"""
        cfg = ExperimentConfig('rate-curve', seed=1, d=7, n_grid=(10, 20, 40, 80), replicates=2)
        with pytest.raises(ParameterRangeError):
            run_experiment(cfg)


class TestLowerBoundProbe:
    """Tests for the elongated-cell probe"""

    def test_elongation_hits_target(self):
        """Test that the solved elongation reaches diam^d / volume = gamma"""
        for d, gamma in ((2, 10.0), (2, 100.0), (3, 50.0)):
            r = elongation_for(gamma, d)
            achieved = (r * r + d - 1) ** (d / 2.0) / r
            assert achieved == pytest.approx(gamma, rel=1e-9)
        assert elongation_for(1.0, 2) == 1.0

    def test_elongation_refuses_d1(self):
        """Test that no interval can be elongated"""
        with pytest.raises(ParameterRangeError):
            elongation_for(10.0, 1)

    def test_oracle_empty_cell(self):
        """Test that an empty cell contributes no error"""
        assert probe_oracle_mse(np.array([1e-12, 1e-12]), 1, 0.25) == pytest.approx(0.0, abs=1e-20)

    def test_probe_passes(self):
        """Test that the error grows with elongation and matches the closed form"""
        cfg = ExperimentConfig('lower-bound-probe', seed=5, n_grid=(10_000,), replicates=300,
                               gamma_targets=(1.0, 10.0, 100.0))
        report = run_experiment(cfg)
        verdicts = {r.name: r.verdict for r in report.results}
        assert verdicts['rmse-increasing'] == PASS
        assert verdicts['oracle-match'] == PASS
        assert report.passed

    def test_mass_precondition(self):
        """Test that a cell with too little mass is refused"""
        cfg = ExperimentConfig('lower-bound-probe', seed=5, n_grid=(100,), replicates=10)
        with pytest.raises(ParameterRangeError, match="mass precondition"):
            run_experiment(cfg)


class TestEnvelopes:
    """Tests for the envelope checks"""

    def test_sup_statistic_envelope(self):
        """Test that the sup-statistic bound is exceeded at most delta of the time"""
        cfg = ExperimentConfig('envelope', seed=8, replicates=200, n_grid=(200,), class_size=20, delta=0.1)
        report = run_experiment(cfg)
        assert report.passed
        assert report.results[0].reference == 0.1

    def test_pointwise_row(self):
        """Test the pointwise envelope row against 2 delta"""
        cfg = ExperimentConfig('envelope', seed=8, replicates=100, n_grid=(200,), target='pointwise',
                               delta=0.1, estimator='knn', lattice_per_axis=5)
        row = run_experiment(cfg).results[0]
        assert row.name == 'pointwise-knn'
        assert row.reference == pytest.approx(0.2)
        assert 0.0 <= row.value <= 1.0 and math.isfinite(row.se)

    def test_unknown_target(self):
        """Test that an unknown target raises KeyError"""
        with pytest.raises(KeyError):
            run_experiment(ExperimentConfig('envelope', seed=1, replicates=100, target='l2'))
