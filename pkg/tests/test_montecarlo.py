"""
This file contains all the unit tests for our experiments.
"""
import math
from fractions import Fraction

# noinspection PyPackageRequirements
import pytest

from modcount.charsum import xor_tv_bound
from modcount.distributions import tv_to_uniform
from modcount.errors import BoundaryAlpha, ParameterError, SizeCapExceeded
from modcount.gensample import GENERATOR_ID, PSpec
from modcount.graphcore import catalog_graph, validate_family
from modcount.montecarlo import ExperimentConfig, corollary_experiment, decay_study, edge_count_equivalence, \
    exact_xi_distribution, run_metadata, run_trials, two_sample_chi_square
from tests.test_support import FakeEcho, Options

K3_ONLY = validate_family([catalog_graph('K3')])
K3_K4 = validate_family([catalog_graph('K3'), catalog_graph('K4')])


def _config(n: int = 8, p: float = 0.5, q: int = 2, trials: int = 40, seed: int = 3, **kwargs) -> ExperimentConfig:
    return ExperimentConfig(K3_ONLY, n, PSpec.constant(p), q, trials, seed, **kwargs)


class TestExperimentConfig(object):
    def test_properties(self):
        cfg = _config()

        assert cfg.p == 0.5
        assert cfg.exposure == 'direct'
        assert cfg.describe()['family'] == ['K3']
        assert cfg.with_n(12).n == 12
        assert cfg.with_n(12, 80).trial_offset == 80

    def test_validation(self):
        for kwargs, code in [({'trials': 0}, 'BAD_TRIALS'), ({'n': 0}, 'BAD_VERTEX_COUNT'),
                             ({'q': 1}, 'BAD_MODULUS'), ({'exposure': 'three-step'}, 'BAD_EXPOSURE'),
                             ({'p': 0.7, 'exposure': 'two-step'}, 'BAD_PROBABILITY')]:
            with pytest.raises(ParameterError) as info:
                _config(**kwargs)

            assert info.value.code == code

    def test_metadata(self):
        metadata = run_metadata(_config(seed=17))

        assert metadata['config']['seed'] == 17
        assert metadata['sampler']['generator'] == GENERATOR_ID


class TestRunTrials(object):
    def test_deterministic(self):
        first = run_trials(_config(), 1)

        assert first == run_trials(_config(), 1)
        assert first.trials == 40

    def test_workers_do_not_change_results(self):
        assert run_trials(_config(trials=30), 1) == run_trials(_config(trials=30), 3)

    def test_offset_continues_the_streams(self):
        whole = run_trials(_config(trials=120, seed=5), 1)
        first = run_trials(_config(trials=60, seed=5), 1)
        second = run_trials(_config(trials=60, seed=5, trial_offset=60), 1)

        assert whole.cell_counts.tolist() == (first.cell_counts + second.cell_counts).tolist()

    def test_uses_global_threads(self):
        with Options(threads=1):
            assert run_trials(_config()).trials == 40

    def test_two_step(self):
        dist = run_trials(_config(p=0.3, exposure='two-step'), 1)

        assert dist.trials == 40
        assert dist.k == 1

    def test_two_step_histogram_matches_direct(self):
        direct = run_trials(_config(n=12, p=0.3, q=3, trials=4000, seed=41), 1)
        thinned = run_trials(_config(n=12, p=0.3, q=3, trials=4000, seed=42, exposure='two-step'), 1)
        result = two_sample_chi_square(direct.cell_counts, thinned.cell_counts)

        assert result.dof >= 1
        assert result.p_value >= 0.01

    def test_agrees_with_exact_law(self):
        law = exact_xi_distribution(6, 0.5, K3_ONLY, 2)
        trials = 5000
        dist = run_trials(_config(n=6, trials=trials, seed=2024), 1)

        for observed, expected in zip(dist.probabilities, law.probabilities):
            error = math.sqrt(expected * (1 - expected) / trials)
            assert abs(observed - expected) <= 4 * error

    @pytest.mark.slow
    def test_agrees_with_exact_law_across_parameters(self):
        trials = 5000

        for n in range(3, 7):
            for p in [0.3, 0.5]:
                for q in [2, 3]:
                    law = exact_xi_distribution(n, p, K3_ONLY, q)
                    dist = run_trials(_config(n=n, p=p, q=q, trials=trials, seed=77), 1)

                    for observed, expected in zip(dist.probabilities, law.probabilities):
                        error = math.sqrt(expected * (1 - expected) / trials)
                        assert abs(observed - expected) <= 4 * error + 1e-12, f"n={n}, p={p}, q={q}"

    @pytest.mark.slow
    def test_close_to_uniform_above_threshold(self):
        dist = run_trials(_config(n=30, trials=2000, seed=1), 1)

        assert tv_to_uniform(dist).tv <= 0.06


class TestExactLaw(object):
    def test_triangle(self):
        law = exact_xi_distribution(3, 0.5, K3_ONLY, 2)

        assert law.probabilities.tolist() == [7 / 8, 1 / 8]
        assert tv_to_uniform(law).tv == pytest.approx(3 / 8)

    def test_complete(self):
        assert exact_xi_distribution(3, 1.0, K3_ONLY, 2).probabilities.tolist() == [0.0, 1.0]

    def test_four_vertices_is_closer(self):
        assert tv_to_uniform(exact_xi_distribution(4, 0.5, K3_ONLY, 2)).tv < 3 / 8

    def test_xor_bound_holds(self):
        for n in range(3, 7):
            for p in [0.3, 0.5]:
                for q in [2, 3]:
                    result = xor_tv_bound(exact_xi_distribution(n, p, K3_ONLY, q))

                    assert result.actual_tv <= result.bound + 1e-12, f"n={n}, p={p}, q={q}"

    def test_xor_bound_holds_for_two_members(self):
        for n in [3, 4, 5]:
            for p in [0.2, 0.5]:
                result = xor_tv_bound(exact_xi_distribution(n, p, K3_K4, 2))

                assert result.actual_tv <= result.bound + 1e-12

    def test_too_large(self):
        with pytest.raises(SizeCapExceeded) as info:
            exact_xi_distribution(8, 0.5, K3_ONLY, 2)

        assert info.value.code == 'EXACT_N_TOO_LARGE'

    def test_bad_probability(self):
        with pytest.raises(ParameterError):
            exact_xi_distribution(3, -0.1, K3_ONLY, 2)


class TestDecayStudy(object):
    def test_rows(self):
        base = ExperimentConfig(K3_ONLY, 10, PSpec.constant(0.5), 2, 20, 7)
        table = decay_study(base, [6, 10], 1)

        assert table.above_threshold
        assert [row.n for row in table.rows] == [6, 10]
        assert all(row.trials == 20 for row in table.rows)
        assert table.rows[0].log_phi < table.rows[1].log_phi

    def test_warns_at_threshold(self):
        base = ExperimentConfig(K3_K4, 20, PSpec.power(Fraction(-2, 3), 0.5), 2, 5, 7)

        with FakeEcho() as echo:
            table = decay_study(base, [20], 1)

        assert not table.above_threshold
        assert any('no decay is expected' in line for line in echo.lines)

    def test_verbosity_levels(self):
        base = ExperimentConfig(K3_ONLY, 6, PSpec.constant(0.5), 2, 5, 7)

        with Options(verbose=1):
            with FakeEcho() as echo:
                decay_study(base, [6], 1)

        assert any(line.startswith('Running 5 trials') for line in echo.lines)
        assert not any(line.startswith('n=6:') for line in echo.lines)

        with Options(verbose=2):
            with FakeEcho() as echo:
                decay_study(base, [6], 1)

        assert any(line.startswith('Running 5 trials') for line in echo.lines)
        assert any(line.startswith('n=6: TV=') for line in echo.lines)

    def test_rows_use_distinct_streams(self):
        base = ExperimentConfig(K3_ONLY, 8, PSpec.constant(0.5), 2, 50, 7)
        table = decay_study(base, [8, 8], 1)

        assert table.rows[0].tv == tv_to_uniform(run_trials(base.with_n(8, 0), 1)).tv
        assert table.rows[1].tv == tv_to_uniform(run_trials(base.with_n(8, 50), 1)).tv

    @pytest.mark.slow
    def test_decays_at_scaled_threshold(self):
        base = ExperimentConfig(K3_K4, 40, PSpec.power(Fraction(-2, 3), 4.0), 2, 2000, 8)

        with FakeEcho():
            table = decay_study(base, [40, 80, 160], 1)
        tvs = [row.tv for row in table.rows]

        for previous, current, row in zip(tvs, tvs[1:], table.rows[1:]):
            assert current <= previous + row.bias_scale
        assert tvs[-1] <= 0.08

    def test_empty_grid(self):
        with pytest.raises(ParameterError):
            decay_study(_config(), [], 1)


class TestCorollary(object):
    def test_split(self):
        report = corollary_experiment(K3_K4, Fraction(4, 5), 60, 2, 30, 5, 1)

        assert report.I == (0,)
        assert report.J == (1,)
        assert report.p == pytest.approx(60 ** -0.8)
        assert 0.0 <= report.zero_fraction <= 1.0
        assert report.to_json()['alpha'] == '4/5'

    def test_no_absent_members(self):
        report = corollary_experiment(K3_K4, '1/2', 20, 2, 10, 5, 1)

        assert report.J == ()
        assert report.zero_fraction == 1.0
        assert report.zero_fraction_holds

    def test_boundary(self):
        with pytest.raises(BoundaryAlpha):
            corollary_experiment(K3_K4, Fraction(2, 3), 60, 2, 10, 5, 1)

    @pytest.mark.slow
    def test_limits_hold(self):
        report = corollary_experiment(K3_K4, Fraction(4, 5), 300, 2, 1000, 12, 1)

        assert report.zero_fraction >= 0.95
        assert report.marginal_tv <= 0.08
        assert report.zero_fraction_holds
        assert report.marginal_tv_holds


class TestChiSquare(object):
    def test_identical(self):
        result = two_sample_chi_square([30, 50, 20, 10], [30, 50, 20, 10])

        assert result.statistic == pytest.approx(0.0)
        assert result.equivalent

    def test_different(self):
        assert not two_sample_chi_square([90, 10, 0], [10, 90, 0]).equivalent

    def test_single_pooled_bin(self):
        assert two_sample_chi_square([1, 1, 0], [0, 1, 1]) == (0.0, 1.0, 0)

    def test_mismatched_bins(self):
        with pytest.raises(ParameterError):
            two_sample_chi_square([1, 2], [1, 2, 3])

    def test_two_step_matches_direct(self):
        result = edge_count_equivalence(20, 0.2, 400, 31)

        assert result.dof >= 1
        assert result.equivalent

    @pytest.mark.slow
    def test_two_step_matches_direct_at_scale(self):
        result = edge_count_equivalence(50, 0.1, 10000, 31)

        assert result.dof >= 1
        assert result.p_value >= 0.01
