"""
This file contains all the unit tests for our command line.
"""
import json

# noinspection PyPackageRequirements
import pytest

from modcount import VERSION
from modcount.gensample import PSpec
from modcount.graphcore import parse_family
from modcount.main import main
from modcount.montecarlo import ExperimentConfig, run_metadata
from tests.test_support import Options, get_test_path


def _run(capsys, *args: str):
    with Options(reset=True):
        code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json(capsys, *args: str):
    code, out, err = _run(capsys, '--no-meta', *args)

    assert code == 0, err
    return json.loads(out)


class TestCount(object):
    def test_k4_triangles(self, capsys):
        document = _json(capsys, 'count', '--host-file', str(get_test_path('k4.txt')), '--pattern', 'K3', '--q', '2')

        assert document['command'] == 'count'
        assert 'meta' not in document
        assert document['result']['copies'] == '4'
        assert document['result']['embeddings'] == '24'
        assert document['result']['copies_mod_q'] == 0

    def test_pattern_file(self, capsys):
        document = _json(capsys, 'count', '--host-file', str(get_test_path('c5.txt')),
                         '--pattern', str(get_test_path('path3.txt')))

        assert document['result']['pattern'] == 'path3'
        assert document['result']['copies'] == '5'

    def test_meta(self, capsys):
        code, out, _ = _run(capsys, 'count', '--host-file', str(get_test_path('k4.txt')), '--pattern', 'K3')

        assert code == 0
        assert json.loads(out)['meta']['version'] == VERSION


class TestInvariants(object):
    def test_family(self, capsys):
        document = _json(capsys, 'invariants', '--family', 'K3,K4', '--n', '1000', '--p-exp', '-1/2')
        result = document['result']

        assert result['threshold_exponent'] == '-2/3'
        assert result['m_family'] == '3/2'
        assert result['above_threshold'] is True
        assert result['p_spec']['exponent'] == '-1/2'

    def test_without_p(self, capsys):
        result = _json(capsys, 'invariants', '--family', 'K2', '--n', '10')['result']

        assert result['threshold_exponent'] == '-2/1'
        assert 'log_phi' not in result


class TestSimulate(object):
    def test_deterministic(self, capsys):
        args = ['simulate', '--family', 'K3', '--n', '10', '--p', '0.5', '--trials', '30', '--seed', '4']
        _, first, _ = _run(capsys, '--no-meta', *args)
        _, second, _ = _run(capsys, '--no-meta', *args)

        assert first == second
        document = json.loads(first)
        assert sum(row['count'] for row in document['result']['histogram']) == 30
        assert document['sampler']['master_seed'] == 4

    def test_run_metadata(self, capsys):
        document = _json(capsys, 'simulate', '--family', 'K3', '--n', '10', '--p', '0.5', '--trials', '30',
                         '--seed', '4', '--exposure', 'two-step')
        expected = run_metadata(ExperimentConfig(parse_family('K3'), 10, PSpec.constant(0.5), 2, 30, 4, 'two-step'))

        assert document['config'] == expected['config']
        assert document['sampler'] == expected['sampler']

    def test_config_file(self, capsys):
        document = _json(capsys, '--config', str(get_test_path('simulate.yaml')), 'simulate')

        assert document['config']['n'] == 12
        assert document['config']['trials'] == 40
        assert document['config']['seed'] == 11

    def test_command_line_wins(self, capsys):
        document = _json(capsys, '--config', str(get_test_path('simulate.yaml')), 'simulate', '--trials', '10')

        assert document['config']['trials'] == 10

    def test_command_line_p_form_replaces_config_form(self, capsys, tmp_path):
        path = tmp_path / 'constant.yaml'
        path.write_text('family: [K3]\np: 0.5\nq: 2\ntrials: 10\nseed: 1\n', encoding='utf-8')

        document = _json(capsys, '--config', str(path), 'simulate', '--n', '20', '--p-exp', '-1/2')

        assert document['config']['p_spec']['kind'] == 'exponent'
        assert document['config']['p'] == pytest.approx(20 ** -0.5)

    def test_command_line_constant_replaces_config_exponent(self, capsys, tmp_path):
        path = tmp_path / 'power.yaml'
        path.write_text('family: K3\np-exp: -1/2\np-scale: 2.0\ntrials: 10\n', encoding='utf-8')

        document = _json(capsys, '--config', str(path), 'simulate', '--n', '20', '--p', '0.25')

        assert document['config']['p_spec']['kind'] == 'constant'
        assert document['config']['p'] == 0.25

    def test_config_p_forms_still_conflict(self, capsys, tmp_path):
        path = tmp_path / 'both.yaml'
        path.write_text('family: K3\np: 0.5\np_exp: -1/2\ntrials: 10\n', encoding='utf-8')

        code, _, err = _run(capsys, '--config', str(path), 'simulate', '--n', '20')

        assert code == 1
        assert '[BAD_P_SPEC]' in err

    def test_csv(self, capsys):
        code, out, _ = _run(capsys, '--format', 'csv', 'simulate', '--family', 'K3', '--n', '8', '--p', '0.5',
                            '--trials', '10')

        assert code == 0
        assert out.splitlines()[0] == 'cell,count,probability'
        assert len(out.splitlines()) == 3

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / 'result.json'
        code, out, _ = _run(capsys, '--no-meta', '--out', str(path), 'simulate', '--family', 'K3', '--n', '8',
                            '--p', '0.5', '--trials', '10')

        assert code == 0
        assert out == ''
        assert json.loads(path.read_text(encoding='utf-8'))['command'] == 'simulate'

    def test_bad_p_spec(self, capsys):
        code, out, err = _run(capsys, 'simulate', '--family', 'K3', '--n', '8', '--trials', '10')

        assert code == 1
        assert out == ''
        assert 'ERROR: [BAD_P_SPEC]' in err


class TestExact(object):
    def test_triangle(self, capsys):
        result = _json(capsys, 'exact', '--family', 'K3', '--n', '3', '--p', '0.5')['result']

        assert result['tv'] == pytest.approx(0.375)
        assert [row['probability'] for row in result['histogram']] == [0.875, 0.125]
        assert result['xor_bound'] >= result['tv']

    def test_text(self, capsys):
        code, out, _ = _run(capsys, '--no-meta', '--format', 'text', 'exact', '--family', 'K3', '--n', '3',
                            '--p', '0.5')

        assert code == 0
        assert out.startswith('command')
        assert 'result.tv' in out


class TestDecay(object):
    def test_warns_below_threshold(self, capsys):
        code, out, err = _run(capsys, '--no-meta', 'decay', '--family', 'K3,K4', '--n-grid', '10,20',
                              '--p-exp', '-2/3', '--trials', '5')

        assert code == 0
        assert 'no decay is expected' in err
        document = json.loads(out)
        assert document['result']['above_threshold'] is False
        assert [row['n'] for row in document['result']['rows']] == [10, 20]

    def test_bad_grid(self, capsys):
        code, _, err = _run(capsys, 'decay', '--family', 'K3', '--n-grid', '10,x', '--p', '0.5', '--trials', '5')

        assert code == 1
        assert '[BAD_N_GRID]' in err


class TestCorollary(object):
    def test_split(self, capsys):
        result = _json(capsys, 'corollary', '--family', 'K3,K4', '--alpha', '0.8', '--n', '40', '--trials', '10')[
            'result']

        assert result['I'] == [0]
        assert result['J'] == [1]
        assert result['alpha'] == '4/5'

    def test_boundary(self, capsys):
        code, _, err = _run(capsys, 'corollary', '--family', 'K3,K4', '--alpha', '2/3', '--n', '40', '--trials', '10')

        assert code == 1
        assert '[BOUNDARY_ALPHA]' in err


class TestPacking(object):
    def test_host(self, capsys):
        result = _json(capsys, 'packing', '--host-file', str(get_test_path('k4.txt')), '--pattern', 'K3')['result']

        assert result == {'X': 4, 'Z': 6, 'Y_greedy': 1, 'Y_exact': 1, 'turan_bound': 1.0}

    def test_study(self, capsys):
        result = _json(capsys, 'packing', '--study', '--pattern', 'K3', '--n-grid', '10,20', '--p', '0.3',
                       '--trials', '4')['result']

        assert [row['n'] for row in result['rows']] == [10, 20]

    def test_missing_host(self, capsys):
        code, _, err = _run(capsys, 'packing', '--pattern', 'K3')

        assert code == 1
        assert '[MISSING_HOST]' in err


class TestCharsum(object):
    def test_blocks(self, capsys):
        result = _json(capsys, 'charsum', '--blocks', '3', '--degree', '2')['result']

        assert result['modulus'] == pytest.approx(0.125)
        assert result['product_formula'] == pytest.approx(0.125)
        assert result['conditions']['satisfied'] is True

    def test_host(self, capsys):
        result = _json(capsys, 'charsum', '--host-file', str(get_test_path('two_triangles.txt')),
                       '--family', 'K3')['result']

        assert result['rows'][0]['r'] == 2
        assert result['epsilon'] == pytest.approx(0.5625)
        assert result['tv'] <= result['xor_bound']


class TestErrors(object):
    def test_self_loop(self, capsys):
        code, out, err = _run(capsys, 'count', '--host-file', str(get_test_path('self_loop.txt')), '--pattern', 'K3')

        assert code == 1
        assert out == ''
        assert err.startswith('ERROR: [SELF_LOOP]')

    def test_isomorphic_family(self, capsys):
        code, _, err = _run(capsys, 'invariants', '--family', 'K3,C3', '--n', '10')

        assert code == 1
        assert '[ISOMORPHIC_PAIR]' in err

    def test_size_cap_is_a_runtime_error(self, capsys):
        code, _, err = _run(capsys, 'count', '--host-file', str(get_test_path('k4.txt')), '--pattern', 'C11')

        assert code == 2
        assert '[PATTERN_TOO_LARGE]' in err

    def test_bad_config(self, capsys):
        for name in ['bad_config.yaml', 'unknown_key.yaml']:
            code, _, err = _run(capsys, '--config', str(get_test_path(name)), 'simulate')

            assert code == 1
            assert '[BAD_CONFIG]' in err

    def test_usage_error(self, capsys):
        code, _, _ = _run(capsys, 'count', '--pattern', 'K3')

        assert code == 1

    def test_version(self, capsys):
        code, out, _ = _run(capsys, '--version')

        assert code == 0
        assert VERSION in out
