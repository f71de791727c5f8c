"""
This file contains all the unit tests for our result formatting.
"""
import json

import numpy as np

from modcount import VERSION
from modcount.reporting import _plain, emit, format_csv, format_result, format_text, result_document
from tests.test_support import Options


class TestPlain(object):
    def test_numpy_values(self):
        assert _plain(np.int64(3)) == 3
        assert isinstance(_plain(np.int64(3)), int)
        assert _plain(np.array([[1, 2], [3, 4]])) == [[1, 2], [3, 4]]
        assert _plain(np.float64(0.25)) == 0.25

    def test_containers(self):
        assert _plain((1, (2, 3))) == [1, [2, 3]]
        assert _plain({1: 'a', 'b': (np.int32(2),)}) == {'1': 'a', 'b': [2]}

    def test_special_floats(self):
        assert _plain(complex(1, -2)) == [1.0, -2.0]
        assert _plain(float('nan')) is None
        assert _plain(float('inf')) is None
        assert _plain(np.float64('-inf')) is None
        assert _plain('text') == 'text'


class TestResultDocument(object):
    def test_without_meta(self):
        with Options(no_meta=True):
            document = result_document('count', {'copies': '4'})

        assert document == {'command': 'count', 'result': {'copies': '4'}}

    def test_with_meta(self):
        with Options(no_meta=False):
            document = result_document('simulate', {'tv': np.float64(0.125)}, config={'n': 10},
                                       sampler={'master_seed': 3})

        assert list(document.keys()) == ['command', 'meta', 'config', 'sampler', 'result']
        assert document['meta']['version'] == VERSION
        assert 'timestamp' in document['meta']
        assert document['result']['tv'] == 0.125
        json.dumps(document)


class TestFormatting(object):
    def test_csv_table(self):
        table = [{'cell': (0, 1), 'count': 3, 'probability': 0.75}, {'cell': (1, 1), 'count': 1, 'probability': None}]

        assert format_csv({}, table) == 'cell,count,probability\n0 1,3,0.75\n1 1,1,\n'

    def test_csv_flat(self):
        document = {'command': 'corollary', 'result': {'tv': 0.5, 'I': [0, 1], 'rows': [{'n': 10}, {'n': 20}]}}

        assert format_csv(document) == 'key,value\ncommand,corollary\nresult.tv,0.5\nresult.I,0 1\n' \
                                       'result.rows[0].n,10\nresult.rows[1].n,20\n'

    def test_text(self):
        document = {'command': 'exact', 'result': {'tv': 0.375, 'phi': None}}

        assert format_text(document) == 'command     exact\nresult.tv   0.375\nresult.phi  \n'

    def test_format_result(self):
        document = {'command': 'count', 'result': {'copies': '4'}}

        with Options(output_format='json'):
            assert json.loads(format_result(document)) == document
        with Options(output_format='text'):
            assert format_result(document) == format_text(document)
        with Options(output_format='csv'):
            assert format_result(document) == format_csv(document)


class TestEmit(object):
    def test_stdout(self, capsys):
        with Options(output_format='json', out_path=None):
            emit({'command': 'count'})

        assert json.loads(capsys.readouterr().out) == {'command': 'count'}

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / 'rows.csv'

        with Options(output_format='csv', out_path=path):
            emit({'command': 'simulate'}, [{'cell': [0], 'count': 2}])

        assert capsys.readouterr().out == ''
        assert path.read_text(encoding='utf-8') == 'cell,count\n0,2\n'
