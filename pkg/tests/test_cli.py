import json

import pytest

from main import build_parser, parse_complex, run
from errors import InputError
from realization.gr_node import expand
from realization.desk_nodes import e1_node, example1_node
from series.fps import fps_to_dict


def _run(*argv):
    code, text = run(list(argv))
    return code, json.loads(text)


def test_check_line_on_e1():
    code, report = _run('check', '--case', 'line', '--input', 'desk:e1')
    assert code == 0
    assert report['command'] == 'check'
    assert report['result']['holds'] is True
    assert report['result']['H'] == [[[pytest.approx(1.0), pytest.approx(0.0, abs=1e-12)]]]
    assert report['residuals']['sample_n1'] <= 1e-8
    assert report['residuals']['sample_n2'] <= 1e-8


def test_check_inner_on_associated_e1_fails():
    code, report = _run('check', '--case', 'inner-line', '--input', 'desk:e1inv')
    assert code == 1
    assert report['result']['holds'] is False
    assert report['result']['nu'] == [1]
    assert report['result']['j_unitary'] is True
    assert report['result']['inner'] is False


def test_check_circle_on_blaschke_product():
    code, report = _run('check', '--case', 'inner-disk', '--input', 'desk:blaschke_product')
    assert code == 0
    assert report['residuals']['min_contractivity_eig'] >= -1e-10


def test_missing_input_is_input_error():
    code, report = _run('describe', '--input', 'desk:no_such_node')
    assert code == 2
    assert report['result']['error_type'] == 'InputError'


def test_minimize_padded_e1():
    code, report = _run('minimize', '--input', 'desk:padded_e1', '--degree', '8')
    assert code == 0
    assert report['result']['dims_before'] == [2]
    assert report['result']['dims_after'] == [1]
    assert report['residuals']['coefficient_difference'] <= 1e-12


def test_kernel_all_routes_on_e2():
    code, report = _run('kernel', '--route', 'all', '--input', 'desk:e2', '--degree', '2',
                        '--k', '2')
    assert code == 0
    assert max(v for key, v in report['residuals'].items() if key.startswith('route_')) <= 1e-10
    assert report['result']['gram_signature'][1] == 0


def test_model_from_series_file(tmp_path):
    path = tmp_path / 'e1_series.json'
    path.write_text(json.dumps(fps_to_dict(expand(e1_node(), 8))), encoding='utf-8')
    code, report = _run('model', '--input', str(path))
    assert code == 0
    assert report['result']['dims'] == [1]
    assert report['residuals']['expansion_difference'] <= 1e-9


def test_factorize_search_on_example1():
    code, report = _run('factorize', '--search', '--input', 'desk:example1')
    assert code == 0
    factored = [e for e in report['result']['families'] if 'factorization' in e]
    assert factored
    assert factored[0]['factorization']['dims'] == [[1, 0], [0, 1]]


def test_cayley_with_parameter():
    code, report = _run('cayley', '--input', 'desk:shift', '--a', '1,0')
    assert code == 0
    assert report['result']['node']['dims'] == [1]


def test_report_is_deterministic_and_written(tmp_path):
    out = tmp_path / 'report.json'
    argv = ['schur-sample', '--input', 'desk:blaschke', '--samples', '12', '--seed', '4']
    first = run(argv + ['--output', str(out)])
    second = run(argv + ['--output', str(out)])
    assert first[1] == second[1]
    assert out.read_text(encoding='utf-8') == first[1] + '\n'
    assert json.loads(first[1])['result']['contractive'] is True


def test_parse_complex():
    assert parse_complex('0.5,-1') == complex(0.5, -1)
    assert parse_complex('2') == 2
    assert parse_complex(None) is None
    with pytest.raises(InputError):
        parse_complex('1,2,3')


def test_parser_requires_case_for_check():
    with pytest.raises(SystemExit):
        build_parser().parse_args(['check', '--input', 'desk:e1'])


def test_kernel_series_on_example1_file(tmp_path):
    path = tmp_path / 'ex1_series.json'
    path.write_text(json.dumps(fps_to_dict(expand(example1_node(), 7))), encoding='utf-8')
    code, report = _run('kernel', '--route', 'series', '--k', '1', '--degree', '3',
                        '--input', str(path))
    assert code == 0
    for entry in report['result']['table']:
        w, w2 = entry['w'], entry['w2']
        expected = 2.0 * (-1) ** (len(w) + len(w2)) if set(w + w2) <= {1} else 0.0
        re, im = entry['matrix'][0][0]
        assert abs(re - expected) <= 1e-10 and abs(im) <= 1e-10


def test_describe_e1():
    code, report = _run('describe', '--input', 'desk:e1')
    assert code == 0
    assert report['result']['dims'] == [1]
    assert report['result']['minimal']
    assert report['result']['obs_ctrl_agree']
