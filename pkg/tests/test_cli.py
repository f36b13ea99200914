#!/usr/bin/env python3
"""
Tests for the curvelab command line: outputs and exit codes.
"""

import json
import sys
from pathlib import Path

import pytest
import yaml

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from curvelab import create_argument_parser, main

CONFIG = str(project_root / 'config.yaml')


def run(*argv):
    return main(['--config', CONFIG, '--log-level', 'WARNING', *argv])


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        create_argument_parser().parse_args([])


def test_lct_of_the_cusp_as_json(capsys):
    assert run('lct', '--germ', 'z^2+x^3', '--p', '0', '--json') == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['lct']['value'] == {'num': 5, 'den': 6}
    assert payload['schema_version'] == 1


def test_lct_text(capsys):
    assert run('lct', '--germ', 'z^2+x^3', '--p', '0') == 0
    assert capsys.readouterr().out.strip() == 'lct = 5/6 attained at E2'


def test_resolve_writes_dot(tmp_path, capsys):
    target = tmp_path / 'cusp.dot'
    assert run('resolve', '--germ', 'z^2+x^3', '--p', '0', '--mode', 'embedded', '--dot', str(target)) == 0
    out = capsys.readouterr().out
    assert 'E0(-3) - E2(-1) - E1(-2)' in out
    assert target.read_text().startswith('graph')


def test_resolve_dot_needs_embedded_mode(tmp_path):
    assert run('resolve', '--germ', 'z^2+x^3', '--p', '0', '--dot', str(tmp_path / 'x.dot')) == 2


def test_verdict_for_c22(capsys):
    assert run('verdict', '--preset', 'cq2', '--n', '1', '--json') == 0
    payload = json.loads(capsys.readouterr().out)
    assert (payload['m'], payload['char0_max'], payload['verdict']) == (6, 7, 'not_obstructed')


def test_curve_analyze_reports_the_degree_ratio(capsys):
    assert run('curve', 'analyze', '--preset', 'cq2', '--n', '1') == 0
    out = capsys.readouterr().out
    assert 'A_6' in out
    assert 'm/deg^2 = 3/8' in out
    assert 'genus: arithmetic 3, geometric 0' in out


def test_surface_census(capsys):
    assert run('surface', 'census', '--r', '1') == 0
    out = capsys.readouterr().out
    assert 'A_15 + 5A_1' in out
    assert 'b_2 = 22' in out


def test_lattice_pullback_is_order_independent(capsys):
    assert run('lattice', 'pullback', '--chain', 'A15', '--attach', '3,13') == 0
    plain = sorted(capsys.readouterr().out.splitlines())
    assert '(B1·B2) = 9/16' in plain
    assert run('lattice', 'pullback', '--chain', 'A15', '--attach', '3,13', '--seed', '7') == 0
    shuffled = capsys.readouterr().out.splitlines()
    assert '(B1·B2) = 9/16' in shuffled or '(B2·B1) = 9/16' in shuffled
    assert '(B1·B1) = 7/16' in shuffled


def test_lattice_contract_k3(capsys):
    assert run('lattice', 'contract', '--k3', '--keep', 'C8') == 0
    out = capsys.readouterr().out
    assert 'singularities: 2E8+5A1' in out
    assert "(C8'·C8') = 2" in out


@pytest.mark.parametrize("argv", [
    ('lct', '--p', '0'),
    ('lct', '--germ', 'z^2 +', '--p', '0'),
    ('lct', '--germ', 'z^2+x^3', '--p', '4'),
    ('lattice', 'pullback', '--chain', 'B7'),
    ('lattice', 'contract', '--chain', 'A3', '--keep', 'C9'),
    ('curve', 'analyze', '--preset', 'cq2', '--n', '1', '--kmax', '0'),
])
def test_input_errors_exit_2(argv):
    assert run(*argv) == 2


def test_computation_errors_exit_1():
    assert run('lct', '--germ', 'z^2', '--p', '0') == 1


def test_bad_configuration_exits_2(tmp_path):
    bad = tmp_path / 'bad.yaml'
    bad.write_text(yaml.safe_dump({'resolve': {'max_precision': 0}}))
    assert main(['--config', str(bad), 'lct', '--germ', 'z^2+x^3', '--p', '0']) == 2
    assert main(['--config', str(tmp_path / 'absent.yaml'), 'lct', '--germ', 'z^2+x^3', '--p', '0']) == 2


def write_manifest(tmp_path, expected):
    path = tmp_path / 'claims.yaml'
    path.write_text(yaml.safe_dump({'items': [
        {'id': 'bound', 'section': 'lifting', 'location': 'degree 8', 'tag': 'TRIVIAL',
         'check': 'char0_bound', 'params': {'degree': 8}, 'expected': expected},
    ]}))
    return str(path)


def test_paper_verify_writes_report_and_timings(tmp_path, capsys):
    report = tmp_path / 'verify.json'
    csv = tmp_path / 'matrix.csv'
    code = run('paper-verify', '--manifest', write_manifest(tmp_path, 37), '--no-progress',
               '--report', str(report), '--csv', str(csv))
    assert code == 0
    assert '1 passed, 0 failed, 0 skipped' in capsys.readouterr().out
    saved = json.loads(report.read_text())
    assert saved['summary'] == {'pass': 1, 'fail': 0, 'skipped': 0}
    assert 'bound' in json.loads((tmp_path / 'verify.timings.json').read_text())['items']
    assert csv.read_text().splitlines()[0] == 'id,section,location,tag,status,expected,computed'


def test_paper_verify_failure_exit_code(tmp_path, capsys):
    assert run('paper-verify', '--manifest', write_manifest(tmp_path, 36), '--json') == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload['items'][0]['status'] == 'fail'
