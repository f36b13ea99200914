#!/usr/bin/env python3
"""
Tests for manifest loading, comparison and the verification runner.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config_manager import ConfigManager
from src.exceptions import ManifestError
from src.field import GF
from src.poly import parse_poly
from src.verification import (
    AnalysisSettings, ManifestItem, PaperVerifier, Status, compare, load_manifest, normalize, run_item,
)

LIGHT_ITEMS = [
    {'id': 'bound', 'section': 'lifting', 'location': 'degree 8', 'tag': 'TRIVIAL',
     'check': 'char0_bound', 'params': {'degree': 8}, 'expected': 37},
    {'id': 'chain', 'section': 'lattice', 'location': 'A1 chain', 'tag': 'DERIVED',
     'check': 'chain_pullback', 'params': {'length': 1, 'attach': [1]}, 'expected': '-3/2'},
    {'id': 'census-r2', 'section': 'surfaces', 'location': 'S_2', 'tag': 'PAPER',
     'check': 'census', 'params': {'r': 2}, 'expected': {'summary': 'A_45 + 9A_3', 'checks': True}},
    {'id': 'wrong', 'section': 'lifting', 'location': 'degree 6', 'tag': 'DERIVED',
     'check': 'char0_bound', 'params': {'degree': 6}, 'expected': 20},
]


def write_manifest(tmp_path, items):
    path = tmp_path / 'claims.yaml'
    path.write_text(yaml.safe_dump({'items': items}))
    return str(path)


def quiet_config(manifest):
    config = ConfigManager().get_config()
    config['verification']['manifest'] = manifest
    config['verification']['show_progress'] = False
    return config


def test_load_manifest(tmp_path):
    items = load_manifest(write_manifest(tmp_path, LIGHT_ITEMS))
    assert [item.id for item in items] == ['bound', 'chain', 'census-r2', 'wrong']
    assert items[2].r == 2
    assert items[0].n is None


@pytest.mark.parametrize("change", [
    {'tag': 'GUESS'},
    {'check': 'no_such_check'},
    {'id': 'chain'},
])
def test_manifest_errors(tmp_path, change):
    entry = dict(LIGHT_ITEMS[0], **change)
    items = [LIGHT_ITEMS[1], entry] if change.get('id') else [entry]
    with pytest.raises(ManifestError):
        load_manifest(write_manifest(tmp_path, items))


def test_manifest_needs_items_list(tmp_path):
    path = tmp_path / 'bad.yaml'
    path.write_text("claims: []\n")
    with pytest.raises(ManifestError):
        load_manifest(str(path))
    with pytest.raises(ManifestError):
        load_manifest(str(tmp_path / 'missing.yaml'))


def test_missing_required_key(tmp_path):
    entry = {k: v for k, v in LIGHT_ITEMS[0].items() if k != 'location'}
    with pytest.raises(ManifestError) as excinfo:
        load_manifest(write_manifest(tmp_path, [entry]))
    assert excinfo.value.entry == entry


def test_normalize_and_compare():
    assert normalize(Fraction(23, 42)) == '23/42'
    assert normalize(Fraction(4, 2)) == 2
    assert normalize({'value': Fraction(1, 2), 'pairs': [(3, 13)]}) == {'value': '1/2', 'pairs': [[3, 13]]}
    assert compare('char0_bound', 37, 37)
    assert compare('k3_pullback', {'B1.B2': Fraction(9, 16)}, {'B1.B2': '9/16'})
    F2 = GF(2)
    computed = parse_poly("x^4 + x*z^3 + y^2*z^2", F2, ('x', 'y', 'z'))
    assert compare('curve_equation', computed, "y^2*z^2 + x^4 + x*z^3")


def test_blowup_count_reports_both_modes():
    item = ManifestItem('cusp', 'resolution', 'cusp', 'DERIVED', 'blowup_count',
                        {'blowups': 1, 'multiplicities': [2]}, {'germ': 'z^2 + x^3', 'p': 0})
    row, _ = run_item(item, AnalysisSettings())
    assert row.status == Status.PASS
    assert row.computed == {'blowups': 1, 'multiplicities': [2], 'embedded_blowups': 3}
    assert not compare('blowup_count', row.computed, {'blowups': 2})


def test_run_item_turns_errors_into_failures():
    item = ManifestItem('bad', 'lifting', 'odd degree', 'DERIVED', 'char0_bound', 1, {'degree': 7})
    row, runtime = run_item(item, AnalysisSettings())
    assert row.status == Status.FAIL
    assert row.detail.startswith('InvariantError')
    assert runtime >= 0


def test_report_keeps_manifest_order_and_skips_out_of_scope(tmp_path):
    verifier = PaperVerifier(quiet_config(write_manifest(tmp_path, LIGHT_ITEMS)))
    report = verifier.run(r_max=1)
    assert [row.id for row in report.items] == ['bound', 'chain', 'census-r2', 'wrong']
    assert [row.status for row in report.items] == [Status.PASS, Status.PASS, Status.SKIPPED, Status.FAIL]
    assert (report.passed, report.failed, report.skipped) == (2, 1, 1)
    assert report.exit_code == 1
    assert set(report.runtimes) == {'bound', 'chain', 'wrong'}


def test_report_outputs(tmp_path):
    verifier = PaperVerifier(quiet_config(write_manifest(tmp_path, LIGHT_ITEMS[:3])))
    report = verifier.run()
    assert report.exit_code == 0
    df = report.to_dataframe()
    assert list(df['status']) == ['pass', 'pass', 'pass']
    payload = report.to_dict()
    assert payload['summary'] == {'pass': 3, 'fail': 0, 'skipped': 0}
    assert 'runtime' not in str(payload)
    text = report.to_text()
    assert '== lattice ==' in text
    assert text.splitlines()[-1] == '3 passed, 0 failed, 0 skipped'


def test_recorded_claims_are_listed_but_not_computed(tmp_path):
    recorded = {'id': 'no-twin', 'section': 'thresholds', 'location': 'complex curves', 'tag': 'PAPER',
                'check': 'recorded', 'expected': 'no such curve'}
    verifier = PaperVerifier(quiet_config(write_manifest(tmp_path, [LIGHT_ITEMS[0], recorded])))
    report = verifier.run()
    assert [row.status for row in report.items] == [Status.PASS, Status.SKIPPED]
    assert report.items[1].detail == 'recorded claim, not recomputed'
    assert report.exit_code == 0
    assert 'no-twin' not in report.runtimes


def test_run_rejects_bad_bounds(tmp_path):
    verifier = PaperVerifier(quiet_config(write_manifest(tmp_path, LIGHT_ITEMS)))
    with pytest.raises(ManifestError):
        verifier.run(n_max=0)


def test_settings_from_config():
    config = ConfigManager().get_config()
    config['surfaces']['b_attachments'] = [13, 3]
    settings = AnalysisSettings.from_config(config)
    assert settings.b_attachments == (13, 3)
    assert settings.resolve_kwargs()['max_precision'] == 2048


@pytest.mark.slow
def test_bundled_manifest_small_scope():
    verifier = PaperVerifier(quiet_config(str(project_root / 'data' / 'paper_claims.yaml')))
    report = verifier.run(n_max=2, r_max=1)
    failures = [row.to_dict() for row in report.items if row.status == Status.FAIL]
    assert failures == []
