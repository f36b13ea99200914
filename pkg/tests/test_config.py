#!/usr/bin/env python3
"""
Tests for configuration loading/validation and the JSON helpers.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config_manager import ConfigManager
from src.utils import dump_json, format_rational, load_json_report, save_json_report, timings_path


def test_defaults_are_valid():
    manager = ConfigManager()
    assert manager.validate_config()
    assert manager.get_value('resolve.max_precision') == 2048
    assert manager.get_value('resolve.missing', 'fallback') == 'fallback'


def test_bundled_config_is_valid():
    manager = ConfigManager(str(project_root / 'config.yaml'))
    assert not manager.load_failed
    assert manager.validate_config()


def test_partial_file_is_merged_over_defaults(tmp_path):
    path = tmp_path / 'partial.yaml'
    path.write_text(yaml.safe_dump({'resolve': {'max_precision': 512}}))
    manager = ConfigManager(str(path))
    assert manager.get_value('resolve.max_precision') == 512
    assert manager.get_value('resolve.initial_precision') == 24
    assert manager.get_section('curve') == {'k_max': 4}


def test_json_config(tmp_path):
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps({'curve': {'k_max': 6}}))
    assert ConfigManager(str(path)).get_value('curve.k_max') == 6


@pytest.mark.parametrize("updates", [
    {'curve': {'k_max': 0}},
    {'series': {'initial_precision': 64, 'max_precision': 32}},
    {'invariants': {'xg_exponent': 14}},
    {'surfaces': {'b_attachments': [3]}},
    {'logging': {'level': 'LOUD'}},
    {'verification': {'workers': True}},
])
def test_validation_failures(updates):
    manager = ConfigManager()
    manager.update_config(updates)
    assert not manager.validate_config()


def test_missing_and_unreadable_files(tmp_path):
    assert ConfigManager(str(tmp_path / 'absent.yaml')).load_failed
    odd = tmp_path / 'settings.toml'
    odd.write_text("x = 1\n")
    manager = ConfigManager(str(odd))
    assert manager.load_failed
    assert not manager.validate_config()
    listing = tmp_path / 'list.yaml'
    listing.write_text("- 1\n- 2\n")
    assert ConfigManager(str(listing)).load_failed


def test_save_config_round_trip(tmp_path):
    manager = ConfigManager()
    manager.update_config({'curve': {'k_max': 3}})
    target = tmp_path / 'saved.yaml'
    manager.save_config(str(target))
    assert ConfigManager(str(target)).get_value('curve.k_max') == 3


def test_rationals_in_text_and_json():
    assert format_rational(Fraction(7, 16)) == '7/16'
    assert format_rational(Fraction(-4, 2)) == '-2'
    assert json.loads(dump_json({'lct': Fraction(5, 6)})) == {'lct': {'num': 5, 'den': 6}}


def test_reports_and_timings(tmp_path):
    report = tmp_path / 'verify.json'
    save_json_report({'items': []}, report)
    assert load_json_report(report) == {'items': [], 'schema_version': 1}
    assert timings_path(report).name == 'verify.timings.json'
    assert load_json_report(tmp_path / 'none.json') == {}
