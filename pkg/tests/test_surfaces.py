#!/usr/bin/env python3
"""
Tests for the double planes S_r: census, exceptional count and boundary checks.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import CurveError, InvariantError
from src.lattice import mumford_pullback
from src.surfaces import (
    DoublePlane, betti2_of_double_plane, boundary_components, chart_check, consistent_attachments,
    exceptional_count, is_power_of_two, jacobian_census, k3_lattice, multiplicative_order, two_part,
)


def test_integer_helpers():
    assert [two_part(n) for n in (2, 4, 6, 12)] == [2, 4, 2, 4]
    assert is_power_of_two(8) and not is_power_of_two(6) and not is_power_of_two(0)
    assert multiplicative_order(2, 5) == 4
    assert multiplicative_order(2, 9) == 6
    assert multiplicative_order(2, 1) == 1


def test_double_plane_parameters():
    S = DoublePlane(3)
    assert (S.q, S.r_prime) == (2, 3)
    assert S.branch_degree == 14
    assert S.origin_length == 92
    with pytest.raises(CurveError):
        DoublePlane(0)


@pytest.mark.parametrize("r, summary", [
    (1, "A_15 + 5A_1"),
    (2, "A_45 + 9A_3"),
    (3, "A_91 + 39A_1"),
    (4, "A_153 + 17A_7"),
])
def test_census_types(r, summary):
    census = jacobian_census(DoublePlane(r))
    assert census.summary == summary
    assert all(census.checks.values())


def test_census_field_of_definition():
    census = jacobian_census(DoublePlane(1))
    origin, roots = census.entries
    assert (origin.location, origin.length) == ('t=0', 16)
    assert roots.field_degree == 4
    assert census.total_exceptional == 20


def test_exceptional_count_meets_betti_number():
    count = exceptional_count(DoublePlane(1))
    assert (count.count, count.picard_lower_bound, count.betti2, count.branch_genus) == (20, 22, 22, 10)
    count = exceptional_count(DoublePlane(2))
    assert (count.count, count.betti2) == (72, 74)
    with pytest.raises(InvariantError):
        exceptional_count(DoublePlane(3))


def test_betti2_of_sextic_double_plane():
    assert betti2_of_double_plane(6) == (22, 10)


def test_boundary_splits_over_f4():
    components = boundary_components(DoublePlane(1))
    assert len(components) == 2
    assert all(c.verified for c in components)


def test_surface_is_smooth_at_infinity():
    for r in (1, 2):
        checks = chart_check(DoublePlane(r))
        assert [c.chart for c in checks] == ['x', 'z', 'u']
        assert all(c.nonsingular for c in checks)


def test_k3_pullback_numbers():
    result = mumford_pullback(k3_lattice(), ['B1', 'B2'])
    assert result.number('B1', 'B2') == Fraction(9, 16)
    assert result.number('B1', 'B1') == Fraction(7, 16)
    assert result.number('B2', 'B2') == Fraction(7, 16)


def test_k3_lattice_rejects_bad_attachments():
    with pytest.raises(CurveError):
        k3_lattice((0, 13))
    with pytest.raises(CurveError):
        k3_lattice((3,))


def test_only_mirror_attachments_are_consistent():
    assert consistent_attachments() == [(3, 13), (13, 3)]
