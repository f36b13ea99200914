#!/usr/bin/env python3
"""
Tests for value semigroups of plane branches.
"""

import sys
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.curve import germ_at, implicitize, point_at_infinity, preset_curve
from src.exceptions import PrecisionError
from src.field import GF, QQ
from src.resolve import resolution_tree
from src.semigroup import delta_via_semigroup, semigroup_with_retry
from src.series import PowerSeries


def branch(spec, exponents_x, exponents_z, precision):
    def series(exponents):
        total = PowerSeries(spec, [], precision, 's')
        for e in exponents:
            total = total + PowerSeries.monomial(spec, e, precision, var='s')
        return total
    return series(exponents_x), series(exponents_z)


@pytest.mark.parametrize("spec", [QQ, GF(2)])
def test_cusp(spec):
    semigroup = delta_via_semigroup(*branch(spec, [2], [3], 20))
    assert semigroup.generators == [2, 3]
    assert semigroup.conductor == 2
    assert semigroup.delta == 1
    assert semigroup.is_symmetric()


def test_two_pair_branch_over_rationals():
    semigroup = delta_via_semigroup(*branch(QQ, [4], [6, 7], 40))
    assert semigroup.generators == [4, 6, 13]
    assert semigroup.conductor == 16
    assert semigroup.gaps == [1, 2, 3, 5, 7, 9, 11, 15]
    assert semigroup.delta == 8
    assert semigroup.is_symmetric()


def test_coordinates_may_come_in_either_order():
    a = delta_via_semigroup(*branch(QQ, [3], [5], 30))
    x, z = branch(QQ, [3], [5], 30)
    b = delta_via_semigroup(z, x)
    assert a.generators == b.generators == [3, 5]
    assert a.delta == b.delta == 4


def test_low_precision_is_reported():
    with pytest.raises(PrecisionError):
        delta_via_semigroup(*branch(QQ, [4], [6, 7], 8))


def test_retry_doubles_until_certified():
    calls = []

    def expand(precision):
        calls.append(precision)
        return branch(QQ, [4], [6, 7], precision)

    semigroup = semigroup_with_retry(expand, 8, 64)
    assert semigroup.delta == 8
    assert calls == [8, 16, 32]

    with pytest.raises(PrecisionError):
        semigroup_with_retry(expand, 8, 16)


@pytest.mark.parametrize("preset, n", [
    ('cq2', 1), ('cq2', 2), ('cq2', 3), pytest.param('cq2', 4, marks=pytest.mark.slow),
    ('cq', 2), ('cq', 3), pytest.param('cq', 4, marks=pytest.mark.slow),
])
def test_branch_at_infinity_agrees_with_the_blowup_tree(preset, n):
    curve = preset_curve(preset, n)
    place = point_at_infinity(curve)
    semigroup = semigroup_with_retry(lambda precision: point_at_infinity(curve, precision).series, 32, 4096)
    tree = resolution_tree(germ_at(implicitize(curve), place.point))
    q = 2 ** n
    m = q * (q + 1) if preset == 'cq2' else (q - 1) * (q - 2)
    assert semigroup.generators == [2, m + 1]
    assert semigroup.delta == tree.delta() == m // 2
    assert semigroup.is_symmetric()
