#!/usr/bin/env python3
"""
Tests for truncated power series and double-point preparation.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import PrecisionError, SeriesError
from src.field import GF, QQ
from src.poly import parse_poly
from src.series import PowerSeries, artin_schreier_reduce, weierstrass_form

F2 = GF(2)


def geometric(spec, precision):
    return PowerSeries(spec, [spec.one()] * (precision + 1), precision)


def test_inverse_of_one_minus_u():
    one_minus_u = PowerSeries(QQ, [Fraction(1), Fraction(-1)], 10)
    assert one_minus_u.inverse() == geometric(QQ, 10)
    assert one_minus_u * one_minus_u.inverse() == PowerSeries.one(QQ, 10)


def test_precision_follows_the_operands():
    a = PowerSeries.monomial(QQ, 1, 8)
    b = PowerSeries.monomial(QQ, 2, 5)
    assert (a + b).precision == 5
    assert a.shift(3).precision == 11
    assert a.unshift(1).precision == 7
    with pytest.raises(PrecisionError):
        a.coefficient(9)


def test_unit_checks():
    with pytest.raises(SeriesError):
        PowerSeries.monomial(F2, 1, 5).inverse()
    with pytest.raises(SeriesError):
        PowerSeries.monomial(F2, 1, 5).unshift(2)


def test_compose_with_u_squared():
    g = geometric(QQ, 6)
    u2 = PowerSeries.monomial(QQ, 2, 12)
    composed = g.compose(u2)
    assert [composed.coefficient(i) for i in range(6)] == [1, 0, 1, 0, 1, 0]


def test_bit_packing_over_f2():
    s = PowerSeries(F2, [1, 0, 1, 1], 3)
    assert s.to_bits() == 0b1101
    with pytest.raises(SeriesError):
        PowerSeries.one(QQ, 3).to_bits()


def test_weierstrass_form_of_a_normal_form():
    f = parse_poly("z^2 + z*x^5 + x^7", F2, ('x', 'z'))
    form = weierstrass_form(f, 'z', 20)
    assert form.pair() == (5, 7)
    assert form.coordinate_change == 'none'


def test_artin_schreier_removes_even_terms():
    f = parse_poly("z^2 + z*x^5 + x^4 + x^9", F2, ('x', 'z'))
    form = weierstrass_form(f, 'z', 20)
    assert form.order_a == 5
    assert form.order_b == 7


def test_artin_schreier_reduce_direct():
    a = PowerSeries.monomial(F2, 3, 12, var='x')
    b = PowerSeries(F2, [0, 0, 1, 0, 0, 0, 0, 1], 12, 'x')
    reduction = artin_schreier_reduce(a, b)
    # even terms below x^6 cascade into x^5; terms above x^6 are all reducible
    assert reduction.order_a == 3
    assert reduction.order_b == 5


def test_weierstrass_form_in_characteristic_zero():
    f = parse_poly("z^2 + 2*x*z - x^3", QQ, ('x', 'z'))
    form = weierstrass_form(f, 'z', 10)
    assert form.order_a is None
    # completing the square gives z^2 - (x^2 + x^3)
    assert form.order_b == 2


def test_weierstrass_form_swaps_when_needed():
    f = parse_poly("x^2 + z^3", QQ, ('x', 'z'))
    form = weierstrass_form(f, 'z', 10)
    assert form.coordinate_change == 'swap'
    assert form.order_b == 3
    with pytest.raises(SeriesError):
        weierstrass_form(parse_poly("z^3 + x^4", QQ, ('x', 'z')), 'z', 10)


def test_weierstrass_form_of_a_z_expansion():
    # (1 + x) z^2 + x^5 z + x^7, each z-coefficient given as a series in x
    b = PowerSeries.monomial(F2, 7, 20, var='x')
    a = PowerSeries.monomial(F2, 5, 20, var='x')
    unit = PowerSeries(F2, [1, 1], 12, 'x')
    form = weierstrass_form([b, a, unit], precision=20)
    assert form.pair() == (5, 7)
    assert form.precision == 12
    f = parse_poly("z^2 + x*z^2 + x^5*z + x^7", F2, ('x', 'z'))
    assert weierstrass_form(f, 'z', 12).pair() == form.pair()


def test_z_expansion_must_be_a_regular_double_point():
    x = PowerSeries.monomial(F2, 1, 10, var='x')
    with pytest.raises(SeriesError):
        weierstrass_form([x * x, x, x], precision=10)
    with pytest.raises(SeriesError):
        weierstrass_form([x, x, PowerSeries.one(F2, 10, 'x')], precision=10)
    with pytest.raises(SeriesError):
        weierstrass_form([x * x, x], precision=10)
