#!/usr/bin/env python3
"""
Tests for sparse polynomials, resultants and dense root finding.
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import PolynomialError
from src.field import GF, QQ
from src.poly import (
    MultiPoly, dense_gcd, dense_roots, exact_divide, formal_derivative, homogenize, parse_poly,
    polys_equal_up_to_unit, resultant, substitute, sylvester_resultant, to_dense,
)

F2 = GF(2)


def test_parse_and_print_in_graded_lex_order():
    f = parse_poly("x*z^3 + x^4 + y^2*z^2", F2, ('x', 'y', 'z'))
    assert str(f) == "x^4 + x*z^3 + y^2*z^2"
    assert f.total_degree == 4
    assert f.is_homogeneous()
    assert parse_poly(str(f), F2, ('x', 'y', 'z')) == f


def test_parse_reduces_integers_mod_p():
    f = parse_poly("3*x + 2*y + 1", F2, ('x', 'y'))
    assert str(f) == "x + 1"


def test_parse_rejects_unknown_variables_and_garbage():
    with pytest.raises(PolynomialError):
        parse_poly("x + w", F2, ('x', 'y'))
    with pytest.raises(PolynomialError):
        parse_poly("x +", F2, ('x',))
    with pytest.raises(PolynomialError):
        parse_poly("", F2, ('x',))


def test_extension_generator_in_text():
    F4 = GF(2, 2)
    f = parse_poly("x^2 + a*x + a^2", F4, ('x',))
    roots = dense_roots(F4, to_dense(f, 'x'))
    assert len(roots) == 2
    for root in roots:
        assert f.value_at({'x': root}) == 0


def test_formal_derivative_in_characteristic_two():
    f = parse_poly("x^2*z + x^3 + z^4", F2, ('x', 'z'))
    assert formal_derivative(f, 'x') == parse_poly("x^2", F2, ('x', 'z'))
    assert formal_derivative(f, 'z') == parse_poly("x^2", F2, ('x', 'z'))


def test_substitute_and_evaluate():
    f = parse_poly("x^2 + y", QQ, ('x', 'y'))
    t = MultiPoly.variable(QQ, ('t',), 't')
    image = substitute(f, {'x': t + 1, 'y': t})
    assert image == parse_poly("t^2 + 3*t + 1", QQ, ('t',))
    assert f.value_at({'x': Fraction(1, 2), 'y': Fraction(3)}) == Fraction(13, 4)


def test_homogenize_then_dehomogenize():
    f = parse_poly("x^3 + y + 1", QQ, ('x', 'y'))
    F = homogenize(f, 'z', 3)
    assert F.is_homogeneous()
    assert F.dehomogenize('z') == f


def test_exact_division():
    f = parse_poly("x^2 - y^2", QQ, ('x', 'y'))
    g = parse_poly("x - y", QQ, ('x', 'y'))
    assert exact_divide(f, g) == parse_poly("x + y", QQ, ('x', 'y'))
    with pytest.raises(PolynomialError):
        exact_divide(f, parse_poly("x + 2*y", QQ, ('x', 'y')))


def test_resultant_matches_sylvester_determinant():
    f = parse_poly("x^2 - y", QQ, ('x', 'y'))
    h = parse_poly("x - 1", QQ, ('x', 'y'))
    res = resultant(f, h, 'x')
    assert res == sylvester_resultant(f, h, 'x')
    assert polys_equal_up_to_unit(res, parse_poly("y - 1", QQ, ('y',)))


def test_resultant_over_f2_detects_common_root():
    f = parse_poly("x^2 + x*y + 1", F2, ('x', 'y'))
    h = parse_poly("x + y", F2, ('x', 'y'))
    res = resultant(f, h, 'x')
    assert res == sylvester_resultant(f, h, 'x')
    # at x = y the first polynomial reduces to 1, so the resultant is a unit
    assert res.is_constant() and not res.is_zero


def test_dense_roots_over_rationals_and_finite_fields():
    roots = dense_roots(QQ, [Fraction(2), Fraction(-3), Fraction(0), Fraction(1)])
    assert roots == {Fraction(1): 2, Fraction(-2): 1}
    F4 = GF(2, 2)
    roots = dense_roots(F4, [1, 1, 1])
    assert len(roots) == 2
    assert set(roots.values()) == {1}
    assert dense_roots(F2, [1, 1, 1]) == {}


def test_dense_gcd_is_monic():
    F3 = GF(3)
    # (x + 1)(x + 2) and (x + 1)^2
    assert dense_gcd(F3, [2, 0, 1], [1, 2, 1]) == [1, 1]


def test_polys_equal_up_to_unit():
    F3 = GF(3)
    f = parse_poly("x^2 + y", F3, ('x', 'y'))
    assert polys_equal_up_to_unit(f, f * 2)
    assert not polys_equal_up_to_unit(f, f + 1)


def test_rational_roots_of_known_products():
    rng = random.Random(11)
    x = MultiPoly.variable(QQ, ('x',), 'x')
    for _ in range(10):
        expected = {}
        f = MultiPoly.constant(QQ, ('x',), 3)
        for _ in range(rng.randint(1, 3)):
            root = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            m = rng.randint(1, 2)
            expected[root] = expected.get(root, 0) + m
            f = f * (x - root) ** m
        assert dense_roots(QQ, to_dense(f, 'x')) == expected


def to_sympy(f, symbols):
    return sum(sympy.Rational(c.numerator, c.denominator)
               * sympy.Mul(*[symbols[v] ** k for v, k in zip(f.variables, e)])
               for e, c in f.terms.items())


def test_resultant_against_sympy():
    rng = random.Random(5)
    symbols = {'x': sympy.Symbol('x'), 'y': sympy.Symbol('y')}
    for _ in range(8):
        pair = []
        for degree in (rng.randint(1, 3), rng.randint(1, 3)):
            terms = {(i, j): Fraction(rng.randint(-4, 4)) for i in range(degree) for j in range(2)}
            terms[(degree, 0)] = Fraction(rng.randint(1, 5))
            pair.append(MultiPoly(QQ, ('x', 'y'), terms))
        f, h = pair
        ours = to_sympy(resultant(f, h, 'x'), symbols)
        theirs = sympy.resultant(to_sympy(f, symbols), to_sympy(h, symbols), symbols['x'])
        assert sympy.expand(ours - theirs) == 0
