#!/usr/bin/env python3
"""
Tests for the exact coefficient fields.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import FieldError
from src.field import (
    GF, QQ, embedding, field_enumerate, field_extension, field_make, least_irreducible, spec_from_json,
)


def test_least_irreducible_moduli():
    """Least monic irreducibles for small fields."""
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_prime_field_arithmetic():
    F5 = GF(5)
    two, three = F5.element(2), F5.element(3)
    assert two + three == 0
    assert two * three == 1
    assert (two / three) == 4
    assert two ** 4 == 1
    assert three.inverse() == 2


def test_f4_generator_relation():
    F4 = GF(2, 2)
    a = F4.element(F4.generator())
    assert a * a == a + 1
    assert a ** 3 == 1
    assert a.frobenius() == a * a
    assert str(a * a) == 'a+1'


def test_field_axioms_exhaustive_f8():
    F8 = GF(2, 3)
    elements = field_enumerate(F8)
    assert len(elements) == 8
    for x in elements:
        assert x + x == 0
        if x:
            assert x * x.inverse() == 1
        assert x ** 8 == x


def test_minimal_degree_and_sqrt():
    F16 = GF(2, 4)
    assert F16.minimal_degree(1) == 1
    degrees = {F16.minimal_degree(v) for v in F16.elements()}
    assert degrees == {1, 2, 4}
    for v in F16.elements():
        root = F16.sqrt(v)
        assert F16.mul(root, root) == v


def test_embedding_is_a_homomorphism():
    F4, F16 = GF(2, 2), GF(2, 4)
    embed = embedding(F4, F16)
    for a in F4.elements():
        for b in F4.elements():
            assert embed(F4.mul(a, b)) == F16.mul(embed(a), embed(b))
            assert embed(F4.add(a, b)) == F16.add(embed(a), embed(b))


def test_embedding_requires_subfield():
    with pytest.raises(FieldError):
        embedding(GF(2, 2), GF(2, 3))


def test_rationals():
    half = QQ.element(Fraction(1, 2))
    assert half + half == 1
    assert QQ.characteristic == 0
    assert QQ.label == 'QQ'
    with pytest.raises(FieldError):
        QQ.size


def test_field_make_rejects_bad_input():
    with pytest.raises(FieldError):
        field_make('finite', 4)
    with pytest.raises(FieldError):
        field_make('finite', 2, 0)
    with pytest.raises(FieldError):
        field_make('finite', 2, 30, max_size=1 << 20)
    with pytest.raises(FieldError):
        GF(2).inv(0)


def test_spec_json_round_trip_keeps_modulus():
    spec = GF(3, 2)
    assert spec_from_json(spec.to_json()) == spec
    assert spec_from_json(QQ.to_json()) == QQ


def test_field_extension():
    F64 = field_extension(GF(2, 3), 2)
    assert (F64.p, F64.k, F64.size) == (2, 6, 64)
    with pytest.raises(FieldError):
        field_extension(QQ, 2)
