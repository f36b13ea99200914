#!/usr/bin/env python3
"""
Tests for log canonical thresholds, the threefold ledger and lifting verdicts.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import InvariantError
from src.field import QQ
from src.invariants import (
    DivisorLedgerEntry, Verdict, char0_max_Am, d2d_index, lct_am, lct_of_germ, lct_plane_germ,
    lct_xg, lifting_verdict, xg_ledger, xg_ledger_consistent,
)
from src.resolve import EMBEDDED, CurveGerm, resolution_tree


def test_ledger_entry_candidate():
    entry = DivisorLedgerEntry(2, 6, 4)
    assert entry.lct_candidate == Fraction(5, 6)
    assert entry.to_dict()['lct_candidate'] == Fraction(5, 6)
    with pytest.raises(InvariantError):
        DivisorLedgerEntry(0, 0, 1)


def test_cusp_and_node_thresholds():
    cusp = lct_of_germ(CurveGerm.parse("z^2 + x^3", QQ))
    assert cusp.value == Fraction(5, 6)
    assert cusp.argmin == 2
    assert lct_of_germ(CurveGerm.parse("z^2 - x^2", QQ)).value == 1


def test_smooth_germ_uses_the_convention():
    tree = resolution_tree(CurveGerm.parse("z + x^2", QQ), EMBEDDED)
    result = lct_plane_germ(tree)
    assert result.value == 1
    assert result.smooth
    assert result.argmin is None


def test_threshold_needs_embedded_tree():
    with pytest.raises(InvariantError):
        lct_plane_germ(resolution_tree(CurveGerm.parse("z^2 + x^3", QQ)))


@pytest.mark.parametrize("m", [1, 2, 5, 20])
def test_synthetic_am_matches_closed_form(m):
    germ = CurveGerm.parse(f"z^2 - x^{m + 1}", QQ)
    assert lct_of_germ(germ).value == lct_am(m)


def test_lct_am_values():
    assert lct_am(20) == Fraction(23, 42)
    assert lct_am(6) == Fraction(9, 14)
    assert [lct_am(m) > lct_am(m + 1) for m in range(1, 50)] == [True] * 49
    with pytest.raises(InvariantError):
        lct_am(0)


def test_xg_ledger_over_an_a20_chain():
    tree = resolution_tree(CurveGerm.parse("z^2 - x^21", QQ))
    ledger = xg_ledger(6, tree)
    assert len(ledger) == 11
    assert (ledger[0].a, ledger[0].k) == (6, 2)
    assert (ledger[1].a, ledger[1].k) == (8, 4)
    assert xg_ledger_consistent(6, tree, ledger)
    result = lct_xg(ledger)
    assert result.value == Fraction(1, 2)
    assert result.argmin == 0


def test_xg_ledger_rejects_bad_input():
    tree = resolution_tree(CurveGerm.parse("z^2 - x^3", QQ))
    with pytest.raises(InvariantError):
        xg_ledger(2, tree)
    with pytest.raises(InvariantError):
        xg_ledger(6, tree, exponent=14)
    with pytest.raises(InvariantError):
        lct_xg([])


def test_inconsistent_xg_ledger_is_caught():
    tree = resolution_tree(CurveGerm.parse("z^2 - x^5", QQ))
    ledger = xg_ledger(6, tree)
    ledger[1] = DivisorLedgerEntry(1, ledger[1].a + 1, ledger[1].k, 3)
    assert not xg_ledger_consistent(6, tree, ledger)


def test_char0_bounds():
    assert [char0_max_Am(deg) for deg in (4, 6, 8)] == [7, 19, 37]
    assert char0_max_Am(10) == 61
    with pytest.raises(InvariantError):
        char0_max_Am(7)


def test_d2d_index():
    assert [d2d_index(d) for d in (2, 3, 4)] == [7, 17, 31]
    assert all(d2d_index(d) <= char0_max_Am(2 * d) for d in range(1, 12))
    assert d2d_index(2) == char0_max_Am(4)
    with pytest.raises(InvariantError):
        d2d_index(0)


def test_lifting_verdicts():
    assert lifting_verdict(6, 20).verdict == Verdict.NOT_OBSTRUCTED
    obstructed = lifting_verdict(8, 42, 'C_{8}')
    assert obstructed.verdict == Verdict.OBSTRUCTED
    assert not obstructed.liftable
    assert obstructed.to_dict()['char0_max'] == 37
    assert lifting_verdict(10, 72).verdict == Verdict.OBSTRUCTED
    with pytest.raises(InvariantError):
        lifting_verdict(6, 19)
