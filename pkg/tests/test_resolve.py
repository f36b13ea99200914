#!/usr/bin/env python3
"""
Tests for blow-ups, resolution trees, dual graphs and classification.
"""

import sys
from pathlib import Path

import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.curve import c_q2, germ_at, implicitize, point_at_infinity, preset_curve, singular_points
from src.exceptions import NonReducedGermError, PrecisionError, ResolutionError
from src.field import GF, QQ
from src.poly import MultiPoly
from src.resolve import (
    EMBEDDED, NORMALIZATION, CurveGerm, TailBound, blowup_once, branch_count, classify, delta_via_tree,
    discrepancy_profile, dual_graph, graphs_isomorphic, resolution_tree, same_discrepancy_profile,
)
from src.series import weierstrass_form

F2 = GF(2)


def test_germ_rejects_zero_and_units():
    with pytest.raises(ResolutionError):
        CurveGerm(QQ, {})
    with pytest.raises(ResolutionError):
        CurveGerm.parse("1 + x", QQ)


def test_multiplicity_undecided_below_the_tail():
    germ = CurveGerm(QQ, {(3, 0): 1}, TailBound.order(3))
    with pytest.raises(PrecisionError):
        germ.multiplicity
    assert CurveGerm.parse("z^2 + x^3", QQ).truncated(3).multiplicity == 2


def test_blowup_once_of_the_cusp():
    charts = blowup_once(CurveGerm.parse("z^2 + x^3", QQ))
    assert charts.multiplicity == 2
    assert [p.as_tuple() for p in charts.points] == [('x', 0, 2)]
    assert charts.chart_x.equation == MultiPoly.parse("z^2 + x", QQ, ('x', 'z'))
    assert charts.points[0].germ.multiplicity == 1
    assert charts.chart_z.equation == MultiPoly.parse("1 + x^3*z", QQ, ('x', 'z'))
    assert not charts.chart_z.passes_through_origin
    with pytest.raises(ResolutionError):
        charts.chart_z.germ()
    assert charts.overlap_agrees()


def test_blowup_once_of_the_node_base_changes():
    charts = blowup_once(CurveGerm.parse("z^2 + x^2 + x^3", GF(3)))
    assert charts.spec.label == 'F_3^2'
    assert charts.multiplicity == 2
    assert len(charts.points) == 2
    assert all(p.chart == 'x' and p.cone_multiplicity == 1 for p in charts.points)
    for point in charts.points:
        assert point.coordinate != 0
        assert point.germ.multiplicity == 1
        # transversal to the exceptional curve x = 0
        assert point.germ.terms.get((0, 1), 0) != 0
    assert charts.chart_x.passes_through_origin is False
    assert charts.overlap_agrees()


def test_blowup_once_keeps_both_charts_when_the_cone_splits():
    charts = blowup_once(CurveGerm.parse("z^2 + x^2 + x^3", GF(5)))
    assert charts.spec.label == 'F_5'
    assert [p.as_tuple() for p in charts.points] == [('x', 2, 1), ('x', 3, 1)]
    assert charts.chart_x.equation == MultiPoly.parse("z^2 + 1 + x", GF(5), ('x', 'z'))
    assert charts.chart_z.equation == MultiPoly.parse("1 + x^2 + x^3*z", GF(5), ('x', 'z'))
    assert charts.overlap_agrees()


def test_blowup_once_finds_the_z_chart_point():
    charts = blowup_once(CurveGerm.parse("x^2 + z^3", QQ))
    assert [p.as_tuple() for p in charts.points] == [('z', 0, 2)]
    assert charts.points[0].germ.equation == MultiPoly.parse("x^2 + z", QQ, ('x', 'z'))
    assert not charts.chart_x.passes_through_origin
    assert charts.overlap_agrees()


def test_blowup_once_at_infinity_of_c42_keeps_a_double_point():
    curve = c_q2(2)
    charts = blowup_once(germ_at(implicitize(curve), point_at_infinity(curve).point))
    assert charts.multiplicity == 2
    assert [p.germ.multiplicity for p in charts.points] == [2]
    assert charts.overlap_agrees()


def test_cusp_normalization_tree():
    tree = resolution_tree(CurveGerm.parse("z^2 + x^3", QQ))
    assert tree.mode == NORMALIZATION
    assert tree.blowup_count == 1
    assert tree.multiplicity_sequence() == [2]
    assert tree.delta() == 1
    assert tree.branch_count == 1


def test_cusp_embedded_ledger():
    tree = resolution_tree(CurveGerm.parse("z^2 + x^3", QQ), EMBEDDED)
    assert tree.blowup_count == 3
    assert [(a, k) for _, a, k in tree.ledger()] == [(2, 1), (3, 2), (6, 4)]
    assert tree.verify_ledger()
    assert discrepancy_profile(tree) == [(2, 1), (1, 1), (1, 2)]


def test_cusp_dual_graph():
    G = dual_graph(resolution_tree(CurveGerm.parse("z^2 + x^3", QQ), EMBEDDED))
    assert sorted(G.nodes[n]['self_intersection'] for n in G) == [-3, -2, -1]
    assert G.number_of_edges() == 2
    middle = [n for n in G if G.degree(n) == 2]
    assert len(middle) == 1
    assert G.nodes[middle[0]]['self_intersection'] == -1
    assert G.nodes[middle[0]]['attachments'] == 1


def test_dual_graph_needs_embedded_tree():
    with pytest.raises(ResolutionError):
        dual_graph(resolution_tree(CurveGerm.parse("z^2 + x^3", QQ)))


def test_node_base_changes_to_split_the_cone():
    tree = resolution_tree(CurveGerm.parse("z^2 + x^2", GF(3)))
    assert tree.field_degree == 2
    assert tree.spec.label == 'F_3^2'
    assert tree.branch_count == 2
    assert tree.delta() == 1


def test_non_reduced_germ_is_refused():
    with pytest.raises(NonReducedGermError):
        resolution_tree(CurveGerm.parse("z^2", QQ))


def test_a19_model_needs_ten_blowups():
    tree = resolution_tree(CurveGerm.parse("z^2 - x^20", QQ))
    assert tree.blowup_count == 10
    assert set(tree.multiplicity_sequence()) == {2}
    assert tree.delta() == 10
    assert tree.branch_count == 2


def test_smooth_germ_has_empty_tree():
    tree = resolution_tree(CurveGerm.parse("z + x^2", QQ))
    assert tree.is_empty
    assert tree.branch_count == 1


def test_mode_is_validated():
    with pytest.raises(ResolutionError):
        resolution_tree(CurveGerm.parse("z^2 + x^3", QQ), mode='partial')


def test_classify_double_points():
    assert classify(CurveGerm.parse("z^2 + x^3", QQ)).label == 'A_2'
    assert classify(CurveGerm.parse("z^2 - x^20", QQ)).label == 'A_19'
    node = classify(CurveGerm.parse("z^2 - x^2", QQ))
    assert (node.m, node.branches, node.delta) == (1, 2, 1)


def test_classify_characteristic_two_normal_form():
    result = classify(CurveGerm.parse("z^2 + z*x^5 + x^7", F2))
    assert result.m == 6
    assert result.delta == 3
    assert result.char2_pair == (5, 7)
    assert result.normal_form_match
    assert result.to_dict()['type'] == 'A_6'


def test_classify_triple_point_is_other():
    result = classify(CurveGerm.parse("z^3 + x^4", QQ))
    assert result.kind == 'other'
    assert result.multiplicity == 3


def test_embedded_graphs_separate_a20_from_a19():
    a19 = dual_graph(resolution_tree(CurveGerm.parse("z^2 - x^20", QQ), EMBEDDED))
    a20 = dual_graph(resolution_tree(CurveGerm.parse("z^2 - x^21", QQ), EMBEDDED))
    again = dual_graph(resolution_tree(CurveGerm.parse("z^2 - 3*x^21", QQ), EMBEDDED))
    assert graphs_isomorphic(a20, again)
    assert not graphs_isomorphic(a19, a20)


def test_same_discrepancy_profile_for_analytically_equal_germs():
    first = resolution_tree(CurveGerm.parse("z^2 + x^3", QQ), EMBEDDED)
    second = resolution_tree(CurveGerm.parse("z^2 + x^3 + x^5", QQ), EMBEDDED)
    assert same_discrepancy_profile(first, second)


def test_delta_and_branches_from_the_tree():
    node = CurveGerm.parse("z^2 - x^4", QQ)
    assert delta_via_tree(resolution_tree(node)) == 2
    assert delta_via_tree(resolution_tree(node, EMBEDDED)) == 2
    assert branch_count(node) == 2
    assert branch_count(CurveGerm.parse("z^2 + x^5", QQ)) == 1


def test_classification_ignores_a_unit_factor():
    germ = CurveGerm.parse("z^2 + x^7", QQ)
    assert classify(germ.scaled(3)) == classify(germ)


def _preset_cases():
    cases = []
    for n in range(1, 5):
        q = 2 ** n
        marks = [pytest.mark.slow] if n == 4 else []
        cases.append(pytest.param('cq2', n, q * (q + 1), q * (q + 1) // 2 + q // 2 + 1, marks=marks))
        if n >= 2:
            cases.append(pytest.param('cq', n, (q - 1) * (q - 2), q * (q - 2) // 2, marks=marks))
    return cases


@pytest.mark.parametrize("preset, n, m, r", _preset_cases())
def test_preset_curves_have_one_a_m_point(preset, n, m, r):
    curve = implicitize(preset_curve(preset, n))
    assert curve.reduced
    locus = singular_points(curve, k_max=2)
    assert locus.certified
    assert [P.multiplicity for P in locus] == [2]
    result = classify(germ_at(curve, locus.points[0]))
    assert result.m == m
    assert result.delta == m // 2
    assert result.branches == 1
    assert result.char2_pair == (r, m + 1)
    assert result.normal_form_match


def _double_point(form, variables):
    spec = form.a.spec
    terms = {(0, 2): spec.one()}
    terms.update({(i, 1): c for i, c in enumerate(form.a.coeffs) if c != 0})
    terms.update({(i, 0): c for i, c in enumerate(form.b.coeffs) if c != 0})
    return CurveGerm(spec, terms, TailBound.exact(), variables)


@pytest.mark.parametrize("text, spec", [
    ("z^2 + 2*x*z - x^3 + x^2*z^2", QQ),
    ("z^2 - x^20 + x^3*z^3", QQ),
    ("z^2 + z*x^5 + x^4 + x^9", F2),
    ("z^2 + x*z^3 + x^4", F2),
])
def test_weierstrass_form_keeps_the_multiplicity_sequence(text, spec):
    germ = CurveGerm.parse(text, spec)
    m = classify(germ).m
    n = 2 * (m + 2) + 8
    form = weierstrass_form(germ.equation, germ.variables[1], n, cutoff=2 * (m + 1))
    prepared = _double_point(form, germ.variables)
    assert resolution_tree(prepared).multiplicity_sequence() == resolution_tree(germ).multiplicity_sequence()
