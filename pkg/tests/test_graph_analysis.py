#!/usr/bin/env python3
"""
Tests for ADE recognition and graph rendering.
"""

import sys
from pathlib import Path

import networkx as nx
import pytest

# Add repo root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.exceptions import LatticeError
from src.field import QQ
from src.graph_analysis import ade_graph, ascii_graph, recognize_ade, summarize_types, to_dot
from src.resolve import EMBEDDED, CurveGerm, dual_graph, resolution_tree


def cusp_graph() -> nx.Graph:
    return dual_graph(resolution_tree(CurveGerm.parse("z^2 + x^3", QQ), EMBEDDED))


def test_recognize_dynkin_diagrams():
    assert recognize_ade(nx.path_graph(5)) == 'A5'
    assert recognize_ade(ade_graph('D', 5)) == 'D5'
    assert recognize_ade(ade_graph('E', 8)) == 'E8'
    assert recognize_ade(nx.cycle_graph(4)) is None
    assert recognize_ade(nx.Graph()) is None


def test_e8_has_arms_one_two_four():
    graph = ade_graph('E', 8)
    center = next(n for n in graph if graph.degree(n) == 3)
    graph.remove_node(center)
    assert sorted(len(c) for c in nx.connected_components(graph)) == [1, 2, 4]


def test_unknown_dynkin_diagram():
    with pytest.raises(LatticeError):
        ade_graph('E', 9)
    with pytest.raises(LatticeError):
        ade_graph('D', 3)


def test_summarize_types_orders_e_then_d_then_a():
    assert summarize_types(['A1', 'E8', 'A1', 'E8', 'D4', 'A3']) == '2E8+D4+A3+2A1'
    assert summarize_types([]) == ''


def test_ascii_rendering_of_the_cusp_graph():
    text = ascii_graph(cusp_graph())
    assert text.splitlines()[0] == 'E0(-3) - E2(-1) - E1(-2)'
    assert '  E2: 1 branch' in text


def test_dot_rendering():
    text = to_dot(cusp_graph(), name='cusp')
    assert 'graph cusp' in text
    assert 'E2(-1)' in text
    assert 'shape=point' in text
