"""Graph helpers for resolution and intersection graphs.

This module renders weighted curve graphs (dual graphs of resolutions,
intersection lattices) as DOT or ASCII and recognizes ADE configurations
by isomorphism with reference Dynkin graphs.
"""

import logging
from collections import Counter
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import pydot

from .exceptions import LatticeError

logger = logging.getLogger(__name__)

ADE_ORDER = {'E': 0, 'D': 1, 'A': 2}


def ade_graph(kind: str, n: int) -> nx.Graph:
    """Dynkin graph of type A_n, D_n or E_n on vertices 0..n-1.

    Args:
        kind: 'A', 'D' or 'E'
        n: Rank

    Returns:
        NetworkX Graph
    """
    if kind == 'A' and n >= 1:
        return nx.path_graph(n)
    if kind == 'D' and n >= 4:
        graph = nx.path_graph(n - 1)
        graph.add_edge(n - 3, n - 1)
        return graph
    if kind == 'E' and n in (6, 7, 8):
        # arms of lengths 1, 2 and n - 4 around vertex 2
        graph = nx.path_graph(n - 1)
        graph.add_edge(2, n - 1)
        return graph
    raise LatticeError(f"no Dynkin diagram {kind}_{n}")


def ade_candidates(n: int) -> List[Tuple[str, int]]:
    candidates = [('A', n)]
    if n >= 4:
        candidates.append(('D', n))
    if n in (6, 7, 8):
        candidates.append(('E', n))
    return candidates


def recognize_ade(graph: nx.Graph) -> Optional[str]:
    """Name of the Dynkin diagram isomorphic to the graph ('A7', 'E8', ...), or None."""
    n = graph.number_of_nodes()
    if n == 0 or not nx.is_connected(graph):
        return None
    for kind, rank in ade_candidates(n):
        if nx.is_isomorphic(graph, ade_graph(kind, rank)):
            return f"{kind}{rank}"
    return None


def ade_sort_key(label: str) -> Tuple[int, int]:
    return ADE_ORDER[label[0]], -int(label[1:])


def summarize_types(labels: Iterable[str]) -> str:
    """'2E8+5A1' style summary of a list of ADE labels."""
    counts = Counter(labels)
    parts = []
    for label in sorted(counts, key=ade_sort_key):
        count = counts[label]
        parts.append(f"{count}{label}" if count > 1 else label)
    return '+'.join(parts)


def _node_label(node: Any, data: Dict[str, Any]) -> str:
    name = data.get('label', str(node))
    weight = data.get('self_intersection')
    return name if weight is None else f"{name}({weight})"


def to_dot(graph: nx.Graph, name: str = 'dual_graph') -> str:
    """DOT text of a weighted curve graph; branch attachments become point nodes."""
    dot = pydot.Dot(name, graph_type='graph')
    for node, data in sorted(graph.nodes(data=True), key=lambda item: str(item[0])):
        dot.add_node(pydot.Node(f"n{node}", label=f'"{_node_label(node, data)}"', shape='ellipse'))
        for i in range(data.get('attachments', 0)):
            branch = f"b{node}_{i}"
            dot.add_node(pydot.Node(branch, shape='point'))
            dot.add_edge(pydot.Edge(f"n{node}", branch, style='dashed'))
    for a, b, data in graph.edges(data=True):
        edge = pydot.Edge(f"n{a}", f"n{b}")
        multiplicity = data.get('multiplicity', 1)
        if multiplicity != 1:
            edge.set('label', str(multiplicity))
        dot.add_edge(edge)
    return dot.to_string()


def write_dot(graph: nx.Graph, path: str, name: str = 'dual_graph') -> None:
    with open(path, 'w') as f:
        f.write(to_dot(graph, name))
    logger.info(f"Wrote DOT graph to {path}")


def _walk_path(graph: nx.Graph, component: Iterable[Any]) -> Optional[List[Any]]:
    sub = graph.subgraph(component)
    if sub.number_of_nodes() == 1:
        return list(sub.nodes)
    ends = sorted((n for n in sub.nodes if sub.degree(n) == 1), key=str)
    if len(ends) != 2 or any(sub.degree(n) > 2 for n in sub.nodes):
        return None
    order = [ends[0]]
    previous = None
    while len(order) < sub.number_of_nodes():
        current = order[-1]
        following = [n for n in sub.neighbors(current) if n != previous]
        previous = current
        order.append(following[0])
    return order


def ascii_graph(graph: nx.Graph) -> str:
    """Chains left to right as 'E0(-3) - E2(-1) - E1(-2)', attachments underneath.

    Components that are not chains fall back to an edge list.
    """
    lines = []
    components = sorted((sorted(c, key=str) for c in nx.connected_components(graph)), key=lambda c: str(c[0]))
    for component in components:
        order = _walk_path(graph, component)
        if order is not None:
            lines.append(' - '.join(_node_label(n, graph.nodes[n]) for n in order))
        else:
            for a, b in sorted(graph.subgraph(component).edges, key=str):
                lines.append(f"{_node_label(a, graph.nodes[a])} - {_node_label(b, graph.nodes[b])}")
    for node, data in sorted(graph.nodes(data=True), key=lambda item: str(item[0])):
        if data.get('attachments'):
            count = data['attachments']
            lines.append(f"  {data.get('label', node)}: {count} branch{'es' if count > 1 else ''}")
    return '\n'.join(lines)
