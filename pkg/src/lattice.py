"""Intersection lattices of curves on surfaces and Mumford pullbacks.

Curves are the vertices of a networkx Graph with a rational
``self_intersection``; an edge carries the intersection ``multiplicity``.
A distinguished set of exceptional curves must have a negative definite
Gram matrix, which is what makes the pullback of any other curve (and
the contraction of exceptional clusters) well defined over the rationals.

Text format, one item per line, '#' starts a comment::

    C1 -2 exceptional
    B1 -2
    C1 B1 1
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import LatticeError
from .graph_analysis import recognize_ade, summarize_types

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def _as_fraction(text: str) -> Optional[Fraction]:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return None


class IntersectionLattice:
    """Curves with pairwise intersection numbers."""

    def __init__(self, name: str = ''):
        self.name = name
        self.graph = nx.Graph()

    def add_curve(self, curve: str, self_intersection: Any, exceptional: bool = False):
        self.graph.add_node(curve, self_intersection=Fraction(self_intersection), exceptional=exceptional)

    def connect(self, first: str, second: str, multiplicity: int = 1):
        for curve in (first, second):
            if curve not in self.graph:
                raise LatticeError(f"unknown curve {curve!r}")
        if first == second:
            raise LatticeError("use add_curve for self-intersections")
        self.graph.add_edge(first, second, multiplicity=multiplicity)

    @property
    def curves(self) -> List[str]:
        return list(self.graph.nodes)

    @property
    def exceptional(self) -> List[str]:
        return [c for c, d in self.graph.nodes(data=True) if d['exceptional']]

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def intersection(self, first: str, second: str) -> Fraction:
        if first == second:
            return self.graph.nodes[first]['self_intersection']
        if self.graph.has_edge(first, second):
            return Fraction(self.graph.edges[first, second]['multiplicity'])
        return Fraction(0)

    def gram(self, curves: Sequence[str]) -> Matrix:
        return [[self.intersection(a, b) for b in curves] for a in curves]

    def is_negative_definite(self, curves: Optional[Sequence[str]] = None) -> bool:
        curves = self.exceptional if curves is None else list(curves)
        minors = leading_minors(self.gram(curves))
        return len(minors) == len(curves) and all(
            (m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors)
        )

    def relabeled(self, mapping: Dict[str, str]) -> 'IntersectionLattice':
        result = IntersectionLattice(self.name)
        for curve, data in self.graph.nodes(data=True):
            result.add_curve(mapping.get(curve, curve), data['self_intersection'], data['exceptional'])
        for a, b, data in self.graph.edges(data=True):
            result.connect(mapping.get(a, a), mapping.get(b, b), data['multiplicity'])
        return result

    @classmethod
    def chain(cls, n: int, prefix: str = 'C', self_intersection: int = -2,
              exceptional: bool = True) -> 'IntersectionLattice':
        """A_n chain C1 - C2 - ... - Cn."""
        if n < 1:
            raise LatticeError(f"chain length must be positive, got {n}")
        lattice = cls(f"A{n}")
        for i in range(1, n + 1):
            lattice.add_curve(f"{prefix}{i}", self_intersection, exceptional)
        for i in range(1, n):
            lattice.connect(f"{prefix}{i}", f"{prefix}{i + 1}")
        return lattice

    @classmethod
    def parse(cls, text: str, name: str = '') -> 'IntersectionLattice':
        lattice = cls(name)
        edges = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            value = _as_fraction(tokens[1]) if len(tokens) > 1 else None
            if value is not None and len(tokens) in (2, 3):
                exceptional = len(tokens) == 3
                if exceptional and tokens[2] != 'exceptional':
                    raise LatticeError(f"line {number}: expected 'exceptional', got {tokens[2]!r}")
                lattice.add_curve(tokens[0], value, exceptional)
            elif len(tokens) == 3 and tokens[2].isdigit():
                edges.append((number, tokens[0], tokens[1], int(tokens[2])))
            else:
                raise LatticeError(f"line {number}: cannot parse {raw.strip()!r}")
        for number, a, b, multiplicity in edges:
            try:
                lattice.connect(a, b, multiplicity)
            except LatticeError as e:
                raise LatticeError(f"line {number}: {e}") from e
        return lattice

    @classmethod
    def from_file(cls, path: str) -> 'IntersectionLattice':
        try:
            with open(path, 'r') as f:
                return cls.parse(f.read(), name=path)
        except OSError as e:
            raise LatticeError(f"cannot read lattice file {path}: {e}") from e

    def to_text(self) -> str:
        lines = []
        for curve, data in self.graph.nodes(data=True):
            suffix = ' exceptional' if data['exceptional'] else ''
            lines.append(f"{curve} {data['self_intersection']}{suffix}")
        for a, b, data in self.graph.edges(data=True):
            lines.append(f"{a} {b} {data['multiplicity']}")
        return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def leading_minors(matrix: Matrix) -> List[Fraction]:
    """Leading principal minors from the pivots of elimination without row swaps.

    Stops after the first vanishing minor.
    """
    n = len(matrix)
    work = [list(row) for row in matrix]
    minors: List[Fraction] = []
    product = Fraction(1)
    for k in range(n):
        pivot = work[k][k]
        product *= pivot
        minors.append(product)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            factor = work[i][k] / pivot
            if factor:
                for j in range(k, n):
                    work[i][j] -= factor * work[k][j]
    return minors


def solve(matrix: Matrix, rhs: Sequence[Any]) -> List[Fraction]:
    """Solve matrix * v = rhs exactly by Gauss-Jordan elimination."""
    n = len(matrix)
    work = [list(row) + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            raise LatticeError("singular Gram matrix")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [x / pivot for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [work[i][n] for i in range(n)]


def cartan_inverse_entry(n: int, i: int, j: int) -> Fraction:
    """Entry (i, j), 1-based, of the inverse A_n Cartan matrix."""
    return Fraction(min(i, j) * (n + 1 - max(i, j)), n + 1)


# ---------------------------------------------------------------------------
# Pullbacks and contractions
# ---------------------------------------------------------------------------

@dataclass
class PullbackResult:
    """Mumford pullbacks of non-exceptional curves.

    Attributes:
        coefficients: curve -> {exceptional curve: coefficient}
        intersections: (curve, curve) -> intersection number on the singular surface
    """

    coefficients: Dict[str, Dict[str, Fraction]]
    intersections: Dict[Tuple[str, str], Fraction]

    def number(self, first: str, second: str) -> Fraction:
        key = (first, second) if (first, second) in self.intersections else (second, first)
        return self.intersections[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'coefficients': self.coefficients,
            'intersections': [
                {'curves': list(key), 'value': value} for key, value in self.intersections.items()
            ],
        }


def _corrections(lattice: IntersectionLattice, exceptional: List[str],
                 curves: Sequence[str]) -> Tuple[Dict[str, List[Fraction]], Dict[str, List[Fraction]]]:
    gram = lattice.gram(exceptional)
    if exceptional and not lattice.is_negative_definite(exceptional):
        raise LatticeError("exceptional Gram matrix is not negative definite")
    attachments = {c: [lattice.intersection(c, e) for e in exceptional] for c in curves}
    coefficients = {}
    for curve, vector in attachments.items():
        if any(vector):
            coefficients[curve] = solve(gram, [-x for x in vector])
        else:
            coefficients[curve] = [Fraction(0)] * len(exceptional)
    return attachments, coefficients


def _pair_numbers(lattice: IntersectionLattice, curves: Sequence[str],
                  attachments: Dict[str, List[Fraction]],
                  coefficients: Dict[str, List[Fraction]]) -> Dict[Tuple[str, str], Fraction]:
    numbers = {}
    for i, first in enumerate(curves):
        for second in curves[i:]:
            correction = sum(a * v for a, v in zip(attachments[first], coefficients[second]))
            numbers[(first, second)] = lattice.intersection(first, second) + correction
    return numbers


def mumford_pullback(lattice: IntersectionLattice, curves: Optional[Sequence[str]] = None) -> PullbackResult:
    """Pull back curves so they are orthogonal to every exceptional curve.

    Args:
        lattice: Lattice with a negative definite exceptional part
        curves: Curves to pull back; defaults to every non-exceptional curve

    Returns:
        PullbackResult with the coefficients v solving G v = -a
    """
    exceptional = lattice.exceptional
    if curves is None:
        curves = [c for c in lattice.curves if c not in set(exceptional)]
    attachments, coefficients = _corrections(lattice, exceptional, curves)
    result = PullbackResult(
        {c: dict(zip(exceptional, coefficients[c])) for c in curves},
        _pair_numbers(lattice, list(curves), attachments, coefficients),
    )
    logger.debug(f"Pullback numbers: {result.intersections}")
    return result


@dataclass
class ContractionResult:
    """Contraction of every curve outside ``kept``.

    Attributes:
        kept: Curves that survive
        clusters: (ADE label, member curves) per contracted connected component
        intersections: Intersection numbers of the kept curves afterwards
        picard_before: Rank before contracting
        picard_after: Rank after contracting
    """

    kept: List[str]
    clusters: List[Tuple[str, List[str]]] = field(default_factory=list)
    intersections: Dict[Tuple[str, str], Fraction] = field(default_factory=dict)
    picard_before: int = 0
    picard_after: int = 0

    @property
    def singularities(self) -> str:
        return summarize_types(label for label, _ in self.clusters)

    def number(self, first: str, second: str) -> Fraction:
        key = (first, second) if (first, second) in self.intersections else (second, first)
        return self.intersections[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kept': self.kept,
            'singularities': self.singularities,
            'clusters': [{'type': label, 'curves': members} for label, members in self.clusters],
            'intersections': [
                {'curves': list(key), 'value': value} for key, value in self.intersections.items()
            ],
            'picard_before': self.picard_before,
            'picard_after': self.picard_after,
        }


def contraction_check(lattice: IntersectionLattice, keep: Iterable[str],
                      picard_before: Optional[int] = None) -> ContractionResult:
    """Contract every curve not in ``keep`` and report what is left.

    Each contracted cluster must be an ADE configuration of (-2)-curves.

    Args:
        lattice: The full lattice
        keep: Curves to keep
        picard_before: Rank before contracting; defaults to the number of curves

    Returns:
        ContractionResult
    """
    kept = [c for c in lattice.curves if c in set(keep)]
    missing = set(keep) - set(lattice.curves)
    if missing:
        raise LatticeError(f"unknown curves {sorted(missing)}")
    contracted = [c for c in lattice.curves if c not in set(kept)]

    clusters = []
    sub = lattice.graph.subgraph(contracted)
    for component in nx.connected_components(sub):
        members = [c for c in contracted if c in component]
        cluster = sub.subgraph(members)
        if any(lattice.intersection(c, c) != -2 for c in members) or any(
                d['multiplicity'] != 1 for _, _, d in cluster.edges(data=True)):
            raise LatticeError(f"cluster {members} is not made of transversal (-2)-curves")
        label = recognize_ade(cluster)
        if label is None:
            raise LatticeError(f"cluster {members} is not an ADE configuration")
        clusters.append((label, members))
    clusters.sort(key=lambda item: lattice.curves.index(item[1][0]))

    attachments, coefficients = _corrections(lattice, contracted, kept)
    numbers = _pair_numbers(lattice, kept, attachments, coefficients)
    before = picard_before if picard_before is not None else len(lattice)
    result = ContractionResult(kept, clusters, numbers, before, before - len(contracted))
    logger.info(f"Contracted {len(contracted)} curve(s) to {result.singularities or 'nothing'}; "
                f"Picard rank {before} -> {result.picard_after}")
    return result
