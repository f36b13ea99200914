"""Resolution of plane curve germs by point blow-ups.

A germ is a local equation f(x, z) with f(0, 0) = 0, possibly known only
modulo a monomial ideal (``TailBound``). Blowing up the origin gives two
charts:

- chart x: z = x*z1, strict transform f(x, x*z1) / x^m, points z1 = c for
  the roots c of the tangent cone f_m(1, t);
- chart z: x = x1*z, strict transform f(x1*z, z) / z^m, whose origin is a
  point exactly when the tangent cone has no z^m term.

Infinitely near points are kept in a ``BlowupTree`` (a networkx DiGraph)
with multiplicities, the exceptional divisors through each point and the
(a, k) ledger used for log canonical thresholds.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from .exceptions import (
    FieldError, NonReducedGermError, PrecisionError, ResolutionError, SeriesError,
)
from .field import FieldSpec, embedding
from .poly import MultiPoly, dense_roots, dense_trim
from .series import weierstrass_form

logger = logging.getLogger(__name__)

NORMALIZATION = 'normalization'
EMBEDDED = 'embedded'
MODES = (NORMALIZATION, EMBEDDED)

Terms = Dict[Tuple[int, int], Any]


# ---------------------------------------------------------------------------
# Germs and their precision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailBound:
    """Monomial ideal holding every unknown term of a germ.

    kind 'exact': nothing unknown; 'order': all terms of order >= alpha;
    'monomial': all multiples of x^alpha z^beta.
    """

    kind: str = 'exact'
    alpha: int = 0
    beta: int = 0

    @classmethod
    def exact(cls) -> 'TailBound':
        return cls('exact')

    @classmethod
    def order(cls, n: int) -> 'TailBound':
        return cls('order', n, 0)

    @classmethod
    def monomial(cls, alpha: int, beta: int) -> 'TailBound':
        return cls('monomial', max(alpha, 0), max(beta, 0))

    def contains(self, a: int, b: int) -> bool:
        if self.kind == 'exact':
            return False
        if self.kind == 'order':
            return a + b >= self.alpha
        return a >= self.alpha and b >= self.beta

    def min_order(self) -> Optional[int]:
        if self.kind == 'exact':
            return None
        if self.kind == 'order':
            return self.alpha
        return self.alpha + self.beta

    def chart_x(self, m: int) -> 'TailBound':
        if self.kind == 'exact':
            return self
        if self.kind == 'order':
            return TailBound.monomial(self.alpha - m, 0)
        return TailBound.monomial(self.alpha + self.beta - m, self.beta)

    def chart_z(self, m: int) -> 'TailBound':
        if self.kind == 'exact':
            return self
        if self.kind == 'order':
            return TailBound.monomial(0, self.alpha - m)
        return TailBound.monomial(self.alpha, self.alpha + self.beta - m)

    def translated(self) -> 'TailBound':
        """After z -> z + c with c != 0 the factor z^beta becomes a unit."""
        if self.kind == 'monomial':
            return TailBound.monomial(self.alpha, 0)
        return self

    def truncate(self, terms: Terms) -> Terms:
        if self.kind == 'exact':
            return terms
        return {e: c for e, c in terms.items() if not self.contains(*e)}

    def describe(self) -> str:
        if self.kind == 'exact':
            return 'exact'
        if self.kind == 'order':
            return f"O(order {self.alpha})"
        return f"O(x^{self.alpha} z^{self.beta})"


@dataclass(eq=False)
class CurveGerm:
    """Plane curve germ at the origin.

    Attributes:
        spec: Coefficient field
        terms: Known terms of f as {(i, j): raw coefficient} for x^i z^j
        tail: Ideal containing the unknown part of f
        variables: Names of the two local coordinates (x-role, z-role)
    """

    spec: FieldSpec
    terms: Terms
    tail: TailBound = field(default_factory=TailBound.exact)
    variables: Tuple[str, str] = ('x', 'z')

    def __post_init__(self):
        self.terms = {e: c for e, c in self.terms.items() if c != 0}
        if not self.terms:
            raise ResolutionError("the zero germ is not a curve")
        if self.terms.get((0, 0), 0) != 0:
            raise ResolutionError("germ does not pass through the origin (it is a unit)")

    @classmethod
    def from_poly(cls, f: MultiPoly, tail: Optional[TailBound] = None) -> 'CurveGerm':
        if len(f.variables) != 2:
            raise ResolutionError(f"a plane germ needs two variables, got {f.variables}")
        return cls(f.spec, dict(f.terms), tail or TailBound.exact(), tuple(f.variables))

    @classmethod
    def parse(cls, text: str, spec: FieldSpec, variables: Tuple[str, str] = ('x', 'z')) -> 'CurveGerm':
        return cls.from_poly(MultiPoly.parse(text, spec, variables))

    @property
    def multiplicity(self) -> int:
        return _order(self.terms, self.tail)

    @property
    def degree(self) -> int:
        return max(a + b for a, b in self.terms)

    @property
    def equation(self) -> MultiPoly:
        return MultiPoly(self.spec, self.variables, self.terms)

    @property
    def is_exact(self) -> bool:
        return self.tail.kind == 'exact'

    def truncated(self, n: int) -> 'CurveGerm':
        tail = TailBound.order(n)
        return CurveGerm(self.spec, tail.truncate(self.terms), tail, self.variables)

    def scaled(self, constant: Any) -> 'CurveGerm':
        raw = self.spec.coerce(constant)
        return CurveGerm(self.spec, {e: self.spec.mul(c, raw) for e, c in self.terms.items()},
                         self.tail, self.variables)

    def base_change(self, target: FieldSpec) -> 'CurveGerm':
        embed = embedding(self.spec, target)
        return CurveGerm(target, {e: embed(c) for e, c in self.terms.items()}, self.tail, self.variables)

    def __str__(self) -> str:
        text = str(self.equation)
        return text if self.is_exact else f"{text} + {self.tail.describe()}"


def _order(terms: Terms, tail: TailBound) -> int:
    if not terms:
        raise PrecisionError("no known terms left; the germ is lost in the truncation", tail.min_order())
    m = min(a + b for a, b in terms)
    bound = tail.min_order()
    if bound is not None and m >= bound:
        raise PrecisionError(f"multiplicity undecided: known order {m} >= unknown order {bound}", bound)
    return m


# ---------------------------------------------------------------------------
# One blow-up
# ---------------------------------------------------------------------------

def _chart_x(terms: Terms, m: int) -> Terms:
    return {(a + b - m, b): c for (a, b), c in terms.items()}


def _chart_z(terms: Terms, m: int) -> Terms:
    return {(a, a + b - m): c for (a, b), c in terms.items()}


def _translate(spec: FieldSpec, terms: Terms, c: Any, tail: TailBound) -> Terms:
    """z -> z + c, dropping terms that land in the tail ideal."""
    out: Terms = {}
    c_powers = [spec.one()]
    binomials: Dict[int, List[Any]] = {}
    for (a, b), coeff in terms.items():
        if tail.kind != 'exact' and a >= tail.alpha:
            continue
        while len(c_powers) <= b:
            c_powers.append(spec.mul(c_powers[-1], c))
        if b not in binomials:
            binomials[b] = [spec.from_int(comb(b, j)) for j in range(b + 1)]
        for j, binom in enumerate(binomials[b]):
            if binom == 0:
                continue
            term = spec.mul(coeff, spec.mul(binom, c_powers[b - j]))
            if term == 0:
                continue
            key = (a, j)
            value = spec.add(out.get(key, spec.zero()), term)
            if value == 0:
                out.pop(key, None)
            else:
                out[key] = value
    return out


def _tangent_cone(terms: Terms, m: int) -> List[Any]:
    """f_m(1, t) as a dense list indexed by the z-exponent."""
    cone: List[Any] = [0] * (m + 1)
    for (a, b), c in terms.items():
        if a + b == m:
            cone[b] = c
    return cone


class _NeedsExtension(Exception):
    def __init__(self, target: FieldSpec):
        super().__init__(target.label)
        self.target = target


def _cone_roots(spec: FieldSpec, cone: List[Any], max_field_size: int) -> Dict[Any, int]:
    """Roots of the tangent cone; asks for a base change when it does not split."""
    phi = dense_trim([c if c != 0 else spec.zero() for c in cone])
    nonzero = [i for i, c in enumerate(phi) if c != 0]
    if len(nonzero) == 1:
        return {spec.zero(): nonzero[0]} if nonzero[0] > 0 else {}
    roots = dense_roots(spec, phi)
    if sum(roots.values()) == len(phi) - 1:
        return roots
    if not spec.is_finite:
        raise ResolutionError(f"tangent cone {phi} does not split over the rationals")
    j = 2
    while spec.p ** (spec.k * j) <= max_field_size:
        ext = spec.extension(j)
        embed = embedding(spec, ext)
        lifted = [embed(c) for c in phi]
        if sum(dense_roots(ext, lifted).values()) == len(phi) - 1:
            raise _NeedsExtension(ext)
        j += 1
    raise ResolutionError(f"tangent cone does not split in any extension below {max_field_size} elements")


@dataclass
class ChartTransform:
    """Strict transform of a blow-up in one standard chart.

    The chart origin need not lie on it: the transform is kept as a
    polynomial, and ``germ`` is only defined when it does.
    """

    spec: FieldSpec
    terms: Terms
    tail: TailBound
    variables: Tuple[str, str]

    @property
    def equation(self) -> MultiPoly:
        return MultiPoly(self.spec, self.variables, self.terms)

    @property
    def passes_through_origin(self) -> bool:
        return self.terms.get((0, 0), 0) == 0

    def germ(self) -> CurveGerm:
        if not self.passes_through_origin:
            raise ResolutionError(f"the chart origin is not on the strict transform {self.equation}")
        return CurveGerm(self.spec, self.terms, self.tail, self.variables)


@dataclass
class InfinitelyNearPoint:
    """A point of the exceptional curve lying on the strict transform.

    Attributes:
        chart: 'x' for the chart z = x*z1, 'z' for the origin of x = x1*z
        coordinate: Position on the exceptional curve in that chart
        cone_multiplicity: Multiplicity of the matching tangent-cone factor
        germ: Strict transform translated to the point
    """

    chart: str
    coordinate: Any
    cone_multiplicity: int
    germ: CurveGerm

    def as_tuple(self) -> Tuple[str, Any, int]:
        return (self.chart, self.coordinate, self.cone_multiplicity)


@dataclass
class BlowupCharts:
    """Result of blowing up the origin of a germ.

    Attributes:
        spec: Field of the blow-up; an extension of the germ's field when
            the tangent cone only splits there
        chart_x: Strict transform in the chart z = x*z1
        chart_z: Strict transform in the chart x = x1*z
        multiplicity: Multiplicity of the exceptional divisor in the total transform
        points: Every point of the exceptional curve on the strict transform
    """

    spec: FieldSpec
    chart_x: ChartTransform
    chart_z: ChartTransform
    multiplicity: int
    points: List[InfinitelyNearPoint]

    def overlap_agrees(self) -> bool:
        """On x1*z1 = 1 the z-chart transform times z1^m must equal the x-chart transform."""
        m = self.multiplicity
        mapped = {(b, b - a + m): c for (a, b), c in self.chart_z.terms.items()}
        mapped = self.chart_x.tail.truncate(mapped)
        if self.chart_x.tail.kind == 'exact' and self.chart_z.tail.kind == 'exact':
            return mapped == self.chart_x.terms
        return all(self.chart_x.terms.get(e) == c for e, c in mapped.items())


def blowup_once(germ: CurveGerm, max_field_size: int = 1 << 20) -> BlowupCharts:
    """Blow up the origin of the germ's chart.

    Base-changes to the smallest extension over which the tangent cone
    splits, so every point on the exceptional curve is rational.
    """
    m = germ.multiplicity
    if m == 0:
        raise ResolutionError("germ is a unit; nothing to blow up")
    cone = _tangent_cone(germ.terms, m)
    try:
        roots = _cone_roots(germ.spec, cone, max_field_size)
    except _NeedsExtension as need:
        logger.info(f"Tangent cone needs {need.target.label}; base-changing the germ")
        try:
            germ = germ.base_change(need.target)
        except FieldError as e:
            raise ResolutionError(str(e)) from e
        cone = _tangent_cone(germ.terms, m)
        roots = _cone_roots(germ.spec, cone, max_field_size)

    spec = germ.spec
    tail_x, tail_z = germ.tail.chart_x(m), germ.tail.chart_z(m)
    chart_x = ChartTransform(spec, tail_x.truncate(_chart_x(germ.terms, m)), tail_x, germ.variables)
    chart_z = ChartTransform(spec, tail_z.truncate(_chart_z(germ.terms, m)), tail_z, germ.variables)

    points = []
    for c, mult in sorted(roots.items()):
        if c == 0:
            local = chart_x
        else:
            tail = tail_x.translated()
            local = ChartTransform(spec, tail.truncate(_translate(spec, chart_x.terms, c, tail)),
                                   tail, germ.variables)
        points.append(InfinitelyNearPoint('x', c, mult, _point_germ(local)))
    if cone[m] == 0:
        points.append(InfinitelyNearPoint('z', spec.zero(), m - (len(dense_trim(cone)) - 1),
                                          _point_germ(chart_z)))
    return BlowupCharts(spec, chart_x, chart_z, m, points)


def _point_germ(local: ChartTransform) -> CurveGerm:
    if not local.terms:
        raise PrecisionError("strict transform lost in the truncation", local.tail.min_order())
    return local.germ()


# ---------------------------------------------------------------------------
# Blow-up trees
# ---------------------------------------------------------------------------

class BlowupTree:
    """Tree of infinitely near points of a resolution.

    Node attributes: multiplicity, divisors (ids of exceptional divisors
    through the point), satellite, center (whether it was blown up),
    chart label, depth and, for centers, the ledger entries
    a (multiplicity of the total transform), k (discrepancy) and
    e (multiplicity of the pulled-back maximal ideal).
    """

    def __init__(self, spec: FieldSpec, mode: str, precision: Optional[int] = None,
                 base_spec: Optional[FieldSpec] = None):
        self.graph = nx.DiGraph()
        self.spec = spec
        self.mode = mode
        self.precision = precision
        self.base_spec = base_spec or spec

    def add_point(self, node: int, parent: Optional[int], multiplicity: int,
                  divisors: Dict[int, str], center: bool, label: str, depth: int):
        attrs: Dict[str, Any] = {
            'multiplicity': multiplicity,
            'divisors': tuple(sorted(divisors)),
            'satellite': len(divisors) == 2,
            'center': center,
            'chart': label,
            'depth': depth,
        }
        if center:
            attrs['a'] = multiplicity + sum(self.graph.nodes[j]['a'] for j in divisors)
            attrs['k'] = 1 + sum(self.graph.nodes[j]['k'] for j in divisors)
            attrs['e'] = 1 if parent is None else sum(self.graph.nodes[j]['e'] for j in divisors)
        self.graph.add_node(node, **attrs)
        if parent is not None:
            self.graph.add_edge(parent, node)

    def node(self, node: int) -> Dict[str, Any]:
        return self.graph.nodes[node]

    @property
    def is_empty(self) -> bool:
        return self.graph.number_of_nodes() == 0

    @property
    def field_degree(self) -> int:
        if not self.spec.is_finite:
            return 1
        return self.spec.k // self.base_spec.k

    def centers(self) -> List[int]:
        return sorted(n for n, d in self.graph.nodes(data=True) if d['center'])

    def leaves(self) -> List[int]:
        return sorted(n for n, d in self.graph.nodes(data=True) if not d['center'])

    @property
    def blowup_count(self) -> int:
        return len(self.centers())

    def multiplicity_sequence(self) -> List[int]:
        return [self.graph.nodes[n]['multiplicity'] for n in self.centers()]

    def delta(self) -> int:
        return sum(m * (m - 1) // 2 for m in self.multiplicity_sequence())

    @property
    def branch_count(self) -> int:
        return max(len(self.leaves()), 1)

    def ledger(self) -> List[Tuple[int, int, int]]:
        """(divisor id, a, k) for every exceptional divisor."""
        return [(n, self.graph.nodes[n]['a'], self.graph.nodes[n]['k']) for n in self.centers()]

    def discrepancy_profile(self) -> List[Tuple[int, int]]:
        return discrepancy_profile(self)

    def verify_ledger(self) -> bool:
        """Recompute (a, k, e) along a topological walk and compare."""
        recomputed: Dict[int, Tuple[int, int, int]] = {}
        for n in nx.topological_sort(self.graph):
            data = self.graph.nodes[n]
            if not data['center']:
                continue
            through = [recomputed[j] for j in data['divisors']]
            root = self.graph.in_degree(n) == 0
            a = data['multiplicity'] + sum(t[0] for t in through)
            k = 1 + sum(t[1] for t in through)
            e = 1 if root else sum(t[2] for t in through)
            recomputed[n] = (a, k, e)
            if (a, k, e) != (data['a'], data['k'], data['e']):
                logger.error(f"Ledger mismatch at E{n}: stored {(data['a'], data['k'], data['e'])}, "
                             f"recomputed {(a, k, e)}")
                return False
        return True

    def signature(self) -> Tuple:
        return tuple(
            (n, tuple(self.graph.predecessors(n)), d['multiplicity'], d['divisors'], d['center'])
            for n, d in sorted(self.graph.nodes(data=True))
        )

    def to_dict(self) -> Dict[str, Any]:
        nodes = []
        for n, d in sorted(self.graph.nodes(data=True)):
            parents = list(self.graph.predecessors(n))
            entry = {
                'id': n,
                'parent': parents[0] if parents else None,
                'multiplicity': d['multiplicity'],
                'divisors': list(d['divisors']),
                'satellite': d['satellite'],
                'center': d['center'],
                'chart': d['chart'],
            }
            if d['center']:
                entry.update({'a': d['a'], 'k': d['k']})
            nodes.append(entry)
        return {
            'mode': self.mode,
            'field': self.spec.label,
            'precision': self.precision,
            'blowups': self.blowup_count,
            'multiplicity_sequence': self.multiplicity_sequence(),
            'delta': self.delta(),
            'branches': self.branch_count,
            'nodes': nodes,
        }


def _needs_blowup(m: int, terms: Terms, divisors: Dict[int, str], mode: str) -> bool:
    if m >= 2:
        return True
    if mode != EMBEDDED or not divisors:
        return False
    if len(divisors) >= 2:
        return True
    role = next(iter(divisors.values()))
    # x = 0 is met transversally when the z-coefficient of the linear part is nonzero
    linear = terms.get((0, 1), 0) if role == 'x' else terms.get((1, 0), 0)
    return linear == 0


def _build(germ: CurveGerm, mode: str, delta_cap: Optional[int], max_field_size: int,
           base_spec: FieldSpec) -> BlowupTree:
    spec = germ.spec
    tree = BlowupTree(spec, mode, germ.tail.min_order(), base_spec)
    queue = deque([(None, germ.terms, germ.tail, {}, 'origin', 0)])
    next_id = 0
    running_delta = 0
    while queue:
        parent, terms, tail, divisors, label, depth = queue.popleft()
        m = _order(terms, tail)
        if m == 0:
            raise ResolutionError(f"infinitely near point {label} is not on the strict transform")
        node = next_id
        next_id += 1
        center = _needs_blowup(m, terms, divisors, mode)
        tree.add_point(node, parent, m, divisors, center, label, depth)
        if not center:
            continue

        running_delta += m * (m - 1) // 2
        if delta_cap is not None and running_delta > delta_cap:
            raise NonReducedGermError(
                f"δ exceeded {delta_cap} after {tree.blowup_count} blow-ups; the germ is not reduced")

        cone = _tangent_cone(terms, m)
        roots = _cone_roots(spec, cone, max_field_size)
        terms_x = _chart_x(terms, m)
        tail_x = tail.chart_x(m)
        for c in sorted(roots):
            if c == 0:
                child_tail = tail_x
                child_terms = child_tail.truncate(terms_x)
            else:
                child_tail = tail_x.translated()
                child_terms = child_tail.truncate(_translate(spec, terms_x, c, child_tail))
            child_divisors = {node: 'x'}
            if c == 0:
                child_divisors.update({j: r for j, r in divisors.items() if r == 'z'})
            queue.append((node, child_terms, child_tail, child_divisors,
                          f"x:{spec.format(c)}", depth + 1))
        if cone[m] == 0:
            tail_z = tail.chart_z(m)
            child_divisors = {node: 'z'}
            child_divisors.update({j: r for j, r in divisors.items() if r == 'x'})
            queue.append((node, tail_z.truncate(_chart_z(terms, m)), tail_z, child_divisors,
                          'z:0', depth + 1))
    return tree


def _resolve_at(germ: CurveGerm, mode: str, precision: Optional[int], max_precision: int,
                certify: bool, delta_cap: Optional[int], max_field_size: int,
                base_spec: FieldSpec) -> BlowupTree:
    if not germ.is_exact:
        return _build(germ, mode, delta_cap, max_field_size, base_spec)

    n = precision
    while True:
        try:
            tree = _build(germ.truncated(n), mode, delta_cap, max_field_size, base_spec)
        except PrecisionError:
            if n * 2 > max_precision:
                raise
            logger.debug(f"Precision {n} exhausted; retrying at {n * 2}")
            n *= 2
            continue
        if not certify or n * 2 > max_precision:
            if certify:
                logger.warning(f"Cannot certify resolution at precision {n}: above the cap {max_precision}")
            return tree
        try:
            check = _build(germ.truncated(n * 2), mode, delta_cap, max_field_size, base_spec)
        except PrecisionError:
            check = None
        if check is not None and check.signature() == tree.signature():
            return tree
        logger.debug(f"Tree at precision {n} is not stable under doubling; retrying")
        n *= 2


def resolution_tree(germ: CurveGerm, mode: str = NORMALIZATION, precision: Optional[int] = None,
                    initial_precision: int = 24, max_precision: int = 2048,
                    certify: bool = True, delta_cap: Optional[int] = None,
                    max_field_size: int = 1 << 20) -> BlowupTree:
    """Resolve a germ by point blow-ups.

    Args:
        germ: Reduced plane germ
        mode: 'normalization' (stop at smooth branches) or 'embedded' (continue to snc)
        precision: Starting truncation order; defaults to max(initial_precision, 2*deg + 2)
        initial_precision: Lower bound for the starting order
        max_precision: Largest truncation order tried
        certify: Re-run at twice the final order and require the same tree
        delta_cap: Largest δ allowed before declaring the germ non-reduced;
            defaults to d(d-1)/2 for an exact germ of degree d
        max_field_size: Largest field a base change may reach

    Returns:
        BlowupTree over the smallest extension in which every tangent cone splits
    """
    if mode not in MODES:
        raise ResolutionError(f"mode must be one of {MODES}, got {mode!r}")
    m = germ.multiplicity
    if m == 0:
        raise ResolutionError("germ is a unit")
    if m == 1:
        return BlowupTree(germ.spec, mode, precision, germ.spec)

    if delta_cap is None and germ.is_exact:
        d = germ.degree
        delta_cap = d * (d - 1) // 2
    start = precision or max(initial_precision, 2 * germ.degree + 2)
    current = germ
    while True:
        try:
            tree = _resolve_at(current, mode, start, max_precision, certify, delta_cap,
                               max_field_size, germ.spec)
            break
        except _NeedsExtension as need:
            logger.info(f"Tangent cone needs {need.target.label}; base-changing the germ")
            try:
                current = germ.base_change(need.target)
            except FieldError as e:
                raise ResolutionError(str(e)) from e
    logger.info(f"Resolved germ in {mode} mode over {tree.spec.label}: "
                f"{tree.blowup_count} blow-up(s), multiplicities {tree.multiplicity_sequence()}")
    return tree


# ---------------------------------------------------------------------------
# Invariants read off the tree
# ---------------------------------------------------------------------------

def delta_via_tree(tree: BlowupTree) -> int:
    """δ = sum of m_i (m_i - 1) / 2 over the infinitely near points."""
    return tree.delta()


def branch_count(germ: CurveGerm, **kwargs) -> int:
    """Number of analytic branches: leaves of the normalization tree."""
    return resolution_tree(germ, NORMALIZATION, **kwargs).branch_count


def discrepancy_profile(tree: BlowupTree) -> List[Tuple[int, int]]:
    """Per center: (multiplicity of the strict transform, multiplicity of the preimage of the root).

    These two numbers determine every discrepancy of the blow-up sequence.
    """
    return [(tree.node(n)['multiplicity'], tree.node(n)['e']) for n in tree.centers()]


def same_discrepancy_profile(first: BlowupTree, second: BlowupTree) -> bool:
    return discrepancy_profile(first) == discrepancy_profile(second)


def dual_graph(tree: BlowupTree) -> nx.Graph:
    """Dual graph of the exceptional curves of an embedded resolution.

    Node attributes: label, self_intersection, attachments (number of
    strict-transform branches meeting the curve).
    """
    if tree.mode != EMBEDDED:
        raise ResolutionError("dual graphs need an embedded-mode tree")
    G = nx.Graph()
    for n in tree.centers():
        divisors = tree.node(n)['divisors']
        G.add_node(n, label=f"E{n}", self_intersection=-1, attachments=0)
        for j in divisors:
            G.nodes[j]['self_intersection'] -= 1
            G.add_edge(n, j)
        if len(divisors) == 2 and G.has_edge(*divisors):
            G.remove_edge(*divisors)
    for leaf in tree.leaves():
        for j in tree.node(leaf)['divisors']:
            G.nodes[j]['attachments'] += 1
    return G


def graphs_isomorphic(first: nx.Graph, second: nx.Graph) -> bool:
    def match(a: Dict[str, Any], b: Dict[str, Any]) -> bool:
        return a['self_intersection'] == b['self_intersection'] and a['attachments'] == b['attachments']

    return nx.is_isomorphic(first, second, node_match=match)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class SingularityType:
    """Invariant-based type of a germ.

    Attributes:
        kind: 'A' for double points (A_0 when smooth), 'other' for multiplicity >= 3
        m: Index of A_m
        multiplicity: Multiplicity of the germ
        branches: Number of analytic branches
        delta: δ-invariant
        char2_pair: (ord a, ord b) after Artin-Schreier reduction, char 2 only
        normal_form_match: Whether the pair has the shape (r, m+1) with m+1 odd and < 2r
    """

    kind: str
    m: Optional[int]
    multiplicity: int
    branches: int
    delta: int
    char2_pair: Optional[Tuple[Optional[int], Optional[int]]] = None
    normal_form_match: bool = False
    tree: Optional[BlowupTree] = field(default=None, repr=False, compare=False)

    @property
    def label(self) -> str:
        if self.kind == 'A':
            return f"A_{self.m}"
        return f"other(mult {self.multiplicity})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'type': self.label,
            'kind': self.kind,
            'm': self.m,
            'multiplicity': self.multiplicity,
            'branches': self.branches,
            'delta': self.delta,
            'char2_pair': list(self.char2_pair) if self.char2_pair else None,
            'normal_form_match': self.normal_form_match,
        }


def char2_pair(germ: CurveGerm, m: int, conductor_factor: int = 2,
               max_precision: int = 4096) -> Tuple[Optional[int], Optional[int], bool]:
    """(ord a, ord b) of the Artin-Schreier-reduced double point and whether it
    matches z^2 + z x^r + x^(m+1)."""
    n = conductor_factor * (m + 2) + 8
    f = germ.equation
    while True:
        if not germ.is_exact:
            n = min(n, germ.tail.min_order() - 1)
        form = weierstrass_form(f, germ.variables[1], n, cutoff=2 * (m + 1))
        order_a, order_b = form.pair()
        unresolved = order_b is None and m % 2 == 0
        if not unresolved or n * 2 > max_precision or not germ.is_exact:
            break
        n *= 2
    match = (order_b is not None and order_b % 2 == 1 and order_b == m + 1
             and (order_a is None or order_b < 2 * order_a))
    return order_a, order_b, match


def classify(germ: CurveGerm, conductor_factor: int = 2, series_max_precision: int = 4096,
             **kwargs) -> SingularityType:
    """Type of a reduced germ from δ and the branch count.

    Extra keyword arguments go to resolution_tree.
    """
    tree = resolution_tree(germ, NORMALIZATION, **kwargs)
    multiplicity = germ.multiplicity
    delta = tree.delta()
    branches = tree.branch_count
    if multiplicity == 1:
        return SingularityType('A', 0, 1, 1, 0, tree=tree)
    if multiplicity >= 3:
        return SingularityType('other', None, multiplicity, branches, delta, tree=tree)
    m = 2 * delta - branches + 1
    pair = None
    match = False
    if germ.spec.characteristic == 2:
        try:
            order_a, order_b, match = char2_pair(germ, m, conductor_factor, series_max_precision)
            pair = (order_a, order_b)
        except SeriesError as e:
            logger.warning(f"Char-2 normal form unavailable: {e}")
    result = SingularityType('A', m, multiplicity, branches, delta, pair, match, tree)
    logger.info(f"Classified germ as {result.label} (δ={delta}, branches={branches}, pair={pair})")
    return result
