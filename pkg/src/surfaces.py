"""Supersingular double planes S_r over F_2.

S_r is the affine surface

    u^2 + u (z + x^(2r+1)) + x z^(4r+1) + z^2 + x^(4r+2) = 0

in the chart y = 1 of a weighted projective space where u has weight
2r + 1. Its partial derivatives g_u and g_z cut out the monomial curve
t -> (t, t^(2r+1), t^(8r^2+4r+1)), g_x vanishes along it, and g restricted
to the curve has the shape t^L (t^M + 1). Every zero of that restriction
is a singular point of type A_(length - 1).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .exceptions import CurveError, InvariantError
from .field import GF, embedding
from .lattice import IntersectionLattice, mumford_pullback
from .poly import (
    MultiPoly, dense_derivative, dense_gcd, dense_roots, formal_derivative, parse_poly, to_dense,
)

logger = logging.getLogger(__name__)

F2 = GF(2)
F4 = GF(2, 2)
AFFINE_VARS = ('x', 'z', 'u')
WEIGHTED_VARS = ('x', 'y', 'z', 'u')


def two_part(n: int) -> int:
    """Largest power of 2 dividing n."""
    return n & -n


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def multiplicative_order(base: int, modulus: int) -> int:
    """Smallest k >= 1 with base^k = 1 mod modulus (1 for modulus 1)."""
    if modulus == 1:
        return 1
    k, value = 1, base % modulus
    while value != 1:
        value = value * base % modulus
        k += 1
    return k


@dataclass(frozen=True)
class DoublePlane:
    """The double plane S_r.

    Attributes:
        r: Positive integer parameter
    """

    r: int

    def __post_init__(self):
        if self.r < 1:
            raise CurveError(f"S_r needs r >= 1, got {self.r}")

    @property
    def q(self) -> int:
        """2-power part of 2r."""
        return two_part(2 * self.r)

    @property
    def r_prime(self) -> int:
        """Odd part of 2r."""
        return 2 * self.r // self.q

    @property
    def branch_degree(self) -> int:
        return 4 * self.r + 2

    @property
    def origin_length(self) -> int:
        return 8 * self.r ** 2 + 6 * self.r + 2

    @property
    def unit_exponent(self) -> int:
        return 8 * self.r ** 2 + 2 * self.r

    @property
    def root_count(self) -> int:
        return (4 * self.r + 1) * self.r_prime

    def equation(self) -> MultiPoly:
        r = self.r
        text = f"u^2 + u*(z + x^{2 * r + 1}) + x*z^{4 * r + 1} + z^2 + x^{4 * r + 2}"
        return parse_poly(text, F2, AFFINE_VARS)

    def weighted_equation(self) -> MultiPoly:
        """Homogeneous of weighted degree 4r + 2 with weights (1, 1, 1, 2r + 1)."""
        r = self.r
        text = (f"u^2 + u*(z*y^{2 * r} + x^{2 * r + 1}) + x*z^{4 * r + 1} "
                f"+ z^2*y^{4 * r} + x^{4 * r + 2}")
        return parse_poly(text, F2, WEIGHTED_VARS)

    def monomial_curve(self) -> Dict[str, MultiPoly]:
        """t -> (t, t^(2r+1), t^(8r^2+4r+1)) as images of x, z, u."""
        t = MultiPoly.variable(F2, ('t',), 't')
        return {'x': t, 'z': t ** (2 * self.r + 1), 'u': t ** (8 * self.r ** 2 + 4 * self.r + 1)}

    def to_dict(self) -> Dict[str, Any]:
        return {'r': self.r, 'q': self.q, 'r_prime': self.r_prime, 'equation': str(self.equation())}


@dataclass
class CensusEntry:
    """Singular points of one type.

    Attributes:
        location: Parameter value(s) on the monomial curve
        index: t of A_t
        count: Number of such points over the algebraic closure
        field_degree: k with every point defined over F_(2^k)
        length: Local length of the restricted equation at each point
    """

    location: str
    index: int
    count: int
    field_degree: int
    length: int

    @property
    def label(self) -> str:
        return f"A_{self.index}"

    def to_dict(self) -> Dict[str, Any]:
        return {'location': self.location, 'type': self.label, 'index': self.index,
                'count': self.count, 'field_degree': self.field_degree, 'length': self.length}


@dataclass
class SingularityCensus:
    """Singular points of S_r found from its Jacobian scheme."""

    surface: DoublePlane
    entries: List[CensusEntry]
    restriction: MultiPoly
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def total_exceptional(self) -> int:
        return sum(e.count * e.index for e in self.entries)

    @property
    def picard_lower_bound(self) -> int:
        return self.total_exceptional + 2

    @property
    def summary(self) -> str:
        parts = []
        for e in self.entries:
            parts.append(f"{e.count}{e.label}" if e.count > 1 else e.label)
        return ' + '.join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'surface': self.surface.to_dict(),
            'entries': [e.to_dict() for e in self.entries],
            'summary': self.summary,
            'total_exceptional': self.total_exceptional,
            'checks': self.checks,
        }


def _require_zero(name: str, residual: MultiPoly):
    if not residual.is_zero:
        raise CurveError(f"{name} fails: residual {residual}")


def jacobian_census(S: DoublePlane) -> SingularityCensus:
    """Singular points of S_r along the monomial curve, with their A-types.

    Raises:
        CurveError: a polynomial identity fails; the message carries the residual
    """
    g = S.equation()
    g_x, g_z, g_u = (formal_derivative(g, v) for v in ('x', 'z', 'u'))
    phi = S.monomial_curve()
    checks: Dict[str, bool] = {}

    # g_u = z + x^(2r+1) and g_z = u + x z^(4r) solve for z and u in terms of x
    if g_u.degree('u') != 0 or g_u.degree('z') != 1 or g_z.degree('u') != 1:
        raise CurveError(f"g_u = {g_u} and g_z = {g_z} do not define a graph over the x-line")
    _require_zero('g_u along the monomial curve', g_u.substitute(phi))
    _require_zero('g_z along the monomial curve', g_z.substitute(phi))
    checks['partials_cut_monomial_curve'] = True
    _require_zero('g_x along the monomial curve', g_x.substitute(phi))
    checks['g_x_vanishes'] = True

    restriction = g.substitute(phi).with_variables(('t',))
    t = MultiPoly.variable(F2, ('t',), 't')
    one = MultiPoly.constant(F2, ('t',), 1)
    expected = t ** S.origin_length * (t ** S.unit_exponent + one)
    _require_zero('factorization of g along the curve', restriction - expected)
    checks['restriction_factors'] = True

    N = S.root_count
    _require_zero('q-th power splitting', (t ** N + one) ** S.q - (t ** S.unit_exponent + one))
    separable = to_dense(t ** N + one, 't')
    if len(dense_gcd(F2, separable, dense_derivative(F2, separable))) != 1:
        raise CurveError(f"t^{N} + 1 is not separable")
    checks['roots_of_unity_separable'] = True

    length = restriction.order
    entries = [CensusEntry('t=0', length - 1, 1, 1, length)]
    if S.q > 1:
        entries.append(CensusEntry(f"t^{N}=1", S.q - 1, N, multiplicative_order(2, N), S.q))
    census = SingularityCensus(S, entries, restriction, checks)
    logger.info(f"S_{S.r}: {census.summary} ({census.total_exceptional} exceptional curves)")
    return census


@dataclass
class ExceptionalCount:
    count: int
    picard_lower_bound: int
    betti2: int
    branch_genus: int

    def to_dict(self) -> Dict[str, Any]:
        return {'count': self.count, 'picard_lower_bound': self.picard_lower_bound,
                'betti2': self.betti2, 'branch_genus': self.branch_genus}


def betti2_of_double_plane(branch_degree: int) -> Tuple[int, int]:
    """(b_2, genus of the branch curve) for a double plane branched in a smooth curve.

    e(S) = 2 e(P^2) - e(B) and b_1 = b_3 = 0, so b_2 = e(S) - 2.
    """
    genus = (branch_degree - 1) * (branch_degree - 2) // 2
    euler = 2 * 3 - (2 - 2 * genus)
    return euler - 2, genus


def exceptional_count(S: DoublePlane) -> ExceptionalCount:
    """Exceptional curves of the minimal resolution and the Picard lower bound."""
    if not is_power_of_two(S.r):
        raise InvariantError(f"the exceptional count is stated for 2-power r, got r = {S.r}")
    census = jacobian_census(S)
    count = census.total_exceptional
    formula = 16 * S.r ** 2 + 4 * S.r
    if count != formula:
        raise InvariantError(f"census gives {count} exceptional curves, expected {formula}")
    betti2, genus = betti2_of_double_plane(S.branch_degree)
    bound = count + 2
    if betti2 != bound:
        raise InvariantError(f"b_2 = {betti2} differs from the Picard lower bound {bound}")
    return ExceptionalCount(count, bound, betti2, genus)


@dataclass
class BoundaryComponent:
    """Component u = alpha x^(2r+1) of the preimage of z = 0."""

    alpha: Any
    label: str
    verified: bool

    def to_dict(self) -> Dict[str, Any]:
        return {'alpha': self.label, 'verified': self.verified}


def boundary_components(S: DoublePlane) -> List[BoundaryComponent]:
    """The two components over (z = 0), defined over F_4 by the roots of v^2 + v + 1."""
    restricted = S.equation().evaluate({'z': 0}).with_variables(('x', 'u'))
    lifted = restricted.base_change(F4, embedding(F2, F4))
    alphas = dense_roots(F4, [1, 1, 1])
    components = []
    x = MultiPoly.variable(F4, ('x',), 'x')
    for alpha in sorted(alphas):
        u = (x ** (2 * S.r + 1)).scale(alpha)
        residual = lifted.substitute({'u': u})
        components.append(BoundaryComponent(alpha, F4.format(alpha), residual.is_zero))
    if len(components) != 2 or not all(c.verified for c in components):
        raise CurveError(f"preimage of z = 0 on S_{S.r} does not split into two components over F_4")
    return components


@dataclass
class ChartCheck:
    """Smoothness of S_r along y = 0 in one chart of the weighted model."""

    chart: str
    locus: str
    witness: str
    nonsingular: bool

    def to_dict(self) -> Dict[str, Any]:
        return {'chart': self.chart, 'locus': self.locus, 'witness': self.witness,
                'nonsingular': self.nonsingular}


def chart_check(S: DoublePlane) -> List[ChartCheck]:
    """Show S_r is smooth at infinity (y = 0) on the remaining charts.

    A chart is smooth along the locus when some partial derivative restricts
    to a nonzero constant there.
    """
    G = S.weighted_equation()
    results = []
    for chart, fixed in (('x', {'x': 1, 'y': 0}), ('z', {'z': 1, 'x': 0, 'y': 0})):
        rest = [v for v in WEIGHTED_VARS if v != chart]
        witness = ''
        for var in rest:
            restricted = formal_derivative(G, var).evaluate(fixed)
            if restricted.is_constant() and not restricted.is_zero:
                witness = f"d/d{var}"
                break
        locus = ', '.join(f"{v}={value}" for v, value in fixed.items())
        results.append(ChartCheck(chart, locus, witness, bool(witness)))
    # the weighted vertex (0:0:0:1) is off the surface when the u^2 term survives
    vertex = G.value_at({'x': 0, 'y': 0, 'z': 0, 'u': 1})
    results.append(ChartCheck('u', 'x=y=z=0', 'G(0:0:0:1) = 1', vertex != 0))
    return results


# ---------------------------------------------------------------------------
# The resolved surface for r = 1
# ---------------------------------------------------------------------------

def k3_lattice(attachments: Sequence[int] = (3, 13), b_self_intersection: int = -2,
               a1_count: int = 5, chain_length: int = 15) -> IntersectionLattice:
    """Curves on the resolution of S_1: the A_15 chain, B1, B2 and the A_1 curves.

    Args:
        attachments: Chain positions met by B1 and B2
        b_self_intersection: Self-intersection of B1 and B2 on the resolution
        a1_count: Number of A_1 exceptional curves
        chain_length: Length of the chain over t = 0
    """
    if len(attachments) != 2 or not all(1 <= a <= chain_length for a in attachments):
        raise CurveError(f"attachments must be two positions in 1..{chain_length}, got {list(attachments)}")
    lattice = IntersectionLattice.chain(chain_length, 'C')
    lattice.name = 'resolved S_1'
    for i, position in enumerate(attachments, start=1):
        lattice.add_curve(f"B{i}", b_self_intersection)
        lattice.connect(f"B{i}", f"C{position}")
    for i in range(1, a1_count + 1):
        lattice.add_curve(f"A1_{i}", -2, exceptional=True)
    return lattice


def consistent_attachments(target_self: Fraction = Fraction(7, 16), target_cross: Fraction = Fraction(9, 16),
                           chain_length: int = 15, b_self_intersection: int = -2) -> List[Tuple[int, int]]:
    """Every ordered pair of chain positions reproducing the target pullback numbers."""
    found = []
    for i in range(1, chain_length + 1):
        for j in range(1, chain_length + 1):
            lattice = k3_lattice((i, j), b_self_intersection, 0, chain_length)
            result = mumford_pullback(lattice, ['B1', 'B2'])
            if (result.number('B1', 'B1') == target_self and result.number('B2', 'B2') == target_self
                    and result.number('B1', 'B2') == target_cross):
                found.append((i, j))
    logger.info(f"Attachments reproducing ({target_self}, {target_cross}): {found}")
    return found
