"""Plane curves: the parametrized curves C_{q,g} and projective plane curves.

Implicitization eliminates the parameter with a resultant. Singular points
are found chart by chart: resultants of (f, f_u, f_v) eliminate one
coordinate, their roots are searched exhaustively over F_{p^k} for
k <= k_max, and a degree count certifies that nothing was missed.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import islice
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import CertificateError, CurveError, PolynomialError
from .field import FieldSpec, GF, embedding, field_extension, lcm
from .poly import (
    MultiPoly, dehomogenize, dense_derivative, dense_divmod, dense_gcd, dense_powmod, dense_roots,
    dense_sub, dense_trim, exact_divide, formal_derivative, homogenize, parse_poly,
    resultant, to_dense,
)
from .resolve import CurveGerm
from .series import PowerSeries

logger = logging.getLogger(__name__)

PROJECTIVE_VARS = ('x', 'y', 'z')
CHARTS = ('z', 'y', 'x')


# ---------------------------------------------------------------------------
# Parametrized curves
# ---------------------------------------------------------------------------

@dataclass
class ParamCurve:
    """The map t -> (t^q, g(t^p) + t) over F_p.

    Attributes:
        spec: Prime field F_p
        q: Power of p
        g: Univariate polynomial in 'u'
        name: Label used in reports
    """

    spec: FieldSpec
    q: int
    g: MultiPoly
    name: str = ''

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def g_degree(self) -> int:
        return self.g.total_degree

    @property
    def r(self) -> int:
        """p * deg g - q; the multiplicity at infinity when positive."""
        return self.p * self.g_degree - self.q

    @property
    def y_degree(self) -> int:
        return max(self.p * self.g_degree, 1)

    @property
    def expected_degree(self) -> int:
        return max(self.q, self.p * self.g_degree)

    def coordinate_polys(self) -> Tuple[MultiPoly, MultiPoly]:
        """(x(t), y(t)) as polynomials in t."""
        t = MultiPoly.variable(self.spec, ('t',), 't')
        x_t = t ** self.q
        y_t = self.g.rename({'u': 't'}).substitute({'t': t ** self.p}).with_variables(('t',)) + t
        return x_t, y_t

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'p': self.p,
            'q': self.q,
            'g': str(self.g),
            'r': self.r,
        }


def make_param_curve(p: int, n: int, g: Union[MultiPoly, str], name: str = '') -> ParamCurve:
    """Build C_{q,g} with q = p^n.

    Args:
        p: Prime characteristic
        n: Exponent with q = p^n, n >= 1
        g: Polynomial in u (MultiPoly or text)
        name: Optional label
    """
    if n < 1:
        raise CurveError(f"q must be a positive power of p, got exponent {n}")
    spec = GF(p)
    if isinstance(g, str):
        g = parse_poly(g, spec, ('u',))
    if g.spec != spec:
        raise CurveError(f"g must have coefficients in F_{p}")
    if g.is_zero:
        raise CurveError("g must be nonzero")
    g = g.with_variables(('u',))
    q = p ** n
    curve = ParamCurve(spec, q, g, name or f"C_{{{q},{g}}}")
    logger.debug(f"Parametrized curve {curve.name} with r = {curve.r}")
    return curve


def c_q2(n: int) -> ParamCurve:
    """C_{2^n,2}: p = 2, q = 2^n, g = u^(2^(n-1)+1)."""
    if n < 1:
        raise CurveError(f"c_q2 needs n >= 1, got {n}")
    return make_param_curve(2, n, f"u^{2 ** (n - 1) + 1}", name=f"C_{{{2 ** n},2}}")


def c_q(n: int) -> ParamCurve:
    """C_{2^n}: p = 2, q = 2^n, g = u^(2^(n-1)-1); n >= 2 so deg g >= 1."""
    if n < 2:
        raise CurveError(f"c_q needs n >= 2 so that deg g >= 1, got {n}")
    return make_param_curve(2, n, f"u^{2 ** (n - 1) - 1}", name=f"C_{{{2 ** n}}}")


PRESETS = {'cq2': c_q2, 'cq': c_q}


def preset_curve(name: str, n: int) -> ParamCurve:
    try:
        return PRESETS[name](n)
    except KeyError:
        raise CurveError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


# ---------------------------------------------------------------------------
# Projective plane curves
# ---------------------------------------------------------------------------

@dataclass
class ProjPlaneCurve:
    """Homogeneous ternary form F(x, y, z) of degree d."""

    spec: FieldSpec
    F: MultiPoly
    degree: int
    name: str = ''
    frobenius_exponent: int = 1
    reduced: bool = field(init=False)

    def __post_init__(self):
        self.F = self.F.with_variables(PROJECTIVE_VARS)
        if self.F.is_zero:
            raise CurveError("the zero form does not define a curve")
        if not self.F.is_homogeneous() or self.F.total_degree != self.degree:
            raise CurveError(f"{self.F} is not homogeneous of degree {self.degree}")
        self.reduced = is_reduced(self.F)
        if not self.reduced:
            logger.warning(f"{self.name or self.F} has a repeated component")

    @classmethod
    def from_text(cls, text: str, spec: FieldSpec, name: str = '') -> 'ProjPlaneCurve':
        F = parse_poly(text, spec, PROJECTIVE_VARS)
        return cls(spec, F, F.total_degree, name or text)

    def chart(self, var: str) -> MultiPoly:
        """Dehomogenized equation with var = 1."""
        return dehomogenize(self.F, var)

    def scaled(self, constant: Any) -> 'ProjPlaneCurve':
        return ProjPlaneCurve(self.spec, self.F * constant, self.degree, self.name, self.frobenius_exponent)

    def contains(self, point: 'CurvePoint') -> bool:
        F = self.F.base_change(point.spec, embedding(self.spec, point.spec))
        return F.value_at(dict(zip(PROJECTIVE_VARS, point.coords))) == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'field': self.spec.to_json(),
            'degree': self.degree,
            'equation': str(self.F),
            'frobenius_exponent': self.frobenius_exponent,
            'reduced': self.reduced,
        }


def _squarefree_on_line(F: MultiPoly, center: Tuple[Any, Any, Any], direction: Tuple[Any, Any, Any]) -> bool:
    """Whether F restricted to the line through center and direction is squarefree of full degree."""
    spec = F.spec
    images = {v: MultiPoly._raw(spec, ('s',), {e: a for e, a in (((0,), c), ((1,), d)) if a != 0})
              for v, c, d in zip(PROJECTIVE_VARS, center, direction)}
    g = dense_trim(to_dense(F.substitute(images).with_variables(('s',)), 's'))
    if len(g) < F.total_degree:
        return False
    return len(dense_gcd(spec, g, dense_derivative(spec, g))) == 1


def _reduced_over(F: MultiPoly, scalars: List[Any]) -> bool:
    """Search pencils centred off the curve for a line with a squarefree restriction."""
    spec = F.spec
    one = spec.one()
    centers = ((u, v, one) for u in scalars for v in scalars
               if F.value_at({'x': u, 'y': v, 'z': one}) != 0)
    for center in islice(centers, F.total_degree + 1):
        if any(_squarefree_on_line(F, center, (one, a, spec.zero())) for a in scalars):
            return True
    return False


def is_reduced(F: MultiPoly) -> bool:
    """Whether the ternary form F has no repeated factor.

    A square factor of F survives on every line, so one line on which F
    restricts to a squarefree form proves F reduced. Each component has at
    most one point on all of its tangent lines, so among d + 1 pencils
    centred off the curve one has at most 2 d^2 bad lines; the search grows
    the field until it outnumbers them.
    """
    spec = F.spec
    d = F.total_degree
    if d <= 1:
        return True
    bound = 2 * d * d
    if not spec.is_finite:
        return _reduced_over(F, [spec.from_int(a) for a in range(bound + 2)])
    j = 1
    while True:
        target = spec if j == 1 else field_extension(spec, j)
        G = F if j == 1 else F.base_change(target, embedding(spec, target))
        if _reduced_over(G, list(target.elements())):
            return True
        if target.size > bound:
            return False
        j += 1


@dataclass(frozen=True)
class CurvePoint:
    """A point of P^2 with coordinates in spec, first nonzero coordinate 1.

    Attributes:
        spec: Field holding the coordinates
        coords: Raw (x, y, z)
        field_degree: Degree of the smallest field of definition
        multiplicity: Multiplicity of the curve at the point
    """

    spec: FieldSpec
    coords: Tuple[Any, Any, Any]
    field_degree: int = 1
    multiplicity: int = 1

    @classmethod
    def canonical(cls, spec: FieldSpec, coords: Sequence[Any], multiplicity: int = 1) -> 'CurvePoint':
        coords = tuple(coords)
        lead = next((c for c in coords if c != 0), None)
        if lead is None:
            raise CurveError("(0:0:0) is not a projective point")
        inv = spec.inv(lead)
        coords = tuple(spec.mul(c, inv) for c in coords)
        degree = 1
        if spec.is_finite:
            degree = reduce(lcm, (spec.minimal_degree(c) for c in coords), 1)
        return cls(spec, coords, degree, multiplicity)

    @property
    def label(self) -> str:
        return '(' + ':'.join(self.spec.format(c) for c in self.coords) + ')'

    @property
    def chart(self) -> str:
        """Variable set to 1 when localizing: the first nonzero coordinate."""
        return PROJECTIVE_VARS[next(i for i, c in enumerate(self.coords) if c != 0)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'coordinates': self.label,
            'field': self.spec.label,
            'field_degree': self.field_degree,
            'multiplicity': self.multiplicity,
        }


def implicitize(c: ParamCurve) -> ProjPlaneCurve:
    """Closure of the image of t -> (t^q, g(t^p) + t) in P^2.

    The resultant Res_t(t^q - x, g(t^p) + t - y) may be a p-th power; its
    root is taken and the exponent recorded.
    """
    spec = c.spec
    variables = ('t', 'x', 'y')
    x_t, y_t = c.coordinate_polys()
    x = MultiPoly.variable(spec, variables, 'x')
    y = MultiPoly.variable(spec, variables, 'y')
    A = x_t.with_variables(variables) - x
    B = y_t.with_variables(variables) - y
    R = resultant(A, B, 't').with_variables(('x', 'y'))
    if R.is_zero:
        raise CurveError(f"elimination degenerated for {c.name}")

    exponent = 1
    while R.is_pth_power():
        R = R.pth_root()
        exponent *= spec.p
    if exponent > 1:
        logger.warning(f"Resultant for {c.name} was a {exponent}-th power; using its root")
    R = R.monic()

    g_x = c.g.rename({'u': 'x'}).substitute({'x': MultiPoly.variable(spec, ('x',), 'x') ** c.p})
    expected = (MultiPoly.variable(spec, ('x', 'y'), 'y') ** c.q - g_x.with_variables(('x', 'y'))
                - MultiPoly.variable(spec, ('x', 'y'), 'x'))
    if R != expected.monic():
        raise CurveError(f"implicit equation {R} of {c.name} is not y^q - g(x^p) - x")

    degree = R.total_degree
    if degree != c.expected_degree:
        raise CurveError(f"implicit degree {degree} differs from max(q, p deg g) = {c.expected_degree}")
    F = homogenize(R, 'z', degree)
    curve = ProjPlaneCurve(spec, F, degree, c.name, exponent)
    logger.info(f"Implicitized {c.name}: degree {degree}, F = {F}")
    return curve


def d2d_curve(d: int, spec: FieldSpec) -> ProjPlaneCurve:
    """(y z^(d-1) - x^d)^2 - y^(2d): reduced of degree 2d, A_{2d^2-1} at (0:0:1)."""
    if d < 2:
        raise CurveError(f"d must be at least 2, got {d}")
    F = parse_poly(f"(y*z^{d - 1} - x^{d})^2 - y^{2 * d}", spec, PROJECTIVE_VARS)
    return ProjPlaneCurve(spec, F, 2 * d, f"D_{{{2 * d}}}")


# ---------------------------------------------------------------------------
# Singular locus
# ---------------------------------------------------------------------------

@dataclass
class ChartCertificate:
    """Degree accounting for one affine chart."""

    chart: str
    variables: Tuple[str, str]
    status: str
    degrees: Tuple[int, int] = (0, 0)
    accounted: Tuple[int, int] = (0, 0)

    @property
    def complete(self) -> bool:
        return self.status == 'no-points' or self.degrees == self.accounted

    def to_dict(self) -> Dict[str, Any]:
        return {
            'chart': self.chart,
            'variables': list(self.variables),
            'status': self.status,
            'degrees': list(self.degrees),
            'accounted': list(self.accounted),
            'complete': self.complete,
        }


@dataclass
class SingularLocus:
    """Singular points found over F_{p^k}, k <= k_max, with a completeness certificate."""

    curve: ProjPlaneCurve
    points: List[CurvePoint]
    charts: List[ChartCertificate]
    k_max: int
    search_field: FieldSpec

    @property
    def certified(self) -> bool:
        return all(c.complete for c in self.charts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'points': [p.to_dict() for p in self.points],
            'certificate': {
                'k_max': self.k_max,
                'search_field': self.search_field.label,
                'complete': self.certified,
                'charts': [c.to_dict() for c in self.charts],
            },
        }


def _eliminate(polys: List[MultiPoly], keep: str, drop: str) -> List[Any]:
    """gcd of the nonzero pairwise resultants eliminating drop, as a dense poly in keep."""
    spec = polys[0].spec
    g: List[Any] = []
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            a, b = polys[i], polys[j]
            if a.involves(drop) or b.involves(drop):
                dense = to_dense(resultant(a, b, drop).with_variables((keep,)), keep)
            else:
                dense = dense_gcd(spec, to_dense(a, keep), to_dense(b, keep))
            if not dense_trim(dense):
                continue
            g = dense_gcd(spec, g, dense) if g else dense_gcd(spec, dense, [])
    return g


def _minimal_missing_degree(spec: FieldSpec, g: List[Any], k_max: int) -> Tuple[List[Any], Optional[int]]:
    """Strip factors of degree <= k_max; return the residual and the least degree of what remains."""
    x = [spec.zero(), spec.one()]
    rest = dense_trim(g)
    for j in range(1, k_max + 1):
        while len(rest) > 1:
            frob = dense_sub(spec, dense_powmod(spec, x, spec.p ** j, rest), x)
            common = dense_gcd(spec, rest, frob) if frob else rest
            if len(common) <= 1:
                break
            rest, _ = dense_divmod(spec, rest, common)
    if len(rest) <= 1:
        return rest, None
    for j in range(k_max + 1, len(rest)):
        frob = dense_sub(spec, dense_powmod(spec, x, spec.p ** j, rest), x)
        if not frob or len(dense_gcd(spec, rest, frob)) > 1:
            return rest, j
    return rest, len(rest) - 1


def _account(spec: FieldSpec, g: List[Any], k_max: int, max_field_size: int) -> Tuple[int, Dict[int, List[Any]]]:
    """Count roots of g by minimal field degree k <= k_max, with multiplicity."""
    total = 0
    roots_by_degree: Dict[int, List[Any]] = {}
    for k in range(1, k_max + 1):
        if spec.p ** k > max_field_size:
            break
        ext = spec.extension(k)
        embedded = list(g)
        for root, mult in dense_roots(ext, embedded).items():
            if ext.minimal_degree(root) == k:
                total += mult
                roots_by_degree.setdefault(k, []).append(root)
    return total, roots_by_degree


def _chart_data(C: ProjPlaneCurve, chart: str) -> Tuple[Tuple[str, str], List[MultiPoly]]:
    affine = tuple(v for v in PROJECTIVE_VARS if v != chart)
    f = C.chart(chart).with_variables(affine)
    polys = [f, formal_derivative(f, affine[0]), formal_derivative(f, affine[1])]
    return affine, [p for p in polys if not p.is_zero]


def singular_points(C: ProjPlaneCurve, k_max: int = 4,
                    max_field_size: int = 1 << 20) -> SingularLocus:
    """Every singular point over F_{p^k}, k <= k_max, with a completeness certificate.

    Args:
        C: Reduced curve over a prime field
        k_max: Largest extension degree searched
        max_field_size: Cap on the candidate field

    Returns:
        SingularLocus

    Raises:
        CertificateError: an elimination root lives beyond k_max
    """
    spec = C.spec
    if not spec.is_finite or spec.k != 1:
        raise CurveError("singular_points works over prime fields")
    if k_max < 1:
        raise CurveError(f"k_max must be >= 1, got {k_max}")
    if not C.reduced:
        raise CurveError(f"{C.name} has a repeated component; its singular locus is not finite")

    eliminated: Dict[str, Tuple[Tuple[str, str], List[MultiPoly], List[List[Any]]]] = {}
    certificates: List[ChartCertificate] = []
    degrees_seen = [1]
    for chart in CHARTS:
        affine, polys = _chart_data(C, chart)
        if any(p.is_constant() for p in polys):
            certificates.append(ChartCertificate(chart, affine, 'no-points'))
            continue
        g_u = _eliminate(polys, affine[0], affine[1])
        g_v = _eliminate(polys, affine[1], affine[0])
        if not g_u or not g_v:
            raise CurveError(f"cannot isolate the singular locus of {C.name} in chart {chart}=1; "
                             f"the curve may be non-reduced")
        counted = []
        for var, g in ((affine[0], g_u), (affine[1], g_v)):
            total, roots = _account(spec, g, k_max, max_field_size)
            counted.append(total)
            degrees_seen.extend(roots)
            if total != len(g) - 1:
                residual, min_degree = _minimal_missing_degree(spec, g, k_max)
                text = str(MultiPoly(spec, (var,), {(d,): c for d, c in enumerate(residual) if c != 0}))
                raise CertificateError(
                    f"chart {chart}=1: factor {text} of the {var}-eliminant has no roots over "
                    f"F_{spec.p}^k for k <= {k_max} (needs k = {min_degree})",
                    chart=chart, residual=text, min_degree=min_degree)
        certificates.append(ChartCertificate(chart, affine, 'eliminated',
                                             (len(g_u) - 1, len(g_v) - 1), tuple(counted)))
        eliminated[chart] = (affine, polys, [g_u, g_v])

    L = reduce(lcm, degrees_seen, 1)
    search = spec.extension(L)
    if search.size > max_field_size:
        raise CurveError(f"candidate field {search.label} exceeds the field size bound")

    found: Dict[Tuple[Any, ...], CurvePoint] = {}
    for chart, (affine, polys, (g_u, g_v)) in eliminated.items():
        us = list(dense_roots(search, g_u)) if len(g_u) > 1 else []
        vs = list(dense_roots(search, g_v)) if len(g_v) > 1 else []
        lifted = [p.base_change(search, lambda a: a) for p in polys]
        for u0 in us:
            for v0 in vs:
                point = {affine[0]: u0, affine[1]: v0}
                if all(p.value_at(point) == 0 for p in lifted):
                    coords = {chart: search.one(), **point}
                    candidate = CurvePoint.canonical(search, [coords[v] for v in PROJECTIVE_VARS])
                    if candidate.coords not in found:
                        mult = germ_at(C, candidate).multiplicity
                        found[candidate.coords] = CurvePoint(search, candidate.coords,
                                                             candidate.field_degree, mult)

    points = [found[key] for key in sorted(found)]
    locus = SingularLocus(C, points, certificates, k_max, search)
    logger.info(f"{C.name}: {len(points)} singular point(s) "
                f"{[p.label for p in points]}, certificate complete = {locus.certified}")
    return locus


def germ_at(C: ProjPlaneCurve, P: CurvePoint) -> CurveGerm:
    """Local equation at P: dehomogenize at P's first nonzero coordinate and translate."""
    if not C.contains(P):
        raise CurveError(f"{P.label} is not on {C.name}")
    spec = P.spec
    F = C.F.base_change(spec, embedding(C.spec, spec))
    chart = P.chart
    affine = tuple(v for v in PROJECTIVE_VARS if v != chart)
    f = dehomogenize(F, chart).with_variables(affine)
    shifts = {}
    for var in affine:
        value = P.coords[PROJECTIVE_VARS.index(var)]
        if value != 0:
            shifts[var] = MultiPoly.variable(spec, affine, var) + MultiPoly.constant(spec, affine, spec.element(value))
    if shifts:
        f = f.substitute(shifts).with_variables(affine)
    return CurveGerm.from_poly(f)


def multiplicity_at(C: ProjPlaneCurve, P: CurvePoint) -> int:
    """Order of vanishing of the local equation at P."""
    return germ_at(C, P).multiplicity


# ---------------------------------------------------------------------------
# Branch at infinity of C_{q,g}
# ---------------------------------------------------------------------------

@dataclass
class BranchAtInfinity:
    """The unique place at infinity of a ParamCurve.

    Attributes:
        point: The point at infinity
        variables: Local coordinates of the chart (x-role, z-role)
        series: Local parametrization, one series per local coordinate, in s = 1/t
        multiplicity: Order of the branch (minimum valuation)
    """

    point: CurvePoint
    variables: Tuple[str, str]
    series: Tuple[PowerSeries, PowerSeries]
    multiplicity: int


def point_at_infinity(c: ParamCurve, precision: int = 32) -> BranchAtInfinity:
    """Place at infinity of t -> (t^q, g(t^p) + t) and its expansion in s = 1/t.

    Args:
        c: The parametrized curve
        precision: Series precision N

    Returns:
        BranchAtInfinity
    """
    spec = c.spec
    _, y_t = c.coordinate_polys()
    D = c.y_degree
    q = c.q
    h_coeffs = [spec.zero()] * (D + 1)
    for (i,), coeff in y_t.terms.items():
        h_coeffs[D - i] = coeff
    h = PowerSeries(spec, h_coeffs, precision, 's')

    def s_pow(e: int) -> PowerSeries:
        return PowerSeries.monomial(spec, e, precision, var='s')

    if D > q:
        h_inv = h.inverse()
        first = s_pow(D - q) * h_inv
        second = s_pow(D) * h_inv
        point = CurvePoint.canonical(spec, (0, 1, 0))
        variables = ('x', 'z')
    elif q > D:
        first = s_pow(q - D) * h
        second = s_pow(q)
        point = CurvePoint.canonical(spec, (1, 0, 0))
        variables = ('y', 'z')
    else:
        lead = h_coeffs[0]
        first = h - PowerSeries.monomial(spec, 0, precision, lead, 's')
        second = s_pow(q)
        point = CurvePoint.canonical(spec, (1, lead, 0))
        variables = ('y', 'z')
    orders = [v for v in (first.valuation(), second.valuation()) if v is not None]
    multiplicity = min(orders) if orders else precision + 1
    return BranchAtInfinity(CurvePoint(point.spec, point.coords, point.field_degree, multiplicity),
                            variables, (first, second), multiplicity)


# ---------------------------------------------------------------------------
# Embedding and genus checks
# ---------------------------------------------------------------------------

@dataclass
class EmbeddingReport:
    """Immersion and injectivity of a polynomial map t -> (x(t), y(t))."""

    immersion: bool
    injective: bool
    injective_everywhere: bool
    critical_parameters: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'immersion': self.immersion,
            'injective': self.injective,
            'injective_everywhere': self.injective_everywhere,
            'critical_parameters': self.critical_parameters,
        }


def _difference_quotient(f: MultiPoly) -> MultiPoly:
    variables = ('t', 's')
    ft = f.with_variables(('t',)).with_variables(variables)
    fs = f.with_variables(('t',)).rename({'t': 's'}).with_variables(variables)
    t = MultiPoly.variable(f.spec, variables, 't')
    s = MultiPoly.variable(f.spec, variables, 's')
    return exact_divide(ft - fs, t - s)


def embedding_check(c: Union[ParamCurve, Tuple[MultiPoly, MultiPoly]]) -> EmbeddingReport:
    """Whether t -> (x(t), y(t)) is an immersion and injective.

    Immersion: gcd(x', y') is a nonzero constant. Injectivity: the
    difference quotients (x(t)-x(s))/(t-s) and (y(t)-y(s))/(t-s) share no
    factor, i.e. their resultant in s is not identically zero; when that
    resultant is a nonzero constant no two parameters collide at all.
    """
    x_t, y_t = c.coordinate_polys() if isinstance(c, ParamCurve) else c
    spec = x_t.spec
    dx = to_dense(formal_derivative(x_t.with_variables(('t',)), 't'), 't')
    dy = to_dense(formal_derivative(y_t.with_variables(('t',)), 't'), 't')
    common = dense_gcd(spec, dx, dy)
    immersion = len(common) == 1
    critical: List[str] = []
    if not common:
        immersion = False
        critical = ['all']
    elif len(common) > 1:
        try:
            critical = [spec.format(r) for r in sorted(dense_roots(spec, common))]
        except PolynomialError:
            critical = []

    Dx = _difference_quotient(x_t)
    Dy = _difference_quotient(y_t)
    if Dx.is_zero or Dy.is_zero:
        R = MultiPoly.zero(spec, ('t',))
    elif Dx.is_constant() or Dy.is_constant():
        R = MultiPoly.constant(spec, ('t',), 1)
    else:
        R = resultant(Dx, Dy, 's')
    injective = not R.is_zero
    return EmbeddingReport(immersion, injective, injective and R.is_constant(), critical)


@dataclass
class GenusReport:
    arithmetic_genus: int
    delta_sum: int
    geometric_genus: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'arithmetic_genus': self.arithmetic_genus,
            'delta_sum': self.delta_sum,
            'geometric_genus': self.geometric_genus,
        }


def genus_check(C: ProjPlaneCurve, deltas: Optional[Sequence[int]]) -> GenusReport:
    """(d-1)(d-2)/2 minus the sum of δ over the singular points."""
    if deltas is None:
        raise CurveError("genus_check needs the δ-invariant of every singular point")
    d = C.degree
    arithmetic = (d - 1) * (d - 2) // 2
    delta_sum = sum(deltas)
    return GenusReport(arithmetic, delta_sum, arithmetic - delta_sum)
