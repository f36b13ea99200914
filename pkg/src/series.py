"""Truncated univariate power series and double-point preparation.

``PowerSeries`` keeps the coefficients of u^0 .. u^N together with the
precision N: the series is known modulo u^(N+1). Every operation reports
the precision its result is actually known to.

``weierstrass_form`` brings a double-point germ f(x, z) to the shape
unit * (z^2 + a(x) z + b(x)); in characteristic 2 it then runs the
Artin-Schreier reduction that pins down the pair (ord a, ord b).
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple, Union

from .exceptions import PrecisionError, SeriesError
from .field import FieldSpec
from .poly import MultiPoly

logger = logging.getLogger(__name__)


class PowerSeries:
    """Power series in one variable known modulo var^(precision+1)."""

    __slots__ = ('spec', 'var', 'coeffs', 'precision')

    def __init__(self, spec: FieldSpec, coeffs: Sequence[Any], precision: int, var: str = 'u'):
        if precision < 0:
            raise SeriesError(f"precision must be non-negative, got {precision}")
        padded = list(coeffs[:precision + 1])
        padded += [spec.zero()] * (precision + 1 - len(padded))
        self.spec = spec
        self.var = var
        self.coeffs = padded
        self.precision = precision

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_poly(cls, f: MultiPoly, precision: int, var: Optional[str] = None) -> 'PowerSeries':
        involved = [v for v in f.variables if f.involves(v)]
        if len(involved) > 1:
            raise SeriesError(f"{f} is not univariate")
        name = var or (involved[0] if involved else (f.variables[0] if f.variables else 'u'))
        coeffs = [f.spec.zero()] * (precision + 1)
        index = f.variables.index(name) if name in f.variables else None
        for e, c in f.terms.items():
            d = e[index] if index is not None else 0
            if d <= precision:
                coeffs[d] = c
        return cls(f.spec, coeffs, precision, name)

    @classmethod
    def monomial(cls, spec: FieldSpec, degree: int, precision: int,
                 coeff: Any = None, var: str = 'u') -> 'PowerSeries':
        coeffs = [spec.zero()] * (precision + 1)
        if degree <= precision:
            coeffs[degree] = spec.one() if coeff is None else coeff
        return cls(spec, coeffs, precision, var)

    @classmethod
    def one(cls, spec: FieldSpec, precision: int, var: str = 'u') -> 'PowerSeries':
        return cls.monomial(spec, 0, precision, var=var)

    # -- queries ------------------------------------------------------------

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, or None if zero to precision."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def coefficient(self, i: int) -> Any:
        if i > self.precision:
            raise PrecisionError(f"coefficient {i} is beyond precision {self.precision}", self.precision)
        return self.coeffs[i]

    def truncate(self, precision: int) -> 'PowerSeries':
        return PowerSeries(self.spec, self.coeffs, min(precision, self.precision), self.var)

    def _check(self, other: 'PowerSeries'):
        if self.spec != other.spec:
            raise SeriesError(f"field mismatch: {self.spec.label} vs {other.spec.label}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: 'PowerSeries') -> 'PowerSeries':
        self._check(other)
        n = min(self.precision, other.precision)
        spec = self.spec
        return PowerSeries(spec, [spec.add(self.coeffs[i], other.coeffs[i]) for i in range(n + 1)], n, self.var)

    def __neg__(self) -> 'PowerSeries':
        spec = self.spec
        return PowerSeries(spec, [spec.neg(c) for c in self.coeffs], self.precision, self.var)

    def __sub__(self, other: 'PowerSeries') -> 'PowerSeries':
        return self + (-other)

    def scale(self, raw: Any) -> 'PowerSeries':
        spec = self.spec
        return PowerSeries(spec, [spec.mul(c, raw) for c in self.coeffs], self.precision, self.var)

    def __mul__(self, other: Any) -> 'PowerSeries':
        if not isinstance(other, PowerSeries):
            return self.scale(self.spec.coerce(other))
        self._check(other)
        n = min(self.precision, other.precision)
        spec = self.spec
        out = [spec.zero()] * (n + 1)
        b = other.coeffs
        for i in range(n + 1):
            ai = self.coeffs[i]
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] = spec.add(out[i + j], spec.mul(ai, bj))
        return PowerSeries(spec, out, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> 'PowerSeries':
        if e < 0:
            return self.inverse() ** (-e)
        result = PowerSeries.one(self.spec, self.precision, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, e: int) -> 'PowerSeries':
        """Multiply by var^e; the result is known to precision + e."""
        spec = self.spec
        return PowerSeries(spec, [spec.zero()] * e + self.coeffs, self.precision + e, self.var)

    def unshift(self, e: int) -> 'PowerSeries':
        """Divide by var^e; requires valuation >= e."""
        if any(c != 0 for c in self.coeffs[:e]):
            raise SeriesError(f"series is not divisible by {self.var}^{e}")
        if e > self.precision:
            raise PrecisionError(f"cannot divide by {self.var}^{e} at precision {self.precision}", self.precision)
        return PowerSeries(self.spec, self.coeffs[e:], self.precision - e, self.var)

    def inverse(self) -> 'PowerSeries':
        """Multiplicative inverse of a unit series."""
        spec = self.spec
        a = self.coeffs
        if a[0] == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        inv0 = spec.inv(a[0])
        out = [inv0]
        for n in range(1, self.precision + 1):
            acc = spec.zero()
            for i in range(1, n + 1):
                if a[i] != 0:
                    acc = spec.add(acc, spec.mul(a[i], out[n - i]))
            out.append(spec.neg(spec.mul(acc, inv0)))
        return PowerSeries(spec, out, self.precision, self.var)

    def __truediv__(self, other: 'PowerSeries') -> 'PowerSeries':
        self._check(other)
        v = other.valuation()
        if v is None:
            raise PrecisionError("division by a series that is zero to precision", other.precision)
        return self.unshift(v) * other.unshift(v).inverse()

    def compose(self, inner: 'PowerSeries') -> 'PowerSeries':
        """self(inner(u)); inner must have positive valuation."""
        self._check(inner)
        if inner.coeffs[0] != 0:
            raise SeriesError("cannot compose with a series of valuation 0")
        v = inner.valuation()
        v = inner.precision + 1 if v is None else v
        target = min(inner.precision, v * (self.precision + 1) - 1)
        inner = inner.truncate(target)
        result = PowerSeries(self.spec, [self.coeffs[self.precision]], target, inner.var)
        for k in range(self.precision - 1, -1, -1):
            result = result * inner
            result.coeffs[0] = self.spec.add(result.coeffs[0], self.coeffs[k])
        return result

    def to_bits(self) -> int:
        """F_2 coefficients packed into an int (bit i is the u^i coefficient)."""
        if self.spec.characteristic != 2 or self.spec.k != 1:
            raise SeriesError("bit packing is only available over F_2")
        bits = 0
        for i, c in enumerate(self.coeffs):
            if c:
                bits |= 1 << i
        return bits

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (self.spec, self.precision, self.coeffs) == (other.spec, other.precision, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.spec, self.precision, tuple(self.coeffs)))

    def __str__(self) -> str:
        spec = self.spec
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            ctext = spec.format(c)
            if '+' in ctext:
                ctext = f"({ctext})"
            mono = '' if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(ctext)
            elif c == spec.one():
                parts.append(mono)
            else:
                parts.append(f"{ctext}*{mono}")
        body = ' + '.join(parts) if parts else '0'
        return f"{body} + O({self.var}^{self.precision + 1})"

    def __repr__(self) -> str:
        return f"PowerSeries({self})"


# ---------------------------------------------------------------------------
# Weierstrass preparation for double points
# ---------------------------------------------------------------------------

@dataclass
class ArtinSchreierReduction:
    """Result of reducing b modulo the image of c -> c^2 + a*c."""

    b: PowerSeries
    shift: PowerSeries
    order_a: Optional[int]
    order_b: Optional[int]


@dataclass
class WeierstrassForm:
    """Germ equivalent to z^2 + a(x) z + b(x) to the stated precision.

    Attributes:
        a: Linear coefficient (zero after completing the square in char != 2)
        b: Constant coefficient (Artin-Schreier reduced in char 2)
        coordinate_change: 'none', 'swap' or 'x->x+z'
        precision: Precision N of a and b
    """

    a: PowerSeries
    b: PowerSeries
    coordinate_change: str
    precision: int

    @property
    def order_a(self) -> Optional[int]:
        return self.a.valuation()

    @property
    def order_b(self) -> Optional[int]:
        return self.b.valuation()

    def pair(self) -> Tuple[Optional[int], Optional[int]]:
        return (self.order_a, self.order_b)


def _solve_artin_schreier(spec: FieldSpec, a_r: Any, target: Any) -> Optional[Any]:
    """A root of g^2 + a_r g = target, searching the field."""
    for g in spec.elements():
        if spec.add(spec.mul(g, g), spec.mul(a_r, g)) == target:
            return g
    return None


def artin_schreier_reduce(a: PowerSeries, b: PowerSeries,
                          cutoff: Optional[int] = None) -> ArtinSchreierReduction:
    """Kill every reducible term of b up to cutoff (characteristic 2).

    Substituting z -> z + c(x) changes b by c^2 + a*c and leaves a alone.
    Terms of b are scanned by increasing degree e, with r = ord a:

    - e even and e < 2r: c = sqrt(b_e) x^(e/2)
    - e > 2r: c = (b_e / a_r) x^(e-r)
    - e = 2r: c = g x^r with g^2 + a_r g = b_e, when solvable
    - e odd and e < 2r: not reducible, kept

    Args:
        a: Linear coefficient
        b: Constant coefficient
        cutoff: Highest degree examined (defaults to the precision)

    Returns:
        Reduced b, the accumulated shift c and the orders of a and reduced b
    """
    spec = a.spec
    if spec.characteristic != 2:
        raise SeriesError("Artin-Schreier reduction is a characteristic 2 operation")
    precision = min(a.precision, b.precision)
    limit = precision if cutoff is None else min(cutoff, precision)
    r = a.valuation()
    coeffs = list(b.coeffs[:precision + 1])
    shift = [spec.zero()] * (precision + 1)
    a_coeffs = a.coeffs

    for e in range(limit + 1):
        be = coeffs[e]
        if be == 0:
            continue
        if r is None or e < 2 * r:
            if e % 2:
                continue
            j = e // 2
            gamma = spec.sqrt(be)
        elif e > 2 * r:
            j = e - r
            gamma = spec.div(be, a_coeffs[r])
        else:
            j = r
            gamma = _solve_artin_schreier(spec, a_coeffs[r], be)
            if gamma is None:
                continue
        if 2 * j <= precision:
            coeffs[2 * j] = spec.add(coeffs[2 * j], spec.mul(gamma, gamma))
        for i in range(precision + 1 - j):
            ai = a_coeffs[i]
            if ai != 0:
                coeffs[i + j] = spec.add(coeffs[i + j], spec.mul(ai, gamma))
        if j <= precision:
            shift[j] = spec.add(shift[j], gamma)

    reduced = PowerSeries(spec, coeffs, precision, b.var)
    return ArtinSchreierReduction(reduced, PowerSeries(spec, shift, precision, b.var),
                                  r, reduced.valuation())


def _rows_from_series(f: Sequence[PowerSeries], precision: int) -> Tuple[FieldSpec, str, int, List[List[Any]]]:
    """Coefficient rows of sum_j f[j](x) z^j; precision drops to the least known one."""
    if len(f) < 3:
        raise SeriesError("a double point needs the coefficients of z^0, z^1 and z^2")
    spec, x_name = f[0].spec, f[0].var
    if any(s.spec != spec or s.var != x_name for s in f):
        raise SeriesError("z-coefficients must share one field and one variable")
    known = min(s.precision for s in f)
    if known < precision:
        logger.debug(f"z-coefficients known to x^{known}; lowering precision from {precision}")
        precision = known
    orders = [s.valuation() for s in f[:3]]
    if f[2].coefficient(0) == 0 or (orders[1] is not None and orders[1] < 1) or \
            (orders[0] is not None and orders[0] < 2):
        raise SeriesError("series germ is not z-regular of order 2 with multiplicity 2")
    rows = [[s.coefficient(i) for s in f] for i in range(precision + 1)]
    return spec, x_name, precision, rows


def weierstrass_form(f: Union[MultiPoly, Sequence[PowerSeries]], var: str = 'z', precision: int = 32,
                     cutoff: Optional[int] = None) -> WeierstrassForm:
    """Prepare a double-point germ as z^2 + a(x) z + b(x).

    Args:
        f: Local equation in two variables, multiplicity 2 at the origin, or
           its z-expansion given as power series f[j](x) of z^j
        var: The distinguished variable z
        precision: Precision N in x for a and b
        cutoff: Artin-Schreier cutoff in characteristic 2

    Returns:
        WeierstrassForm with f = unit * (z^2 + a z + b) modulo x^(N+1)
    """
    if not isinstance(f, MultiPoly):
        spec, x_name, precision, rows = _rows_from_series(list(f), precision)
        return _prepare(spec, x_name, rows, precision, 'none', cutoff)

    if len(f.variables) != 2 or var not in f.variables:
        raise SeriesError(f"expected a polynomial in two variables including {var!r}")
    x_name = f.variables[0] if f.variables[1] == var else f.variables[1]
    f = f.with_variables((x_name, var))
    spec = f.spec
    if f.order != 2:
        raise SeriesError(f"weierstrass_form needs multiplicity 2, got {f.order}")

    change = 'none'
    if f.coefficient((0, 2)) == 0:
        if f.coefficient((2, 0)) != 0:
            f = f.rename({x_name: var, var: x_name}).with_variables((x_name, var))
            change = 'swap'
        elif f.coefficient((1, 1)) != 0:
            x = MultiPoly.variable(spec, (x_name, var), x_name)
            z = MultiPoly.variable(spec, (x_name, var), var)
            f = f.substitute({x_name: x + z}).with_variables((x_name, var))
            change = 'x->x+z'
        if f.coefficient((0, 2)) == 0:
            raise SeriesError("germ is not z-regular of order 2 under any linear change")

    dz = f.degree(var)
    width = dz + 1
    rows: List[List[Any]] = [[spec.zero()] * width for _ in range(precision + 1)]
    for (i, j), c in f.terms.items():
        if i <= precision:
            rows[i][j] = c
    return _prepare(spec, x_name, rows, precision, change, cutoff)


def _prepare(spec: FieldSpec, x_name: str, rows: List[List[Any]], precision: int,
             change: str, cutoff: Optional[int]) -> WeierstrassForm:
    """Weierstrass division by z^2 row by row, then the normalization of a and b."""
    width = len(rows[0])
    u0 = rows[0][2:]
    u00 = u0[0]
    u01 = u0[1] if len(u0) > 1 else spec.zero()
    i0 = spec.inv(u00)
    i1 = spec.neg(spec.mul(u01, spec.mul(i0, i0)))

    a_coeffs = [spec.zero()] * (precision + 1)
    b_coeffs = [spec.zero()] * (precision + 1)
    units: List[List[Any]] = [u0]
    for k in range(1, precision + 1):
        residual = list(rows[k])
        for i in range(1, k):
            ai, bi = a_coeffs[i], b_coeffs[i]
            if ai == 0 and bi == 0:
                continue
            unit = units[k - i]
            for j, uj in enumerate(unit):
                if uj == 0:
                    continue
                if bi != 0:
                    residual[j] = spec.sub(residual[j], spec.mul(bi, uj))
                if ai != 0 and j + 1 < width:
                    residual[j + 1] = spec.sub(residual[j + 1], spec.mul(ai, uj))
        r0, r1 = residual[0], residual[1]
        w0 = spec.mul(r0, i0)
        w1 = spec.add(spec.mul(r0, i1), spec.mul(r1, i0))
        b_coeffs[k] = w0
        a_coeffs[k] = w1
        for j, uj in enumerate(u0):
            if uj == 0:
                continue
            residual[j] = spec.sub(residual[j], spec.mul(w0, uj))
            if j + 1 < width:
                residual[j + 1] = spec.sub(residual[j + 1], spec.mul(w1, uj))
        if residual[0] != 0 or residual[1] != 0:
            raise SeriesError("Weierstrass lifting failed to divide by z^2")
        units.append(residual[2:])

    a = PowerSeries(spec, a_coeffs, precision, x_name)
    b = PowerSeries(spec, b_coeffs, precision, x_name)

    if spec.characteristic == 2:
        reduction = artin_schreier_reduce(a, b, cutoff)
        b = reduction.b
        logger.debug(f"Artin-Schreier reduction gives pair ({reduction.order_a}, {reduction.order_b})")
    else:
        half = spec.inv(spec.from_int(2))
        quarter_a_sq = (a * a).scale(spec.mul(half, half))
        b = b - quarter_a_sq
        a = PowerSeries(spec, [], precision, x_name)
    return WeierstrassForm(a, b, change, precision)
