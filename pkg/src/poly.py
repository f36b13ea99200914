"""Sparse multivariate polynomials over a FieldSpec.

A ``MultiPoly`` stores a map from exponent tuples to nonzero raw
coefficients (see ``src.field``). Polynomials are treated as immutable:
every operation returns a new instance. Display and hashing use graded
lexicographic order.

The module also carries the elimination machinery used elsewhere:
subresultant resultants, the Sylvester determinant used to cross-check
them, exact multivariate division, and dense univariate helpers for root
finding.
"""

import logging
import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Poly as SympyPoly
from sympy import QQ as SYMPY_QQ
from sympy import Rational, Symbol

from .exceptions import PolynomialError
from .field import FieldElement, FieldSpec

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction, FieldElement]


def _grlex_key(exps: Exponent) -> Tuple[int, Exponent]:
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial in named variables over a coefficient field."""

    __slots__ = ('spec', 'variables', 'terms')

    def __init__(self, spec: FieldSpec, variables: Sequence[str],
                 terms: Optional[Mapping[Exponent, Any]] = None):
        self.spec = spec
        self.variables = tuple(variables)
        clean: Dict[Exponent, Any] = {}
        n = len(self.variables)
        for exps, coeff in (terms or {}).items():
            if len(exps) != n:
                raise PolynomialError(f"exponent {exps} does not match variables {self.variables}")
            if coeff != 0:
                clean[tuple(exps)] = coeff
        self.terms = clean

    @classmethod
    def _raw(cls, spec: FieldSpec, variables: Tuple[str, ...],
             terms: Dict[Exponent, Any]) -> 'MultiPoly':
        """Build without validation; terms must already be clean."""
        poly = cls.__new__(cls)
        poly.spec = spec
        poly.variables = variables
        poly.terms = terms
        return poly

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec, variables: Sequence[str]) -> 'MultiPoly':
        return cls(spec, variables)

    @classmethod
    def constant(cls, spec: FieldSpec, variables: Sequence[str], value: Scalar) -> 'MultiPoly':
        raw = spec.coerce(value)
        return cls(spec, variables, {(0,) * len(tuple(variables)): raw})

    @classmethod
    def variable(cls, spec: FieldSpec, variables: Sequence[str], name: str) -> 'MultiPoly':
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(spec, variables, {exps: spec.one()})

    @classmethod
    def monomial(cls, spec: FieldSpec, variables: Sequence[str],
                 exps: Exponent, coeff: Any = None) -> 'MultiPoly':
        raw = spec.one() if coeff is None else spec.coerce(coeff)
        return cls(spec, variables, {tuple(exps): raw})

    @classmethod
    def parse(cls, text: str, spec: FieldSpec,
              variables: Optional[Sequence[str]] = None) -> 'MultiPoly':
        return parse_poly(text, spec, variables)

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def order(self) -> Optional[int]:
        """Lowest total degree of a term (the multiplicity at the origin)."""
        return min((sum(e) for e in self.terms), default=None)

    def degree(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def involves(self, var: str) -> bool:
        return var in self.variables and self.degree(var) > 0

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Any:
        return self.terms.get((0,) * len(self.variables), self.spec.zero())

    def coefficient(self, exps: Exponent) -> Any:
        return self.terms.get(tuple(exps), self.spec.zero())

    def leading_exponent(self) -> Exponent:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        return max(self.terms, key=_grlex_key)

    def leading_coefficient(self) -> Any:
        return self.terms[self.leading_exponent()]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise PolynomialError(f"variable {var!r} not in {self.variables}") from None

    # -- variable bookkeeping ----------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> 'MultiPoly':
        """Re-express over a different ordered variable tuple."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        positions = []
        for i, v in enumerate(self.variables):
            if v in variables:
                positions.append((i, variables.index(v)))
            elif any(e[i] for e in self.terms):
                raise PolynomialError(f"cannot drop variable {v!r}: it occurs in the polynomial")
        n = len(variables)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, j in positions:
                new[j] = e[i]
            terms[tuple(new)] = c
        return MultiPoly._raw(self.spec, variables, terms)

    def rename(self, mapping: Mapping[str, str]) -> 'MultiPoly':
        return MultiPoly._raw(self.spec, tuple(mapping.get(v, v) for v in self.variables),
                              dict(self.terms))

    def _align(self, other: Any) -> Tuple[Dict[Exponent, Any], Dict[Exponent, Any], Tuple[str, ...]]:
        if isinstance(other, MultiPoly):
            if other.spec != self.spec:
                raise PolynomialError(f"field mismatch: {self.spec.label} vs {other.spec.label}")
            if other.variables == self.variables:
                return self.terms, other.terms, self.variables
            merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
            return (self.with_variables(merged).terms, other.with_variables(merged).terms, merged)
        raw = self.spec.coerce(other)
        const = {(0,) * len(self.variables): raw} if raw != 0 else {}
        return self.terms, const, self.variables

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: Any) -> 'MultiPoly':
        a, b, variables = self._align(other)
        spec = self.spec
        out = dict(a)
        for e, c in b.items():
            s = spec.add(out.get(e, spec.zero()), c)
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly._raw(spec, variables, out)

    __radd__ = __add__

    def __neg__(self) -> 'MultiPoly':
        spec = self.spec
        return MultiPoly._raw(spec, self.variables, {e: spec.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> 'MultiPoly':
        if isinstance(other, MultiPoly):
            return self + (-other)
        return self + (-MultiPoly.constant(self.spec, self.variables, other))

    def __rsub__(self, other: Any) -> 'MultiPoly':
        return (-self) + other

    def __mul__(self, other: Any) -> 'MultiPoly':
        if not isinstance(other, MultiPoly):
            return self.scale(self.spec.coerce(other))
        a, b, variables = self._align(other)
        spec = self.spec
        out: Dict[Exponent, Any] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = spec.mul(c1, c2)
                if e in out:
                    s = spec.add(out[e], prod)
                    if s == 0:
                        del out[e]
                    else:
                        out[e] = s
                elif prod != 0:
                    out[e] = prod
        return MultiPoly._raw(spec, variables, out)

    __rmul__ = __mul__

    def scale(self, raw: Any) -> 'MultiPoly':
        """Multiply by a raw field value."""
        if raw == 0:
            return MultiPoly._raw(self.spec, self.variables, {})
        spec = self.spec
        return MultiPoly._raw(spec, self.variables, {e: spec.mul(c, raw) for e, c in self.terms.items()})

    def shift(self, exps: Exponent) -> 'MultiPoly':
        """Multiply by the monomial with exponent vector exps."""
        return MultiPoly._raw(self.spec, self.variables,
                              {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()})

    def __pow__(self, n: int) -> 'MultiPoly':
        if n < 0:
            raise PolynomialError("negative powers are not polynomials")
        result = MultiPoly.constant(self.spec, self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def monic(self) -> 'MultiPoly':
        """Scale so the graded-lex leading coefficient is 1."""
        if self.is_zero:
            return self
        return self.scale(self.spec.inv(self.leading_coefficient()))

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, MultiPoly):
            if self.spec != other.spec:
                return False
            if self.variables == other.variables:
                return self.terms == other.terms
            a, b, _ = self._align(other)
            return a == b
        if isinstance(other, (int, Fraction, FieldElement)):
            try:
                return self == MultiPoly.constant(self.spec, self.variables, other)
            except Exception:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.variables, frozenset(self.terms.items())))

    # -- calculus and substitution -----------------------------------------

    def derivative(self, var: str) -> 'MultiPoly':
        return formal_derivative(self, var)

    def substitute(self, mapping: Mapping[str, Any]) -> 'MultiPoly':
        return substitute(self, mapping)

    def evaluate(self, values: Mapping[str, Any]) -> 'MultiPoly':
        """Set variables to raw field values; returns a polynomial in the rest."""
        spec = self.spec
        keep = tuple(v for v in self.variables if v not in values)
        keep_idx = [self.variables.index(v) for v in keep]
        fixed = [(self.variables.index(v), val) for v, val in values.items() if v in self.variables]
        out: Dict[Exponent, Any] = {}
        for e, c in self.terms.items():
            coeff = c
            for i, val in fixed:
                if e[i]:
                    coeff = spec.mul(coeff, spec.pow(val, e[i]))
            if coeff == 0:
                continue
            key = tuple(e[i] for i in keep_idx)
            s = spec.add(out.get(key, spec.zero()), coeff)
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPoly._raw(spec, keep, out)

    def value_at(self, values: Mapping[str, Any]) -> Any:
        """Raw value at a point giving every variable."""
        return self.evaluate(values).constant_term()

    def homogenize(self, new_var: str, degree: int) -> 'MultiPoly':
        return homogenize(self, new_var, degree)

    def dehomogenize(self, var: str) -> 'MultiPoly':
        return dehomogenize(self, var)

    def coefficients_in(self, var: str) -> Dict[int, 'MultiPoly']:
        """Expand as sum_i c_i * var^i with c_i in the remaining variables."""
        i = self._index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        buckets: Dict[int, Dict[Exponent, Any]] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {d: MultiPoly._raw(self.spec, rest, t) for d, t in buckets.items()}

    def is_pth_power(self) -> bool:
        p = self.spec.characteristic
        return p > 0 and not self.is_zero and all(x % p == 0 for e in self.terms for x in e)

    def pth_root(self) -> 'MultiPoly':
        if not self.is_pth_power():
            raise PolynomialError("polynomial is not a p-th power")
        p = self.spec.characteristic
        spec = self.spec
        return MultiPoly._raw(spec, self.variables,
                              {tuple(x // p for x in e): spec.pth_root(c) for e, c in self.terms.items()})

    def base_change(self, target: FieldSpec, embed) -> 'MultiPoly':
        return MultiPoly(target, self.variables, {e: embed(c) for e, c in self.terms.items()})

    def sorted_terms(self) -> List[Tuple[Exponent, Any]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    # -- display ------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({self.spec.label}, {self.variables}, {format_poly(self)})"


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def formal_derivative(f: MultiPoly, var: str) -> MultiPoly:
    """Formal partial derivative; exponents divisible by p contribute nothing."""
    i = f._index(var)
    spec = f.spec
    out = {}
    for e, c in f.terms.items():
        if e[i] == 0:
            continue
        coeff = spec.mul(c, spec.from_int(e[i]))
        if coeff != 0:
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = coeff
    return MultiPoly._raw(spec, f.variables, out)


def substitute(f: MultiPoly, mapping: Mapping[str, Any]) -> MultiPoly:
    """Replace variables by polynomials (or scalars); the universe may grow.

    Args:
        f: Polynomial to substitute into
        mapping: Variable name -> MultiPoly or scalar

    Returns:
        Polynomial over f's untouched variables followed by the new ones
    """
    spec = f.spec
    images: Dict[str, MultiPoly] = {}
    for var, image in mapping.items():
        if var not in f.variables:
            continue
        if isinstance(image, MultiPoly):
            if image.spec != spec:
                raise PolynomialError(f"field mismatch in substitution for {var!r}")
            images[var] = image
        else:
            images[var] = MultiPoly.constant(spec, (), image)

    universe = tuple(v for v in f.variables if v not in images)
    for image in images.values():
        universe += tuple(v for v in image.variables if v not in universe)
    images = {v: img.with_variables(universe) for v, img in images.items()}

    power_cache: Dict[Tuple[str, int], MultiPoly] = {}

    def power(var: str, n: int) -> MultiPoly:
        key = (var, n)
        if key not in power_cache:
            if n == 1:
                power_cache[key] = images[var]
            elif n % 2 == 0:
                half = power(var, n // 2)
                power_cache[key] = half * half
            else:
                power_cache[key] = power(var, n - 1) * images[var]
        return power_cache[key]

    kept = [(i, universe.index(v)) for i, v in enumerate(f.variables) if v not in images]
    replaced = [(i, v) for i, v in enumerate(f.variables) if v in images]
    result = MultiPoly.zero(spec, universe)
    n = len(universe)
    for e, c in f.terms.items():
        mono = [0] * n
        for i, j in kept:
            mono[j] = e[i]
        term = MultiPoly._raw(spec, universe, {tuple(mono): c})
        for i, v in replaced:
            if e[i]:
                term = term * power(v, e[i])
        result = result + term
    return result


def homogenize(f: MultiPoly, new_var: str, degree: int) -> MultiPoly:
    """Homogenize to the given degree with a new last variable.

    Raises:
        PolynomialError: if degree is below the total degree of f
    """
    if new_var in f.variables:
        raise PolynomialError(f"{new_var!r} is already a variable of the polynomial")
    if degree < f.total_degree:
        raise PolynomialError(f"degree {degree} is below the total degree {f.total_degree}")
    terms = {e + (degree - sum(e),): c for e, c in f.terms.items()}
    return MultiPoly._raw(f.spec, f.variables + (new_var,), terms)


def dehomogenize(F: MultiPoly, var: str) -> MultiPoly:
    """Set var = 1."""
    return F.evaluate({var: F.spec.one()})


def exact_divide(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Quotient f / g, which must be exact.

    Division by graded-lex leading terms; the remainder of an exact division
    always has a leading term divisible by that of g.
    """
    if g.is_zero:
        raise PolynomialError("division by the zero polynomial")
    f_terms, g_terms, variables = f._align(g)
    spec = f.spec
    lead = max(g_terms, key=_grlex_key)
    lead_inv = spec.inv(g_terms[lead])
    g_aligned = MultiPoly._raw(spec, variables, g_terms)
    remainder = MultiPoly._raw(spec, variables, dict(f_terms))
    quotient: Dict[Exponent, Any] = {}
    while not remainder.is_zero:
        r_lead = remainder.leading_exponent()
        diff = tuple(a - b for a, b in zip(r_lead, lead))
        if any(d < 0 for d in diff):
            raise PolynomialError("division is not exact")
        coeff = spec.mul(remainder.terms[r_lead], lead_inv)
        quotient[diff] = coeff
        remainder = remainder - g_aligned.shift(diff).scale(coeff)
    return MultiPoly(spec, variables, quotient)


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------

def _as_univariate(f: MultiPoly, var: str, rest: Tuple[str, ...]) -> List[MultiPoly]:
    coeffs = f.coefficients_in(var)
    degree = max(coeffs, default=-1)
    zero = MultiPoly.zero(f.spec, rest)
    return [coeffs[i].with_variables(rest) if i in coeffs else zero for i in range(degree + 1)]


def _trim(coeffs: List[MultiPoly]) -> List[MultiPoly]:
    while coeffs and coeffs[-1].is_zero:
        coeffs = coeffs[:-1]
    return coeffs


def _pseudo_remainder(a: List[MultiPoly], b: List[MultiPoly]) -> List[MultiPoly]:
    """lc(b)^(deg a - deg b + 1) * a modulo b, coefficients in the remaining variables."""
    lc_b = b[-1]
    deg_b = len(b) - 1
    r = list(a)
    e = len(a) - len(b) + 1
    while len(r) - 1 >= deg_b and r:
        c = r[-1]
        shift = len(r) - 1 - deg_b
        new = [x * lc_b for x in r]
        for i, bi in enumerate(b):
            if not bi.is_zero:
                new[shift + i] = new[shift + i] - c * bi
        r = _trim(new)
        e -= 1
    if e > 0 and r:
        factor = lc_b ** e
        r = [x * factor for x in r]
    return r


def _res_power_ratio(num: MultiPoly, den: MultiPoly, exponent: int) -> MultiPoly:
    """num^e / den^(e-1) for e >= 1, exact."""
    if exponent == 1:
        return num
    return exact_divide(num ** exponent, den ** (exponent - 1))


def resultant(f: MultiPoly, h: MultiPoly, var: str) -> MultiPoly:
    """Resultant of f and h with respect to var.

    Subresultant pseudo-remainder sequence without content removal; agrees
    with the Sylvester determinant (f's rows first).

    Args:
        f: First polynomial
        h: Second polynomial
        var: Variable to eliminate

    Returns:
        Polynomial in the remaining variables
    """
    if f.spec != h.spec:
        raise PolynomialError("resultant of polynomials over different fields")
    variables = f.variables + tuple(v for v in h.variables if v not in f.variables)
    if var not in variables:
        raise PolynomialError(f"variable {var!r} occurs in neither polynomial")
    rest = tuple(v for v in variables if v != var)
    f = f.with_variables(variables)
    h = h.with_variables(variables)
    zero = MultiPoly.zero(f.spec, rest)
    if f.is_zero or h.is_zero:
        return zero

    A = _as_univariate(f, var, rest)
    B = _as_univariate(h, var, rest)
    deg_a, deg_b = len(A) - 1, len(B) - 1
    if deg_a == 0 and deg_b == 0:
        raise PolynomialError(f"resultant is degenerate: both polynomials are constant in {var!r}")
    if deg_b == 0:
        return B[0] ** deg_a
    if deg_a == 0:
        return A[0] ** deg_b

    one = MultiPoly.constant(f.spec, rest, 1)
    g = one
    hh = one
    sign = 1
    if deg_a < deg_b:
        A, B = B, A
        if deg_a % 2 == 1 and deg_b % 2 == 1:
            sign = -sign

    while True:
        deg_a, deg_b = len(A) - 1, len(B) - 1
        delta = deg_a - deg_b
        if deg_a % 2 == 1 and deg_b % 2 == 1:
            sign = -sign
        R = _pseudo_remainder(A, B)
        A = B
        divisor = g * (hh ** delta)
        B = [exact_divide(c, divisor) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            hh = g
        else:
            hh = _res_power_ratio(g, hh, delta)
        if len(B) - 1 <= 0:
            break

    deg_a = len(A) - 1
    if not B:
        return zero
    result = _res_power_ratio(B[-1], hh, deg_a) if deg_a >= 1 else one
    return result if sign == 1 else -result


def sylvester_matrix(f: MultiPoly, h: MultiPoly, var: str) -> List[List[MultiPoly]]:
    variables = f.variables + tuple(v for v in h.variables if v not in f.variables)
    rest = tuple(v for v in variables if v != var)
    A = _as_univariate(f.with_variables(variables), var, rest)
    B = _as_univariate(h.with_variables(variables), var, rest)
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    zero = MultiPoly.zero(f.spec, rest)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(A)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(B)):
            row[i + j] = c
        rows.append(row)
    return rows


def determinant(rows: List[List[MultiPoly]]) -> MultiPoly:
    """Cofactor expansion along rows, memoised on the set of used columns."""
    size = len(rows)
    if size == 0:
        raise PolynomialError("determinant of an empty matrix")
    memo: Dict[int, MultiPoly] = {}

    def expand(row: int, used: int) -> MultiPoly:
        if row == size:
            return MultiPoly.constant(rows[0][0].spec, rows[0][0].variables, 1)
        if used in memo:
            return memo[used]
        total = MultiPoly.zero(rows[0][0].spec, rows[0][0].variables)
        position = 0
        for col in range(size):
            if used >> col & 1:
                continue
            entry = rows[row][col]
            if not entry.is_zero:
                minor = expand(row + 1, used | (1 << col))
                term = entry * minor
                total = total + term if position % 2 == 0 else total - term
            position += 1
        memo[used] = total
        return total

    return expand(0, 0)


def sylvester_resultant(f: MultiPoly, h: MultiPoly, var: str) -> MultiPoly:
    """Resultant as the Sylvester determinant; exponential, for cross-checks only."""
    rows = sylvester_matrix(f, h, var)
    if not rows:
        raise PolynomialError(f"resultant is degenerate: both polynomials are constant in {var!r}")
    return determinant(rows)


# ---------------------------------------------------------------------------
# Dense univariate helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def to_dense(f: MultiPoly, var: Optional[str] = None) -> List[Any]:
    """Coefficient list of a polynomial involving at most one variable."""
    if var is None:
        involved = [v for v in f.variables if f.involves(v)]
        if len(involved) > 1:
            raise PolynomialError(f"{f} is not univariate")
        var = involved[0] if involved else (f.variables[0] if f.variables else None)
    if var is None:
        return [f.constant_term()] if not f.is_zero else []
    i = f._index(var)
    degree = f.degree(var)
    out = [f.spec.zero()] * (degree + 1)
    for e, c in f.terms.items():
        if any(x for j, x in enumerate(e) if j != i):
            raise PolynomialError(f"{f} involves variables other than {var!r}")
        out[e[i]] = c
    return out


def dense_trim(a: List[Any]) -> List[Any]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def dense_eval(spec: FieldSpec, a: Sequence[Any], x: Any) -> Any:
    acc = spec.zero()
    for c in reversed(a):
        acc = spec.add(spec.mul(acc, x), c)
    return acc


def dense_divmod(spec: FieldSpec, a: Sequence[Any], b: Sequence[Any]) -> Tuple[List[Any], List[Any]]:
    b = dense_trim(b)
    if not b:
        raise PolynomialError("division by the zero polynomial")
    r = dense_trim(a)
    q = [spec.zero()] * max(len(r) - len(b) + 1, 0)
    inv_lead = spec.inv(b[-1])
    while len(r) >= len(b):
        shift = len(r) - len(b)
        c = spec.mul(r[-1], inv_lead)
        q[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = spec.sub(r[shift + i], spec.mul(c, bi))
        r = dense_trim(r)
    return q, r


def dense_mul(spec: FieldSpec, a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
    if not a or not b:
        return []
    out = [spec.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] = spec.add(out[i + j], spec.mul(x, y))
    return dense_trim(out)


def dense_sub(spec: FieldSpec, a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else spec.zero()
        y = b[i] if i < len(b) else spec.zero()
        out.append(spec.sub(x, y))
    return dense_trim(out)


def dense_gcd(spec: FieldSpec, a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
    """Monic gcd (the zero list when both inputs are zero)."""
    a, b = dense_trim(a), dense_trim(b)
    while b:
        _, r = dense_divmod(spec, a, b)
        a, b = b, r
    if not a:
        return []
    inv = spec.inv(a[-1])
    return [spec.mul(c, inv) for c in a]


def dense_derivative(spec: FieldSpec, a: Sequence[Any]) -> List[Any]:
    return dense_trim([spec.mul(spec.from_int(i), c) for i, c in enumerate(a)][1:])


def dense_powmod(spec: FieldSpec, base: Sequence[Any], e: int, mod: Sequence[Any]) -> List[Any]:
    result = [spec.one()]
    _, base = dense_divmod(spec, base, mod)
    while e:
        if e & 1:
            _, result = dense_divmod(spec, dense_mul(spec, result, base), mod)
        e >>= 1
        if e:
            _, base = dense_divmod(spec, dense_mul(spec, base, base), mod)
    return result


def root_multiplicity(spec: FieldSpec, a: Sequence[Any], root: Any) -> int:
    """Multiplicity of root in a nonzero polynomial by repeated synthetic division."""
    a = dense_trim(a)
    count = 0
    while a and dense_eval(spec, a, root) == 0:
        a, _ = dense_divmod(spec, a, [spec.neg(root), spec.one()])
        count += 1
    return count


def dense_roots(spec: FieldSpec, a: Sequence[Any]) -> Dict[Any, int]:
    """Roots with multiplicity in the coefficient field.

    Finite fields are searched exhaustively; rational roots come from sympy.
    """
    a = dense_trim(a)
    if not a:
        raise PolynomialError("the zero polynomial has every element as a root")
    if len(a) == 1:
        return {}
    if not spec.is_finite:
        x = Symbol('x')
        poly = SympyPoly.from_list([Rational(c.numerator, c.denominator) for c in reversed(a)],
                                   x, domain=SYMPY_QQ)
        return {Fraction(int(r.p), int(r.q)): m for r, m in poly.ground_roots().items()}
    roots = {}
    for x in spec.elements():
        if dense_eval(spec, a, x) == 0:
            roots[x] = root_multiplicity(spec, a, x)
    return roots


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise PolynomialError(f"cannot tokenize {text[pos:]!r}")
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(('num', number))
        elif name is not None:
            tokens.append(('name', name))
        elif symbol is not None:
            tokens.append(('sym', symbol))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*,
    term := factor ('*' factor)*, factor := atom ('^' int)?,
    atom := int ('/' int)? | name | '(' expr ')'.
    """

    def __init__(self, tokens: List[Tuple[str, str]], spec: FieldSpec, variables: Tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.spec = spec
        self.variables = variables

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Tuple[str, str]:
        token = self.peek()
        if token is None:
            raise PolynomialError("unexpected end of polynomial text")
        self.pos += 1
        return token

    def expect(self, symbol: str):
        token = self.take()
        if token != ('sym', symbol):
            raise PolynomialError(f"expected {symbol!r}, found {token[1]!r}")

    def parse(self) -> MultiPoly:
        result = self.expr()
        if self.peek() is not None:
            raise PolynomialError(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek() in (('sym', '+'), ('sym', '-')):
            sign = -1 if self.take()[1] == '-' else 1
        result = self.term()
        if sign < 0:
            result = -result
        while self.peek() in (('sym', '+'), ('sym', '-')):
            op = self.take()[1]
            term = self.term()
            result = result + term if op == '+' else result - term
        return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while self.peek() == ('sym', '*'):
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ('sym', '^'):
            self.take()
            kind, text = self.take()
            if kind != 'num':
                raise PolynomialError(f"exponent must be a non-negative integer, found {text!r}")
            base = base ** int(text)
        return base

    def atom(self) -> MultiPoly:
        kind, text = self.take()
        if kind == 'num':
            value = Fraction(int(text))
            if self.peek() == ('sym', '/'):
                self.take()
                kind2, text2 = self.take()
                if kind2 != 'num' or int(text2) == 0:
                    raise PolynomialError(f"bad denominator {text2!r}")
                value = Fraction(int(text), int(text2))
            raw = self.spec.coerce(value if value.denominator != 1 else int(text))
            return MultiPoly(self.spec, self.variables, {(0,) * len(self.variables): raw})
        if kind == 'name':
            if text in self.variables:
                return MultiPoly.variable(self.spec, self.variables, text)
            if text == 'a' and self.spec.is_finite and self.spec.k > 1:
                return MultiPoly(self.spec, self.variables,
                                 {(0,) * len(self.variables): self.spec.generator()})
            raise PolynomialError(f"unknown variable {text!r}; expected one of {self.variables}")
        if text == '(':
            inner = self.expr()
            self.expect(')')
            return inner
        raise PolynomialError(f"unexpected symbol {text!r}")


def parse_poly(text: str, spec: FieldSpec, variables: Optional[Sequence[str]] = None) -> MultiPoly:
    """Parse the plain-text grammar, e.g. ``z^2*y^4 + x^6 + x*z^5``.

    Args:
        text: Polynomial text
        spec: Coefficient field; integers are reduced into it
        variables: Variable order; defaults to order of first appearance

    Returns:
        The parsed polynomial
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialError("empty polynomial text")
    if variables is None:
        seen: List[str] = []
        reserved = 'a' if spec.is_finite and spec.k > 1 else None
        for kind, value in tokens:
            if kind == 'name' and value != reserved and value not in seen:
                seen.append(value)
        variables = tuple(seen)
    return _Parser(tokens, spec, tuple(variables)).parse()


def _monomial_text(variables: Tuple[str, ...], exps: Exponent) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return '*'.join(parts)


def format_poly(f: MultiPoly) -> str:
    """Print in descending graded-lex order; inverse of parse_poly."""
    if f.is_zero:
        return '0'
    spec = f.spec
    pieces: List[str] = []
    for exps, c in f.sorted_terms():
        mono = _monomial_text(f.variables, exps)
        negative = False
        if not spec.is_finite and c < 0:
            negative = True
            c = -c
        ctext = spec.format(c)
        if '+' in ctext:
            ctext = f"({ctext})"
        if not mono:
            body = ctext
        elif c == spec.one():
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return ''.join(pieces)


def polys_equal_up_to_unit(f: MultiPoly, g: MultiPoly) -> bool:
    return f.monic() == g.monic()
