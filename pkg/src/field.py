"""Exact coefficient fields.

Prime fields F_p, small extensions F_{p^k} and the rationals share one
interface, ``FieldSpec``. Arithmetic methods on a spec work on *raw*
values so that polynomial kernels avoid wrapper overhead:

- finite fields: an ``int`` in ``range(p**k)`` whose base-p digits are the
  coefficients of the residue polynomial in the generator ``a`` (the class
  of ``v`` modulo the chosen irreducible);
- rationals: a ``fractions.Fraction``.

``FieldElement`` wraps a raw value together with its spec for user-facing
code and tests.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from sympy import factorint, isprime

from .exceptions import FieldError

logger = logging.getLogger(__name__)

FINITE = 'finite'
RATIONAL = 'rational'

DEFAULT_MAX_FIELD_SIZE = 1 << 20


# ---------------------------------------------------------------------------
# Helpers on F_p[v] polynomials stored as coefficient lists (low degree first)
# ---------------------------------------------------------------------------

def _digits(value: int, p: int, length: int) -> List[int]:
    out = []
    for _ in range(length):
        out.append(value % p)
        value //= p
    return out


def _from_digits(digits: List[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _remainder(num: List[int], den: List[int], p: int) -> List[int]:
    """Remainder of num modulo the monic polynomial den over F_p."""
    num = [c % p for c in num]
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    return num[:dd]


def _is_irreducible(coeffs: List[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= k/2."""
    k = len(coeffs) - 1
    if k <= 1:
        return True
    for e in range(1, k // 2 + 1):
        for low in range(p ** e):
            divisor = _digits(low, p, e) + [1]
            if not any(_remainder(coeffs, divisor, p)):
                return False
    return True


def least_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are ordered by the integer whose base-p digits are the lower
    coefficients, so for p=2, k=2 the answer is v^2+v+1.

    Returns:
        Coefficient tuple (c0, ..., ck) with ck = 1
    """
    for low in range(p ** k):
        coeffs = _digits(low, p, k) + [1]
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


class _Tables:
    """Discrete log / antilog tables for an extension field."""

    def __init__(self, exp: List[int], log: List[int], generator: int):
        self.exp = exp
        self.log = log
        self.generator = generator


@lru_cache(maxsize=None)
def _tables_for(spec: 'FieldSpec') -> _Tables:
    size = spec.size
    order = size - 1
    primes = list(factorint(order)) if order > 1 else []

    def slow_pow(base: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = spec._mulmod(result, base)
            base = spec._mulmod(base, base)
            e >>= 1
        return result

    generator = None
    for candidate in range(2, size):
        if all(slow_pow(candidate, order // ell) != 1 for ell in primes):
            generator = candidate
            break
    if generator is None:
        raise FieldError(f"no primitive element found in {spec.label}")

    exp = [1] * (2 * order)
    log = [0] * size
    current = 1
    for i in range(order):
        exp[i] = current
        log[current] = i
        current = spec._mulmod(current, generator)
    for i in range(order, 2 * order):
        exp[i] = exp[i - order]
    logger.debug(f"Built log tables for {spec.label} with generator {generator}")
    return _Tables(exp, log, generator)


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: F_p, F_{p^k} or the rationals.

    Attributes:
        kind: 'finite' or 'rational'
        p: Characteristic (finite only)
        k: Extension degree (finite only)
        modulus: Irreducible polynomial coefficients c0..ck for k > 1
    """

    kind: str
    p: int = 0
    k: int = 1
    modulus: Tuple[int, ...] = ()

    # -- descriptive properties ------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def characteristic(self) -> int:
        return self.p if self.is_finite else 0

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise FieldError("the rationals are infinite")
        return self.p ** self.k

    @property
    def label(self) -> str:
        if not self.is_finite:
            return 'QQ'
        return f"F_{self.p}" if self.k == 1 else f"F_{self.p}^{self.k}"

    def to_json(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'p': self.p,
            'k': self.k,
            'modulus': list(self.modulus),
        }

    # -- raw constants and coercion -------------------------------------------

    def zero(self) -> Any:
        return 0 if self.is_finite else Fraction(0)

    def one(self) -> Any:
        return 1 if self.is_finite else Fraction(1)

    def generator(self) -> int:
        """The class ``a`` of v modulo the modulus (extension fields only)."""
        if not self.is_finite or self.k == 1:
            raise FieldError(f"{self.label} has no extension generator")
        return self.p

    def from_int(self, n: int) -> Any:
        """Image of the integer n under Z -> field."""
        if self.is_finite:
            return n % self.p
        return Fraction(n)

    def from_fraction(self, value: Fraction) -> Any:
        if not self.is_finite:
            return Fraction(value)
        den = value.denominator % self.p
        if den == 0:
            raise FieldError(f"{value} has no image in {self.label}")
        return self.div(self.from_int(value.numerator), den)

    def coerce(self, value: Any) -> Any:
        """Turn an int, Fraction or FieldElement into a raw value of this field."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError(f"element of {value.spec.label} used in {self.label}")
            return value.value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise FieldError(f"cannot coerce {value!r} into {self.label}")

    def element(self, value: Any) -> 'FieldElement':
        """Wrap a raw value."""
        return FieldElement(self, value)

    # -- arithmetic on raw values ---------------------------------------------

    def is_zero(self, a: Any) -> bool:
        return a == 0

    def add(self, a: Any, b: Any) -> Any:
        if not self.is_finite:
            return a + b
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digit_combine(a, b, 1)

    def sub(self, a: Any, b: Any) -> Any:
        if not self.is_finite:
            return a - b
        if self.k == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digit_combine(a, b, -1)

    def neg(self, a: Any) -> Any:
        if not self.is_finite:
            return -a
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._digit_combine(0, a, -1)

    def mul(self, a: Any, b: Any) -> Any:
        if not self.is_finite:
            return a * b
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        tables = _tables_for(self)
        return tables.exp[tables.log[a] + tables.log[b]]

    def inv(self, a: Any) -> Any:
        if a == 0:
            raise FieldError("inverse of zero")
        if not self.is_finite:
            return 1 / a
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        tables = _tables_for(self)
        return tables.exp[(self.size - 1 - tables.log[a]) % (self.size - 1)]

    def div(self, a: Any, b: Any) -> Any:
        return self.mul(a, self.inv(b))

    def pow(self, a: Any, e: int) -> Any:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return self.one()
        if not self.is_finite:
            return a ** e
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0
        tables = _tables_for(self)
        return tables.exp[(tables.log[a] * e) % (self.size - 1)]

    def frobenius(self, a: Any) -> Any:
        """e -> e^p; the identity on the rationals."""
        if not self.is_finite:
            return a
        return self.pow(a, self.p)

    def pth_root(self, a: Any) -> Any:
        """Inverse of the Frobenius, a^(p^(k-1)); square root when p = 2."""
        if not self.is_finite:
            raise FieldError("p-th roots are only defined in positive characteristic")
        return self.pow(a, self.p ** (self.k - 1))

    def sqrt(self, a: Any) -> Any:
        if self.characteristic != 2:
            raise FieldError(f"sqrt is only provided in characteristic 2, not in {self.label}")
        return self.pth_root(a)

    def minimal_degree(self, a: Any) -> int:
        """Degree over F_p of the smallest subfield containing a."""
        if not self.is_finite:
            raise FieldError("minimal degree is only defined for finite fields")
        for j in range(1, self.k + 1):
            if self.k % j == 0 and self.pow(a, self.p ** j) == a:
                return j
        return self.k

    def elements(self) -> Iterator[Any]:
        """All raw values, starting 0, 1."""
        if not self.is_finite:
            raise FieldError("cannot enumerate the rationals")
        return iter(range(self.size))

    def format(self, a: Any) -> str:
        if not self.is_finite:
            return str(a)
        if self.k == 1:
            return str(a)
        digits = _digits(a, self.p, self.k)
        parts = []
        for i in range(self.k - 1, -1, -1):
            c = digits[i]
            if not c:
                continue
            mono = '' if i == 0 else ('a' if i == 1 else f"a^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return '+'.join(parts) if parts else '0'

    # -- internals ------------------------------------------------------------

    def _digit_combine(self, a: int, b: int, sign: int) -> int:
        p = self.p
        result = 0
        place = 1
        while a or b:
            result += ((a % p + sign * (b % p)) % p) * place
            a //= p
            b //= p
            place *= p
        return result

    def _mulmod(self, a: int, b: int) -> int:
        """Schoolbook product modulo the modulus; only used to build tables."""
        p, k = self.p, self.k
        if p == 2:
            mod_bits = _from_digits(list(self.modulus), 2)
            result = 0
            while b:
                if b & 1:
                    result ^= a
                b >>= 1
                a <<= 1
                if (a >> k) & 1:
                    a ^= mod_bits
            return result
        da = _digits(a, p, k)
        db = _digits(b, p, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return _from_digits(_remainder(prod, list(self.modulus), p), p)

    # -- constructors -------------------------------------------------------

    def extension(self, j: int) -> 'FieldSpec':
        """F_{p^(k j)}."""
        if not self.is_finite:
            raise FieldError("the rationals have no finite extensions here")
        return field_make(FINITE, self.p, self.k * j)


@dataclass(frozen=True, eq=False)
class FieldElement:
    """A field element bound to its FieldSpec."""

    spec: FieldSpec
    value: Any

    def _other(self, other: Any) -> Any:
        return self.spec.coerce(other)

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.spec, self.spec.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> 'FieldElement':
        return FieldElement(self.spec, self.spec.inv(self.value))

    def frobenius(self) -> 'FieldElement':
        return FieldElement(self.spec, self.spec.frobenius(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.spec.coerce(other)
            except FieldError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.value))

    def __str__(self) -> str:
        return self.spec.format(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.spec.label}, {self.spec.format(self.value)})"


@lru_cache(maxsize=None)
def _make_finite(p: int, k: int) -> FieldSpec:
    modulus = least_irreducible(p, k) if k > 1 else ()
    spec = FieldSpec(FINITE, p, k, modulus)
    logger.debug(f"Constructed {spec.label} with modulus {list(modulus)}")
    return spec


def field_make(kind: str, p: Optional[int] = None, k: int = 1,
               max_size: int = DEFAULT_MAX_FIELD_SIZE) -> FieldSpec:
    """Build a field spec.

    Args:
        kind: 'finite' or 'rational'
        p: Characteristic of a finite field
        k: Extension degree
        max_size: Upper bound on p**k

    Returns:
        FieldSpec with the lexicographically least monic irreducible modulus
    """
    if kind == RATIONAL:
        return FieldSpec(RATIONAL)
    if kind != FINITE:
        raise FieldError(f"unknown field kind: {kind}")
    if p is None or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p ** k > max_size:
        raise FieldError(f"F_{p}^{k} has {p ** k} elements, above the bound {max_size}")
    return _make_finite(p, k)


def GF(p: int, k: int = 1) -> FieldSpec:
    """Shorthand for field_make('finite', p, k)."""
    return field_make(FINITE, p, k)


QQ = FieldSpec(RATIONAL)


def field_enumerate(spec: FieldSpec) -> List[FieldElement]:
    """All elements of a finite field, starting with 0 then 1."""
    return [FieldElement(spec, v) for v in spec.elements()]


def field_extension(spec: FieldSpec, j: int) -> FieldSpec:
    return spec.extension(j)


def spec_from_json(data: Dict[str, Any]) -> FieldSpec:
    if data.get('kind') == RATIONAL:
        return QQ
    spec = field_make(FINITE, data['p'], data['k'])
    if data.get('modulus') and tuple(data['modulus']) != spec.modulus:
        raise FieldError(f"modulus {data['modulus']} differs from the canonical {list(spec.modulus)}")
    return spec


@lru_cache(maxsize=None)
def _embedding_image(source: FieldSpec, target: FieldSpec) -> int:
    """Raw image of the source generator: the first root of its modulus in target."""
    for beta in target.elements():
        acc = 0
        for c in reversed(source.modulus):
            acc = target.add(target.mul(acc, beta), c)
        if acc == 0:
            return beta
    raise FieldError(f"{source.label} does not embed in {target.label}")


def embedding(source: FieldSpec, target: FieldSpec) -> Callable[[Any], Any]:
    """Field homomorphism source -> target on raw values.

    Args:
        source: A subfield F_{p^k}
        target: F_{p^K} with k dividing K (or the same rational field)

    Returns:
        Function mapping raw source values to raw target values
    """
    if source == target:
        return lambda a: a
    if not (source.is_finite and target.is_finite) or source.p != target.p:
        raise FieldError(f"no embedding {source.label} -> {target.label}")
    if target.k % source.k != 0:
        raise FieldError(f"{source.label} is not a subfield of {target.label}")
    if source.k == 1:
        return lambda a: a
    beta = _embedding_image(source, target)
    powers = [target.one()]
    for _ in range(source.k - 1):
        powers.append(target.mul(powers[-1], beta))

    cache: Dict[int, int] = {}

    def embed(a: int) -> int:
        if a in cache:
            return cache[a]
        acc = 0
        for d, pw in zip(_digits(a, source.p, source.k), powers):
            if d:
                acc = target.add(acc, target.mul(target.from_int(d), pw))
        cache[a] = acc
        return acc

    return embed


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
