"""Value semigroup of a plane branch from its parametrization.

Given x(s), z(s) with positive valuations, the values of the local
algebra K[[x, z]] along the branch are the leading orders of an echelon
basis of the span of the monomials x^i z^j, truncated below the known
precision. The conductor and the gap count follow; the gap count is the
δ-invariant, which serves as an independent check on the resolution
tree.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

from .exceptions import PrecisionError, SeriesError
from .series import PowerSeries

logger = logging.getLogger(__name__)


@dataclass
class ValueSemigroup:
    """Numerical semigroup of a branch, known up to its conductor.

    Attributes:
        generators: Minimal generators
        conductor: Smallest c with every integer >= c in the semigroup
        gaps: Integers missing from the semigroup
        multiplicity: Smallest positive element
        precision: Series precision the computation was certified at
    """

    generators: List[int]
    conductor: int
    gaps: List[int] = field(default_factory=list)
    multiplicity: int = 1
    precision: int = 0

    @property
    def delta(self) -> int:
        return len(self.gaps)

    def contains(self, value: int) -> bool:
        return value >= 0 and (value >= self.conductor or value not in self.gaps)

    def is_symmetric(self) -> bool:
        """s in S exactly when conductor - 1 - s is not."""
        c = self.conductor
        return all(self.contains(s) != self.contains(c - 1 - s) for s in range(c))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'generators': self.generators,
            'conductor': self.conductor,
            'delta': self.delta,
            'multiplicity': self.multiplicity,
            'symmetric': self.is_symmetric(),
            'precision': self.precision,
        }


def _clmul(a: int, b: int, mask: int) -> int:
    """Carry-less product over F_2 truncated by mask."""
    if bin(a).count('1') < bin(b).count('1'):
        a, b = b, a
    result = 0
    while b:
        low = b & -b
        result ^= a << (low.bit_length() - 1)
        b ^= low
    return result & mask


def _values_f2(x: PowerSeries, z: PowerSeries, vx: int, vz: int, limit: int) -> List[int]:
    mask = (1 << limit) - 1
    xb, zb = x.to_bits() & mask, z.to_bits() & mask
    pivots: Dict[int, int] = {}
    z_power = 1
    j = 0
    while j < vx and j * vz < limit:
        vec = z_power
        i = 0
        while i * vx + j * vz < limit:
            v = vec
            while v:
                order = (v & -v).bit_length() - 1
                pivot = pivots.get(order)
                if pivot is None:
                    pivots[order] = v
                    break
                v ^= pivot
            vec = _clmul(vec, xb, mask)
            i += 1
        z_power = _clmul(z_power, zb, mask)
        j += 1
    return sorted(pivots)


def _values_generic(x: PowerSeries, z: PowerSeries, vx: int, vz: int, limit: int) -> List[int]:
    spec = x.spec
    n = limit - 1
    x = x.truncate(n)
    z = z.truncate(n)
    pivots: Dict[int, List[Any]] = {}

    def insert(vec: List[Any]):
        vec = list(vec)
        while True:
            order = next((k for k, c in enumerate(vec) if c != 0), None)
            if order is None:
                return
            pivot = pivots.get(order)
            if pivot is None:
                inv = spec.inv(vec[order])
                pivots[order] = [spec.mul(c, inv) for c in vec]
                return
            factor = vec[order]
            vec = [spec.sub(c, spec.mul(factor, p)) for c, p in zip(vec, pivot)]

    z_power = PowerSeries.one(spec, n, x.var)
    j = 0
    while j < vx and j * vz < limit:
        vec = z_power
        i = 0
        while i * vx + j * vz < limit:
            insert(vec.coeffs)
            vec = vec * x
            i += 1
        z_power = z_power * z
        j += 1
    return sorted(pivots)


def delta_via_semigroup(x: PowerSeries, z: PowerSeries) -> ValueSemigroup:
    """Value semigroup and δ of the branch s -> (x(s), z(s)).

    Args:
        x: First coordinate, positive valuation
        z: Second coordinate, positive valuation

    Returns:
        ValueSemigroup certified at the series precision

    Raises:
        PrecisionError: the known values do not reach conductor + multiplicity
    """
    if x.spec != z.spec:
        raise SeriesError("branch coordinates over different fields")
    precision = min(x.precision, z.precision)
    vx, vz = x.valuation(), z.valuation()
    if vx is None or vz is None:
        raise PrecisionError("a branch coordinate vanishes to the working precision", precision)
    if vx == 0 or vz == 0:
        raise SeriesError("branch is not centred at the origin")
    if vz < vx:
        x, z, vx, vz = z, x, vz, vx
    limit = precision + 1

    spec = x.spec
    if spec.is_finite and spec.p == 2 and spec.k == 1:
        values = _values_f2(x, z, vx, vz, limit)
    else:
        values = _values_generic(x, z, vx, vz, limit)

    present = set(values)
    conductor = limit
    while conductor - 1 in present:
        conductor -= 1
    if limit - conductor < vx:
        raise PrecisionError(
            f"values below {limit} do not certify the conductor (top run {limit - conductor} < {vx})",
            precision,
        )

    gaps = [g for g in range(conductor) if g not in present]
    bound = conductor + vx
    reachable = [False] * bound
    reachable[0] = True
    generators: List[int] = []
    for v in sorted(present | set(range(conductor, bound))):
        if v == 0 or v >= bound:
            continue
        if not reachable[v]:
            generators.append(v)
            for s in range(v, bound):
                if reachable[s - v]:
                    reachable[s] = True

    result = ValueSemigroup(generators, conductor, gaps, vx, precision)
    logger.debug(f"Semigroup {generators} with conductor {conductor} at precision {precision}")
    return result


def semigroup_with_retry(branch: Callable[[int], Tuple[PowerSeries, PowerSeries]],
                         precision: int, max_precision: int) -> ValueSemigroup:
    """Run delta_via_semigroup, doubling the precision until it certifies.

    Args:
        branch: Function returning (x, z) expanded to a given precision
        precision: Starting precision
        max_precision: Give up beyond this precision
    """
    while True:
        x, z = branch(precision)
        try:
            return delta_via_semigroup(x, z)
        except PrecisionError:
            if precision * 2 > max_precision:
                raise
            logger.info(f"Semigroup not certified at precision {precision}; retrying at {precision * 2}")
            precision *= 2
