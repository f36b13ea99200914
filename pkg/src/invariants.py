"""Log canonical thresholds and the characteristic-0 lifting test.

Plane thresholds come from the (a, k) ledger of an embedded resolution
tree. The threefold ledger for X(g) = {g + x^e + y^e + z^e = 0}, g the
equation of a plane curve C_d of degree d, is driven by the same two
recurrences in ambient dimension 3: blowing up the origin gives (d, 2),
then every center of the curve's tree lies on the first exceptional
divisor and contributes a = m_i + sum of a_j, k = 2 + sum of k_j over the
divisors through it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .exceptions import InvariantError
from .resolve import EMBEDDED, BlowupTree, CurveGerm, resolution_tree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DivisorLedgerEntry:
    """One exceptional divisor of a blow-up sequence.

    Attributes:
        divisor: Divisor id (0 is the first blow-up)
        a: Multiplicity of the total transform of the ideal along the divisor
        k: Discrepancy
        ambient_dim: 2 for plane germs, 3 for X(g)
    """

    divisor: int
    a: int
    k: int
    ambient_dim: int = 2

    def __post_init__(self):
        if self.a < 1 or self.k < 1:
            raise InvariantError(f"ledger entry E{self.divisor} has a={self.a}, k={self.k}; both must be >= 1")

    @property
    def lct_candidate(self) -> Fraction:
        return Fraction(self.k + 1, self.a)

    def to_dict(self) -> Dict[str, Any]:
        return {'divisor': self.divisor, 'a': self.a, 'k': self.k,
                'ambient_dim': self.ambient_dim, 'lct_candidate': self.lct_candidate}


@dataclass(frozen=True)
class ThresholdResult:
    """A log canonical threshold and the divisor computing it.

    ``smooth`` marks the convention value 1 for a smooth germ, where no
    divisor exists and argmin is None.
    """

    value: Fraction
    argmin: Optional[int]
    smooth: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {'value': self.value, 'argmin': self.argmin, 'smooth': self.smooth}


def _minimum(entries: List[DivisorLedgerEntry]) -> ThresholdResult:
    best = min(entries, key=lambda e: (e.lct_candidate, e.divisor))
    return ThresholdResult(best.lct_candidate, best.divisor)


def plane_ledger(tree: BlowupTree) -> List[DivisorLedgerEntry]:
    return [DivisorLedgerEntry(n, a, k, 2) for n, a, k in tree.ledger()]


def lct_plane_germ(tree: BlowupTree) -> ThresholdResult:
    """min over exceptional divisors of (k + 1) / a.

    Args:
        tree: Embedded-mode resolution tree

    Returns:
        ThresholdResult; value 1 flagged smooth for an empty tree
    """
    if tree.mode != EMBEDDED:
        raise InvariantError("log canonical thresholds need an embedded resolution tree")
    if tree.is_empty:
        logger.warning("Smooth germ: returning lct 1 by convention")
        return ThresholdResult(Fraction(1), None, smooth=True)
    if not tree.verify_ledger():
        raise InvariantError("resolution ledger fails the recurrence re-check")
    return _minimum(plane_ledger(tree))


def lct_of_germ(germ: CurveGerm, **kwargs) -> ThresholdResult:
    """Resolve in embedded mode and read off the threshold."""
    return lct_plane_germ(resolution_tree(germ, EMBEDDED, **kwargs))


def lct_am(m: int) -> Fraction:
    """Threshold of an A_m double point: 1/2 + 1/(m + 1)."""
    if m < 1:
        raise InvariantError(f"A_m needs m >= 1, got {m}")
    return Fraction(1, 2) + Fraction(1, m + 1)


def xg_ledger(degree: int, tree: BlowupTree, exponent: Optional[int] = None) -> List[DivisorLedgerEntry]:
    """Discrepancy ledger of the threefold X(g) over the curve C_d.

    Args:
        degree: d = deg C_d = multiplicity of X(g) at the origin
        tree: Resolution tree of the singular point of C_d
        exponent: Odd exponent e of x^e + y^e + z^e; only its range is checked

    Returns:
        Entry 0 for the origin blow-up, then one entry per center of
        multiplicity >= 2 in tree order
    """
    if degree < 3:
        raise InvariantError(f"X(g) needs a curve of degree >= 3, got {degree}")
    exponent = exponent if exponent is not None else 2 * degree + 1
    if exponent < 2 * degree + 1 or exponent % 2 == 0:
        raise InvariantError(f"exponent {exponent} must be odd and at least {2 * degree + 1}")

    ledger = [DivisorLedgerEntry(0, degree, 2, 3)]
    values: Dict[int, DivisorLedgerEntry] = {}
    first = ledger[0]
    for node in tree.centers():
        data = tree.node(node)
        m = data['multiplicity']
        if m < 2:
            continue
        through = [values[j] for j in data['divisors'] if j in values]
        a = m + first.a + sum(e.a for e in through)
        k = 2 + first.k + sum(e.k for e in through)
        entry = DivisorLedgerEntry(len(ledger), a, k, 3)
        values[node] = entry
        ledger.append(entry)
    logger.debug(f"X(g) ledger for degree {degree}: {[(e.a, e.k) for e in ledger]}")
    return ledger


def xg_ledger_consistent(degree: int, tree: BlowupTree, ledger: List[DivisorLedgerEntry]) -> bool:
    """Re-derive the threefold ledger with a plain index walk and compare."""
    centers = [n for n in tree.centers() if tree.node(n)['multiplicity'] >= 2]
    if len(ledger) != len(centers) + 1 or (ledger[0].a, ledger[0].k) != (degree, 2):
        return False
    position = {n: i + 1 for i, n in enumerate(centers)}
    for i, node in enumerate(centers, start=1):
        data = tree.node(node)
        parents = [ledger[position[j]] for j in data['divisors'] if j in position]
        if ledger[i].a != data['multiplicity'] + degree + sum(e.a for e in parents):
            return False
        if ledger[i].k != 4 + sum(e.k for e in parents):
            return False
    return True


def lct_xg(ledger: List[DivisorLedgerEntry]) -> ThresholdResult:
    """Threshold of the pair (A^3, X(g)); reports where the minimum is attained."""
    if not ledger:
        raise InvariantError("empty ledger")
    result = _minimum(ledger)
    if result.argmin != 0:
        logger.warning(f"X(g) threshold attained at E{result.argmin}, not at the first blow-up")
    return result


def char0_max_Am(degree: int) -> int:
    """Largest A_m on a reduced plane curve of degree 2d in characteristic 0: 3d(d-1)+1."""
    if degree < 2 or degree % 2:
        raise InvariantError(f"the bound covers even degrees 2d >= 2 only, got {degree}")
    d = degree // 2
    return 3 * d * (d - 1) + 1


def d2d_index(d: int) -> int:
    """A-index of the origin of (y z^(d-1) - x^d)^2 = y^(2d): 2d^2 - 1 = (2d)^2 / 2 - 1."""
    if d < 1:
        raise InvariantError(f"d must be positive, got {d}")
    index = 2 * d * d - 1
    if index > char0_max_Am(2 * d):
        raise InvariantError(f"A_{index} on a degree {2 * d} curve exceeds the characteristic-0 bound")
    return index


class Verdict(str, Enum):
    OBSTRUCTED = 'obstructed'
    NOT_OBSTRUCTED = 'not_obstructed'


@dataclass
class LiftingVerdict:
    """Whether the characteristic-0 bound rules out a discrepancy preserving lifting.

    A lifting needs a degree-d curve in characteristic 0 with an A_m or
    A_(m-1) point; both are impossible when m - 1 exceeds the bound.
    """

    curve: str
    degree: int
    m: int
    char0_max: int
    verdict: Verdict
    reason: str = field(default='')

    @property
    def liftable(self) -> bool:
        """False is a proof of non-liftability; True only means not obstructed."""
        return self.verdict == Verdict.NOT_OBSTRUCTED

    def to_dict(self) -> Dict[str, Any]:
        return {
            'curve': self.curve,
            'degree': self.degree,
            'm': self.m,
            'char0_max': self.char0_max,
            'verdict': self.verdict.value,
            'liftable': self.liftable,
            'reason': self.reason,
        }


def lifting_verdict(degree: int, m: int, curve: str = '') -> LiftingVerdict:
    """Test a degree-d curve with an A_m point (m = 2r) against the bound.

    Args:
        degree: Even degree of the curve
        m: Even A-index of its singular point
        curve: Label for the report
    """
    if m < 2 or m % 2:
        raise InvariantError(f"the A_2r / A_(2r-1) test needs even m >= 2, got {m}")
    bound = char0_max_Am(degree)
    if m - 1 > bound:
        verdict = Verdict.OBSTRUCTED
        reason = f"A_{m - 1} already exceeds the characteristic-0 maximum A_{bound} in degree {degree}"
    else:
        verdict = Verdict.NOT_OBSTRUCTED
        reason = f"A_{m - 1} is within the characteristic-0 maximum A_{bound} in degree {degree}"
    result = LiftingVerdict(curve, degree, m, bound, verdict, reason)
    logger.info(f"Lifting verdict for {curve or f'degree {degree}'}: {verdict.value} ({reason})")
    return result
