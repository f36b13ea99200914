"""Exception hierarchy for curvelab.

Library code raises these; only the command-line front end turns them
into exit codes.
"""

from typing import Any, Optional


class CurveLabError(Exception):
    """Base class for every error raised by the toolkit."""


class FieldError(CurveLabError, ValueError):
    """Invalid field construction or an illegal field operation."""


class PolynomialError(CurveLabError, ValueError):
    """Malformed polynomial input or an operation that cannot be performed."""


class SeriesError(CurveLabError, ArithmeticError):
    """Power series operation outside its domain (non-unit inverse, bad composition)."""


class PrecisionError(SeriesError):
    """The tracked precision is too low to decide the requested quantity."""

    def __init__(self, message: str, precision: Optional[int] = None):
        super().__init__(message)
        self.precision = precision


class CurveError(CurveLabError, ValueError):
    """Invalid curve data or a point that does not lie on the curve."""


class CertificateError(CurveError):
    """The singular-locus search did not account for every elimination root.

    Attributes:
        chart: Chart in which the unaccounted factor was found
        residual: Text form of the unaccounted factor
        min_degree: Smallest extension degree holding one of its roots
    """

    def __init__(self, message: str, chart: str = '', residual: str = '',
                 min_degree: Optional[int] = None):
        super().__init__(message)
        self.chart = chart
        self.residual = residual
        self.min_degree = min_degree


class ResolutionError(CurveLabError):
    """A germ could not be resolved."""


class NonReducedGermError(ResolutionError, ValueError):
    """The δ cap was exceeded, so the germ has a multiple component."""


class InvariantError(CurveLabError, ValueError):
    """An invariant was requested outside the range where it is defined."""


class LatticeError(CurveLabError, ValueError):
    """Malformed lattice, singular Gram matrix or non-ADE cluster."""


class ManifestError(CurveLabError, ValueError):
    """The verification manifest is missing or malformed."""

    def __init__(self, message: str, entry: Any = None):
        super().__init__(message)
        self.entry = entry
