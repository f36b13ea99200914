"""curvelab package.

Exact arithmetic over finite fields and the rationals, plane curves and
their singular points, blow-up resolution, thresholds and lattices of the
double planes S_r.
"""

from .config_manager import ConfigManager
from .exceptions import CurveLabError

# Arithmetic
from .field import FieldSpec, FieldElement, GF, QQ, field_extension, field_make
from .poly import MultiPoly, parse_poly
from .series import PowerSeries

# Curves and resolution
from .curve import ParamCurve, ProjPlaneCurve, CurvePoint, preset_curve, implicitize, singular_points, germ_at
from .resolve import CurveGerm, BlowupTree, resolution_tree, classify, dual_graph

# Invariants, surfaces and lattices
from .invariants import lct_plane_germ, lct_xg, xg_ledger, lifting_verdict
from .surfaces import DoublePlane, jacobian_census, exceptional_count
from .lattice import IntersectionLattice, mumford_pullback, contraction_check

# Verification
from .verification import PaperVerifier, load_manifest

__all__ = [
    'ConfigManager',
    'CurveLabError',

    'FieldSpec',
    'FieldElement',
    'GF',
    'QQ',
    'field_make',
    'field_extension',
    'MultiPoly',
    'parse_poly',
    'PowerSeries',

    'ParamCurve',
    'ProjPlaneCurve',
    'CurvePoint',
    'preset_curve',
    'implicitize',
    'singular_points',
    'germ_at',
    'CurveGerm',
    'BlowupTree',
    'resolution_tree',
    'classify',
    'dual_graph',

    'lct_plane_germ',
    'lct_xg',
    'xg_ledger',
    'lifting_verdict',
    'DoublePlane',
    'jacobian_census',
    'exceptional_count',
    'IntersectionLattice',
    'mumford_pullback',
    'contraction_check',

    'PaperVerifier',
    'load_manifest',
]
