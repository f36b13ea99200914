"""Recompute the checked claims listed in a manifest and build a verification matrix.

Each manifest entry names a registered check, its parameters and the
expected value with its provenance tag. Expected values are never used
by the checks themselves; they only meet the computed value in
``compare``. Heavy intermediate results (implicit equations, singular
loci, classifications) are cached per process.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd
import yaml
from tqdm.auto import tqdm

from .curve import (
    CurvePoint, ProjPlaneCurve, d2d_curve, germ_at, implicitize, point_at_infinity,
    preset_curve, singular_points,
)
from .exceptions import CurveLabError, ManifestError
from .field import GF, QQ
from .invariants import (
    char0_max_Am, lct_plane_germ, lct_xg, lifting_verdict, xg_ledger, xg_ledger_consistent,
)
from .lattice import IntersectionLattice, contraction_check, mumford_pullback
from .poly import MultiPoly, parse_poly, polys_equal_up_to_unit
from .resolve import (
    EMBEDDED, NORMALIZATION, CurveGerm, SingularityType, classify, dual_graph,
    graphs_isomorphic, resolution_tree, same_discrepancy_profile,
)
from .semigroup import semigroup_with_retry
from .surfaces import (
    DoublePlane, boundary_components, chart_check, consistent_attachments,
    exceptional_count, jacobian_census, k3_lattice,
)
from .utils import SCHEMA_VERSION, format_rational

logger = logging.getLogger(__name__)

TAGS = ('PAPER', 'TRIVIAL', 'DERIVED')
REQUIRED_KEYS = ('id', 'section', 'location', 'tag', 'check', 'expected')
# claims kept in the matrix without a computation behind them
RECORDED = 'recorded'


class Status(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    SKIPPED = 'skipped'


# ---------------------------------------------------------------------------
# Settings and cached analyses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalysisSettings:
    """Tunables shared by every check, read from the configuration."""

    k_max: int = 4
    max_field_size: int = 1 << 20
    resolve_initial: int = 24
    resolve_max: int = 2048
    certify: bool = True
    series_initial: int = 32
    series_max: int = 4096
    conductor_factor: int = 2
    xg_exponent: Optional[int] = None
    b_self_intersection: int = -2
    b_attachments: Tuple[int, int] = (3, 13)
    a1_count: int = 5

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> 'AnalysisSettings':
        def get(section: str, key: str, default: Any) -> Any:
            return config.get(section, {}).get(key, default)

        return cls(
            k_max=get('curve', 'k_max', 4),
            max_field_size=get('field', 'max_size', 1 << 20),
            resolve_initial=get('resolve', 'initial_precision', 24),
            resolve_max=get('resolve', 'max_precision', 2048),
            certify=bool(get('resolve', 'certify_precision', True)),
            series_initial=get('series', 'initial_precision', 32),
            series_max=get('series', 'max_precision', 4096),
            conductor_factor=get('series', 'conductor_factor', 2),
            xg_exponent=get('invariants', 'xg_exponent', None),
            b_self_intersection=get('surfaces', 'b_self_intersection', -2),
            b_attachments=tuple(get('surfaces', 'b_attachments', [3, 13])),
            a1_count=get('surfaces', 'a1_count_for_k3', 5),
        )

    def resolve_kwargs(self) -> Dict[str, Any]:
        return {
            'initial_precision': self.resolve_initial,
            'max_precision': self.resolve_max,
            'certify': self.certify,
            'max_field_size': self.max_field_size,
        }

    def classify_kwargs(self) -> Dict[str, Any]:
        return dict(self.resolve_kwargs(), conductor_factor=self.conductor_factor,
                    series_max_precision=self.series_max)


@lru_cache(maxsize=None)
def implicit_curve(preset: str, n: int) -> ProjPlaneCurve:
    return implicitize(preset_curve(preset, n))


@lru_cache(maxsize=None)
def singular_locus(preset: str, n: int, settings: AnalysisSettings):
    return singular_points(implicit_curve(preset, n), settings.k_max, settings.max_field_size)


def unique_singular_point(preset: str, n: int, settings: AnalysisSettings) -> CurvePoint:
    locus = singular_locus(preset, n, settings)
    if len(locus) != 1:
        raise CurveLabError(f"{preset} n={n} has {len(locus)} singular points, expected one")
    return locus.points[0]


@lru_cache(maxsize=None)
def singular_germ(preset: str, n: int, settings: AnalysisSettings) -> CurveGerm:
    return germ_at(implicit_curve(preset, n), unique_singular_point(preset, n, settings))


@lru_cache(maxsize=None)
def classification(preset: str, n: int, settings: AnalysisSettings) -> SingularityType:
    return classify(singular_germ(preset, n, settings), **settings.classify_kwargs())


@lru_cache(maxsize=None)
def model_germ(text: str, characteristic: int = 0) -> CurveGerm:
    spec = QQ if characteristic == 0 else GF(characteristic)
    return CurveGerm.parse(text, spec)


def _germ(params: Dict[str, Any], settings: AnalysisSettings) -> CurveGerm:
    if 'germ' in params:
        return model_germ(params['germ'], params.get('p', 0))
    return singular_germ(params['preset'], params['n'], settings)


@lru_cache(maxsize=None)
def embedded_tree(key: Tuple, settings: AnalysisSettings):
    return resolution_tree(_germ(dict(key), settings), EMBEDDED, **settings.resolve_kwargs())


def _key(params: Dict[str, Any]) -> Tuple:
    return tuple(sorted((k, v) for k, v in params.items() if k in ('germ', 'p', 'preset', 'n')))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def check_curve_degree(params, settings):
    return implicit_curve(params['preset'], params['n']).degree


def check_curve_equation(params, settings):
    return implicit_curve(params['preset'], params['n']).F


def check_singular_locus(params, settings):
    locus = singular_locus(params['preset'], params['n'], settings)
    return {
        'count': len(locus),
        'multiplicities': [p.multiplicity for p in locus],
        'certified': locus.certified,
    }


def check_a_index(params, settings):
    return classification(params['preset'], params['n'], settings).m


def check_delta_agreement(params, settings):
    curve = preset_curve(params['preset'], params['n'])
    tree_delta = classification(params['preset'], params['n'], settings).delta
    semigroup = semigroup_with_retry(lambda precision: point_at_infinity(curve, precision).series,
                                     settings.series_initial, settings.series_max)
    return {'tree': tree_delta, 'semigroup': semigroup.delta, 'symmetric': semigroup.is_symmetric()}


def check_char2_exponent(params, settings):
    pair = classification(params['preset'], params['n'], settings).char2_pair
    return pair[0] if pair else None


def check_normal_form(params, settings):
    return classification(params['preset'], params['n'], settings).normal_form_match


def check_lct_plane(params, settings):
    return lct_plane_germ(embedded_tree(_key(params), settings)).value


def check_lct_xg(params, settings):
    preset, n = params['preset'], params['n']
    degree = implicit_curve(preset, n).degree
    tree = classification(preset, n, settings).tree
    ledger = xg_ledger(degree, tree, settings.xg_exponent)
    if not xg_ledger_consistent(degree, tree, ledger):
        raise CurveLabError("threefold ledger fails the recurrence re-check")
    result = lct_xg(ledger)
    return {'value': result.value, 'argmin': result.argmin}


def check_lifting_verdict(params, settings):
    preset, n = params['preset'], params['n']
    degree = implicit_curve(preset, n).degree
    m = classification(preset, n, settings).m
    verdict = lifting_verdict(degree, m, implicit_curve(preset, n).name)
    return {'m': m, 'bound': verdict.char0_max, 'verdict': verdict.verdict.value}


def check_char0_bound(params, settings):
    return char0_max_Am(params['degree'])


def check_blowup_count(params, settings):
    """Normalization count with its multiplicities; the embedded count rides along for the report."""
    germ = _germ(params, settings)
    tree = resolution_tree(germ, NORMALIZATION, **settings.resolve_kwargs())
    return {'blowups': tree.blowup_count, 'multiplicities': sorted(set(tree.multiplicity_sequence())),
            'embedded_blowups': embedded_tree(_key(params), settings).blowup_count}


def check_same_profile(params, settings):
    first, second = (resolution_tree(_germ(p, settings), NORMALIZATION, **settings.resolve_kwargs())
                     for p in (params['first'], params['second']))
    return same_discrepancy_profile(first, second)


def check_embedded_isomorphic(params, settings):
    first, second = (dual_graph(embedded_tree(_key(p), settings)) for p in (params['first'], params['second']))
    return graphs_isomorphic(first, second)


def check_d2d_index(params, settings):
    spec = QQ if params.get('p', 0) == 0 else GF(params['p'])
    C = d2d_curve(params['d'], spec)
    origin = CurvePoint.canonical(spec, (0, 0, 1))
    return classify(germ_at(C, origin), **settings.classify_kwargs()).m


def check_lct_synthetic(params, settings):
    m = params['m']
    germ = model_germ(f"z^2 - x^{m + 1}", 0)
    return lct_plane_germ(resolution_tree(germ, EMBEDDED, **settings.resolve_kwargs())).value


def check_census(params, settings):
    census = jacobian_census(DoublePlane(params['r']))
    return {'summary': census.summary, 'checks': all(census.checks.values())}


def check_exceptional_count(params, settings):
    return exceptional_count(DoublePlane(params['r'])).to_dict()


def check_boundary(params, settings):
    return len(boundary_components(DoublePlane(params['r'])))


def check_charts(params, settings):
    return all(c.nonsingular for c in chart_check(DoublePlane(params['r'])))


def _k3(settings: AnalysisSettings, params: Dict[str, Any]) -> IntersectionLattice:
    attachments = tuple(params.get('attach', settings.b_attachments))
    return k3_lattice(attachments, settings.b_self_intersection, settings.a1_count)


def check_k3_pullback(params, settings):
    result = mumford_pullback(_k3(settings, params), ['B1', 'B2'])
    return {'B1.B2': result.number('B1', 'B2'), 'B1^2': result.number('B1', 'B1'),
            'B2^2': result.number('B2', 'B2')}


def check_k3_contraction(params, settings):
    keep = params.get('keep', ['C8'])
    lattice = _k3(settings, params)
    result = contraction_check(lattice, keep, params.get('picard', len(lattice)))
    return {'singularities': result.singularities,
            'self_intersection': result.number(keep[0], keep[0]),
            'picard_after': result.picard_after}


def check_consistent_attachments(params, settings):
    found = consistent_attachments(Fraction(params['self']), Fraction(params['cross']),
                                   b_self_intersection=settings.b_self_intersection)
    return [list(pair) for pair in found]


def check_chain_pullback(params, settings):
    lattice = IntersectionLattice.chain(params['length'])
    lattice.add_curve('B', params.get('b_self', -2))
    for position in params['attach']:
        lattice.connect('B', f"C{position}")
    result = mumford_pullback(lattice, ['B'])
    return result.number('B', 'B')


def check_chain_contraction(params, settings):
    lattice = IntersectionLattice.chain(params['length'])
    result = contraction_check(lattice, params['keep'])
    return {'singularities': result.singularities,
            'self_intersection': result.number(params['keep'][0], params['keep'][0])}


CHECKS: Dict[str, Callable[[Dict[str, Any], AnalysisSettings], Any]] = {
    'curve_degree': check_curve_degree,
    'curve_equation': check_curve_equation,
    'singular_locus': check_singular_locus,
    'a_index': check_a_index,
    'delta_agreement': check_delta_agreement,
    'char2_exponent': check_char2_exponent,
    'normal_form': check_normal_form,
    'lct_plane': check_lct_plane,
    'lct_xg': check_lct_xg,
    'lifting_verdict': check_lifting_verdict,
    'char0_bound': check_char0_bound,
    'blowup_count': check_blowup_count,
    'same_profile': check_same_profile,
    'embedded_isomorphic': check_embedded_isomorphic,
    'd2d_index': check_d2d_index,
    'lct_synthetic': check_lct_synthetic,
    'census': check_census,
    'exceptional_count': check_exceptional_count,
    'boundary_components': check_boundary,
    'chart_check': check_charts,
    'k3_pullback': check_k3_pullback,
    'k3_contraction': check_k3_contraction,
    'consistent_attachments': check_consistent_attachments,
    'chain_pullback': check_chain_pullback,
    'chain_contraction': check_chain_contraction,
}


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------

@dataclass
class ManifestItem:
    """One claim to recompute."""

    id: str
    section: str
    location: str
    tag: str
    check: str
    expected: Any
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> Optional[int]:
        return self.params.get('n')

    @property
    def r(self) -> Optional[int]:
        return self.params.get('r')


def load_manifest(path: str) -> List[ManifestItem]:
    """Read and validate a manifest file.

    Raises:
        ManifestError: unreadable file, missing keys, unknown tag or check, duplicate id
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ManifestError(f"cannot read manifest {path}: {e}") from e
    if not isinstance(data, dict) or not isinstance(data.get('items'), list):
        raise ManifestError(f"manifest {path} needs a top-level 'items' list")

    items, seen = [], set()
    for entry in data['items']:
        if not isinstance(entry, dict):
            raise ManifestError("manifest entries must be mappings", entry)
        missing = [k for k in REQUIRED_KEYS if k not in entry]
        if missing:
            raise ManifestError(f"entry {entry.get('id', '?')} lacks {missing}", entry)
        if entry['tag'] not in TAGS:
            raise ManifestError(f"entry {entry['id']} has unknown tag {entry['tag']!r}", entry)
        if entry['check'] not in CHECKS and entry['check'] != RECORDED:
            raise ManifestError(f"entry {entry['id']} names unknown check {entry['check']!r}", entry)
        if entry['id'] in seen:
            raise ManifestError(f"duplicate id {entry['id']}", entry)
        seen.add(entry['id'])
        items.append(ManifestItem(entry['id'], entry['section'], entry['location'], entry['tag'],
                                  entry['check'], entry['expected'], entry.get('params') or {}))
    logger.info(f"Loaded {len(items)} manifest item(s) from {path}")
    return items


# ---------------------------------------------------------------------------
# Comparison and execution
# ---------------------------------------------------------------------------

def normalize(value: Any) -> Any:
    """Comparable, JSON-ready form: Fractions as 'p/q' (ints when integral)."""
    if isinstance(value, Enum):
        return normalize(value.value)
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else format_rational(value)
    if isinstance(value, MultiPoly):
        return str(value)
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    return value


def compare(check: str, computed: Any, expected: Any) -> bool:
    if check == 'curve_equation':
        wanted = parse_poly(expected, computed.spec, computed.variables)
        return polys_equal_up_to_unit(computed, wanted)
    computed, expected = normalize(computed), normalize(expected)
    if check == 'blowup_count' and isinstance(expected, dict):
        # only the keys the manifest states are claims
        return all(computed.get(k) == v for k, v in expected.items())
    return computed == expected


@dataclass
class VerificationItem:
    """Result row of the verification matrix."""

    id: str
    section: str
    location: str
    tag: str
    status: Status
    expected: Any
    computed: Any = None
    detail: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'section': self.section,
            'location': self.location,
            'tag': self.tag,
            'status': self.status.value,
            'expected': self.expected,
            'computed': self.computed,
            'detail': self.detail,
        }


def run_item(item: ManifestItem, settings: AnalysisSettings) -> Tuple[VerificationItem, float]:
    """Compute one item; failures of the computation become 'fail' rows."""
    start = time.perf_counter()
    try:
        computed = CHECKS[item.check](item.params, settings)
        status = Status.PASS if compare(item.check, computed, item.expected) else Status.FAIL
        detail = '' if status == Status.PASS else 'computed value differs from the expected value'
        computed = normalize(computed)
    except CurveLabError as e:
        computed, status, detail = None, Status.FAIL, f"{type(e).__name__}: {e}"
    runtime = time.perf_counter() - start
    row = VerificationItem(item.id, item.section, item.location, item.tag, status,
                           normalize(item.expected), computed, detail)
    return row, runtime


def _run_item_star(args: Tuple[ManifestItem, AnalysisSettings]) -> Tuple[VerificationItem, float]:
    return run_item(*args)


@dataclass
class VerificationReport:
    items: List[VerificationItem]
    runtimes: Dict[str, float] = field(default_factory=dict)
    n_max: int = 4
    r_max: int = 4

    def count(self, status: Status) -> int:
        return sum(1 for item in self.items if item.status == status)

    @property
    def passed(self) -> int:
        return self.count(Status.PASS)

    @property
    def failed(self) -> int:
        return self.count(Status.FAIL)

    @property
    def skipped(self) -> int:
        return self.count(Status.SKIPPED)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dataframe(self) -> pd.DataFrame:
        rows = [{
            'id': item.id,
            'section': item.section,
            'location': item.location,
            'tag': item.tag,
            'status': item.status.value,
            'expected': str(item.expected),
            'computed': str(item.computed),
        } for item in self.items]
        return pd.DataFrame(rows, columns=['id', 'section', 'location', 'tag', 'status', 'expected', 'computed'])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema_version': SCHEMA_VERSION,
            'n_max': self.n_max,
            'r_max': self.r_max,
            'summary': {'pass': self.passed, 'fail': self.failed, 'skipped': self.skipped},
            'items': [item.to_dict() for item in self.items],
        }

    def to_text(self) -> str:
        lines = []
        df = self.to_dataframe()
        for section, group in df.groupby('section', sort=False):
            lines.append(f"== {section} ==")
            for row in group.itertuples(index=False):
                marker = {'pass': '✅', 'fail': '❌', 'skipped': '⏭️'}[row.status]
                if row.status == 'fail':
                    lines.append(f"{marker} {row.id} [{row.tag}] {row.location}: "
                                 f"expected {row.expected}, computed {row.computed}")
                else:
                    lines.append(f"{marker} {row.id} [{row.tag}] {row.location}: {row.computed}")
        for item in self.items:
            if item.status == Status.FAIL and item.detail:
                lines.append(f"   {item.id}: {item.detail}")
        lines.append(f"{self.passed} passed, {self.failed} failed, {self.skipped} skipped")
        return '\n'.join(lines)


class PaperVerifier:
    """Runs every manifest item in scope and assembles an order-stable report."""

    def __init__(self, config: Dict[str, Any], manifest_path: Optional[str] = None):
        self.config = config
        section = config.get('verification', {})
        self.manifest_path = manifest_path or section.get('manifest', 'data/paper_claims.yaml')
        self.settings = AnalysisSettings.from_config(config)
        self.items = load_manifest(self.manifest_path)

    @staticmethod
    def in_scope(item: ManifestItem, n_max: int, r_max: int) -> bool:
        n_ok = item.n is None or item.n <= n_max
        r_ok = item.r is None or item.r <= r_max
        return n_ok and r_ok

    @staticmethod
    def _skip_reason(item: ManifestItem, n_max: int, r_max: int) -> str:
        if item.check == RECORDED:
            return "recorded claim, not recomputed"
        return f"outside n <= {n_max}, r <= {r_max}"

    def run(self, n_max: Optional[int] = None, r_max: Optional[int] = None,
            workers: Optional[int] = None, show_progress: Optional[bool] = None) -> VerificationReport:
        section = self.config.get('verification', {})
        n_max = n_max if n_max is not None else section.get('n_max', 4)
        r_max = r_max if r_max is not None else section.get('r_max', 4)
        workers = workers if workers is not None else section.get('workers', 1)
        show_progress = show_progress if show_progress is not None else section.get('show_progress', True)
        if n_max < 1 or r_max < 1 or workers < 1:
            raise ManifestError(f"n_max, r_max and workers must be positive, got {n_max}, {r_max}, {workers}")

        selected = [item for item in self.items
                    if item.check != RECORDED and self.in_scope(item, n_max, r_max)]
        logger.info(f"Verifying {len(selected)} of {len(self.items)} item(s) "
                    f"(n <= {n_max}, r <= {r_max}, {workers} worker(s))")
        jobs = [(item, self.settings) for item in selected]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(tqdm(pool.map(_run_item_star, jobs), total=len(jobs),
                                    desc="Verifying", disable=not show_progress))
        else:
            results = [_run_item_star(job) for job in tqdm(jobs, desc="Verifying", disable=not show_progress)]

        computed = {row.id: (row, runtime) for row, runtime in results}
        rows, runtimes = [], {}
        for item in self.items:
            if item.id in computed:
                row, runtime = computed[item.id]
                rows.append(row)
                runtimes[item.id] = round(runtime, 3)
            else:
                rows.append(VerificationItem(item.id, item.section, item.location, item.tag,
                                             Status.SKIPPED, normalize(item.expected),
                                             detail=self._skip_reason(item, n_max, r_max)))
        report = VerificationReport(rows, runtimes, n_max, r_max)
        logger.info(f"Verification finished: {report.passed} passed, {report.failed} failed, "
                    f"{report.skipped} skipped")
        return report
