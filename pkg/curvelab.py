#!/usr/bin/env python3
"""
curvelab command-line front end

Analysis commands for plane curves over finite fields, their singular
points and resolutions, log canonical thresholds, the double planes S_r
and intersection lattices, plus a runner that recomputes every claim in
the verification manifest.

Exit codes: 0 success / all items pass, 1 verification failure or
computation error, 2 usage or input error.
"""

import argparse
import logging
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

# Ensure the repo root is on the path so `src` imports as a package
sys.path.insert(0, str(Path(__file__).parent))

from src.config_manager import ConfigManager
from src.curve import (
    ProjPlaneCurve, embedding_check, genus_check, germ_at, implicitize, preset_curve,
    singular_points,
)
from src.exceptions import (
    CurveLabError, FieldError, LatticeError, ManifestError, PolynomialError,
)
from src.field import QQ, field_make
from src.graph_analysis import ascii_graph, write_dot
from src.invariants import lct_plane_germ, lifting_verdict
from src.lattice import IntersectionLattice, contraction_check, mumford_pullback
from src.resolve import EMBEDDED, MODES, NORMALIZATION, CurveGerm, classify, dual_graph, resolution_tree
from src.surfaces import DoublePlane, exceptional_count, is_power_of_two, jacobian_census, k3_lattice
from src.utils import SCHEMA_VERSION, dump_json, format_rational, save_json_report, setup_logging, timings_path
from src.verification import AnalysisSettings, PaperVerifier

logger = logging.getLogger(__name__)

USAGE_ERRORS = (PolynomialError, FieldError, LatticeError, ManifestError)


class UsageError(Exception):
    """Bad flag combination detected after parsing."""


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _field(args: argparse.Namespace, max_size: int):
    if args.p == 0:
        return QQ
    return field_make('finite', args.p, args.k, max_size=max_size)


def _germ_from_args(args: argparse.Namespace, settings: AnalysisSettings) -> CurveGerm:
    if args.germ:
        return CurveGerm.parse(args.germ, _field(args, settings.max_field_size))
    if args.preset:
        C = implicitize(preset_curve(args.preset, args.n))
        locus = singular_points(C, settings.k_max, settings.max_field_size)
        if len(locus) != 1:
            raise UsageError(f"{C.name} has {len(locus)} singular points; pass --germ instead")
        return germ_at(C, locus.points[0])
    raise UsageError("give either --germ or --preset with --n")


def _resolve_kwargs(args: argparse.Namespace, settings: AnalysisSettings) -> Dict[str, Any]:
    kwargs = settings.resolve_kwargs()
    if getattr(args, 'precision', None):
        kwargs['precision'] = args.precision
    return kwargs


def _emit(payload: Dict[str, Any], text: str, args: argparse.Namespace, config: Dict[str, Any]):
    if args.json:
        output = config.get('output', {})
        print(dump_json(dict(payload, schema_version=SCHEMA_VERSION),
                        output.get('json_indent', 2), output.get('sort_keys', True)))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_curve_analyze(args, config, settings) -> int:
    kmax = args.kmax or settings.k_max
    if args.equation:
        C = ProjPlaneCurve.from_text(args.equation, _field(args, settings.max_field_size), name=args.equation)
        parametrized = None
    elif args.preset:
        parametrized = preset_curve(args.preset, args.n)
        C = implicitize(parametrized)
    else:
        raise UsageError("give either --preset with --n or --equation")

    locus = singular_points(C, kmax, settings.max_field_size)
    points = []
    lines = [f"{C.name}: degree {C.degree}", f"  F = {C.F}",
             f"  singular points: {len(locus)} (certificate complete: {locus.certified})"]
    for P in locus:
        kind = classify(germ_at(C, P), **settings.classify_kwargs())
        entry = {'point': P.to_dict(), 'singularity': kind.to_dict()}
        line = f"  ✅ {P.label} over F_{C.spec.p}^{P.field_degree}: {kind.label}, δ = {kind.delta}"
        if kind.m and C.degree % 2 == 0:
            ratio = Fraction(kind.m, C.degree ** 2)
            entry['degree_ratio'] = ratio
            line += f", m/deg^2 = {format_rational(ratio)} (char 0 bound ~ 3/4)"
        points.append(entry)
        lines.append(line)

    payload: Dict[str, Any] = {'curve': C.to_dict(), 'locus': locus.to_dict(), 'points': points}
    if parametrized is not None:
        report = embedding_check(parametrized)
        payload['embedding'] = report.to_dict()
        lines.append(f"  affine part: immersion {report.immersion}, injective {report.injective}")
    if locus.certified:
        genus = genus_check(C, [p['singularity']['delta'] for p in points])
        payload['genus'] = genus.to_dict()
        lines.append(f"  genus: arithmetic {genus.arithmetic_genus}, geometric {genus.geometric_genus}")
    else:
        lines.append("  genus: skipped, singular locus not certified up to --kmax")
    _emit(payload, '\n'.join(lines), args, config)
    return 0


def cmd_resolve(args, config, settings) -> int:
    germ = _germ_from_args(args, settings)
    tree = resolution_tree(germ, args.mode, **_resolve_kwargs(args, settings))
    payload = {'germ': str(germ), 'tree': tree.to_dict()}
    lines = [f"Germ {germ} over {tree.spec.label} ({args.mode})",
             f"  blow-ups: {tree.blowup_count}, multiplicities {tree.multiplicity_sequence()}",
             f"  δ = {tree.delta()}, branches = {tree.branch_count}"]
    if args.mode == EMBEDDED and not tree.is_empty:
        graph = dual_graph(tree)
        lines.append(ascii_graph(graph))
        if args.dot:
            write_dot(graph, args.dot)
            lines.append(f"  DOT written to {args.dot}")
    elif args.dot:
        raise UsageError("--dot needs --mode embedded")
    _emit(payload, '\n'.join(lines), args, config)
    return 0


def cmd_lct(args, config, settings) -> int:
    germ = _germ_from_args(args, settings)
    tree = resolution_tree(germ, EMBEDDED, **_resolve_kwargs(args, settings))
    result = lct_plane_germ(tree)
    text = f"lct = {format_rational(result.value)}"
    if result.smooth:
        text += " (smooth germ, convention)"
    else:
        text += f" attained at E{result.argmin}"
    _emit({'germ': str(germ), 'lct': result.to_dict(), 'ledger': tree.ledger()}, text, args, config)
    return 0


def cmd_verdict(args, config, settings) -> int:
    C = implicitize(preset_curve(args.preset, args.n))
    locus = singular_points(C, settings.k_max, settings.max_field_size)
    if len(locus) != 1:
        raise UsageError(f"{C.name} has {len(locus)} singular points")
    kind = classify(germ_at(C, locus.points[0]), **settings.classify_kwargs())
    verdict = lifting_verdict(C.degree, kind.m, C.name)
    marker = '❌' if not verdict.liftable else '✅'
    text = f"{marker} {C.name}: degree {C.degree}, A_{kind.m}; {verdict.verdict.value}: {verdict.reason}"
    _emit(verdict.to_dict(), text, args, config)
    return 0


def cmd_surface_census(args, config, settings) -> int:
    S = DoublePlane(args.r)
    census = jacobian_census(S)
    payload = census.to_dict()
    lines = [f"S_{S.r}: q = {S.q}, r' = {S.r_prime}",
             f"  g restricted to the monomial curve = {census.restriction}",
             f"  singularities: {census.summary}"]
    for entry in census.entries:
        lines.append(f"  {entry.label} x {entry.count} at {entry.location} (over F_2^{entry.field_degree})")
    if is_power_of_two(S.r):
        counts = exceptional_count(S)
        payload['exceptional'] = counts.to_dict()
        lines.append(f"  exceptional curves {counts.count}, Picard >= {counts.picard_lower_bound}, "
                     f"b_2 = {counts.betti2}")
    _emit(payload, '\n'.join(lines), args, config)
    return 0


def _lattice_from_args(args, settings, default_b: bool) -> IntersectionLattice:
    if args.file:
        return IntersectionLattice.from_file(args.file)
    if args.k3:
        attachments = _positions(args.attach) if args.attach else settings.b_attachments
        return k3_lattice(attachments, settings.b_self_intersection, settings.a1_count)
    if not args.chain or not args.chain.startswith('A') or not args.chain[1:].isdigit():
        raise UsageError("--chain must look like A15")
    lattice = IntersectionLattice.chain(int(args.chain[1:]))
    if default_b and args.attach:
        for i, position in enumerate(_positions(args.attach), start=1):
            lattice.add_curve(f"B{i}", args.b_self)
            lattice.connect(f"B{i}", f"C{position}")
    return lattice


def _positions(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(',') if x]
    except ValueError:
        raise UsageError(f"positions must be comma-separated integers, got {text!r}") from None


def _shuffled(lattice: IntersectionLattice, seed: Optional[int]) -> IntersectionLattice:
    if seed is None:
        return lattice
    order = lattice.curves
    random.Random(seed).shuffle(order)
    shuffled = IntersectionLattice(lattice.name)
    for curve in order:
        data = lattice.graph.nodes[curve]
        shuffled.add_curve(curve, data['self_intersection'], data['exceptional'])
    for a, b, data in lattice.graph.edges(data=True):
        shuffled.connect(a, b, data['multiplicity'])
    return shuffled


def cmd_lattice_pullback(args, config, settings) -> int:
    lattice = _shuffled(_lattice_from_args(args, settings, default_b=True), args.seed)
    result = mumford_pullback(lattice)
    lines = []
    for (a, b), value in result.intersections.items():
        lines.append(f"({a}·{b}) = {format_rational(value)}")
    _emit(result.to_dict(), '\n'.join(lines) or 'no curves to pull back', args, config)
    return 0


def cmd_lattice_contract(args, config, settings) -> int:
    lattice = _shuffled(_lattice_from_args(args, settings, default_b=False), args.seed)
    keep = [c for c in args.keep.split(',') if c]
    result = contraction_check(lattice, keep)
    lines = [f"singularities: {result.singularities or 'none'}",
             f"Picard rank {result.picard_before} -> {result.picard_after}"]
    for (a, b), value in result.intersections.items():
        lines.append(f"({a}'·{b}') = {format_rational(value)}")
    _emit(result.to_dict(), '\n'.join(lines), args, config)
    return 0


def cmd_paper_verify(args, config, settings) -> int:
    start = time.perf_counter()
    verifier = PaperVerifier(config, args.manifest)
    show_progress = not args.no_progress and not args.json
    report = verifier.run(args.n_max, args.r_max, args.workers, show_progress)
    if args.json:
        output = config.get('output', {})
        print(dump_json(report.to_dict(), output.get('json_indent', 2), output.get('sort_keys', True)))
    else:
        print(report.to_text())
    if args.csv:
        report.to_dataframe().to_csv(args.csv, index=False)
        logger.info(f"Verification matrix written to {args.csv}")
    if args.report:
        save_json_report(report.to_dict(), Path(args.report))
    if args.timings or args.report:
        # runtimes stay out of the report so reruns produce identical files
        target = Path(args.timings) if args.timings else timings_path(Path(args.report))
        save_json_report({'items': report.runtimes, 'total': round(time.perf_counter() - start, 3)}, target)
    if report.exit_code == 0:
        logger.info(f"🎉 All {report.passed} verification item(s) passed")
    else:
        logger.error(f"💥 {report.failed} verification item(s) failed")
    return report.exit_code


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_germ_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--germ', type=str, help='Local equation in x, z, e.g. "z^2+x^3"')
    parser.add_argument('--p', type=int, default=2, help='Characteristic, 0 for the rationals (default: 2)')
    parser.add_argument('--k', type=int, default=1, help='Extension degree of the coefficient field (default: 1)')
    parser.add_argument('--preset', choices=['cq2', 'cq'], help='Use the singular point of a preset curve')
    parser.add_argument('--n', type=int, default=2, help='Preset exponent, q = 2^n (default: 2)')
    parser.add_argument('--precision', type=int, help='Starting truncation order')
    parser.add_argument('--json', action='store_true', help='Print JSON instead of text')


def create_argument_parser() -> argparse.ArgumentParser:
    """Create command line argument parser."""
    parser = argparse.ArgumentParser(
        prog='curvelab',
        description="Exact computations with singular plane curves in positive characteristic",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  curvelab curve analyze --preset cq2 --n 2
  curvelab lct --germ "z^2+x^3" --p 0
  curvelab verdict --preset cq --n 3
  curvelab surface census --r 2 --json
  curvelab lattice pullback --chain A15 --attach 3,13
  curvelab lattice contract --k3 --keep C8
  curvelab paper-verify --n-max 4 --r-max 4
        """
    )
    parser.add_argument('--config', type=str, help='Path to configuration file (default: config.yaml if present)')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: from configuration)')
    commands = parser.add_subparsers(dest='command', required=True)

    curve = commands.add_parser('curve', help='Plane curve analysis')
    curve_commands = curve.add_subparsers(dest='curve_command', required=True)
    analyze = curve_commands.add_parser('analyze', help='Implicitize, find and classify singular points')
    analyze.add_argument('--preset', choices=['cq2', 'cq'], help='C_{2^n,2} or C_{2^n}')
    analyze.add_argument('--n', type=int, default=2, help='Exponent with q = 2^n (default: 2)')
    analyze.add_argument('--equation', type=str, help='Homogeneous equation in x, y, z')
    analyze.add_argument('--p', type=int, default=2, help='Characteristic for --equation (default: 2)')
    analyze.add_argument('--k', type=int, default=1, help='Extension degree for --equation (default: 1)')
    analyze.add_argument('--kmax', type=int, help='Largest extension degree searched for singular points')
    analyze.add_argument('--json', action='store_true', help='Print JSON instead of text')
    analyze.set_defaults(handler=cmd_curve_analyze)

    resolve = commands.add_parser('resolve', help='Blow-up tree of a germ')
    _add_germ_flags(resolve)
    resolve.add_argument('--mode', choices=MODES, default=NORMALIZATION, help='Resolution mode')
    resolve.add_argument('--dot', type=str, help='Write the dual graph as DOT (embedded mode)')
    resolve.set_defaults(handler=cmd_resolve)

    lct = commands.add_parser('lct', help='Log canonical threshold of a germ')
    _add_germ_flags(lct)
    lct.set_defaults(handler=cmd_lct)

    verdict = commands.add_parser('verdict', help='Characteristic-0 lifting test for a preset curve')
    verdict.add_argument('--preset', choices=['cq2', 'cq'], required=True)
    verdict.add_argument('--n', type=int, required=True)
    verdict.add_argument('--json', action='store_true', help='Print JSON instead of text')
    verdict.set_defaults(handler=cmd_verdict)

    surface = commands.add_parser('surface', help='Double planes S_r')
    surface_commands = surface.add_subparsers(dest='surface_command', required=True)
    census = surface_commands.add_parser('census', help='Singularities of S_r from the Jacobian scheme')
    census.add_argument('--r', type=int, required=True)
    census.add_argument('--json', action='store_true', help='Print JSON instead of text')
    census.set_defaults(handler=cmd_surface_census)

    lattice = commands.add_parser('lattice', help='Intersection lattices')
    lattice_commands = lattice.add_subparsers(dest='lattice_command', required=True)
    for name, handler, help_text in (('pullback', cmd_lattice_pullback, 'Mumford pullback of non-exceptional curves'),
                                     ('contract', cmd_lattice_contract, 'Contract all curves except --keep')):
        sub = lattice_commands.add_parser(name, help=help_text)
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument('--chain', type=str, help='A_n chain of (-2)-curves, e.g. A15')
        source.add_argument('--file', type=str, help='Lattice text file')
        source.add_argument('--k3', action='store_true', help='Resolved S_1 lattice')
        sub.add_argument('--attach', type=str, help='Chain positions of B1, B2, e.g. 3,13')
        sub.add_argument('--seed', type=int, help='Shuffle the curve order with this seed')
        sub.add_argument('--json', action='store_true', help='Print JSON instead of text')
        if name == 'pullback':
            sub.add_argument('--b-self', type=int, default=-2, help='Self-intersection of B curves (default: -2)')
        else:
            sub.add_argument('--keep', type=str, required=True, help='Comma-separated curves to keep')
        sub.set_defaults(handler=handler)

    verify = commands.add_parser('paper-verify', help='Recompute every manifest claim')
    verify.add_argument('--n-max', type=int, help='Largest n for curve items (default: from configuration)')
    verify.add_argument('--r-max', type=int, help='Largest r for surface items (default: from configuration)')
    verify.add_argument('--manifest', type=str, help='Manifest file (default: from configuration)')
    verify.add_argument('--workers', type=int, help='Worker processes (default: from configuration)')
    verify.add_argument('--csv', type=str, help='Write the verification matrix as CSV')
    verify.add_argument('--report', type=str, help='Write the JSON report (and a sibling timings file)')
    verify.add_argument('--timings', type=str, help='Write per-item runtimes to this JSON file')
    verify.add_argument('--no-progress', action='store_true', help='Disable the progress bar')
    verify.add_argument('--json', action='store_true', help='Print JSON instead of text')
    verify.set_defaults(handler=cmd_paper_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function."""
    parser = create_argument_parser()
    args = parser.parse_args(argv)

    config_path = args.config or ('config.yaml' if Path('config.yaml').exists() else None)
    config_manager = ConfigManager(config_path)
    config = config_manager.get_config()
    logging_config = config.get('logging', {})
    level = args.log_level or logging_config.get('level', 'INFO')
    log_file = logging_config.get('log_file') if logging_config.get('save_logs') else None
    setup_logging(level, log_file)

    if not config_manager.validate_config():
        logger.error(f"Invalid configuration: {config_path}")
        return 2
    settings = AnalysisSettings.from_config(config)
    if getattr(args, 'kmax', None) is not None and args.kmax < 1:
        parser.print_usage(sys.stderr)
        logger.error("--kmax must be positive")
        return 2

    try:
        return args.handler(args, config, settings)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error(f"❌ {e}")
        return 2
    except USAGE_ERRORS as e:
        logger.error(f"❌ Invalid input: {e}")
        return 2
    except CurveLabError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return 1
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 1


if __name__ == "__main__":
    sys.exit(main())
