"""
Command-Line Front End

Subcommands check, locate, classify, height, qpoly, density, predict, count and report
over a fan given as a .fan file or a library name.

Author: Mohammed Ismail AbdElmageid
"""
import argparse
import contextlib
import csv
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import mpmath

from cli.console import print_error, print_header, print_success, print_warning
from core.config import ToolkitConfig, load_config
from core.exceptions import (
    BudgetExceededError,
    ConfigurationError,
    DivergenceError,
    FanFileError,
    FanValidationError,
    InternalConsistencyError,
    UnsupportedInputError,
)
from core.fan import Fan, OrbifoldWeights, PLFunction, is_complete, is_regular, locate, require_valid, validate_fan
from core.fan_file import read_fan_file
from core.heights import format_height, global_height
from core.library import LIBRARY, library_fan
from core.picard import alpha_constants, picard
from core.points import Variant, classify_batch, multiplicity_profile, parse_point
from counting.count_manager import count, write_count_csv
from counting.enumerators import enumerate_points
from counting.fitting import count_and_fit, doubling_ratios, write_report_csv
from series.constants import CSV_HEADER, predicted_constant
from series.densities import archimedean_density, archimedean_density_numeric, local_density
from series.fan_functions import FanFunctionVariant, InvariantConeSet, q_polynomial, verify_degree_bounds

logger = logging.getLogger(__name__)

FANS_DIR = Path(__file__).parent.parent / "fans"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

VARIANT_CHOICES = [v.value for v in Variant]


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def resolve_fan(spec: str) -> Tuple[Fan, Optional[OrbifoldWeights]]:
    """A .fan path, a library name, or the stem of a file under fans/"""
    path = Path(spec)
    if path.is_file():
        return read_fan_file(path)
    if spec in LIBRARY:
        return library_fan(spec), None
    shipped = FANS_DIR / f"{spec}.fan"
    if shipped.is_file():
        return read_fan_file(shipped)
    raise FanFileError(f"'{spec}' is neither a file nor a library fan ({', '.join(LIBRARY)})")


def resolve_weights(args, fan: Fan, file_weights: Optional[OrbifoldWeights]) -> OrbifoldWeights:
    if args.weights:
        try:
            weights = OrbifoldWeights.parse(args.weights)
        except ValueError as e:
            raise ConfigurationError(str(e))
    else:
        weights = file_weights or OrbifoldWeights.uniform(fan, 1)
    weights.check_against(fan)
    return weights


def parse_variant(text: str) -> Variant:
    try:
        return Variant.parse(text)
    except ValueError as e:
        raise ConfigurationError(str(e))


def parse_bound(text: Optional[str]) -> Fraction:
    if text is None:
        raise ConfigurationError("--bound is required for this command")
    try:
        bound = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"Invalid bound '{text}'")
    if bound <= 0:
        raise ConfigurationError(f"bound must be positive, got {text}")
    return bound


def parse_rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"Invalid {name} '{text}'")


def parse_integers(text: str, name: str) -> List[int]:
    try:
        return [int(token) for token in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigurationError(f"Invalid {name} '{text}': expected integers")


def load_inputs(args, validate: bool = True) -> Tuple[Fan, OrbifoldWeights]:
    """Resolve --fan and --weights; invalid fans raise FanValidationError unless validate is off"""
    fan, file_weights = resolve_fan(args.fan)
    if validate:
        require_valid(fan)
    return fan, resolve_weights(args, fan, file_weights)


@contextlib.contextmanager
def output_stream(args):
    """--out file, or stdout"""
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as stream:
            yield stream
    else:
        yield sys.stdout


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(args, config: ToolkitConfig) -> int:
    """Validate the fan and print regularity, completeness and Picard data"""
    fan, weights = load_inputs(args, validate=False)
    print_header(f"Fan {fan.describe()}: d={fan.dim}, {fan.ray_count} rays, {len(fan.maximal_cones)} maximal cones")
    report = validate_fan(fan)
    if not report.ok:
        for issue in report.issues:
            print_error(f"{issue.kind}: {issue.message}")
        raise FanValidationError(f"invalid fan {fan.describe()}", report)
    print_success("fan axioms hold")
    if is_regular(fan):
        print_success("regular (every maximal cone unimodular)")
    else:
        print_warning("not regular")
    certificate = is_complete(fan, probes=config.completeness_probes, seed=config.seed)
    if certificate:
        print_success(f"complete ({certificate.reason}, {certificate.probes_checked} probes)")
    else:
        print_warning(f"not complete: {certificate.reason} (witness {certificate.witness})")
        return EXIT_OK

    data = picard(fan)
    print_success(f"Picard rank b = {data.rank}")
    for j, cls in enumerate(data.class_of_ray):
        print(f"  [D_{j}] = {cls}")
    print(f"  [-K] = {data.anticanonical_class}")
    print(f"  m = ({weights.label()})")
    if weights.all_finite:
        print(f"  [-K - D] = {tuple(str(x) for x in data.log_anticanonical_class(fan, weights))}")
        alpha_direct, alpha_paper = alpha_constants(fan, weights, data)
        print(f"  alpha_direct = {alpha_direct}")
        print(f"  alpha_paper = {alpha_paper}")
    return EXIT_OK


def cmd_locate(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    vector = [parse_rational(token, "vector entry") for token in args.vector.replace(",", " ").split()]
    if len(vector) != fan.dim:
        raise ConfigurationError(f"vector has {len(vector)} entries, the fan lives in dimension {fan.dim}")
    location = locate(fan, vector)
    print(f"cone={location.cone}")
    print("coefficients=" + ",".join(str(c) for c in location.coefficients))
    return EXIT_OK


def cmd_classify(args, config: ToolkitConfig) -> int:
    """One CSV row per (point, variant)"""
    fan, weights = load_inputs(args)
    if not args.point:
        raise ConfigurationError("classify needs at least one --point")
    try:
        points = [parse_point(text) for text in args.point]
    except ValueError as e:
        raise ConfigurationError(str(e))
    for point in points:
        if point.dim != fan.dim:
            raise ConfigurationError(f"point {point} has {point.dim} coordinates, expected {fan.dim}")
    variants = [parse_variant(args.variant)] if args.variant else list(Variant)
    excluded = parse_integers(args.exclude, "excluded primes") if args.exclude else []
    verdicts = classify_batch(fan, weights, points, variants, excluded=excluded, workers=config.workers,
                              chunk_size=config.chunk_size)
    with output_stream(args) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["point", "variant", "verdict", "witness_prime", "reason"])
        for point, row in zip(points, verdicts):
            for variant, verdict in zip(variants, row):
                writer.writerow([str(point), variant.value, "true" if verdict else "false",
                                 verdict.witness_prime or "", verdict.reason])
    return EXIT_OK


def cmd_height(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    if not args.point:
        raise ConfigurationError("height needs --point")
    phi = PLFunction.anticanonical(fan) if args.anticanonical else PLFunction.log_anticanonical(fan, weights)
    for text in args.point:
        try:
            point = parse_point(text)
        except ValueError as e:
            raise ConfigurationError(str(e))
        height = global_height(fan, phi, point)
        print(f"{point}: {format_height(height)}")
        if args.verbose:
            profile = multiplicity_profile(fan, point)
            for p in profile.support:
                print(f"  p={p}: cone {profile.local[p].cone} lambda {profile.ray_multiplicities(p, fan.ray_count)}")
            print(f"  exact: H^{height.exact.root} = {height.exact.value}")
    return EXIT_OK


def _cone_set(args, fan: Fan) -> InvariantConeSet:
    if args.inertia:
        f_values = parse_integers(args.inertia, "inertia degrees")
        if len(f_values) != fan.orbit_count:
            raise ConfigurationError(f"{len(f_values)} inertia degrees for {fan.orbit_count} orbits")
        return InvariantConeSet.synthetic(fan, f_values)
    return InvariantConeSet.from_fan(fan)


def _fan_variant(text: str) -> FanFunctionVariant:
    try:
        return FanFunctionVariant.of(text)
    except ValueError as e:
        raise ConfigurationError(str(e))


def cmd_qpoly(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    variant = _fan_variant(args.variant or "campana")
    cone_set = _cone_set(args, fan)
    q = q_polynomial(cone_set, weights, variant)
    print(f"Q = {q.format()}")
    report = verify_degree_bounds(q, weights, variant)
    if report:
        print_success(f"degree bounds: {report.summary()}")
    else:
        print_warning(f"degree bounds: {report.summary()}")
    for label in report.separations:
        print_warning(f"literal bound fails on {label}, per-monomial bound holds")
    return EXIT_OK


def cmd_density(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    variant = _fan_variant(args.variant or "campana")
    s = parse_rational(args.s, "s")
    primes = parse_integers(args.prime, "primes") if args.prime else [2]
    for p in primes:
        density = local_density(fan, weights, variant, p, s, target=config.density_target,
                                theta=Fraction(config.tail_theta).limit_denominator(1000))
        print(f"p={p} s={s} variant={variant.value}")
        print(f"  direct={mpmath.nstr(density.direct_value, 15)} (level {density.level}, "
              f"tail <= {mpmath.nstr(density.tail_bound, 3)})")
        print(f"  closed={mpmath.nstr(density.closed_value, 15)}")
        if density.consistent:
            print_success(f"agree within the tail bound (|diff| = {mpmath.nstr(density.discrepancy, 3)})")
        else:
            print_error(f"direct and closed differ by {mpmath.nstr(density.discrepancy, 3)}")
    if weights.all_finite and all(len(c) == fan.dim for c in fan.maximal_cones):
        exact = archimedean_density(fan, weights, s)
        print(f"d_inf={exact} ({float(exact):.12g})")
        if fan.dim <= 2:
            print(f"d_inf_numeric={archimedean_density_numeric(fan, weights, s):.12g}")
    return EXIT_OK


def cmd_predict(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    variant = _fan_variant(args.variant or "campana")
    report = predicted_constant(fan, weights, variant, primes_cutoff=config.primes_cutoff,
                                workers=config.workers, chunk_size=config.euler_chunk_size)
    print(report.to_keyvalue())
    with output_stream(args) as stream:
        print(CSV_HEADER, file=stream)
        print(report.csv_row(), file=stream)
    return EXIT_OK


def cmd_count(args, config: ToolkitConfig) -> int:
    fan, weights = load_inputs(args)
    variant = parse_variant(args.variant or "campana")
    bound = parse_bound(args.bound)
    if args.list:
        points = enumerate_points(fan, weights, variant, bound, budget=config.generic_budget,
                                  workers=config.workers, chunk_size=config.chunk_size,
                                  tolerance=config.near_cutoff_tolerance)
        with output_stream(args) as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["point", "height"])
            for point, height in points:
                writer.writerow([str(point), f"{float(mpmath.exp(height.log())):.12g}"])
        return EXIT_OK
    run = count(fan, weights, variant, bound, config, checkpoints=args.checkpoints)
    with output_stream(args) as stream:
        write_count_csv(run, stream=stream)
    if args.out:
        print_success(f"N({args.bound}) = {run.final_count} via {run.method} in {run.elapsed_ms:.0f} ms "
                      f"({run.audited} audited) -> {args.out}")
    return EXIT_OK


def cmd_report(args, config: ToolkitConfig) -> int:
    """Count, fit and compare with the predicted constant"""
    fan, weights = load_inputs(args)
    variant = parse_variant(args.variant or "campana")
    bound = parse_bound(args.bound)
    prediction = predicted_constant(fan, weights, variant, primes_cutoff=config.primes_cutoff,
                                    workers=config.workers, chunk_size=config.euler_chunk_size)
    run, comparison = count_and_fit(fan, weights, variant, bound, prediction.c_pred, config)
    fit = comparison.fit

    print_header(f"{fan.describe()} m=({weights.label()}) {variant.value}, B = {args.bound}")
    print(f"{'B':>16} {'N(B)':>14} {'fit':>16} {'residual':>12}")
    for b, n, f, r in zip(fit.bounds, fit.counts, fit.fitted, fit.residuals):
        print(f"{b:16.6g} {n:14.0f} {f:16.6g} {r:12.3e}")
    print()
    print(f"c_fit = {fit.c:.10g} +- {fit.c_err:.3g}")
    if fit.c2 is not None:
        print(f"c2 = {fit.c2:.6g} +- {fit.c2_err:.3g} ({fit.correction})")
    print(f"c_pred = {prediction.c_pred:.10g}")
    print(f"ratio = {comparison.ratio:.6f}")
    for note in run.notes:
        print_warning(note)
    for ratio in doubling_ratios(run)[-3:]:
        print(f"  N(B)/N(B/2) at B={ratio.bound:.4g}: {ratio.observed:.5f} (model {ratio.expected:.5f})")

    if args.counts_out:
        write_count_csv(run, path=args.counts_out)
    if args.out:
        write_report_csv(comparison, path=args.out)
        print_success(f"report written to {args.out}")
    else:
        write_report_csv(comparison, stream=sys.stdout)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--fan', required=True,
                        help='.fan file or library fan name (' + ', '.join(LIBRARY) + ')')
    common.add_argument('--weights', help='Orbifold weights, e.g. 2,2 or 2,inf (default: from file, else all 1)')
    common.add_argument('--variant', help='Point variant: ' + ', '.join(VARIANT_CHOICES) +
                        ' (qpoly/density also accept plain)')
    common.add_argument('--bound', help='Height bound B (integer, fraction or 1e7 notation)')
    common.add_argument('--primes-cutoff', type=int, help='Largest prime in the Euler product')
    common.add_argument('--workers', type=int, help='Worker threads')
    common.add_argument('--out', help='Output file (CSV)')
    common.add_argument('--seed', type=int, help='Seed for probes and audit sampling')
    common.add_argument('--config', help='Path to config.json')
    common.add_argument('--verbose', action='store_true', help='Debug logging')

    parser = argparse.ArgumentParser(
        description='Semi-integral points on split toric varieties over Q',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py check --fan fans/P1xP1.fan
  python main.py classify --fan P2 --weights 2,2,2 --point 4/9,6
  python main.py qpoly --fan P1 --weights 2,2 --variant campana
  python main.py density --fan P1 --weights 2,2 --prime 2,3,5
  python main.py count --fan P1 --weights 2,2 --bound 1e5 --out counts.csv
  python main.py report --fan P1 --weights 1,1 --variant campana --bound 1e7
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)

    check = subparsers.add_parser('check', parents=[common], help='Validate a fan')
    check.set_defaults(handler=cmd_check)

    locate_parser = subparsers.add_parser('locate', parents=[common], help='Minimal cone of a vector')
    locate_parser.add_argument('--vector', required=True, help='Comma-separated lattice vector')
    locate_parser.set_defaults(handler=cmd_locate)

    classify = subparsers.add_parser('classify', parents=[common], help='Classify torus points')
    classify.add_argument('--point', action='append', help='Point as comma-separated rationals, e.g. 4/9,6')
    classify.add_argument('--exclude', help='Primes excluded from the global condition')
    classify.set_defaults(handler=cmd_classify)

    height = subparsers.add_parser('height', parents=[common], help='Height of torus points')
    height.add_argument('--point', action='append', help='Point as comma-separated rationals')
    height.add_argument('--anticanonical', action='store_true', help='Use phi_Sigma instead of phi_Sigma,m')
    height.set_defaults(handler=cmd_height)

    qpoly = subparsers.add_parser('qpoly', parents=[common], help='Q polynomial and degree bounds')
    qpoly.add_argument('--inertia', help='Synthetic inertia degree per orbit, e.g. 1,2')
    qpoly.set_defaults(handler=cmd_qpoly)

    density = subparsers.add_parser('density', parents=[common], help='Local and archimedean densities')
    density.add_argument('--prime', help='Comma-separated primes (default 2)')
    density.add_argument('--s', default='1', help='Exponent s (default 1)')
    density.set_defaults(handler=cmd_density)

    predict = subparsers.add_parser('predict', parents=[common], help='Predicted leading constant')
    predict.set_defaults(handler=cmd_predict)

    count_parser = subparsers.add_parser('count', parents=[common], help='Count points up to the bound')
    count_parser.add_argument('--checkpoints', type=int, help='Number of checkpoints B * 2^-k')
    count_parser.add_argument('--list', action='store_true', help='List the points instead of counting')
    count_parser.set_defaults(handler=cmd_count)

    report = subparsers.add_parser('report', parents=[common], help='Count, fit and compare with c_pred')
    report.add_argument('--counts-out', help='Also write the checkpoint counts CSV here')
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config).with_overrides(workers=args.workers,
                                                         primes_cutoff=args.primes_cutoff,
                                                         seed=args.seed)
        mpmath.mp.dps = config.precision_dps
        return args.handler(args, config)
    except (FanValidationError, FanFileError, ConfigurationError, UnsupportedInputError, DivergenceError) as e:
        print_error(f"{type(e).__name__}: {e}")
        return EXIT_INVALID
    except BudgetExceededError as e:
        print_error(f"{e} (estimate {e.estimate}, budget {e.budget})")
        return EXIT_BUDGET
    except InternalConsistencyError as e:
        logger.exception("internal consistency check failed")
        print_error(f"{type(e).__name__}: {e}")
        return EXIT_INTERNAL
