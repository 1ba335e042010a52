"""
Command line front end: ``padicwave <command> [options]``.

Every command writes a structured text report to stdout (or ``--out``) and
exits with 0 when all checks pass, 1 when a check fails and 2 for a
configuration error or an exceeded guard.

"""

import argparse
import itertools
import logging
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import __version__, config, constants
from .dilation import (
    cyclic_dilation, is_ball_morphism, is_dilation, s_dilation_classify,
    s_dilation_sweep, verify_quincunx_actions, verify_s_actions,
    zero_ball_orbit_check)
from .exceptions import GuardError
from .metric import (
    complete_flag, group_closure_check, is_isometry_deformed,
    is_isometry_standard, isometry_oracle, isometry_sweep)
from .monna import (
    DigitSystem, det_compatibility, estimate_measure, haar_image_check,
    overlap_measure, real_image_1d, rho_translates, sample_R)
from .spectral import eigen_check, fourier_mother_predicate, frequency_metric
from .utils.checks import (
    check_alpha, check_digits, check_layer, check_matrix, check_metric,
    check_positive, check_prime)
from .utils.io import Report, export_intervals, export_points, write_report
from .wavelet import (
    enumerate_k, expand_mother, expansion_function, mother_wavelet,
    orthonormality_suite, parseval_check, wavelet_indices)

logger = logging.getLogger(__name__)

COMMANDS = ("verify-isometry", "verify-dilation", "basis", "parseval",
            "spectral", "monna", "verify-all")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved settings of one run.

    Attributes
    ----------
    command : str
    metric : DeformedMetric
    matrix : PadicMatrix
    scales : int
        J, the largest |j| (the partial-sum length for parseval)
    depth : int
        translation depth
    alpha : tuple of fractions.Fraction
    series_depth : int
        T
    grid : int
        m
    trials : int
    seed : int
    digits : tuple or None
        Monna digit list; None for the lexicographic digits
    layer : str
    sweep : bool
    out : str or None
    csv : str or None

    """
    command: str
    metric: object
    matrix: object
    scales: int = constants.DEFAULT_SCALES
    depth: int = constants.DEFAULT_DEPTH
    alpha: tuple = (Fraction(1), Fraction(2))
    series_depth: int = None
    grid: int = None
    trials: int = constants.DEFAULT_TRIALS
    seed: int = constants.DEFAULT_SEED
    digits: tuple = None
    layer: str = "auto"
    sweep: bool = False
    out: str = None
    csv: str = None

    @property
    def p(self):
        return self.metric.p

    @property
    def dim(self):
        return self.metric.dim

    def rng(self):
        return np.random.default_rng(self.seed)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", help="prime p")
    common.add_argument("--dim", help="dimension d")
    common.add_argument(
        "--metric",
        help="packaged name (standard, s, q, flag), description file, or "
             "inline weights \"w1,w2[|U rows]\"")
    common.add_argument(
        "--matrix",
        help="alias (S, Q, U, UQU, cyclic) or rows such as \"1,-1;1,1\"")
    common.add_argument("--scales", default=constants.DEFAULT_SCALES,
                        help="largest |j|, or J for parseval")
    common.add_argument("--depth", default=constants.DEFAULT_DEPTH,
                        help="translation depth")
    common.add_argument("--alpha", default="1,2",
                        help="comma separated orders of D^alpha")
    common.add_argument("--layer", default="auto",
                        help="D^alpha evaluation: auto, exact or float")
    common.add_argument("--series-depth", help="Monna truncation depth T")
    common.add_argument("--grid", help="Monna grid exponent m")
    common.add_argument("--digits",
                        help="Monna digit vectors separated by \";\"")
    common.add_argument("--trials", default=constants.DEFAULT_TRIALS,
                        help="sampled pairs per isometry oracle call")
    common.add_argument("--sweep", action="store_true",
                        help="verify-isometry: classify every matrix mod p^2")
    common.add_argument("--seed", default=constants.DEFAULT_SEED)
    common.add_argument("--out", help="write the report here")
    common.add_argument("--csv", help="Monna point set export")
    common.add_argument("--verbose", action="store_true")
    common.add_argument("--log-level",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    parser = argparse.ArgumentParser(
        prog="padicwave",
        description="Exact checks for wavelets on deformed p-adic spaces.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s {}".format(__version__))
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args):
    """
    Validate parsed arguments into a RunConfig.

    Raises
    ------
    ValueError, TypeError, OSError : invalid or unreadable settings

    """
    p = check_prime(args.prime) if args.prime is not None else None
    d = check_positive("dim", args.dim) if args.dim is not None else None
    name = args.metric
    if name is None:
        name = "s" if (p in (None, 2) and d in (None, 2)) else "flag"
    metric = check_metric(name, p, d)
    matrix = args.matrix
    if matrix is None:
        matrix = config.METRIC_MATRICES.get(str(name).lower(), "cyclic")
    A = check_matrix(matrix, metric.p, metric.dim)
    T, m = constants.MONNA_DEFAULTS.get(metric.dim, constants.MONNA_FALLBACK)
    if args.series_depth is not None:
        T = check_positive("series-depth", args.series_depth)
    if args.grid is not None:
        m = check_positive("grid", args.grid)
    if m > T:
        raise ValueError("grid {} exceeds series depth {}".format(m, T))
    digits = None
    if args.digits is not None:
        digits = check_digits(args.digits, metric.dim)
    try:
        seed = int(args.seed)
    except ValueError:
        raise ValueError('seed: "{}" is not an integer'.format(args.seed))
    return RunConfig(
        command=args.command,
        metric=metric,
        matrix=A,
        scales=check_positive("scales", args.scales),
        depth=check_positive("depth", args.depth),
        alpha=tuple(check_alpha(a) for a in str(args.alpha).split(",")),
        series_depth=T,
        grid=m,
        trials=check_positive("trials", args.trials),
        seed=seed,
        digits=digits,
        layer=check_layer(args.layer),
        sweep=args.sweep,
        out=args.out,
        csv=args.csv,
    )


def _header(cfg, report):
    report.field("prime", cfg.p)
    report.field("dimension", cfg.dim)
    report.field("metric", cfg.metric)
    report.field("matrix", cfg.matrix)


def cmd_isometry(cfg, report):
    """Classifier against the sampling oracle for the configured matrix."""
    _header(cfg, report)
    report.field("trials", cfg.trials)
    rng = cfg.rng()
    M, metric = cfg.matrix, cfg.metric
    predicted = is_isometry_deformed(M, metric)
    observed = isometry_oracle(M, metric, cfg.trials, rng)
    report.field("standard isometry", is_isometry_standard(M))
    report.field("deformed isometry", predicted)
    report.check("classifier agrees with oracle", predicted == observed,
                 "oracle={}".format(observed))
    if metric.conjugation is not None:
        report.check("conjugation is a standard isometry",
                     is_isometry_standard(metric.U))
    report.check("isometry group closed under products and inverses",
                 group_closure_check(metric, rng))
    if cfg.sweep:
        disagreements = isometry_sweep(metric, trials=cfg.trials, rng=rng)
        report.check("classifier agrees with oracle on all classes mod p^{}"
                     .format(constants.RESIDUE_DEPTH), not disagreements,
                     "{} disagreements".format(len(disagreements)))
        report.extend(str(M) for M in disagreements)


def _is_metric_s(metric):
    return (metric.p, metric.weights, metric.conjugation) == \
        (2, (constants.DEFAULT_WEIGHT, Fraction(0)), None)


def cmd_dilation(cfg, report):
    """Dilation certificate, ball morphism and orbit identities."""
    _header(cfg, report)
    A, metric = cfg.matrix, cfg.metric
    cert = is_dilation(A, metric, constants.RESIDUE_DEPTH)
    report.extend(cert.lines())
    report.check("A is a dilation", cert.verdict)
    if cert.verdict:
        report.check("A maps balls onto balls", is_ball_morphism(A, metric))
        for identity in zero_ball_orbit_check(A, metric):
            report.check(identity.name, identity.holds, identity.witness)
    if _is_metric_s(metric):
        report.check("congruence classification agrees",
                     s_dilation_classify(A) == cert.verdict)
        disagreements = s_dilation_sweep(metric)
        report.check("classification agrees on all 256 matrices mod 4",
                     not disagreements,
                     "{} disagreements".format(len(disagreements)))
    if (cfg.p, cfg.dim) == (2, 2):
        report.section("ball actions")
        for identity in verify_s_actions() + verify_quincunx_actions():
            report.check(identity.name, identity.holds, identity.witness)


def cmd_basis(cfg, report):
    """Exact orthonormality of the wavelet family and mother expansions."""
    _header(cfg, report)
    report.field("scales", cfg.scales)
    report.field("depth", cfg.depth)
    A = cfg.matrix
    result = orthonormality_suite(A, cfg.metric, cfg.scales, cfg.depth)
    report.extend(result.lines())
    report.check("A is a dilation", result.dilation)
    report.check("family is orthonormal", not result.failures,
                 "{} ordered pairs".format(result.pairs))
    for k in enumerate_k(A):
        terms = expand_mother(A, k, cfg.metric)
        report.check("Psi_{} is its subball expansion".format(k),
                     expansion_function(A, terms) == mother_wavelet(A, k))
        report.check("F[Psi_{}] is a shifted unit ball".format(k),
                     fourier_mother_predicate(A, k))


def cmd_parseval(cfg, report):
    """Partial Parseval sum of the unit ball indicator."""
    _header(cfg, report)
    J = cfg.scales
    total = parseval_check(cfg.matrix, J)
    expected = 1 - Fraction(cfg.p) ** (-J)
    report.field("J", J)
    report.field("sum", total)
    report.check("sum equals 1 - p^-J", total == expected, expected)


def cmd_spectral(cfg, report):
    """Eigenfunction relation of D^alpha on the wavelet family."""
    _header(cfg, report)
    A, metric = cfg.matrix, cfg.metric
    fm = frequency_metric(A, metric)
    report.field("frequency metric", fm)
    report.field("layer", cfg.layer)
    indices = wavelet_indices(A, cfg.scales, cfg.depth)
    for alpha in cfg.alpha:
        failed = [idx for idx in indices
                  if not eigen_check(A, metric, idx, alpha, cfg.layer, fm)]
        report.check("D^{} Psi = lambda Psi".format(alpha), not failed,
                     "{} of {} indices".format(
                         len(indices) - len(failed), len(indices)))
        report.extend(str(idx) for idx in failed)


def _overlap_vectors(sys, depth=2):
    ks = [k for k in itertools.product((-1, 0, 1), repeat=sys.dim) if any(k)]
    for n in rho_translates(sys, depth):
        if any(n) and n not in ks:
            ks.append(n)
    return ks


def _digit_system(cfg):
    rows = cfg.matrix.to_integers(signed=True)
    if cfg.digits is None:
        return DigitSystem.standard(cfg.matrix)
    return DigitSystem(cfg.p, rows, cfg.digits)


def cmd_monna(cfg, report):
    """Box-count estimates that R has measure one and tiles by translates."""
    sys = _digit_system(cfg)
    T, m = cfg.series_depth, cfg.grid
    report.field("A", sys.matrix)
    report.field("digits", sys.digits)
    report.field("T", T)
    report.field("m", m)
    report.field("det compatible", det_compatibility(sys.matrix, sys.p))
    points = sample_R(sys, T)
    if cfg.csv:
        export_points(points, cfg.csv, m)
    fine = estimate_measure(points, m)
    coarse = estimate_measure(points, m - 1)
    report.field("outer m={}".format(m - 1), coarse.outer)
    report.field("outer m={}".format(m), fine.outer)
    report.field("inner m={}".format(m), fine.inner)
    report.check("outer estimate non-increasing", fine.outer <= coarse.outer)
    low, high = constants.AREA_RANGE
    report.check("R has measure one",
                 fine.brackets(1) and low <= fine.outer <= high,
                 "{} <= 1 <= {}".format(fine.inner, fine.outer))
    for k in _overlap_vectors(sys):
        now = overlap_measure(sys, k, T, m, points)
        before = overlap_measure(sys, k, T, m - 1, points)
        report.check("R and R+{} overlap in measure zero".format(k),
                     now <= constants.OVERLAP_BOUND and now <= before,
                     "{} at m={}, {} at m={}".format(now, m, before, m - 1))
    if sys.dim == 1 and sys.matrix == ((sys.p,),):
        if sys.p == 2:
            report.check("rho maps 2-adic wavelets to Haar wavelets",
                         haar_image_check())
        if cfg.csv:
            pieces = real_image_1d(mother_wavelet(cfg.matrix, (1,)), sys)
            export_intervals(pieces, cfg.csv + ".intervals",
                             ["A: {}".format(sys.matrix),
                              "digits: {}".format(sys.digits)])


def cmd_all(cfg, report):
    """The full acceptance suite; --trials and --seed apply."""
    s = check_metric("s")
    q = check_metric("q")
    S = check_matrix("S", 2, 2)
    Q = check_matrix("Q", 2, 2)
    UQU = check_matrix("UQU", 2, 2)
    base = replace(cfg, scales=2, depth=2, sweep=False, out=None, csv=None)

    for p in (2, 3):
        report.section("isometries, complete flag p={}".format(p))
        flag = complete_flag(p, 2)
        disagreements = isometry_sweep(flag, trials=cfg.trials, rng=cfg.rng())
        report.check("classifier agrees with oracle mod p^2",
                     not disagreements,
                     "{} disagreements".format(len(disagreements)))

    report.section("dilations")
    report.check("S dilation for s", is_dilation(S, s).verdict)
    report.check("Q not a dilation for s", not is_dilation(Q, s).verdict)
    report.check("UQU^-1 dilation for s", is_dilation(UQU, s).verdict)
    report.check("Q dilation for q", is_dilation(Q, q).verdict)
    report.check("s classification on 256 matrices", not s_dilation_sweep(s))
    for identity in verify_s_actions() + verify_quincunx_actions():
        report.check(identity.name, identity.holds, identity.witness)

    flag3 = complete_flag(3, 2)
    families = [
        ("S", S, s),
        ("Q", Q, q),
        ("cyclic p=3", cyclic_dilation(3, 2), flag3),
    ]
    for label, A, metric in families:
        report.section("basis {}".format(label))
        cmd_basis(replace(base, matrix=A, metric=metric), report)
        report.section("spectral {}".format(label))
        cmd_spectral(replace(base, matrix=A, metric=metric,
                             alpha=(Fraction(1), Fraction(2))), report)
        cmd_spectral(replace(base, matrix=A, metric=metric,
                             alpha=(Fraction(1, 2),), layer="float"), report)

    report.section("parseval")
    for p in (2, 3):
        A = cyclic_dilation(p, 1)
        for J in (1, 4, 8):
            total = parseval_check(A, J)
            report.check("p={} J={}: {}".format(p, J, total),
                         total == 1 - Fraction(p) ** (-J))

    report.section("fourier")
    for label, A in (("S", S), ("Q", Q), ("[2]", cyclic_dilation(2, 1)),
                     ("[3]", cyclic_dilation(3, 1))):
        report.check("F[Psi_k] for {}".format(label), all(
            fourier_mother_predicate(A, k) for k in enumerate_k(A)))

    report.section("monna")
    report.check("Haar images", haar_image_check())
    unit = DigitSystem(2, ((2,),), ((0,), (1,)))
    points = sample_R(unit, 12)
    report.check("digits {0,1}: measure one at every grid", all(
        estimate_measure(points, m).outer == 1 for m in range(1, 13)))
    wide = DigitSystem(2, ((2,),), ((0,), (3,)))
    outer = estimate_measure(sample_R(wide, 12), 6).outer
    report.check("digits {0,3}: R does not have measure one", outer >
                 constants.FAILED_AREA_BOUND, outer)
    report.check("det compatibility", det_compatibility(Q)
                 and det_compatibility(((2,),), 2)
                 and not det_compatibility(((6,),), 2))
    T, m = constants.MONNA_DEFAULTS[2]
    cmd_monna(replace(base, matrix=Q, metric=q, series_depth=T, grid=m,
                      digits=None), report)


HANDLERS = {
    "verify-isometry": cmd_isometry,
    "verify-dilation": cmd_dilation,
    "basis": cmd_basis,
    "parseval": cmd_parseval,
    "spectral": cmd_spectral,
    "monna": cmd_monna,
    "verify-all": cmd_all,
}


def _configure_logging(args):
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    if args.log_level:
        level = getattr(logging, args.log_level)
    logging.basicConfig(format=LOG_FORMAT, level=level, stream=sys.stderr)


def run(cfg, stream=None):
    """
    Execute one command.

    Returns
    -------
    code : int
        EXIT_OK, EXIT_FAILURE or EXIT_CONFIG
    report : Report

    """
    report = Report("padicwave {}".format(cfg.command))
    try:
        HANDLERS[cfg.command](cfg, report)
    except GuardError as e:
        logger.error("guard %s exceeded", e.guard)
        report.field("guard", e.guard)
        report.check(cfg.command, False, str(e))
        write_report(report, cfg.out, stream)
        return constants.EXIT_CONFIG, report
    write_report(report, cfg.out, stream)
    code = constants.EXIT_OK if report.passed else constants.EXIT_FAILURE
    return code, report


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        cfg = resolve_config(args)
    except (GuardError, ValueError, TypeError, OSError) as e:
        logger.error("configuration error: %s", e)
        sys.stderr.write("padicwave: {}\n".format(e))
        return constants.EXIT_CONFIG
    try:
        code, _ = run(cfg, sys.stdout)
    except (ValueError, OSError) as e:
        logger.error("%s failed: %s", cfg.command, e)
        sys.stderr.write("padicwave: {}\n".format(e))
        return constants.EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
