"""
Main entry point for SingularShift - renormalized Born phase shifts of
singular power-law potentials.

Usage:
    python src/main.py phase-shift --potential lj12:1,1,1 --k 0.5,1,2 --scheme all
    python src/main.py compare --potential lj12:1,1,1 --k 1 --l 0
    python src/main.py sweep --config sweep.conf
"""
import argparse
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from core.config import AppConfig
from core.dimreg import ScatteringConfig, Scheme
from core.errors import RenormalizationError
from core.harness import (
    OUTPUT_FORMATS,
    compare_schemes,
    parse_potential_spec,
    parse_sweep_config,
    run_sweep,
    write_reports,
)
from core.logging_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SCHEME_ERROR = 1
EXIT_USAGE = 2

DEFAULT_SETTINGS = Path(__file__).parent.parent / "config.yaml"


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def _schemes(name: str):
    if name == "all":
        return list(Scheme)
    return [Scheme.parse(name)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singularshift",
        description="Renormalized first-order Born phase shifts of singular power-law potentials",
    )
    parser.add_argument(
        "--settings",
        type=Path,
        default=DEFAULT_SETTINGS,
        help="Settings file (default: config.yaml at the repository root)"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Override the logging level from the settings file"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    single = sub.add_parser("phase-shift", help="Phase shift from one or all schemes")
    single.add_argument("--potential", required=True, help="lj12:eta,alpha,beta | ljgen:eta,alpha,beta,m | terms:c/r^m,...")
    single.add_argument("--k", required=True, type=_float_list, help="Wave number(s), comma-separated")
    single.add_argument("--l", type=int, required=True, help="Partial wave")
    single.add_argument("--n", type=float, default=3.0, help="Spatial dimension (default: 3)")
    single.add_argument("--scheme", choices=[s.value for s in Scheme] + ["all"], default="all")
    single.add_argument("--eps", type=_positive_float, help="Split point for acont (default: 1/k)")
    single.add_argument("--eps-grid", type=_float_list, help="Cutoff grid for minsub, decreasing")
    single.add_argument("--tol", type=float, help="Agreement tolerance between schemes")
    single.add_argument("--format", choices=OUTPUT_FORMATS, default="table")

    compare = sub.add_parser("compare", help="Run all three schemes and check agreement")
    compare.add_argument("--potential", required=True)
    compare.add_argument("--k", type=float, required=True)
    compare.add_argument("--l", type=int, required=True)
    compare.add_argument("--tol", type=float, help="Agreement tolerance (default from settings)")
    compare.add_argument("--format", choices=OUTPUT_FORMATS, default="table")

    sweep = sub.add_parser("sweep", help="Run a parameter sweep from a config file")
    sweep.add_argument("--config", type=Path, required=True, help="key = value file or YAML")

    return parser


def _summarize(reports) -> int:
    for report in reports:
        if len(report.results) > 1:
            verdict = "agree" if report.agreement else "DISAGREE"
            logger.info(
                f"k={report.config.k:g}: schemes {verdict} "
                f"(max discrepancy {report.max_pairwise_discrepancy:.3e}, "
                f"tolerance {report.tolerance_used:.1e})"
            )
    return EXIT_SCHEME_ERROR if any(r.has_failures for r in reports) else EXIT_OK


def run(args, config: AppConfig) -> int:
    if args.command == "sweep":
        spec = parse_sweep_config(args.config)
        reports = run_sweep(spec, settings=config)
        write_reports(reports, spec.format, spec.output)
        return _summarize(reports)

    V = parse_potential_spec(args.potential)
    if args.command == "compare":
        cfg = ScatteringConfig(k=args.k, l=args.l)
        reports = [compare_schemes(V, cfg, list(Scheme), tol=args.tol, settings=config)]
    else:
        schemes = _schemes(args.scheme)
        reports = [
            compare_schemes(
                V, ScatteringConfig(k=k, l=args.l, n=args.n), schemes,
                tol=args.tol, settings=config, eps=args.eps, eps_grid=args.eps_grid,
            )
            for k in args.k
        ]
    write_reports(reports, args.format)
    return _summarize(reports)


def main(argv=None):
    """Main application entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = AppConfig.from_yaml(args.settings)
    except RenormalizationError as e:
        print(f"Failed to load settings: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    if args.log_level:
        config.logging.level = args.log_level
    setup_logging(config)

    try:
        code = run(args, config)
    except ValueError as e:
        # Malformed potential, sweep file, grid or configuration
        logger.error(f"{type(e).__name__}: {e}")
        sys.exit(EXIT_USAGE)
    except RenormalizationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.exit(EXIT_SCHEME_ERROR)
    sys.exit(code)


if __name__ == "__main__":
    main()
