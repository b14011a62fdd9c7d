"""Command line interface: ``gencauchy <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 validation error (bad parameters,
models or config values), 3 runtime failure (I/O, numerical breakdown).
"""

import argparse
import contextlib
import sys

from ..errors import ValidationError
from .config import WORKERS_ENV, build_config, read_config_file
from .harness import RUNNERS
from .output import write_report

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common(p):
    p.add_argument("--config", help="INI config file ([run] and [<subcommand>] sections)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path (default: standard output)")
    p.add_argument("--workers", type=int, help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    p.add_argument("--dim", type=int, help="spatial dimension")


def build_parser():
    parser = _Parser(prog="gencauchy", description="Generalized Cauchy covariance experiments")
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("table1", help="distribution of the normalized microergodic statistic")
    _common(p)
    p.add_argument("--replicates", type=int)
    p.add_argument("--n", help="comma-separated sample sizes")
    p.add_argument("--ranges", help="comma-separated practical ranges")
    p.add_argument("--pool-size", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--interval-eps", type=float)
    p.add_argument("--interval-factor", type=float)

    p = sub.add_parser("table2", help="prediction efficiency ratios under a compatible GW model")
    _common(p)
    p.add_argument("--replicates", type=int)
    p.add_argument("--n", help="comma-separated sample sizes")
    p.add_argument("--ranges", help="comma-separated practical ranges")
    p.add_argument("--deltas", help="comma-separated GC smoothness values (>= 1)")
    p.add_argument("--lam", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--pool-size", type=int)
    p.add_argument("--supports", help="comma-separated multiples of the compatible support")
    p.add_argument("--site", help="prediction site coordinates")

    p = sub.add_parser("equiv", help="compatibility of two models")
    _common(p)
    p.add_argument("--true", help="model string, e.g. gc:1,1.2,5,0.2875")
    p.add_argument("--working", help="model string; gw:...,auto solves the support")

    p = sub.add_parser("simulate", help="simulate one realization")
    _common(p)
    p.add_argument("--model", help="model string")
    p.add_argument("--paired", help="second model sharing the same normal vector")
    p.add_argument("--n", help="number of locations")
    p.add_argument("--pool-size", type=int)

    p = sub.add_parser("fit", help="profile-likelihood fit of the GC scale")
    _common(p)
    p.add_argument("--data", help="CSV with columns s1..sd,value")
    p.add_argument("--delta", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--interval", help="lower,upper search interval for the scale")
    p.add_argument("--level", type=float, help="confidence level of the microergodic interval")

    p = sub.add_parser("predict", help="kriging prediction and error ratios at one site")
    _common(p)
    p.add_argument("--data", help="CSV with columns s1..sd,value")
    p.add_argument("--true", help="true model string")
    p.add_argument("--working", help="working model string")
    p.add_argument("--site", help="prediction site coordinates")
    return parser


def cli_main(argv=None, stdout=None, stderr=None):
    """Run one subcommand; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    settings = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    try:
        file_settings = read_config_file(args.config, args.command) if args.config else {}
        cfg = build_config(args.command, file_settings, settings)
        report = RUNNERS[args.command](cfg)
        if args.command == "equiv":
            stdout.write(report.metadata["verdict_text"] + "\n")
            for w in report.metadata.get("warnings", []):
                stderr.write(f"warning: {w}\n")
        write_report(report, cfg, stdout)
    except ValidationError as exc:
        stderr.write(f"gencauchy {args.command}: invalid input: {exc}\n")
        return EXIT_VALIDATION
    except Exception as exc:  # any other failure is a runtime error, not a usage error
        stderr.write(f"gencauchy {args.command}: failed: {type(exc).__name__}: {exc}\n")
        return EXIT_RUNTIME
    return EXIT_OK


def main():
    sys.exit(cli_main())
