"""Command-line interface: ``holderscan detect | threshold | simulate``.

Exit codes: 0 success, 2 input or format error, 3 configuration error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import dgp
from .bootstrap import THREADS_ENV, BootstrapConfig, boot_panel, boot_stationary
from .dataio import MIN_CURVES, emit_histogram, ingest_curves, ingest_panel
from .errors import DimensionError, FormatError, NumericalError, ParameterError
from .index_set import ScanIndexSet
from .pipeline import ECDF, CovSpec, estimate_roots
from .report import DetectionReport
from .scan import DetectionSet, multiscan
from .simulate import DGP_KINDS, DetectorConfig, DgpConfig, ReplicationError, run_monte_carlo
from .weights import WeightFunction

log = logging.getLogger("holderscan")

EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4


def _add_method_args(p: argparse.ArgumentParser, cov_default: str | None):
    p.add_argument("--weight", default="poly:0.25", help="poly:<beta> or log:<beta> (default poly:0.25)")
    p.add_argument("--index-set", default="all", help="all or pyramid:<theta> (default all)")
    p.add_argument("--alpha", type=float, default=0.05, help="significance level (default 0.05)")
    p.add_argument("--B", type=int, default=1000, help="bootstrap replicates (default 1000)")
    p.add_argument("--cov", default=cov_default,
                   help="first-diff, block:<k> or ecdf (panel input only)"
                   + (f"; default {cov_default}" if cov_default else ""))
    p.add_argument("--seed", type=int, default=0, help="reproducibility seed (default 0)")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads for the bootstrap (default ${THREADS_ENV} or 1); never changes results")
    p.add_argument("--output", "-o", default=None, help="write JSON here instead of stdout")


def _add_input_args(p: argparse.ArgumentParser):
    p.add_argument("input", help="CSV of curves (one per row), or a long-format n,m,y panel with --panel")
    p.add_argument("--labels", action="store_true", help="first CSV column holds row labels such as dates")
    p.add_argument("--header", action="store_true", default=None,
                   help="first row is a header (grid coordinates); detected automatically if non-numeric")
    p.add_argument("--panel", action="store_true", help="input is a long-format panel n,m,y")
    p.add_argument("--panel-grid", default="-6:6:101", help="lo:hi:D real-line grid for panel cdfs")
    p.add_argument("--flattop", type=float, default=2.0, help="flattop weight half-width A (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holderscan", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="bootstrap a threshold and run MultiScan on a data file")
    _add_input_args(p)
    _add_method_args(p, None)
    p.add_argument("--table", action="store_true", help="print a fixed-width table to stdout as well")

    p = sub.add_parser("threshold", help="bootstrap the critical threshold only")
    _add_input_args(p)
    _add_method_args(p, None)
    p.add_argument("--replicates", action="store_true", help="include the bootstrap replicate statistics")

    p = sub.add_parser("simulate", help="Monte Carlo size / power / localization for one design")
    p.add_argument("--dgp", choices=DGP_KINDS, default="iid")
    p.add_argument("--scenario", default="H0",
                   help=f"one of {', '.join(dgp.MEAN_SCENARIOS)} (curves) or {', '.join(dgp.PANEL_SCENARIOS)} (panel)")
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--R", type=int, default=100)
    p.add_argument("--D", type=int, default=dgp.DEFAULT_D, help="grid size for curve designs")
    p.add_argument("--M", type=int, default=dgp.DEFAULT_M, help="draws per time point for panels")
    p.add_argument("--jump-scale", type=float, default=1.0, help="multiply all scenario means")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--histogram", default=None, help="write n_max frequencies as CSV here")
    _add_method_args(p, None)
    p.set_defaults(B=200)
    return parser


def _parse_panel_grid(text: str, A: float):
    try:
        lo, hi, D = text.split(":")
        return dgp.panel_grid(int(D), float(lo), float(hi), A)
    except ValueError:
        raise ParameterError(f"panel grid {text!r} is not of the form lo:hi:D") from None


def _load(args):
    """Return ``(sample, cdfs, labels)`` from the input file."""
    if args.panel:
        grid = _parse_panel_grid(args.panel_grid, args.flattop)
        values = ingest_panel(args.input)
        if values.shape[0] < MIN_CURVES:
            raise FormatError(f"{args.input}: need at least {MIN_CURVES} time points")
        sample, cdfs = dgp.panel_curves_from_values(values, grid)
        return sample, cdfs, None
    sample, labels = ingest_curves(args.input, labels=args.labels, header=args.header)
    return sample, None, labels if args.labels else None


def _method(args, N: int, panel: bool):
    weight = WeightFunction.parse(args.weight)
    idx = ScanIndexSet.parse(args.index_set, N)
    cov = CovSpec.parse(args.cov) if args.cov else CovSpec(ECDF if panel else "first-diff")
    if cov.method == ECDF and not panel:
        raise ParameterError("--cov ecdf requires --panel input")
    if not 0 < args.alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {args.alpha}")
    if args.B < 1:
        raise ParameterError(f"B must be at least 1, got {args.B}")
    return weight, idx, cov


def _config_echo(args, weight, idx, cov) -> dict:
    return {
        "weight": str(weight),
        "index_set": idx.describe(),
        "alpha": args.alpha,
        "B": args.B,
        "cov": str(cov),
        "seed": args.seed,
    }


def _write(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


@contextmanager
def stage(name: str):
    """Re-raise pipeline errors with the failing stage named, keeping their type."""
    try:
        yield
    except OSError as exc:
        raise FormatError(f"{name}: {exc}") from exc
    except (FormatError, DimensionError, ParameterError, NumericalError) as exc:
        raise type(exc)(f"{name}: {exc}") from exc
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"{name}: {exc}") from exc


def _bootstrap(args):
    with stage("ingest"):
        sample, cdfs, labels = _load(args)
    with stage("configuration"):
        weight, idx, cov = _method(args, sample.N, args.panel)
    with stage("covariance"):
        roots = estimate_roots(sample, cov, cdfs)
    with stage("bootstrap"):
        cfg = BootstrapConfig(idx, weight, B=args.B, alpha=args.alpha, seed=args.seed)
        if roots.ndim == 3:
            boot = boot_panel(roots, cfg, sample.grid, n_threads=args.threads)
        else:
            boot = boot_stationary(roots, sample.N, cfg, sample.grid, n_threads=args.threads)
    config = _config_echo(args, weight, idx, cov) | {"N": sample.N, "D": sample.D}
    return sample, labels, weight, idx, boot, config


def cmd_detect(args) -> int:
    sample, labels, weight, idx, boot, config = _bootstrap(args)
    with stage("multiscan"):
        found = multiscan(sample, idx, boot.q, weight) if boot.q > 0 else DetectionSet(q=boot.q)
    report = DetectionReport(found, boot.q, config, labels)
    _write(report.to_json(), args.output)
    if args.table:
        sys.stdout.write(report.to_table())
    return 0


def cmd_threshold(args) -> int:
    _, _, _, _, boot, config = _bootstrap(args)
    out = {"q": boot.q, "alpha": args.alpha, "B": args.B, "seed": args.seed, "config": config}
    if args.replicates:
        out["replicates"] = boot.replicate_stats.tolist()
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return 0


def cmd_simulate(args) -> int:
    if args.R < 1:
        raise ParameterError(f"R must be at least 1, got {args.R}")
    design = DgpConfig(kind=args.dgp, scenario=args.scenario, N=args.N, D=args.D, M=args.M,
                       jump_scale=args.jump_scale)
    weight, idx, cov = _method(args, args.N, args.dgp == "panel")
    if args.cov is None:
        cov = None
    detector = DetectorConfig(weight=weight, index_set=args.index_set, alpha=args.alpha, B=args.B, cov=cov)
    result = run_monte_carlo(design, detector, args.R, args.seed, args.threads)

    row = {
        "dgp": args.dgp,
        "scenario": args.scenario,
        "N": args.N,
        "index_set": idx.describe(),
        "weight": str(weight),
        "cov": str(detector.cov_for(args.dgp)),
        "alpha": args.alpha,
        "R": args.R,
        "B": args.B,
        "seed": args.seed,
    }
    if result.K == 0:
        row["size"] = result.rejection_rate
    else:
        row.update(power=result.rejection_rate, weak_loc=result.weak_rate, strong_loc=result.strong_rate)
    if args.format == "json":
        text = json.dumps(row, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        text = buf.getvalue()
    _write(text, args.output)
    if args.histogram:
        emit_histogram(result.locations(), args.histogram)
    return 0


COMMANDS = {"detect": cmd_detect, "threshold": cmd_threshold, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (FormatError, DimensionError) as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except ParameterError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except ReplicationError as exc:
        log.error("%s", exc)
        cause = exc.__cause__
        if isinstance(cause, ParameterError):
            return EXIT_CONFIG
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
