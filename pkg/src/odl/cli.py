"""Command-line entry point: ``odl simulate | sweep | classify | fit``."""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .classify import DEFAULT_EXT_FRACTION, classify_attitudes
from .config import load_run, load_sweep, shipped_configs
from .errors import ConfigError, OdlError
from .estimate import fit_alpha_records, fit_hew_curve, hew_points, load_trials
from .runner import read_attitudes, run_simulation, run_sweep, write_sweep

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2
LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO,
              "debug": logging.DEBUG}

log = logging.getLogger("odl")


def _setup_logging():
    name = os.environ.get("ODL_LOG", "warn").lower()
    if name not in LOG_LEVELS:
        raise ConfigError(f"ODL_LOG must be one of {sorted(LOG_LEVELS)}, got {name!r}", "ODL_LOG")
    logging.basicConfig(level=LOG_LEVELS[name], stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_simulate(args):
    config = load_run(args.config)
    record = run_simulation(config, seed=args.seed, out_dir=args.out)
    _print_json(record)


def cmd_sweep(args):
    sweep = load_sweep(args.config)
    rows = run_sweep(sweep, jobs=args.jobs)
    path = write_sweep(sweep, rows, args.out)
    failed = sum(1 for r in rows if r["error"])
    print(f"wrote {len(rows)} rows to {path}" + (f" ({failed} failed)" if failed else ""))


def cmd_classify(args):
    a = read_attitudes(args.input)
    bound = None if args.bound.lower() in ("none", "inf") else float(args.bound)
    eps = args.eps_ext
    label, summary = classify_attitudes(a, bound, eps, args.bins)
    _print_json({"label": label.value, **summary.to_dict(),
                 "params": {"bound": bound, "eps_ext": eps, "bins": args.bins, "N": int(a.size)}})


def cmd_fit(args):
    records = load_trials(args.input, truth=args.truth)
    if args.what == "alpha":
        _print_json({"subjects": fit_alpha_records(records, tol=args.tol)})
    else:
        fit = fit_hew_curve(hew_points(records, raw=args.raw_weights))
        _print_json(fit.to_dict())


def build_parser():
    p = argparse.ArgumentParser(prog="odl", description="Agent-based attitude dynamics.")
    p.add_argument("--version", action="version", version=f"odl {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one configuration")
    s.add_argument("--config", required=True,
                   help=f"config file, or a bundled name ({', '.join(shipped_configs())})")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", default=None, help="output directory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="run a parameter sweep")
    s.add_argument("--config", required=True)
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("--out", default=None, help="output directory")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("classify", help="label a final attitude distribution")
    s.add_argument("--input", required=True, help="trajectory CSV or any CSV with 'attitude'")
    s.add_argument("--bound", required=True, help="M, or 'none' for an unbounded space")
    s.add_argument("--eps-ext", type=float, default=None,
                   help=f"absolute extremization threshold (default {DEFAULT_EXT_FRACTION} * M)")
    s.add_argument("--bins", type=int, default=41)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("fit", help="estimate influence parameters from trial data")
    s.add_argument("what", choices=("alpha", "hew"))
    s.add_argument("--input", required=True)
    s.add_argument("--truth", type=float, default=None,
                   help="log-normalise every value as log(x / truth)")
    s.add_argument("--tol", type=float, default=0.05, help="responder-type tolerance")
    s.add_argument("--raw-weights", action="store_true",
                   help="hew: convert shares to raw weights (reference source in its dead band)")
    s.set_defaults(func=cmd_fit)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _setup_logging()
        if getattr(args, "jobs", None) is not None and args.jobs < 1:
            raise ConfigError("--jobs must be >= 1", "jobs")
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OdlError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
