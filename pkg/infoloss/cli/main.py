#!/usr/bin/env python3
"""
infoloss CLI - Command Line Interface

Usage:
    infoloss analyze net.json              # Ideality, W-motif, final estimate
    infoloss reduce net.json -o out.json   # Remove input-set containments
    infoloss generate ring --n 4 -o r.json # Write a ring, random or re-saved network
    infoloss sweep --l1 100 --offsets -10 0 10 --p 0.5 -o fig.csv
    infoloss simulate net.json             # Monte Carlo of the final estimate
    infoloss verify --level quick          # Run the oracle checks
    infoloss init                          # Write a settings template
    infoloss --version                     # Show version

Exit codes: 0 success (analyze: ideal), 1 analyze non-ideal or verify
failure, 2 invalid input or I/O error.
"""

import argparse
import logging
import os
import secrets
import sys
from typing import List, Optional

import yaml
from dotenv import load_dotenv
from rich.console import Console

from infoloss.__version__ import __version__
from infoloss.cli.config import ConfigManager
from infoloss.cli.report import (
    analysis_report,
    print_json,
    render_analysis,
    render_simulation,
    render_sweep,
    render_verification,
    simulation_report,
)
from infoloss.core.analysis import reduce
from infoloss.core.ensembles import (
    SweepSpec,
    atomic_write_text,
    results_csv,
    results_frame,
    sweep,
    sweep_grid,
    write_csv,
)
from infoloss.core.errors import ContractViolation, InfolossError
from infoloss.core.estimation import final_estimate, simulate
from infoloss.core.factory import GeneratorFactory
from infoloss.core.linalg import parse_rational
from infoloss.core.network import load, save
from infoloss.core.parallel import resolve_workers
from infoloss.core.verifier import VerificationSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Configure the root logger once; INFOLOSS_LOG_LEVEL sets the default level"""
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = getattr(logging, os.getenv("INFOLOSS_LOG_LEVEL", "INFO").upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


def parse_seed(value) -> int:
    """A non-negative integer, or 'random' for a fresh 63-bit seed that is reported"""
    if isinstance(value, str) and value.strip().lower() == "random":
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
        logger.info(f"Using random seed {seed}")
        return seed
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise ContractViolation(f"Seed must be a non-negative integer or 'random', got {value!r}")
    if seed < 0:
        raise ContractViolation(f"Seed must be non-negative, got {seed}")
    return seed


def resolve_settings(args: argparse.Namespace, config_mgr: ConfigManager) -> None:
    """Fill seed, workers and format on ``args`` (flag > env > settings file > default)"""
    args.seed = parse_seed(config_mgr.get("seed", args.seed))
    try:
        threads = int(config_mgr.get("threads", args.threads))
    except (TypeError, ValueError):
        raise ContractViolation("Thread count must be an integer")
    if threads < 0:
        raise ContractViolation(f"Thread count must be non-negative, got {threads}")
    args.workers = resolve_workers(threads)
    args.format = str(config_mgr.get("format", args.format))
    if args.format not in ("text", "json", "csv"):
        raise ContractViolation(f"Unknown output format '{args.format}'")


def _require_format(args: argparse.Namespace, allowed: List[str]) -> None:
    if args.format not in allowed:
        raise ContractViolation(
            f"'{args.command}' supports --format {' or '.join(allowed)}, not {args.format}"
        )


def cmd_analyze(args) -> int:
    """Analyze a network file"""
    _require_format(args, ["text", "json"])
    net, precisions = load(args.network)
    report = analysis_report(net, precisions)
    if args.format == "json":
        print_json(report)
    else:
        render_analysis(report)
    return EXIT_OK if report["verdict"] == "ideal" else EXIT_FAILURE


def cmd_reduce(args) -> int:
    """Reduce a three-layer network file"""
    net, precisions = load(args.network)
    reduced = reduce(net)
    save(reduced, precisions, args.output)
    logger.info(f"✓ Reduced network written to {args.output}: "
                f"{net.edge_count()} -> {reduced.edge_count()} edges")
    return EXIT_OK


def cmd_generate(args) -> int:
    """Generate a ring or random network file, or re-save a file with new precisions"""
    config = {"type": args.kind, "precisions": args.precisions, "variances": args.variances}
    if args.precisions and args.variances:
        raise ContractViolation("generate takes --precisions or --variances, not both")
    if args.kind == "ring":
        if args.n is None:
            raise ContractViolation("generate ring needs --n")
        config["n"] = args.n
    elif args.kind == "random":
        if not args.layers or args.p is None:
            raise ContractViolation("generate random needs --layers and --p")
        config.update({"layer_sizes": args.layers, "p": args.p, "seed": args.seed})
    else:
        if not args.source:
            raise ContractViolation("generate static needs --from")
        config["path"] = args.source
    generator = GeneratorFactory.create_from_config(config)
    generator.write(args.output)
    return EXIT_OK


def _sweep_spec(args, config_mgr: ConfigManager) -> SweepSpec:
    if args.spec:
        spec = SweepSpec.from_yaml(args.spec)
        overrides = {}
        if args.trials is not None:
            overrides["trials"] = args.trials
        if args.seed_given:
            overrides["master_seed"] = args.seed
        if overrides:
            spec = SweepSpec(spec.layer_size_grid, spec.probabilities,
                             overrides.get("trials", spec.trials),
                             overrides.get("master_seed", spec.master_seed))
        return spec

    if not args.l1 or not args.p:
        raise ContractViolation("sweep needs --spec, or --l1 and --p")
    grid = sweep_grid(args.l1, args.offsets or [0], args.depth)
    trials = int(config_mgr.get("trials", args.trials))
    return SweepSpec(grid, args.p, trials, args.seed)


def cmd_sweep(args, config_mgr: ConfigManager) -> int:
    """Estimate P(ideal) over a grid of layer sizes and probabilities"""
    spec = _sweep_spec(args, config_mgr)
    logger.info("=" * 60)
    logger.info(f"Sweep: {len(spec.layer_size_grid)} size(s) x {len(spec.probabilities)} p, "
                f"{spec.trials} trials, seed {spec.master_seed}")
    logger.info("=" * 60)
    results = sweep(spec, max_workers=args.workers)

    if args.output:
        write_csv(results, args.output)
        if args.format == "text":
            render_sweep(results, Console(stderr=True))
    elif args.format == "json":
        print_json(results_frame(results).to_dict(orient="records"))
    else:
        sys.stdout.write(results_csv(results))
    return EXIT_OK


def cmd_simulate(args, config_mgr: ConfigManager) -> int:
    """Monte Carlo of the final estimate of a network file"""
    _require_format(args, ["text", "json"])
    net, precisions = load(args.network)
    trials = int(config_mgr.get("sim_trials", args.trials))
    biases = [parse_rational(b) for b in args.biases] if args.biases else None
    result = simulate(net, precisions, args.true_s, biases, trials, args.seed, args.workers)
    report = simulation_report(result, final_estimate(net, precisions).variance)
    if args.format == "json":
        print_json(report)
    else:
        render_simulation(report)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Run the verification checks of a level"""
    _require_format(args, ["text", "json"])
    suite = VerificationSuite(seed=args.seed, max_workers=args.workers)
    suite.load_level(args.level)
    logger.info("=" * 60)
    logger.info(f"Verification ({args.level}): {len(suite.checks)} checks")
    logger.info("=" * 60)
    results = suite.run_all()

    if args.output:
        atomic_write_text(args.output, suite.report_json(results))
        logger.info(f"Report written to {args.output}")
    if args.format == "json":
        print_json(suite.report(results))
    else:
        render_verification(results)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def cmd_init(args, config_mgr: ConfigManager) -> int:
    """Write the settings template"""
    try:
        target = config_mgr.init_config(use_user_config=args.user, force=args.force)
    except FileExistsError as e:
        logger.error(str(e))
        return EXIT_FAILURE
    print("=" * 60)
    print(f"✓ Settings template written: {target}")
    print("Edit it to change the default seed, threads, trials or output format")
    print("=" * 60)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoloss",
        description="infoloss - information loss in layered networks of Bayesian estimators",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"infoloss {__version__}")
    parser.add_argument("--seed", default=None,
                        help="Master seed (non-negative integer or 'random')")
    parser.add_argument("--threads", type=int, default=None,
                        help="Worker count, 0 for one per core (default: all cores)")
    parser.add_argument("--format", choices=["text", "json", "csv"], default=None,
                        help="Output format")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    parser_analyze = subparsers.add_parser("analyze", help="Analyze a network file")
    parser_analyze.add_argument("network", help="Network JSON file")
    parser_analyze.set_defaults(func=cmd_analyze)

    parser_reduce = subparsers.add_parser("reduce", help="Reduce a three-layer network")
    parser_reduce.add_argument("network", help="Network JSON file")
    parser_reduce.add_argument("-o", "--output", required=True, help="Output network file")
    parser_reduce.set_defaults(func=cmd_reduce)

    parser_generate = subparsers.add_parser("generate", help="Generate a network file")
    parser_generate.add_argument("kind", choices=["ring", "random", "static"])
    parser_generate.add_argument("--n", type=int, help="Ring size (second-layer agents)")
    parser_generate.add_argument("--layers", type=int, nargs="+", help="Layer sizes of a random network")
    parser_generate.add_argument("--p", type=float, help="Edge probability of a random network")
    parser_generate.add_argument("--from", dest="source", help="Network file to re-save (static)")
    parser_generate.add_argument("--precisions", nargs="+", help="First-layer precisions (rationals)")
    parser_generate.add_argument("--variances", nargs="+", help="First-layer variances (rationals)")
    parser_generate.add_argument("-o", "--output", required=True, help="Output network file")
    parser_generate.set_defaults(func=cmd_generate)

    parser_sweep = subparsers.add_parser("sweep", help="Estimate P(ideal) over a grid")
    parser_sweep.add_argument("--spec", help="Sweep spec YAML file")
    parser_sweep.add_argument("--l1", type=int, nargs="+", help="First-layer sizes")
    parser_sweep.add_argument("--offsets", type=int, nargs="+",
                              help="Offsets of the varied layer from L1 (default: 0)")
    parser_sweep.add_argument("--depth", type=int, choices=[3, 4], default=3,
                              help="Layers including the aggregator (default: 3)")
    parser_sweep.add_argument("--p", type=float, nargs="+", help="Edge probabilities")
    parser_sweep.add_argument("--trials", type=int, default=None, help="Trials per cell")
    parser_sweep.add_argument("-o", "--output", help="CSV file (default: stdout)")
    parser_sweep.set_defaults(func=cmd_sweep, needs_config=True)

    parser_simulate = subparsers.add_parser("simulate", help="Monte Carlo of the final estimate")
    parser_simulate.add_argument("network", help="Network JSON file")
    parser_simulate.add_argument("--trials", type=int, default=None, help="Number of trials")
    parser_simulate.add_argument("--true-s", type=float, default=0.0, help="True parameter value")
    parser_simulate.add_argument("--biases", nargs="+", help="First-layer biases (rationals)")
    parser_simulate.set_defaults(func=cmd_simulate, needs_config=True)

    parser_verify = subparsers.add_parser("verify", help="Run the oracle checks")
    parser_verify.add_argument("--level", choices=["quick", "full"], default="quick")
    parser_verify.add_argument("-o", "--output", help="Also write the JSON report here")
    parser_verify.set_defaults(func=cmd_verify)

    parser_init = subparsers.add_parser("init", help="Write a settings template")
    parser_init.add_argument("--user", action="store_true",
                             help="Write ~/.config/infoloss/infoloss.yaml instead of ./config")
    parser_init.add_argument("--force", action="store_true", help="Overwrite an existing file")
    parser_init.set_defaults(func=cmd_init, needs_config=True, skip_settings=True)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)

    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    config_mgr = ConfigManager()
    try:
        if not getattr(args, "skip_settings", False):
            args.seed_given = args.seed is not None or bool(os.getenv("INFOLOSS_SEED"))
            resolve_settings(args, config_mgr)
        if getattr(args, "needs_config", False):
            return args.func(args, config_mgr)
        return args.func(args)
    except (InfolossError, OSError, ValueError, yaml.YAMLError) as e:
        logger.error(f"✗ {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
