#!/usr/bin/env python3
"""
cli.py

Command-line interface (CLI) for entangled_routing.

Loads a YAML run configuration, applies global overrides, creates the output
directory if missing and runs one of the subcommands. Results are written to
the output directory and summarized on stdout.

Functions
---------
validate_file      : Validate that a file exists and optionally check its extension.
validate_directory : Validate that a directory exists; create if missing.
cmd_frontier       : Frontier table and JSON summary.
cmd_classical      : Certified classical bound at one p.
cmd_quantum        : Optimized quantum strategy at one p.
cmd_oracle         : Oracle payoff at one p.
cmd_simulate       : Simulation of one routing policy.
cmd_throughput     : Baseline throughput table on the envelope grid.
main               : CLI entry point, parses arguments and dispatches.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from entangled_routing.frontier import (
    ConfigError,
    PolicyFileError,
    RunConfig,
    apply_overrides,
    compute_frontier,
    frontier_table,
    load_config,
    load_policy,
    summarize_frontier,
    write_json,
    write_table,
)
from entangled_routing.simulation import POLICY_KINDS, PolicySpec, simulate
from entangled_routing.strategies import (
    estimate_tau,
    oracle_payoff,
    oracle_payoff_quadrature,
)
from entangled_routing.throughput import (
    avg_throughput,
    normalized_throughput,
    throughput_derivative_sign,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INFEASIBLE = 3
EXIT_INVALID_CERTIFICATE = 4

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# ---------------------------------------------------------------------
# Validation Functions
# ---------------------------------------------------------------------

def validate_file(
    path: Path,
    description: str,
    extension: str | tuple[str, ...] | None = None,
) -> None:
    """
    Validates that the input file exists and optionally has the required extension.

    Parameters
    ----------
    path : Path
        Path to the file to validate.
    description : str
        Name of the file for error messages.
    extension : str or tuple of str, optional, default=None
        Required file extension(s) (e.g., ".yaml" or (".yaml", ".yml")).

    Raises
    ------
    SystemExit
        Exits with code 2 if the file does not exist or the extension is incorrect.
    """
    if not path.is_file():
        print(f"Error: {description} file not found: {path}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)

    if extension:
        extensions = (extension,) if isinstance(extension, str) else extension
        if path.suffix not in extensions:
            allowed = ", ".join(extensions)
            print(
                f"Error: {description} file must have one of the following extensions "
                f"{allowed}: {path}",
                file=sys.stderr,
            )
            sys.exit(EXIT_INPUT_ERROR)


def validate_directory(path: Path) -> None:
    """
    Validates that the output directory exists, creates it if missing.

    Parameters
    ----------
    path : Path
        Path to the output directory.
    """
    if not path.is_dir():
        print(
            f"Warning: Output directory '{path}' does not exist. Creating directory...",
            file=sys.stderr,
        )
        path.mkdir(parents=True, exist_ok=True)
        print(f"Directory '{path}' created.", file=sys.stderr)

# ---------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------

def _require_p(args: argparse.Namespace) -> float:
    if args.p is None:
        raise ValueError("--p is required for this command")
    return float(args.p)


def cmd_frontier(config: RunConfig, args: argparse.Namespace) -> int:
    """Compute the frontier, write the table and the JSON summary."""
    print(f"\nComputing frontier on {len(config.p_grid)} grid points...")
    points = compute_frontier(config)
    output = config.output
    table_path = write_table(frontier_table(points), output.directory / "frontier", output.format)
    summary = summarize_frontier(points)
    summary_path = write_json(summary, config.output.directory / "frontier_summary.json")

    interval = summary["advantage_interval"]
    print("Frontier result:")
    print(f"  Advantage interval:   {interval if interval is not None else 'none'}")
    print(f"  Maximum gap:          {summary['max_gap']}")
    print(f"  Argmax p:             {summary['argmax_p']}")
    print(f"  Relative reduction:   {summary['relative_reduction']}")
    if summary["invalid_certificates"]:
        print(f"  Invalid certificates: {summary['invalid_certificates']}")
    if summary["failed_p"]:
        print(f"  Failed points:        {summary['failed_p']}")
    print(f"  Table:                {table_path}")
    print(f"  Summary:              {summary_path}")
    return EXIT_OK


def cmd_classical(config: RunConfig, args: argparse.Namespace) -> int:
    """Certify the classical bound at --p; exit 4 if the certificate is not valid."""
    p = _require_p(args)
    cert = config.classical.certify(config.system.params(), p)
    record = {
        "p": cert.p,
        "a_grid": cert.a_grid,
        "upper": cert.upper,
        "bound": cert.bound,
        "width": cert.width,
        "lipschitz": cert.lipschitz,
        "delta": cert.delta,
        "theta_star": list(cert.theta_star),
        "boundary_ok": cert.boundary_ok,
        "valid": cert.valid,
        "limit_value": cert.limit_value,
        "mirror_upper": cert.mirror_upper,
        "nondegeneracy": list(cert.nondegeneracy),
        "lipschitz_flagged": cert.lipschitz_flagged,
        "refinements": cert.refinements,
    }
    path = write_json(record, config.output.directory / f"classical_p{p:g}.json")

    print("Classical certificate:")
    print(f"  CERTIFICATE {'VALID' if cert.valid else 'INVALID'}")
    print(f"  p:                    {p:g}")
    print(f"  Bound:                {cert.bound:.8f}")
    print(f"  Grid maximum:         {cert.a_grid:.8f}")
    print(f"  Width:                {cert.width:.3e}")
    print(f"  Boundary ok:          {cert.boundary_ok}")
    print(f"  Output:               {path}")
    return EXIT_OK if cert.valid else EXIT_INVALID_CERTIFICATE


def cmd_quantum(config: RunConfig, args: argparse.Namespace) -> int:
    """Optimize a quantum strategy at --p; exit 3 if no restart is feasible."""
    p = _require_p(args)
    strategy = config.quantum.optimize(config.system.params(), p, threads=config.threads)
    path = write_json(strategy.to_dict(), config.output.directory / f"quantum_p{p:g}.json")

    print("Quantum strategy:")
    print(f"  Feasible:             {strategy.feasible}")
    print(f"  Payoff:               {strategy.payoff:.8f}")
    print(f"  Constraint residual:  {strategy.constraint_residual:.3e}")
    print(f"  Output:               {path}")
    return EXIT_OK if strategy.feasible else EXIT_INFEASIBLE


def cmd_oracle(config: RunConfig, args: argparse.Namespace) -> int:
    """Estimate the oracle payoff at --p and compare with the deterministic evaluation."""
    p = _require_p(args)
    params = config.system.params()
    estimate = oracle_payoff(params, p, n=config.oracle.n_samples, seed=config.oracle.seed)
    tau_exact, a_exact = oracle_payoff_quadrature(params, p)
    record = {
        "p": p,
        "tau": estimate.tau,
        "a_star": estimate.a_star,
        "a_star_se": estimate.std_err,
        "split_fraction": estimate.split_fraction,
        "n_samples": estimate.n_samples,
        "seed": estimate.seed,
        "tau_quadrature": tau_exact,
        "a_star_quadrature": a_exact,
    }
    path = write_json(record, config.output.directory / f"oracle_p{p:g}.json")

    print("Oracle payoff:")
    print(f"  A*:                   {estimate.a_star:.6f} +- {estimate.std_err:.6f}")
    print(f"  A* (quadrature):      {a_exact:.6f}")
    print(f"  tau:                  {estimate.tau:.6f}")
    print(f"  Output:               {path}")
    return EXIT_OK


def _policy_from_args(config: RunConfig, args: argparse.Namespace) -> PolicySpec:
    if args.policy is not None:
        validate_file(path=args.policy, description="Policy", extension=(".yaml", ".yml", ".json"))
        return load_policy(args.policy)
    if args.kind is None:
        raise ValueError("simulate needs --policy FILE or --kind KIND")

    flip = not args.no_flip
    params = config.system.params()
    if args.kind == "always_split":
        return PolicySpec.always_split(flip)
    if args.kind == "always_bunch":
        return PolicySpec.always_bunch(flip)

    p = _require_p(args)
    if args.kind == "bernoulli":
        return PolicySpec.bernoulli(p, flip)
    if args.kind == "oracle_threshold":
        tau = estimate_tau(params, p, n=config.oracle.n_samples, seed=config.oracle.seed)
        return PolicySpec.oracle_threshold(tau, flip)
    if args.kind == "classical_thresholds":
        cert = config.classical.certify(params, p)
        return PolicySpec.classical_thresholds(*cert.theta_star, load_balance_flip=flip)

    strategy = config.quantum.optimize(params, p, threads=config.threads)
    return PolicySpec.quantum(strategy.coeffs_a, strategy.coeffs_b, flip)


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    """Simulate one policy given by a policy file or by --kind."""
    policy = _policy_from_args(config, args)
    sc = config.sim
    stats = simulate(
        config.system.params(),
        policy,
        config.warmup.model(),
        n_pairs=sc.n_pairs,
        warmup_discard=sc.warmup_discard,
        seed=sc.seed,
        n_batches=sc.n_batches,
    )
    output = config.output
    path = write_table(pd.DataFrame([stats.to_row()]), output.directory / "simulate", output.format)

    print("Simulation result:")
    print(f"  Policy:               {stats.policy}")
    print(f"  Mean wait:            {stats.mean_wq:.5f} +- {stats.mean_wq_se:.5f}")
    print(f"  Split fraction:       {stats.split_fraction:.5f}")
    print(f"  Server loads:         {stats.per_server_load[0]:.5f}, {stats.per_server_load[1]:.5f}")
    print(
        f"  Baseline throughput:  {stats.baseline_throughput:.6f}"
        f" +- {stats.baseline_throughput_se:.6f}"
    )
    print(f"  Output:               {path}")
    return EXIT_OK


def cmd_throughput(config: RunConfig, args: argparse.Namespace) -> int:
    """Tabulate baseline throughput over the envelope grid."""
    params = config.system.params()
    wm = config.warmup.model()
    grid = list(config.envelope_grid)
    table = pd.DataFrame(
        {
            "p": grid,
            "throughput": [avg_throughput(params, wm, p) for p in grid],
            "throughput_norm": [normalized_throughput(params, wm, p) for p in grid],
            "derivative_sign": [throughput_derivative_sign(params, wm, p) for p in grid],
        }
    )
    path = write_table(table, config.output.directory / "throughput", config.output.format)

    print("Throughput table:")
    print(f"  Points:               {len(table)}")
    low, high = table["throughput"].min(), table["throughput"].max()
    print(f"  Range:                {low:.6f} .. {high:.6f}")
    print(f"  Output:               {path}")
    return EXIT_OK


COMMANDS = {
    "frontier": cmd_frontier,
    "classical": cmd_classical,
    "quantum": cmd_quantum,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
    "throughput": cmd_throughput,
}

# ---------------------------------------------------------------------
# CLI Entry Point
# ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per result kind and shared global flags."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="YAML run configuration.")
    common.add_argument("--output", type=Path, default=None, help="Output directory for results.")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="Table format.")
    common.add_argument("--seed", type=int, default=None, help="Seed for all random streams.")
    common.add_argument("--threads", type=int, default=None, help="Worker threads.")
    common.add_argument("--verbose", action="store_true", help="Log progress at INFO level.")

    parser = argparse.ArgumentParser(
        prog="entangled_routing",
        description="Waiting time and throughput of entanglement-assisted routing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("frontier", parents=[common], help="Frontier table and summary.")
    sub.add_parser("throughput", parents=[common], help="Baseline throughput table.")
    for name, text in (
        ("classical", "Certified classical bound."),
        ("quantum", "Quantum strategy optimization."),
        ("oracle", "Oracle payoff estimate."),
    ):
        command = sub.add_parser(name, parents=[common], help=text)
        command.add_argument("--p", type=float, required=True, help="Splitting probability.")

    sim = sub.add_parser("simulate", parents=[common], help="Simulate one policy.")
    sim.add_argument("--policy", type=Path, default=None, help="Policy file (.yaml/.yml/.json).")
    sim.add_argument("--kind", choices=POLICY_KINDS, default=None, help="Built-in policy kind.")
    sim.add_argument("--p", type=float, default=None, help="Splitting probability for --kind.")
    sim.add_argument("--no-flip", action="store_true", help="Disable load-balancing flips.")
    return parser


def main(argv: Sequence[str] | None = None) -> None:
    """
    Parses command-line arguments, loads the configuration and runs a subcommand.

    Exit codes: 0 success, 2 configuration or input error, 3 infeasible quantum
    optimization, 4 invalid classical certificate.
    """
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format=LOG_FORMAT,
    )

    # ---------------------------
    # Load configuration
    # ---------------------------
    if args.config is not None:
        validate_file(path=args.config, description="Configuration", extension=(".yaml", ".yml"))
    try:
        config = apply_overrides(
            load_config(args.config),
            output=args.output,
            fmt=args.format,
            seed=args.seed,
            threads=args.threads,
        )
    except ConfigError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)

    validate_directory(path=config.output.directory)

    # ---------------------------
    # Info to user
    # ---------------------------
    print(f"Processing {args.command}:")
    print(f"  Configuration:        {args.config if args.config is not None else 'defaults'}")
    print(f"  System:               lam={config.system.lam:g}, mu={config.system.mu:g}")
    print(f"  Output directory:     {config.output.directory}")

    # ---------------------------
    # Run command
    # ---------------------------
    try:
        code = COMMANDS[args.command](config, args)
    except (ConfigError, PolicyFileError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)
    except ValueError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)

    sys.exit(code)

# ---------------------------------------------------------------------
# Execute CLI if script is run directly
# ---------------------------------------------------------------------

if __name__ == "__main__":
    main()
