"""
copestop CLI

Network-coding transmission policies on a seeded discrete-event simulator.

Usage:
    copestop run --config configs/desk.conf --output results.csv --seeds 1,2,3
    copestop verify
    copestop qq --config configs/desk.conf --output qq.csv
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, List

from .errors import ConfigValidationError, CopeStopError, MatrixRunError
from .experiments import parse_config, render_config, run_acceptance, run_matrix, with_overrides
from .exporters import emit_csv, emit_qq_data, export_trace
from .schema import PolicyName
from .simulation import Simulator
from .utils.hashing import compute_report_hash
from .utils.logging_config import setup_logging

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _list_of(convert: Callable) -> Callable[[str], List]:
    def parse(text: str) -> List:
        try:
            return [convert(item.strip()) for item in text.split(",") if item.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))

    return parse


def parse_args(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        prog="copestop",
        description="copestop - optimal stopping for COPE-style network coding",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  copestop run --config configs/desk.conf --output out.csv --seeds 1,2,3,4,5 --loads 4,8,16,32
  copestop run --config configs/desk.conf --output loss.csv --loss-sweep 0,0.05,0.1
  copestop verify --checks 1,2,3,5,8,9
  copestop qq --config configs/desk.conf --output qq.csv --trace trace.parquet
        """,
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Logging level (default: WARNING)",
    )
    parser.add_argument(
        "--structured-logs", action="store_true", help="Enable JSON structured logging"
    )
    parser.add_argument("--log-file", type=Path, default=None, help="Also write JSON logs to this file")

    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a policy x load x seed matrix and write the results CSV")
    run.add_argument("--config", required=True, type=Path, help="Scenario file (key = value)")
    run.add_argument("--output", required=True, type=Path, help="Results CSV path")
    run.add_argument("--seeds", type=_list_of(int), default=None, help="Comma-separated seeds")
    run.add_argument(
        "--policies",
        type=_list_of(PolicyName),
        default=None,
        help="Comma-separated policies (default: all three)",
    )
    run.add_argument(
        "--loads", type=_list_of(int), default=None, help="Comma-separated flow counts"
    )
    run.add_argument(
        "--loss-sweep",
        type=_list_of(float),
        default=None,
        help="Comma-separated per-link loss probabilities, one matrix each",
    )
    run.add_argument("--workers", type=int, default=None, help="Parallel cells")

    verify = sub.add_parser("verify", help="Run the acceptance checks and print a pass/fail table")
    verify.add_argument(
        "--checks", type=_list_of(int), default=None, help="Subset of checks 1-10 (default: all)"
    )
    verify.add_argument("--workers", type=int, default=None, help="Parallel cells for checks 6, 7, 10")

    qq = sub.add_parser("qq", help="Write QQ data of opportunity inter-arrivals for one run")
    qq.add_argument("--config", required=True, type=Path, help="Scenario file (key = value)")
    qq.add_argument("--output", required=True, type=Path, help="QQ CSV path")
    qq.add_argument("--seed", type=int, default=None, help="Run seed (default: config seed)")
    qq.add_argument("--trace", type=Path, default=None, help="Also write the event trace (Parquet)")

    return parser.parse_args(argv)


def cmd_run(args) -> int:
    config = parse_config(args.config)
    print("Resolved configuration:")
    print(render_config(config), end="")

    scenario = args.config.stem
    policies = args.policies or list(PolicyName)
    loads = args.loads or [config.flow_count]
    seeds = args.seeds or [config.seed]
    losses = args.loss_sweep or [None]

    records, failures = [], []
    for loss in losses:
        if loss is None:
            cfg, label = config, scenario
        else:
            cfg, label = with_overrides(config, loss_probability=loss), f"{scenario}-loss{loss:g}"
        try:
            records.extend(
                run_matrix(cfg, policies, loads, seeds, scenario=label, workers=args.workers)
            )
        except MatrixRunError as e:
            records.extend(e.records)
            failures.extend(e.failures)

    records.sort(key=lambda r: r.sort_key())
    if records:
        emit_csv(records, args.output)
        print(f"\nWrote {len(records)} records to {args.output}")

    if failures:
        print(f"{len(failures)} cell(s) failed:", file=sys.stderr)
        for failure in failures:
            print(f"  {failure.cell}: {failure.cause}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_acceptance(args.checks, workers=args.workers)
    print("=" * 72)
    print(f"{'#':>3}  {'check':<46} {'result':<6} {'time':>8}")
    print("-" * 72)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.number:>3}  {r.name:<46} {status:<6} {r.seconds:>7.1f}s")
        print(f"     {r.detail}")
    print("=" * 72)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_qq(args) -> int:
    config = parse_config(args.config)
    if args.trace is not None:
        config = with_overrides(config, record_trace=True)
    simulator = Simulator(config, args.seed)
    report = simulator.run()

    summary = emit_qq_data(simulator.opportunity_intervals(), config.opportunity_rate, args.output)
    print(f"Wrote {summary.n} QQ points to {args.output}")
    print(f"KS statistic {summary.ks_statistic:.6g}, p-value {summary.p_value:.6g}")
    print(f"Report hash {compute_report_hash(report)}")

    if args.trace is not None:
        export_trace(simulator.trace, args.trace)
        print(f"Wrote {len(simulator.trace)} trace events to {args.trace}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "qq": cmd_qq}


def main(argv=None) -> int:
    """Main entry point"""
    args = parse_args(argv)
    setup_logging(
        log_level=args.log_level, log_file=args.log_file, structured=args.structured_logs
    )

    try:
        return COMMANDS[args.command](args)
    except ConfigValidationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CopeStopError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
