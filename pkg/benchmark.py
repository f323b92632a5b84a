#!/usr/bin/env python3
"""
Benchmark script for the discrete-event simulator.

Runs one scenario per policy and reports stage timing and event throughput.
"""

import sys
import argparse
from pathlib import Path

from copestop.errors import CopeStopError
from copestop.experiments import parse_config
from copestop.experiments.config import with_overrides
from copestop.schema import PolicyName
from copestop.simulation import Simulator
from copestop.utils.logging_config import setup_logging


def format_time(seconds: float) -> str:
    """Format time duration"""
    if seconds < 1:
        return f"{seconds*1000:.0f}ms"
    elif seconds < 60:
        return f"{seconds:.2f}s"
    else:
        mins = int(seconds // 60)
        secs = seconds % 60
        return f"{mins}m {secs:.1f}s"


def run_benchmark(config_path: Path, horizon: float, seed: int):
    """
    Simulate the scenario once per policy.

    Args:
        config_path: Scenario file
        horizon: Simulated time units, overriding the file
        seed: Run seed
    """
    print("=" * 80)
    print("copestop simulator - Benchmark")
    print("=" * 80)
    print()

    setup_logging(log_level="WARNING", structured=False)

    config = with_overrides(parse_config(config_path), horizon=horizon)
    print(f"Scenario:   {config_path.name}")
    print(f"Nodes:      {config.node_count}")
    print(f"Flows:      {config.flow_count}")
    print(f"Horizon:    {config.horizon:g}")
    print()

    for policy in PolicyName:
        simulator = Simulator(with_overrides(config, policy=policy), seed)
        report = simulator.run()
        timing = simulator.timing
        total = sum(timing.values())
        events = report.transmissions + report.generated

        print(f"{policy.value}:")
        print(f"  Coding gain:   {report.coding_gain:>10.4f}")
        print(f"  Delivered:     {report.delivered:>10}")
        print(f"  Transmissions: {report.transmissions:>10}")
        print(f"  Total time:    {format_time(total):>10}")
        if timing.get("events", 0) > 0:
            print(f"  Packets+tx/s:  {events / timing['events']:>10.0f}")

        for stage, duration in sorted(timing.items(), key=lambda x: x[1], reverse=True):
            pct = (duration / total * 100) if total > 0 else 0
            bar = "█" * int(pct / 2)
            print(f"    {stage:12} {format_time(duration):>8} ({pct:5.1f}%) {bar}")
        print()

    print("=" * 80)


def main():
    """Main entry point"""
    parser = argparse.ArgumentParser(description="Benchmark the copestop simulator")

    parser.add_argument(
        "--config",
        type=Path,
        default=Path("configs/desk.conf"),
        help="Scenario file (default: configs/desk.conf)",
    )
    parser.add_argument(
        "--horizon", type=float, default=500.0, help="Simulated time (default: 500)"
    )
    parser.add_argument("--seed", type=int, default=1, help="Run seed (default: 1)")

    args = parser.parse_args()

    if not args.config.exists():
        print(f"Error: File not found: {args.config}", file=sys.stderr)
        return 1

    try:
        run_benchmark(args.config, args.horizon, args.seed)
        return 0

    except CopeStopError as e:
        print(f"\nError: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
