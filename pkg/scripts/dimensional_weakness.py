"""Runs-to-failure for the six profiles sharing the same summed outage probability."""

import argparse
import math

from ird.simulator import RngSpec, reference_weakness_scenario, run_weakness_scenario, weakness_failure_probability


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--partitions", type=int, default=1)
    args = ap.parse_args()

    scenario = reference_weakness_scenario(trials=args.trials)
    report = run_weakness_scenario(scenario, RngSpec(args.seed), partitions=args.partitions)
    print(f"{'ird':<6}{'q':>14}{'E[runs]':>10}{'mean':>10}{'se':>8}")
    for profile in scenario.irds:
        q = weakness_failure_probability(profile)
        expected = (1 - q) / q
        se = math.sqrt(1 - q) / q / math.sqrt(max(args.trials, 1))
        mean = report.mean_runs(profile.name) if args.trials else float("nan")
        print(f"{profile.name:<6}{q:>14.9f}{expected:>10.3f}{mean:>10.3f}{se:>8.3f}")


if __name__ == "__main__":
    main()
