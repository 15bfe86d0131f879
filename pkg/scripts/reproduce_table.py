"""
scripts/reproduce_table.py
Scaled reproduction of the K_Sbox table: the headline cell (K_pop=1, K_mut=7)
and the K_mut=1 row trend between K_pop=1 and K_pop=11.

    python scripts/reproduce_table.py --runs 30 --trend-runs 10 --threads 8
"""
import argparse
import os
import sys

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import DEFAULT_SEED
from services.evolution import SearchParams
from services.harness import SweepGrid, run_sweep

HEADLINE_BAND = (35_000, 70_000)   # accepted mean K_Sbox for the headline cell


def reproduce(runs: int, trend_runs: int, threads: int, seed: int) -> bool:
    print("--- Headline cell: K_pop=1, K_mut=7, target NL 104 ---")
    headline = run_sweep(SweepGrid((1,), (7,), runs, seed), SearchParams(lanes=1), threads).cell(1, 7)
    print(f"Runs: {headline.runs}  Success rate: {headline.success_rate:.0%}")
    print(f"Mean K_Sbox: {headline.mean_k_sbox:,.0f}  (std {headline.std_k_sbox:,.0f})")
    headline_ok = headline.success_rate == 1.0 and HEADLINE_BAND[0] <= headline.mean_k_sbox <= HEADLINE_BAND[1]

    print("\n--- Trend at K_mut=1: K_pop=1 vs K_pop=11 ---")
    trend = run_sweep(SweepGrid((1, 11), (1,), trend_runs, seed + 1), SearchParams(lanes=1), threads)
    small, large = trend.cell(1, 1), trend.cell(11, 1)
    print(f"K_pop=1:  mean K_Sbox {small.mean_k_sbox:,.0f}")
    print(f"K_pop=11: mean K_Sbox {large.mean_k_sbox:,.0f}")
    trend_ok = large.mean_k_sbox > small.mean_k_sbox

    print(f"\nHeadline: {'PASS' if headline_ok else 'FAIL'}   Trend: {'PASS' if trend_ok else 'FAIL'}")
    return headline_ok and trend_ok


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Scaled reproduction of the K_Sbox table.")
    parser.add_argument("--runs", type=int, default=30)
    parser.add_argument("--trend-runs", type=int, default=10)
    parser.add_argument("--threads", type=int, default=8)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args()
    sys.exit(0 if reproduce(args.runs, args.trend_runs, args.threads, args.seed) else 1)
