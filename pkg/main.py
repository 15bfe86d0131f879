"""
main.py: sboxforge command line.

    python main.py generate --out best.sbox [--kpop 1 --kmut 7 --kiter 150000 --target-nl 104]
    python main.py evaluate best.sbox
    python main.py sweep --out results/sweep.csv [--grid-kpop 1,3 --grid-kmut 7 --runs 10]
"""
import argparse
import os
import sys

# Add current directory to sys.path so `core` / `services` resolve when run from elsewhere
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import config
from core.exceptions import ConfigurationError, SBoxError
from core.logger import logger
from core.sbox import AES_SBOX, sbox_from_table
from core.spectral import CostParams
from services.baseline import BaselineGaParams
from services.evolution import SearchParams
from services.harness import SweepGrid, cmd_evaluate, cmd_generate, cmd_sweep, load_sweep_config


def _int_list(text: str):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _add_search_flags(p: argparse.ArgumentParser, sweep: bool = False) -> None:
    # Sweep flags default to None so YAML values can fill the gaps.
    p.add_argument("--n", type=int, default=None if sweep else config.DEFAULT_N, help="S-box bit width (3..8)")
    p.add_argument("--kiter", type=int, default=None if sweep else config.DEFAULT_K_ITER, help="iteration cap")
    p.add_argument("--target-nl", type=int, default=None if sweep else config.DEFAULT_TARGET_NL,
                   help="stop once an S-box reaches this nonlinearity")
    p.add_argument("--seed", type=int, default=None if sweep else config.DEFAULT_SEED, help="64-bit seed")
    p.add_argument("--threads", type=int, default=config.DEFAULT_LANES, help="worker count")
    p.add_argument("--cost-x", type=float, default=config.DEFAULT_COST_X, help="WHS offset X")
    p.add_argument("--cost-r", type=int, default=config.DEFAULT_COST_R, help="WHS exponent R")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sboxforge", description="Generate and evaluate bijective S-boxes.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="search for an S-box reaching the target nonlinearity")
    _add_search_flags(gen)
    gen.add_argument("--kpop", type=int, default=config.DEFAULT_K_POP, help="elite population size")
    gen.add_argument("--kmut", type=int, default=config.DEFAULT_K_MUT, help="children per parent per iteration")
    gen.add_argument("--out", required=True, help="output S-box file")
    gen.add_argument("--trace", default=None, help="optional CSV of the elite leader per iteration")
    gen.add_argument("--engine", choices=("modified", "baseline"), default="modified")
    gen.add_argument("--pop-size", type=int, default=config.BASELINE_POP_SIZE, help="baseline: population N")
    gen.add_argument("--generations", type=int, default=config.BASELINE_GENERATIONS, help="baseline: generations G")
    gen.add_argument("--pc", type=float, default=config.BASELINE_CROSSOVER_RATE, help="baseline: crossover rate")
    gen.add_argument("--pm", type=float, default=config.BASELINE_MUTATION_RATE, help="baseline: mutation rate")
    gen.add_argument("--tournament", type=int, default=config.BASELINE_TOURNAMENT_SIZE,
                     help="baseline: tournament size")

    ev = sub.add_parser("evaluate", help="print the property report of an S-box file")
    src = ev.add_mutually_exclusive_group(required=True)
    src.add_argument("path", nargs="?", help="S-box text file")
    src.add_argument("--aes", action="store_true", help="evaluate the AES SubBytes table")

    sw = sub.add_parser("sweep", help="run the (K_pop, K_mut) parameter sweep")
    _add_search_flags(sw, sweep=True)
    sw.add_argument("--grid-kpop", type=_int_list, default=None, help="comma-separated K_pop values")
    sw.add_argument("--grid-kmut", type=_int_list, default=None, help="comma-separated K_mut values")
    sw.add_argument("--runs", type=int, default=None, help="independent runs per cell")
    sw.add_argument("--config", default=None, help="YAML sweep description")
    sw.add_argument("--out", default=os.path.join(config.RESULTS_DIR, "sweep.csv"), help="sweep table CSV")
    return parser


def _pick(flag, file_cfg, key, default):
    if flag is not None:
        return flag
    return file_cfg.get(key, default)


def dispatch(args) -> int:
    if config.ENV_ERRORS:
        raise ConfigurationError("invalid environment overrides: " + "; ".join(config.ENV_ERRORS))
    cost = CostParams(x=args.cost_x, r=args.cost_r) if args.command != "evaluate" else None

    if args.command == "generate":
        params = SearchParams(
            n=args.n, k_pop=args.kpop, k_iter=args.kiter, k_mut=args.kmut,
            target_nl=args.target_nl, cost=cost, seed=args.seed, lanes=args.threads,
        )
        baseline = None
        if args.engine == "baseline":
            baseline = BaselineGaParams(
                pop_size=args.pop_size, generations=args.generations, crossover_rate=args.pc,
                mutation_rate=args.pm, tournament_size=args.tournament, seed=args.seed, n=args.n,
            )
        return cmd_generate(params, args.out, trace_path=args.trace, baseline=baseline)

    if args.command == "evaluate":
        if args.aes:
            return cmd_evaluate(sbox=sbox_from_table(8, AES_SBOX))
        return cmd_evaluate(args.path)

    file_cfg = load_sweep_config(args.config) if args.config else {}
    grid = SweepGrid(
        k_pop_values=tuple(_pick(args.grid_kpop, file_cfg, "k_pop", config.GRID_K_POP)),
        k_mut_values=tuple(_pick(args.grid_kmut, file_cfg, "k_mut", config.GRID_K_MUT)),
        runs_per_cell=_pick(args.runs, file_cfg, "runs_per_cell", config.RUNS_PER_CELL),
        base_seed=_pick(args.seed, file_cfg, "base_seed", config.DEFAULT_SEED),
    )
    defaults = SearchParams(
        n=_pick(args.n, file_cfg, "n", config.DEFAULT_N),
        k_iter=_pick(args.kiter, file_cfg, "k_iter", config.DEFAULT_K_ITER),
        target_nl=_pick(args.target_nl, file_cfg, "target_nl", config.DEFAULT_TARGET_NL),
        cost=cost, lanes=1,
    )
    if args.threads < 1:
        raise ConfigurationError(f"--threads must be >= 1, got {args.threads}")
    return cmd_sweep(grid, defaults, args.out, args.threads)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except SBoxError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return config.EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return config.EXIT_IO


# ---------------------------------------------------------------------------
# MAIN ENTRY POINT
# ---------------------------------------------------------------------------
if __name__ == "__main__":
    sys.exit(main())
