"""
services/harness.py
Experiment harness behind the CLI: generate / evaluate commands, the
(K_pop, K_mut) parameter sweep with independent runs per cell, aggregation,
and the CSV files they produce.
"""
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import psutil
import yaml
from joblib import Parallel, delayed
from scipy import stats

from config import (
    DEFAULT_SEED, EXIT_OK, EXIT_SEARCH_FAILURE, GRID_K_MUT, GRID_K_POP,
    RUN_LOG_COLUMNS, RUNS_PER_CELL, SWEEP_COLUMNS,
)
from core.exceptions import ConfigurationError
from core.logger import logger
from core.properties import PropertyReport, full_report
from core.rng import STREAM_SWEEP, derive_seed
from core.serialization import format_report, read_sbox_file, write_sbox_file
from services.baseline import BaselineGaParams, ga_baseline
from services.evolution import SearchOutcome, SearchParams, run_single


@dataclass(frozen=True)
class SweepGrid:
    k_pop_values: Sequence[int] = GRID_K_POP
    k_mut_values: Sequence[int] = GRID_K_MUT
    runs_per_cell: int = RUNS_PER_CELL
    base_seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.k_pop_values or not self.k_mut_values:
            raise ConfigurationError("sweep grid needs at least one k_pop and one k_mut value")
        if min(self.k_pop_values) < 1 or min(self.k_mut_values) < 1:
            raise ConfigurationError("sweep grid values must be >= 1")
        if self.runs_per_cell < 1:
            raise ConfigurationError(f"runs_per_cell must be >= 1, got {self.runs_per_cell}")

    def cells(self):
        for k_pop in sorted(set(self.k_pop_values)):
            for k_mut in sorted(set(self.k_mut_values)):
                yield k_pop, k_mut


@dataclass(frozen=True)
class SweepCell:
    k_pop: int
    k_mut: int
    runs: int
    successes: int
    mean_k_sbox: float
    std_k_sbox: float
    mean_duration_ms: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.runs if self.runs else 0.0


@dataclass
class SweepTable:
    cells: List[SweepCell] = field(default_factory=list)
    runs: List[Dict[str, object]] = field(default_factory=list)

    def cell(self, k_pop: int, k_mut: int) -> SweepCell:
        for c in self.cells:
            if (c.k_pop, c.k_mut) == (k_pop, k_mut):
                return c
        raise KeyError((k_pop, k_mut))


# ---------------------------------------------------------------------------
# Run records
# ---------------------------------------------------------------------------
def run_record(outcome: SearchOutcome, params: SearchParams,
               report: Optional[PropertyReport] = None) -> Dict[str, object]:
    """Flat record in RUN_LOG_COLUMNS order; properties describe outcome.sbox."""
    if report is None and outcome.sbox is not None:
        report = full_report(outcome.sbox)
    return {
        "seed": params.seed,
        "n": params.n,
        "k_pop": params.k_pop,
        "k_mut": params.k_mut,
        "k_iter": params.k_iter,
        "target_nl": params.target_nl,
        "success": outcome.success,
        "k_sbox": outcome.k_sbox,
        "iterations_used": outcome.iterations_used,
        "nl": report.nl if report else None,
        "delta": report.delta if report else None,
        "degree": report.degree if report else None,
        "ai": report.ai if report else None,
        "duration_ms": round(outcome.duration_ms, 3),
    }


def run_seed(base_seed: int, k_pop: int, k_mut: int, run: int) -> int:
    return derive_seed(base_seed, STREAM_SWEEP, k_pop, k_mut, run)


def _sweep_run(defaults: SearchParams, k_pop: int, k_mut: int, seed: int) -> Dict[str, object]:
    params = replace(defaults, k_pop=k_pop, k_mut=k_mut, seed=seed, lanes=1, record_trace=False)
    return run_record(run_single(params), params)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------
def aggregate_runs(runs: Sequence[Dict[str, object]]) -> List[SweepCell]:
    """Per-(k_pop, k_mut) statistics over all runs; failed runs count with their k_sbox at the cap."""
    if not runs:
        return []
    df = pd.DataFrame(list(runs), columns=RUN_LOG_COLUMNS)
    grouped = df.groupby(["k_pop", "k_mut"], sort=True)
    summary = grouped.agg(
        runs=("k_sbox", "size"),
        successes=("success", "sum"),
        mean_k_sbox=("k_sbox", "mean"),
        std_k_sbox=("k_sbox", lambda s: float(np.std(s.to_numpy(dtype=float)))),
        mean_duration_ms=("duration_ms", "mean"),
    ).reset_index()
    return [
        SweepCell(
            k_pop=int(row.k_pop), k_mut=int(row.k_mut), runs=int(row.runs),
            successes=int(row.successes), mean_k_sbox=float(row.mean_k_sbox),
            std_k_sbox=float(row.std_k_sbox), mean_duration_ms=float(row.mean_duration_ms),
        )
        for row in summary.itertuples(index=False)
    ]


def _log_cell(cell: SweepCell, k_sboxes: Sequence[int]) -> None:
    if len(k_sboxes) > 1 and np.ptp(k_sboxes) > 0:
        low, high = stats.t.interval(0.95, len(k_sboxes) - 1, loc=np.mean(k_sboxes), scale=stats.sem(k_sboxes))
        ci = f"[{low:,.0f}, {high:,.0f}]"
    else:
        ci = "n/a"
    logger.info(
        f"[Sweep] cell k_pop={cell.k_pop} k_mut={cell.k_mut}: runs={cell.runs} "
        f"success={cell.success_rate:.0%} mean_k_sbox={cell.mean_k_sbox:,.1f} 95%CI={ci}"
    )


def run_sweep(grid: SweepGrid, search_defaults: SearchParams, threads: int = 1) -> SweepTable:
    """runs_per_cell independent runs per cell, up to `threads` at once, collected in order."""
    cells = list(grid.cells())
    jobs = [
        (k_pop, k_mut, run_seed(grid.base_seed, k_pop, k_mut, run))
        for k_pop, k_mut in cells
        for run in range(grid.runs_per_cell)
    ]

    cpu = psutil.cpu_count(logical=True) or 1
    if threads > cpu:
        logger.warning(f"[Sweep] {threads} threads requested on a {cpu}-CPU host")
    mem = psutil.virtual_memory()
    logger.info(
        f"[Sweep] {len(cells)} cells x {grid.runs_per_cell} runs = {len(jobs)} runs, "
        f"threads={threads}, host cpus={cpu}, mem available={mem.available / 2**30:.1f} GiB"
    )

    start = time.perf_counter()
    if threads == 1:
        runs = [_sweep_run(search_defaults, k_pop, k_mut, seed) for k_pop, k_mut, seed in jobs]
    else:
        runs = Parallel(n_jobs=threads, backend="loky")(
            delayed(_sweep_run)(search_defaults, k_pop, k_mut, seed) for k_pop, k_mut, seed in jobs
        )

    table = SweepTable(cells=aggregate_runs(runs), runs=list(runs))
    for cell in table.cells:
        k_sboxes = [r["k_sbox"] for r in runs if (r["k_pop"], r["k_mut"]) == (cell.k_pop, cell.k_mut)]
        _log_cell(cell, k_sboxes)
    logger.info(f"[Sweep] finished {len(jobs)} runs in {time.perf_counter() - start:.1f}s")
    return table


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------
def write_sweep_csv(t: SweepTable, path) -> int:
    rows = [
        {**asdict(c), "success_rate": c.success_rate}
        for c in sorted(t.cells, key=lambda c: (c.k_pop, c.k_mut))
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=SWEEP_COLUMNS).to_csv(path, index=False)
    return EXIT_OK


def read_sweep_csv(path) -> SweepTable:
    df = pd.read_csv(path, float_precision="round_trip")
    if list(df.columns) != SWEEP_COLUMNS:
        raise ConfigurationError(f"{path}: unexpected sweep header {list(df.columns)}")
    cells = [
        SweepCell(
            k_pop=int(row.k_pop), k_mut=int(row.k_mut), runs=int(row.runs),
            successes=int(row.successes), mean_k_sbox=float(row.mean_k_sbox),
            std_k_sbox=float(row.std_k_sbox), mean_duration_ms=float(row.mean_duration_ms),
        )
        for row in df.itertuples(index=False)
    ]
    return SweepTable(cells=cells)


def run_log_path(table_path) -> Path:
    table_path = Path(table_path)
    return table_path.with_name(f"{table_path.stem}_runs.csv")


def write_run_log(runs: Sequence[Dict[str, object]], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(runs), columns=RUN_LOG_COLUMNS).to_csv(path, index=False)


def read_run_log(path) -> List[Dict[str, object]]:
    df = pd.read_csv(path, float_precision="round_trip")
    return df.to_dict(orient="records")


def load_sweep_config(path) -> Dict[str, object]:
    """Reads a YAML sweep description: k_pop, k_mut, runs_per_cell, base_seed and SearchParams defaults."""
    path = Path(path)
    with open(path) as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"{path}: invalid YAML ({e})") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    allowed = {"k_pop", "k_mut", "runs_per_cell", "base_seed", "n", "k_iter", "target_nl"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigurationError(f"{path}: unknown keys {sorted(unknown)}")

    def is_int(v) -> bool:
        return isinstance(v, int) and not isinstance(v, bool)

    for key, value in data.items():
        if key in ("k_pop", "k_mut"):
            if not isinstance(value, list) or not value or not all(is_int(v) for v in value):
                raise ConfigurationError(f"{path}: {key} must be a non-empty list of integers, got {value!r}")
        elif not is_int(value):
            raise ConfigurationError(f"{path}: {key} must be an integer, got {value!r}")
    return data


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------
def write_trace_csv(outcome: SearchOutcome, path) -> None:
    rows = [{"iteration": t, "nl": nl, "cost": str(cost)} for t, (nl, cost) in enumerate(outcome.trace or [])]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows, columns=["iteration", "nl", "cost"]).to_csv(path, index=False)


def cmd_generate(params: SearchParams, out_path, trace_path=None,
                 baseline: Optional[BaselineGaParams] = None) -> int:
    """Runs a search and writes the S-box plus its report; exit 1 when the target is not met."""
    if baseline is not None:
        start = time.perf_counter()
        outcome = ga_baseline(baseline, params.target_nl, params.cost)
        outcome.duration_ms = (time.perf_counter() - start) * 1000.0
    else:
        outcome = run_single(replace(params, record_trace=params.record_trace or trace_path is not None))

    if trace_path is not None:
        write_trace_csv(outcome, trace_path)

    if not outcome.success:
        logger.warning(
            f"[Generate] no S-box with nl >= {params.target_nl} after {outcome.iterations_used} iterations "
            f"(k_sbox={outcome.k_sbox})"
        )
        return EXIT_SEARCH_FAILURE

    report = full_report(outcome.sbox)
    if baseline is not None:
        params = replace(params, seed=baseline.seed, n=baseline.n, k_iter=baseline.generations)
    block = {**run_record(outcome, params, report), "balanced": report.balanced}
    write_sbox_file(out_path, outcome.sbox, block)
    logger.info(f"[Generate] wrote {out_path} (nl={report.nl}, k_sbox={outcome.k_sbox})")
    return EXIT_OK


def cmd_evaluate(in_path=None, sbox=None) -> int:
    """Prints the full property report of an S-box file (or an already loaded S-box)."""
    s = sbox if sbox is not None else read_sbox_file(in_path)
    print(format_report(full_report(s)), end="")
    return EXIT_OK


def cmd_sweep(grid: SweepGrid, search_defaults: SearchParams, out_path, threads: int) -> int:
    table = run_sweep(grid, search_defaults, threads)
    write_sweep_csv(table, out_path)
    write_run_log(table.runs, run_log_path(out_path))
    logger.info(f"[Sweep] wrote {out_path} and {run_log_path(out_path)}")
    return EXIT_OK
