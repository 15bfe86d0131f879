import os
import sys
from dataclasses import replace

import pytest

# Add project root to sys.path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import GRID_K_MUT, GRID_K_POP, RUN_LOG_COLUMNS, RUNS_PER_CELL
from core.exceptions import ConfigurationError
from core.sbox import AES_SBOX, sbox_from_table
from core.serialization import read_sbox_file, write_sbox_file
from core.spectral import nonlinearity
from services.baseline import BaselineGaParams
from services.evolution import SearchParams
from services.harness import (
    SweepCell, SweepGrid, SweepTable, aggregate_runs, cmd_evaluate, cmd_generate,
    load_sweep_config, read_run_log, read_sweep_csv, run_seed, run_sweep,
    write_run_log, write_sweep_csv,
)

SWEEP_HEADER = "k_pop,k_mut,runs,successes,success_rate,mean_k_sbox,std_k_sbox,mean_duration_ms"
SMALL_DEFAULTS = SearchParams(n=4, k_iter=40, target_nl=4, lanes=1)


def _without_duration(cells):
    return [replace(c, mean_duration_ms=0.0) for c in cells]


def test_run_seeds_are_distinct_and_reproducible():
    seeds = {
        run_seed(7, k_pop, k_mut, run)
        for k_pop in GRID_K_POP for k_mut in GRID_K_MUT for run in range(RUNS_PER_CELL)
    }
    assert len(seeds) == len(GRID_K_POP) * len(GRID_K_MUT) * RUNS_PER_CELL
    assert run_seed(7, 1, 7, 0) == run_seed(7, 1, 7, 0)
    assert run_seed(7, 1, 7, 0) != run_seed(8, 1, 7, 0)


def test_grid_validation_and_cell_order():
    assert list(SweepGrid((3, 1), (7, 1), 1).cells()) == [(1, 1), (1, 7), (3, 1), (3, 7)]
    with pytest.raises(ConfigurationError):
        SweepGrid((), (1,), 1)
    with pytest.raises(ConfigurationError):
        SweepGrid((1,), (1,), 0)


def test_sweep_table_shape_and_run_log():
    grid = SweepGrid((1, 2), (1, 3), runs_per_cell=2, base_seed=99)
    table = run_sweep(grid, SMALL_DEFAULTS)
    assert [(c.k_pop, c.k_mut) for c in table.cells] == [(1, 1), (1, 3), (2, 1), (2, 3)]
    assert len(table.runs) == 8
    for c in table.cells:
        assert c.runs == 2
        assert 0 <= c.successes <= 2
        assert c.mean_k_sbox <= c.k_pop + SMALL_DEFAULTS.k_iter * c.k_pop * c.k_mut


def test_sweep_is_reproducible():
    grid = SweepGrid((1, 2), (2,), runs_per_cell=1, base_seed=5)
    a = run_sweep(grid, SMALL_DEFAULTS)
    b = run_sweep(grid, SMALL_DEFAULTS)
    assert _without_duration(a.cells) == _without_duration(b.cells)


def test_parallel_sweep_matches_sequential():
    grid = SweepGrid((1, 3), (2,), runs_per_cell=2, base_seed=6)
    seq = run_sweep(grid, SMALL_DEFAULTS, threads=1)
    par = run_sweep(grid, SMALL_DEFAULTS, threads=2)
    assert _without_duration(seq.cells) == _without_duration(par.cells)


def test_aggregation_matches_run_log(tmp_path):
    grid = SweepGrid((1,), (2, 5), runs_per_cell=3, base_seed=17)
    table = run_sweep(grid, SMALL_DEFAULTS)
    log = tmp_path / "sweep_runs.csv"
    write_run_log(table.runs, log)
    runs = read_run_log(log)
    assert len(runs) == 6
    assert aggregate_runs(runs) == table.cells
    for c in table.cells:
        ks = [r["k_sbox"] for r in runs if r["k_mut"] == c.k_mut]
        assert c.mean_k_sbox == pytest.approx(sum(ks) / len(ks))


def test_empty_sweep_csv_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_sweep_csv(SweepTable(), path)
    assert path.read_text().splitlines() == [SWEEP_HEADER]


def test_sweep_csv_round_trip(tmp_path):
    cells = [
        SweepCell(1, 7, 10, 10, 49277.3, 21011.25, 812.5),
        SweepCell(11, 1, 10, 9, 70123.0, 30456.125, 1234.0625),
    ]
    path = tmp_path / "sweep.csv"
    write_sweep_csv(SweepTable(cells=list(reversed(cells))), path)
    lines = path.read_text().splitlines()
    assert lines[0] == SWEEP_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("1,7,10,10,1.0,")
    assert read_sweep_csv(path).cells == cells


def test_read_sweep_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigurationError):
        read_sweep_csv(path)


def test_load_sweep_config(tmp_path):
    good = tmp_path / "sweep.yaml"
    good.write_text("k_pop: [1, 3]\nk_mut: [7]\nruns_per_cell: 4\nn: 6\n")
    cfg = load_sweep_config(good)
    assert cfg["k_pop"] == [1, 3] and cfg["n"] == 6

    bad = tmp_path / "bad.yaml"
    bad.write_text("k_pop: [1]\nthreads: 4\n")
    with pytest.raises(ConfigurationError):
        load_sweep_config(bad)


def test_generate_writes_sbox_and_report(tmp_path):
    out = tmp_path / "best.sbox"
    trace = tmp_path / "trace.csv"
    params = SearchParams(n=4, k_iter=20_000, target_nl=4, seed=3, lanes=1)
    assert cmd_generate(params, out, trace_path=trace) == 0
    assert nonlinearity(read_sbox_file(out)) >= 4
    text = out.read_text()
    assert "\nnl=4\n" in text and "balanced=true" in text
    assert trace.read_text().startswith("iteration,nl,cost")


def test_generate_reports_failure_without_writing(tmp_path):
    out = tmp_path / "best.sbox"
    params = SearchParams(n=8, k_iter=1, target_nl=104, lanes=1)
    assert cmd_generate(params, out) == 1
    assert not out.exists()


def test_evaluate_prints_report(tmp_path, capsys):
    path = tmp_path / "aes.sbox"
    write_sbox_file(path, sbox_from_table(8, AES_SBOX))
    assert cmd_evaluate(path) == 0
    out = capsys.readouterr().out
    assert out == "nl=112\ndelta=4\ndegree=7\nai=2\nbalanced=true\n"


def _report_block(path):
    _, _, trailer = path.read_text().partition("\n\n")
    return dict(line.split("=", 1) for line in trailer.splitlines())


def test_generate_report_block_carries_full_run_record(tmp_path):
    out = tmp_path / "best.sbox"
    params = SearchParams(n=4, k_pop=2, k_mut=3, k_iter=20_000, target_nl=4, seed=8, lanes=1)
    assert cmd_generate(params, out) == 0
    block = _report_block(out)
    assert set(RUN_LOG_COLUMNS) <= set(block)
    assert block["success"] == "true" and block["balanced"] == "true"
    assert (block["n"], block["k_pop"], block["k_mut"], block["target_nl"]) == ("4", "2", "3", "4")
    assert block["seed"] == "8"


def test_baseline_report_block_uses_baseline_settings(tmp_path):
    out = tmp_path / "baseline.sbox"
    params = SearchParams(n=4, target_nl=2, seed=1, lanes=1)
    baseline = BaselineGaParams(pop_size=10, generations=50, seed=31, n=4)
    assert cmd_generate(params, out, baseline=baseline) == 0
    block = _report_block(out)
    assert set(RUN_LOG_COLUMNS) <= set(block)
    assert block["seed"] == "31" and block["k_iter"] == "50"


def test_load_sweep_config_rejects_bad_value_types(tmp_path):
    bad_shapes = [
        "k_pop: 1\n",
        "k_mut: []\n",
        "k_pop: [1, two]\n",
        "runs_per_cell: '3'\n",
        "n: true\n",
        "k_iter: 1.5\n",
    ]
    for i, text in enumerate(bad_shapes):
        path = tmp_path / f"bad_{i}.yaml"
        path.write_text(text)
        with pytest.raises(ConfigurationError):
            load_sweep_config(path)
