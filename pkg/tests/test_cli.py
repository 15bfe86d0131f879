import os
import sys

import pandas as pd
import pytest

# Add project root to sys.path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from core.sbox import AES_SBOX, identity_sbox, sbox_from_table
from core.serialization import format_sbox, write_sbox_file
from main import main


def test_evaluate_aes(capsys):
    assert main(["evaluate", "--aes"]) == 0
    assert "nl=112\n" in capsys.readouterr().out


def test_evaluate_identity_file(tmp_path, capsys):
    path = tmp_path / "id.sbox"
    write_sbox_file(path, identity_sbox(8))
    assert main(["evaluate", str(path)]) == 0
    assert capsys.readouterr().out == "nl=0\ndelta=256\ndegree=1\nai=1\nbalanced=true\n"


def test_evaluate_truncated_file_is_usage_error(tmp_path):
    path = tmp_path / "short.sbox"
    path.write_text("\n".join(format_sbox(sbox_from_table(8, AES_SBOX)).splitlines()[:5]) + "\n")
    assert main(["evaluate", str(path)]) == 2


def test_evaluate_missing_file_is_io_error(tmp_path):
    assert main(["evaluate", str(tmp_path / "missing.sbox")]) == 3


def test_generate_exit_codes(tmp_path):
    out = tmp_path / "best.sbox"
    assert main(["generate", "--target-nl", "0", "--threads", "1", "--out", str(out)]) == 0
    assert out.exists()

    failed = tmp_path / "failed.sbox"
    assert main(["generate", "--kiter", "1", "--threads", "2", "--out", str(failed)]) == 1
    assert not failed.exists()


def test_generate_with_baseline_engine(tmp_path):
    out = tmp_path / "baseline.sbox"
    argv = [
        "generate", "--engine", "baseline", "--n", "4", "--target-nl", "2",
        "--pop-size", "10", "--generations", "50", "--out", str(out),
    ]
    assert main(argv) == 0
    assert out.exists()


def test_invalid_parameters_are_usage_errors(tmp_path):
    out = str(tmp_path / "x.sbox")
    assert main(["generate", "--n", "9", "--out", out]) == 2
    assert main(["generate", "--kpop", "0", "--out", out]) == 2
    assert main(["generate", "--cost-r", "0", "--out", out]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["generate"])
    assert exc.value.code == 2


def test_sweep_writes_table_and_run_log(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = [
        "sweep", "--n", "4", "--kiter", "30", "--target-nl", "4", "--grid-kpop", "1,2",
        "--grid-kmut", "3", "--runs", "2", "--threads", "1", "--out", str(out),
    ]
    assert main(argv) == 0
    table = pd.read_csv(out)
    assert table[["k_pop", "k_mut"]].values.tolist() == [[1, 3], [2, 3]]
    assert (table["runs"] == 2).all()
    runs = pd.read_csv(tmp_path / "sweep_runs.csv")
    assert len(runs) == 4
    assert set(runs["n"]) == {4}


def test_sweep_reads_yaml_config(tmp_path):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text("k_pop: [1]\nk_mut: [2, 4]\nruns_per_cell: 1\nn: 4\nk_iter: 10\ntarget_nl: 4\n")
    out = tmp_path / "from_yaml.csv"
    assert main(["sweep", "--config", str(cfg), "--threads", "1", "--out", str(out)]) == 0
    table = pd.read_csv(out)
    assert table["k_mut"].tolist() == [2, 4]


def test_sweep_config_with_bad_value_types_is_usage_error(tmp_path):
    out = str(tmp_path / "sweep.csv")
    for i, text in enumerate(["k_pop: 1\n", "runs_per_cell: '3'\n"]):
        cfg = tmp_path / f"bad_{i}.yaml"
        cfg.write_text(text)
        assert main(["sweep", "--config", str(cfg), "--threads", "1", "--out", out]) == 2


def test_malformed_environment_override_is_usage_error(monkeypatch):
    monkeypatch.setattr(config, "ENV_ERRORS", [])
    monkeypatch.setenv("SBOXFORGE_K_ITER", "lots")
    assert config.env_int("SBOXFORGE_K_ITER", 150_000) == 150_000
    assert config.ENV_ERRORS == ["SBOXFORGE_K_ITER='lots' is not an integer"]
    assert main(["evaluate", "--aes"]) == 2

    monkeypatch.setattr(config, "ENV_ERRORS", [])
    monkeypatch.setenv("SBOXFORGE_K_ITER", "2000")
    assert config.env_int("SBOXFORGE_K_ITER", 150_000) == 2000
