import json
import os
import shutil
import subprocess

import numpy as np
import pytest

from gopc import cli, save_matrix, euclidean_matrix
from gopc.dataio import PointSet
from gopc.oracle import OracleResult

from helpers import CHAIN_POINTS


@pytest.fixture()
def chain_csv(tmp_path):
    path = tmp_path / "chain.csv"
    path.write_text("".join(f"{x}\n" for x in [0.0, 1.0, 3.0, 10.0, 11.5]))
    return path


def _labels_of(path):
    return [int(line.split(",")[1]) for line in path.read_text().splitlines()]


# ------------------------------------------------------------------- cluster


def test_cluster_with_fixed_k(chain_csv, tmp_path, capsys):
    labels = tmp_path / "labels.csv"
    trace = tmp_path / "trace.tsv"
    rc = cli.main(
        [
            "cluster",
            "--input", str(chain_csv),
            "--k", "2",
            "--out-labels", str(labels),
            "--out-trace", str(trace),
        ]
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n"] == 5
    assert summary["k"] == 2
    assert summary["medoids"] == [0, 3]
    assert summary["objective"] == 4.5
    assert summary["noise_count"] == 0
    assert set(summary["elapsed_ms"]) == {
        "load", "distances", "tree", "minimax", "cluster", "total",
    }
    assert _labels_of(labels) == [0, 0, 0, 1, 1]
    assert trace.read_text() == "epoch\tmax_r\n2\t12.5\n"


def test_cluster_estimate_summary(chain_csv, capsys):
    rc = cli.main(["cluster", "--input", str(chain_csv), "--estimate"])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["estimated_k"] == 2
    assert summary["k"] == 2
    assert summary["k_max"] == 5  # capped at n
    assert "estimate" in summary["elapsed_ms"]


def test_estimate_equals_cluster_estimate(chain_csv, tmp_path, capsys):
    out = {}
    for name, argv in {
        "sub": ["estimate", "--input", str(chain_csv)],
        "flag": ["cluster", "--input", str(chain_csv), "--estimate"],
    }.items():
        labels = tmp_path / f"{name}.labels"
        assert cli.main(argv + ["--out-labels", str(labels)]) == 0
        summary = json.loads(capsys.readouterr().out)
        summary.pop("elapsed_ms")
        out[name] = (labels.read_bytes(), summary)
    assert out["sub"] == out["flag"]


def test_cluster_runs_are_reproducible(tmp_path, capsys):
    data = tmp_path / "pts.csv"
    assert cli.main(
        ["gen", "--family", "blobs", "--n", "80", "--seed", "7", "--out", str(data)]
    ) == 0
    capsys.readouterr()
    snaps = []
    for tag in ("a", "b"):
        labels = tmp_path / f"{tag}.labels"
        trace = tmp_path / f"{tag}.trace"
        summary_path = tmp_path / f"{tag}.json"
        rc = cli.main(
            [
                "cluster",
                "--input", str(data),
                "--k", "3",
                "--out-labels", str(labels),
                "--out-trace", str(trace),
                "--out-summary", str(summary_path),
            ]
        )
        assert rc == 0
        summary = json.loads(summary_path.read_text())
        summary.pop("elapsed_ms")
        snaps.append((labels.read_bytes(), trace.read_bytes(), summary))
    assert snaps[0] == snaps[1]


def test_cluster_total_covers_phases(chain_csv, capsys):
    assert cli.main(["cluster", "--input", str(chain_csv), "--k", "2"]) == 0
    elapsed = json.loads(capsys.readouterr().out)["elapsed_ms"]
    parts = sum(v for k, v in elapsed.items() if k != "total")
    assert elapsed["total"] >= parts - 1.0  # rounding slack only


def test_cluster_matrix_input_both_modes(chain_csv, tmp_path, capsys):
    dm = euclidean_matrix(PointSet(CHAIN_POINTS))
    mpath = tmp_path / "chain.mat"
    save_matrix(mpath, dm.values)
    labels_m = tmp_path / "m.labels"
    rc = cli.main(
        ["cluster", "--input", str(mpath), "--format", "matrix",
         "--k", "2", "--out-labels", str(labels_m)]
    )
    assert rc == 0
    assert _labels_of(labels_m) == [0, 0, 0, 1, 1]
    capsys.readouterr()

    sim = 20.0 - dm.values
    np.fill_diagonal(sim, 20.0)
    spath = tmp_path / "chain.sim"
    save_matrix(spath, sim)
    labels_s = tmp_path / "s.labels"
    rc = cli.main(
        ["cluster", "--input", str(spath), "--format", "matrix", "--mode", "sim",
         "--k", "2", "--out-labels", str(labels_s)]
    )
    assert rc == 0
    assert _labels_of(labels_s) == [0, 0, 0, 1, 1]
    capsys.readouterr()


def test_cluster_noise_flag(tmp_path, capsys):
    tri = tmp_path / "tri.csv"
    tri.write_text("0\n10\n20\n")
    labels = tmp_path / "tri.labels"
    rc = cli.main(
        ["cluster", "--input", str(tri), "--k", "2",
         "--noise", "separate", "--out-labels", str(labels)]
    )
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["noise_count"] == 1
    assert labels.read_text().splitlines()[2] == "2,-1,1"


def test_cluster_verbose_lines(chain_csv, capsys):
    rc = cli.main(["cluster", "--input", str(chain_csv), "--estimate", "--verbose"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "estimated k = 2" in out
    assert "objective=4.5" in out


# ------------------------------------------------------------------ failures


def test_k_and_estimate_are_exclusive(chain_csv, capsys):
    assert cli.main(["cluster", "--input", str(chain_csv)]) == 2
    assert (
        cli.main(["cluster", "--input", str(chain_csv), "--k", "2", "--estimate"]) == 2
    )
    assert cli.main(["cluster", "--input", str(chain_csv), "--k", "0"]) == 2
    capsys.readouterr()


def test_missing_input_exits_one(tmp_path, capsys):
    rc = cli.main(["cluster", "--input", str(tmp_path / "nope.csv"), "--k", "2"])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_malformed_input_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    rc = cli.main(["cluster", "--input", str(bad), "--k", "2"])
    assert rc == 1
    assert "row 2" in capsys.readouterr().err


# ------------------------------------------------------------------ gen/eval


def test_gen_is_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        rc = cli.main(
            ["gen", "--family", "spiral", "--n", "60", "--seed", "4", "--out", str(out)]
        )
        assert rc == 0
        info = json.loads(capsys.readouterr().out)
        assert info["n"] == 60
    assert a.read_bytes() == b.read_bytes()


def test_gen_family_params(tmp_path, capsys):
    out = tmp_path / "u.csv"
    rc = cli.main(
        ["gen", "--family", "unbalance", "--n", "44", "--ratios", "10,1",
         "--out", str(out)]
    )
    assert rc == 0
    capsys.readouterr()
    labels = [int(line.rsplit(",", 1)[1]) for line in out.read_text().splitlines()]
    assert labels.count(0) == 40 and labels.count(1) == 4
    rc = cli.main(
        ["gen", "--family", "blobs", "--n", "10", "--ratios", "x,y", "--out", str(out)]
    )
    assert rc == 2
    capsys.readouterr()


def test_eval_rounds_to_six_decimals(tmp_path, capsys):
    pred = tmp_path / "pred.txt"
    truth = tmp_path / "truth.txt"
    pred.write_text("0\n0\n1\n1\n")
    truth.write_text("0\n1\n0\n1\n")
    assert cli.main(["eval", str(pred), str(truth)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {
        "rand_index": 0.333333,
        "adjusted_rand_index": -0.5,
        "nmi": 0.0,
    }


def test_eval_reads_partition_files(chain_csv, tmp_path, capsys):
    labels = tmp_path / "part.csv"
    assert cli.main(
        ["cluster", "--input", str(chain_csv), "--k", "2", "--out-labels", str(labels)]
    ) == 0
    capsys.readouterr()
    truth = tmp_path / "truth.txt"
    truth.write_text("5\n5\n5\n6\n6\n")
    assert cli.main(["eval", str(labels), str(truth)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["adjusted_rand_index"] == 1.0


def test_eval_missing_file(tmp_path, capsys):
    ok = tmp_path / "ok.txt"
    ok.write_text("0\n1\n")
    assert cli.main(["eval", str(ok), str(tmp_path / "gone.txt")]) == 1
    capsys.readouterr()


# -------------------------------------------------------------------- verify


def test_verify_confirms_small_instance(chain_csv, capsys):
    rc = cli.main(["verify", "--input", str(chain_csv), "--k", "2"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["match"] is True
    assert out["objective"] == out["oracle_objective"] == 4.5
    assert out["evaluated_subsets"] == 10


def test_verify_mismatch_exits_three(chain_csv, capsys, monkeypatch):
    monkeypatch.setattr(
        "gopc.oracle.brute_force",
        lambda mm, k: OracleResult(1.23, [(0, 1)], 10),
    )
    rc = cli.main(["verify", "--input", str(chain_csv), "--k", "2"])
    assert rc == 3
    captured = capsys.readouterr()
    assert json.loads(captured.out)["match"] is False
    assert "mismatch" in captured.err


# ------------------------------------------------------------------- threads


def test_thread_cap_is_exported(monkeypatch):
    for var in cli._THREAD_VARS:
        monkeypatch.setenv(var, "sentinel")
    monkeypatch.setenv("GOPC_THREADS", "3")
    cli._configure_threads()
    for var in cli._THREAD_VARS:
        assert os.environ[var] == "3"


def test_thread_zero_means_auto(monkeypatch):
    for var in cli._THREAD_VARS:
        monkeypatch.setenv(var, "sentinel")
    monkeypatch.setenv("GOPC_THREADS", "0")
    cli._configure_threads()
    for var in cli._THREAD_VARS:
        assert os.environ[var] == "sentinel"


@pytest.mark.parametrize("value", ["abc", "-1", "1.5"])
def test_bad_thread_setting_exits_two(chain_csv, capsys, monkeypatch, value):
    monkeypatch.setenv("GOPC_THREADS", value)
    rc = cli.main(["cluster", "--input", str(chain_csv), "--k", "2"])
    assert rc == 2
    assert "GOPC_THREADS" in capsys.readouterr().err


# -------------------------------------------------------------- entry point


def test_console_script_round_trip(tmp_path):
    exe = shutil.which("gopc")
    assert exe, "console script not installed"
    data = tmp_path / "pts.csv"
    gen = subprocess.run(
        [exe, "gen", "--family", "blobs", "--n", "30", "--out", str(data)],
        capture_output=True, text=True, timeout=120,
    )
    assert gen.returncode == 0, gen.stderr
    run = subprocess.run(
        [exe, "cluster", "--input", str(data), "--k", "3"],
        capture_output=True, text=True, timeout=120,
    )
    assert run.returncode == 0, run.stderr
    assert json.loads(run.stdout)["k"] == 3
