import json

import pytest

from ustc.cli import build_parser, main
from ustc.data import read_uncertain_tsv
from ustc.experiment import read_results


@pytest.fixture
def files(tmp_path):
    assert main(["synth", "--out-dir", str(tmp_path), "--n-per-class", "5", "--length", "12"]) == 0
    return tmp_path / "Planted_TRAIN.tsv", tmp_path / "Planted_TEST.tsv"


def test_defaults():
    args = build_parser().parse_args(["run", "--train", "a", "--test", "b"])
    assert (args.min_len, args.max_len, args.contract_seconds, args.k) == (3, None, 600.0, 10)
    assert (args.measure, args.classifier, args.cdf_k) == ("ued", "gnb", 100)


def test_inject(files, tmp_path, capsys):
    out = tmp_path / "u.tsv"
    fig = tmp_path / "u.png"
    assert main(["inject", "--train", str(files[0]), "--c", "0.4", "--seed", "3", "--out", str(out), "--figure", str(fig)]) == 0
    D = read_uncertain_tsv(out)
    assert (D.n, D.m) == (10, 12)
    assert D.delta.any()
    assert fig.stat().st_size > 0


def test_select_json(files, capsys):
    assert main(["select", "--train", str(files[0]), "--k", "2", "--ordering", "stochastic", "--max-len", "4", "--c", "0.2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ordering"] == "stochastic"
    assert len(doc["shapelets"]) == 2
    assert doc["shapelets"][0]["quality"] >= doc["shapelets"][1]["quality"]


def test_run_appends(files, tmp_path, capsys):
    out = tmp_path / "r.csv"
    argv = ["run", "--train", str(files[0]), "--test", str(files[1]), "--classifier", "ugnb",
            "--c", "0.3", "--max-len", "5", "--out", str(out)]
    assert main(argv) == 0
    assert main(argv) == 0
    rows = read_results(out)
    assert len(rows) == 2
    assert rows[0].model == "UST(UED,UGNB)"
    assert capsys.readouterr().out.startswith("dataset,model")


def test_run_config_error(files, capsys):
    code = main(["run", "--train", str(files[0]), "--test", str(files[1]), "--classifier", "ugnb", "--measure", "dust-normal"])
    assert code == 2
    assert "valid combinations" in capsys.readouterr().err


def test_bench_and_report(files, tmp_path, capsys):
    out = tmp_path / "bench" / "table.csv"
    argv = ["bench", "--train", str(files[0]), "--test", str(files[1]), "--models", "ST", "UST(UED,UGNB)",
            "--c", "0.1", "0.5", "--seeds", "0", "1", "--max-len", "4", "--out", str(out)]
    assert main(argv) == 0
    assert len(read_results(out)) == 8
    assert (out.parent / "table_accuracy.png").exists()
    assert (out.parent / "table_train_time.png").exists()
    figs = tmp_path / "figs"
    assert main(["report", str(out), "--figures-dir", str(figs)]) == 0
    assert "median_accuracy" in capsys.readouterr().out
    assert (figs / "table_accuracy.png").exists()


def test_missing_file(tmp_path, capsys):
    assert main(["run", "--train", str(tmp_path / "nope"), "--test", str(tmp_path / "nope")]) == 1
    assert "loading stage" in capsys.readouterr().err


def test_contract_flag(files, capsys):
    base = ["select", "--train", str(files[0]), "--max-len", "4", "--k", "1"]
    assert main(base + ["--contract-seconds", "0"]) == 1
    assert "contract" in capsys.readouterr().err
    assert main(base + ["--contract-seconds", "inf"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["evaluated"] == doc["total_candidates"]
