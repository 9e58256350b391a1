#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json

import pandas as pd
import pytest

from cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, build_parser, resolve_config, run_command
from schema import default_schema, save_schema

TINY = {
    "pipeline": {
        "gbt": {"n_trees": 20, "max_depth": 3},
        "rf": {"n_trees": 10, "max_depth": 5},
        "oof_folds": 3,
        "embedding_dim": 8,
    }
}


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    config = root / "tiny.json"
    config.write_text(json.dumps(TINY))
    data = root / "data" / "dataset.csv"
    assert run_command(["generate", "--n-records", "600", "--seed", "5", "--out", str(data)]) == EXIT_OK
    run = root / "run"
    code = run_command(["train", "--config", str(config), "--data", str(data), "--out-dir", str(run)])
    assert code == EXIT_OK
    return {"root": root, "config": config, "data": data, "run": run, "artifact": run / "pipeline.json"}


def test_generate_is_reproducible(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (first, second):
        assert run_command(["generate", "--n-records", "150", "--seed", "9", "--out", str(out)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / "a.truth.json").exists()
    assert json.loads((tmp_path / "run_config.json").read_text())["generator"]["n_records"] == 150


@pytest.mark.parametrize(
    "argv",
    [[], ["train"], ["generate", "--n-records", "many"], ["ablate", "--suite", "everything"], ["bogus"]],
)
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run_command(argv) == EXIT_USAGE


def test_help(capsys):
    assert run_command(["--help"]) == EXIT_OK
    assert "generate" in capsys.readouterr().out


def test_config_file_seed_reaches_every_stage(tmp_path):
    path = tmp_path / "seeded.json"
    path.write_text(json.dumps({"seed": 17, "pipeline": {"seed": 4}, "split": {"seed": 17}}))
    config, split_given = resolve_config(build_parser().parse_args(["train", "--config", str(path)]))
    assert (config.seed, config.generator.seed, config.split.seed, config.pipeline.seed) == (17, 17, 17, 4)
    assert not split_given

    flags = build_parser().parse_args(["train", "--config", str(path), "--seed", "3"])
    config, _ = resolve_config(flags)
    assert (config.seed, config.generator.seed, config.split.seed, config.pipeline.seed) == (3, 3, 3, 3)


def test_train_writes_artifact_and_split(workspace):
    run = workspace["run"]
    assert workspace["artifact"].exists()
    split = json.loads((run / "split.json").read_text())
    assert len(split["eval_subsets"]) == 3
    assert len(split["train"]) == 480
    fingerprints = json.loads((run / "fingerprints.json").read_text())
    assert set(fingerprints) == {"data"}
    assert json.loads((run / "run_config.json").read_text())["pipeline"]["gbt"]["n_trees"] == 20


def test_evaluate(workspace, tmp_path, capsys):
    out = tmp_path / "eval"
    argv = ["evaluate", "--artifact", str(workspace["artifact"]), "--data", str(workspace["data"]),
            "--out-dir", str(out), "--with-sweep"]
    assert run_command(argv) == EXIT_OK
    assert "Performance at threshold" in capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert [row["subset"] for row in report["rows"]] == ["subset_1", "subset_2", "subset_3", "overall"]
    assert report["split_fingerprint"] == json.loads((workspace["run"] / "split.json").read_text())["fingerprint"]
    assert (out / "sweep.csv").exists()


def test_predict(workspace, tmp_path):
    out = tmp_path / "predictions.csv"
    argv = ["predict", "--artifact", str(workspace["artifact"]), "--data", str(workspace["data"]), "--out", str(out)]
    assert run_command(argv) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["id", "predicted_funding_usd", "success_prob", "predicted_success", "funding_class"]
    assert len(frame) == 600


def test_sensitivity_command(workspace, tmp_path):
    out = tmp_path / "sens"
    assert run_command(["sensitivity", "--artifact", str(workspace["artifact"]), "--out-dir", str(out)]) == EXIT_OK
    shares = pd.read_csv(out / "sensitivity.csv")
    assert shares["share"].sum() == pytest.approx(1.0)


def test_schema_mismatch_exits_with_data_error(workspace, tmp_path):
    schema = tmp_path / "schema.json"
    save_schema(default_schema().without(names=["serial_founder"]), schema)
    argv = ["predict", "--artifact", str(workspace["artifact"]), "--data", str(workspace["data"]),
            "--schema", str(schema), "--out-dir", str(tmp_path)]
    assert run_command(argv) == EXIT_DATA


def test_missing_files_exit_with_data_error(workspace, tmp_path, capsys):
    argv = ["predict", "--artifact", str(tmp_path / "missing.json"), "--data", str(workspace["data"]),
            "--out-dir", str(tmp_path)]
    assert run_command(argv) == EXIT_DATA
    assert "missing.json" in capsys.readouterr().err
    argv = ["train", "--data", str(tmp_path / "nothing.csv"), "--out-dir", str(tmp_path)]
    assert run_command(argv) == EXIT_DATA


def test_undeclared_category_exits_with_data_error(workspace, tmp_path, capsys):
    frame = pd.read_csv(workspace["data"], dtype=str, keep_default_na=False)
    frame["education_level"] = "Kindergarten"
    data = tmp_path / "unknown_level.csv"
    frame.to_csv(data, index=False, lineterminator="\n")
    argv = ["train", "--config", str(workspace["config"]), "--data", str(data), "--out-dir", str(tmp_path / "run")]
    assert run_command(argv) == EXIT_DATA
    assert "Kindergarten" in capsys.readouterr().err


def test_train_and_evaluate_are_byte_identical(workspace, tmp_path):
    outputs = []
    for name in ("first", "second"):
        run = tmp_path / name
        argv = ["train", "--config", str(workspace["config"]), "--data", str(workspace["data"]), "--out-dir", str(run)]
        assert run_command(argv) == EXIT_OK
        argv = ["evaluate", "--artifact", str(run / "pipeline.json"), "--data", str(workspace["data"]),
                "--out-dir", str(run / "eval")]
        assert run_command(argv) == EXIT_OK
        outputs.append([(run / f).read_bytes() for f in ("pipeline.json", "split.json", "eval/report.json", "eval/report.txt")])
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == workspace["artifact"].read_bytes()
