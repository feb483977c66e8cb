import json
import os

import pytest

from fracspace import (
    EXPERIMENTS,
    InvalidConfig,
    RunConfig,
    UnknownExperiment,
    config_hash,
    make_report,
    make_run_config,
    report_to_csv,
    report_to_json,
    write_report,
)
from fracspace.cli import main
from fracspace.reporting import summarize

_CELLS = [
    {"check": "a", "ratio": 1.0005, "bound": 1e-3, "pass": True, "theta": 0.5},
    {"check": "b", "ratio": None, "flag": False, "pass": True, "extra": "x"},
]


def test_make_run_config_validates():
    ok = make_run_config(
        {"experiment": "lemma41", "sizes": [16], "thetas": [0.5], "seed": 1},
        EXPERIMENTS,
    )
    assert ok.sizes == (16,) and ok.thetas == (0.5,) and ok.seed == 1
    with pytest.raises(UnknownExperiment):
        make_run_config({"experiment": "nope"}, EXPERIMENTS)
    with pytest.raises(InvalidConfig):
        make_run_config({"experiment": "lemma41", "bogus": 1}, EXPERIMENTS)
    with pytest.raises(InvalidConfig):
        make_run_config({"experiment": "lemma41", "sizes": [0]}, EXPERIMENTS)
    with pytest.raises(InvalidConfig):
        make_run_config({"experiment": "lemma41", "thetas": [1.0]}, EXPERIMENTS)
    with pytest.raises(InvalidConfig):
        make_run_config({"experiment": "lemma41", "format": "xml"}, EXPERIMENTS)
    with pytest.raises(InvalidConfig):
        make_run_config(
            {"experiment": "lemma41", "quadrature": {"panels": 3}}, EXPERIMENTS
        )


def test_config_hash_scope():
    a = RunConfig(experiment="lemma41", sizes=(16,), seed=1)
    b = RunConfig(experiment="lemma41", sizes=(16,), seed=1, output_dir="/tmp/x")
    c = RunConfig(experiment="lemma41", sizes=(16,), seed=1, format="csv")
    d = RunConfig(experiment="lemma41", sizes=(16,), seed=2)
    assert config_hash(a) == config_hash(b) == config_hash(c)
    assert config_hash(a) != config_hash(d)
    assert len(config_hash(a)) == 12


def test_summary_matches_cells():
    rep = make_report("demo", {}, _CELLS, seed=0, cfg_hash="abc")
    assert rep.summary == summarize(_CELLS)
    assert rep.summary["n_cells"] == 2
    assert rep.summary["n_pass"] == 2
    assert rep.summary["worst_ratio"] == 1.0005
    assert rep.passed


def test_csv_shape():
    rep = make_report("demo", {}, _CELLS)
    text = report_to_csv(rep)
    lines = text.split("\r\n")
    assert lines[-1] == ""  # trailing CRLF
    header = lines[0].split(",")
    assert header == sorted({"check", "ratio", "bound", "pass", "theta", "flag", "extra"})
    row0 = dict(zip(header, lines[1].split(",")))
    assert row0["pass"] == "true"
    assert row0["ratio"] == "1.0005"
    assert row0["flag"] == ""  # missing key -> empty field
    row1 = dict(zip(header, lines[2].split(",")))
    assert row1["flag"] == "false"
    assert row1["ratio"] == ""  # None -> empty field


def test_json_shape():
    rep = make_report("demo", {"p": 1}, _CELLS, seed=3, cfg_hash="h")
    text = report_to_json(rep)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert set(doc) == {"experiment", "parameters", "cells", "summary", "provenance"}
    assert doc["provenance"]["seed"] == 3
    # keys are serialized sorted
    assert text.index('"cells"') < text.index('"experiment"')


def test_json_rejects_nonfinite():
    rep = make_report("demo", {}, [{"ratio": float("nan"), "pass": True}])
    with pytest.raises(ValueError):
        report_to_json(rep)
    with pytest.raises(InvalidConfig):
        report_to_csv(rep)


def test_write_report_formats(tmp_path):
    cfg = RunConfig(experiment="demo", output_dir=str(tmp_path), format="both")
    rep = make_report("demo", {}, _CELLS, cfg_hash=config_hash(cfg))
    paths = write_report(rep, cfg)
    stems = [os.path.basename(p) for p in paths]
    h = config_hash(cfg)
    assert stems == [f"demo-{h}.csv", f"demo-{h}.json"]
    only_csv = RunConfig(experiment="demo", output_dir=str(tmp_path), format="csv")
    assert len(write_report(rep, only_csv)) == 1


# ---- CLI


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out


def test_cli_unknown_experiment(capsys):
    assert main(["definitely-not-real"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "UnknownExperiment"


def test_cli_bad_config_file(tmp_path, capsys):
    bad = tmp_path / "cfg.json"
    bad.write_text("{not json")
    assert main(["lemma41", "--config", str(bad)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "InvalidConfig"


def test_cli_runs_and_writes(tmp_path, capsys):
    code = main(
        [
            "higher-power",
            "--size",
            "24",
            "--out",
            str(tmp_path),
            "--format",
            "json",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    files = os.listdir(tmp_path)
    assert len(files) == 1 and files[0].startswith("higher-power-")
    doc = json.loads((tmp_path / files[0]).read_text())
    assert doc["summary"]["n_pass"] == doc["summary"]["n_cells"]


def test_cli_documented_config_example(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"thetas": [0.5], "sizes": [64]}))
    code = main(["lemma41", "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_cli_seed_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "sizes": [24]}))
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    out3 = tmp_path / "c"
    monkeypatch.setenv("FRACSPACE_SEED", "6")
    # env var beats the config file
    main(["higher-power", "--config", str(cfg), "--out", str(out1), "--format", "json"])
    # flag beats the env var
    main(
        [
            "higher-power",
            "--config",
            str(cfg),
            "--out",
            str(out2),
            "--format",
            "json",
            "--seed",
            "7",
        ]
    )
    monkeypatch.delenv("FRACSPACE_SEED")
    main(["higher-power", "--config", str(cfg), "--out", str(out3), "--format", "json"])
    seeds = []
    for d in (out1, out2, out3):
        doc = json.loads((d / os.listdir(d)[0]).read_text())
        seeds.append(doc["provenance"]["seed"])
    assert seeds == [6, 7, 5]


def test_cli_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("FRACSPACE_SEED", "not-an-int")
    assert main(["higher-power", "--size", "24", "--format", "json"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "InvalidConfig"


def test_cli_verification_error_exits_1(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps({"sizes": [24], "quadrature": {"tol": 1e-30, "max_panels": 8}})
    )
    assert main(["lemma41", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "QuadratureNotConverged"


def test_cli_byte_identical_reruns(tmp_path):
    out1 = tmp_path / "r1"
    out2 = tmp_path / "r2"
    for out in (out1, out2):
        assert main(["criticality", "--out", str(out)]) == 0
    f1 = sorted(os.listdir(out1))
    f2 = sorted(os.listdir(out2))
    assert f1 == f2
    for name in f1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
