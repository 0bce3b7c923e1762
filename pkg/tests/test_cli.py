import json

import numpy as np
import pytest

from xlab import cli
from xlab.errors import ConfigError


def test_config_validation():
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(system=(3, 3)).validate()
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(family="nope").validate()
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(system=(2, 2), family="lx").validate()
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(system=(2, 3), family="h").validate()
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(rank=5).validate()
    cli.ExperimentConfig(system=(2, 3), family="tgx", rank=6).validate()


@pytest.mark.parametrize("family,system", [
    ("general", (2, 2)), ("general", (2, 3)), ("x", (2, 2)),
    ("lx", (2, 3)), ("tgx", (2, 3)), ("mems", (2, 2)),
    ("mems", (2, 3)), ("h", (2, 2)),
])
def test_run_scatter_families(family, system):
    cfg = cli.ExperimentConfig(system=system, family=family, samples=16, seed=1)
    records = cli.run_scatter(cfg)
    assert [r.sample_index for r in records] == list(range(16))
    for r in records:
        assert 0.0 <= r.entanglement <= 1.0 + 1e-9
        assert 0.0 <= r.purity <= 1.0 + 1e-9
        assert r.family == family


def test_run_scatter_thread_invariance():
    base = cli.run_scatter(cli.ExperimentConfig(samples=24, seed=5, threads=1))
    for threads in (4, 8):
        other = cli.run_scatter(cli.ExperimentConfig(samples=24, seed=5,
                                                     threads=threads))
        assert [(r.entanglement, r.purity, r.rank) for r in other] == \
               [(r.entanglement, r.purity, r.rank) for r in base]


def test_run_conversion_campaign():
    cfg = cli.ExperimentConfig(samples=6, seed=2)
    summary = cli.run_conversion_campaign(cfg)
    assert summary.samples == 6
    assert summary.all_succeeded
    assert summary.max_delta_c <= cli.convert.DEFAULT_TOL_C
    assert summary.max_anti_x <= 1e-10
    assert sum(summary.attempt_histogram.values()) == 6


def test_emit_output_csv_and_json(tmp_path):
    records = cli.run_scatter(cli.ExperimentConfig(samples=5, seed=3))
    out = tmp_path / "r.csv"
    text = cli.emit_output(records, fmt="csv", out=str(out))
    assert out.read_text() == text
    assert text.splitlines()[0] == "entanglement,purity,rank,family,sample_index"
    assert len(text.splitlines()) == 6
    data = json.loads(cli.emit_output(records, fmt="json"))
    assert len(data) == 5
    assert data[0]["sample_index"] == 0


def test_emit_output_rejects_empty():
    with pytest.raises(ConfigError):
        cli.emit_output([], fmt="csv")


def test_emit_output_svg(tmp_path):
    records = cli.run_scatter(cli.ExperimentConfig(samples=5, seed=3))
    plot = tmp_path / "r.svg"
    cli.emit_output(records, fmt="csv", plot=str(plot))
    body = plot.read_text()
    assert body.startswith("<svg")
    assert "polyline" in body
    assert body.count("<circle") == 5


def test_main_scatter_to_file(tmp_path):
    out = tmp_path / "s.csv"
    rc = cli.main(["scatter", "--samples", "8", "--seed", "4",
                   "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 9


def test_main_mask_json(capsys):
    rc = cli.main(["mask", "--system", "2x3", "--format", "json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dims"] == [2, 3]
    assert [4, 1] not in data["pairs"]
    assert [4, 0] in data["pairs"]


def test_main_mems_curve(capsys):
    rc = cli.main(["mems-curve", "--system", "2x2", "--samples", "5"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "purity,entanglement"
    assert len(lines) == 6


def test_main_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "mems", "samples": 4, "seed": 0}))
    rc = cli.main(["scatter", "--config", str(cfg)])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert lines[1].split(",")[3] == "mems"


def test_main_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 4, "seed": 0}))
    rc = cli.main(["scatter", "--config", str(cfg), "--samples", "2"])
    assert rc == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_main_bad_config_exits_1(capsys):
    assert cli.main(["scatter", "--family", "lx"]) == 1
    assert cli.main(["scatter", "--config", "/nonexistent.json"]) == 1


def test_threads_env_var(monkeypatch, capsys):
    monkeypatch.setenv("XLAB_THREADS", "4")
    rc = cli.main(["scatter", "--samples", "6", "--seed", "9"])
    assert rc == 0
    with_env = capsys.readouterr().out
    monkeypatch.delenv("XLAB_THREADS")
    rc = cli.main(["scatter", "--samples", "6", "--seed", "9"])
    assert rc == 0
    assert capsys.readouterr().out == with_env


def test_main_verify():
    assert cli.main(["verify"]) == 0
