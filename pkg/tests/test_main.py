import json
import textwrap
from unittest.mock import patch

import pytest

from girg_lab.__main__ import ANALYSIS_COMMANDS, main
from girg_lab.write.graph_io import load_graph

TINY_CONFIG = """
model:
  n: 2000
  tau: 2.5
analysis:
  gamma: 1.2
  allow_subcritical: true
  trials: 5
  probes:
    grid_points: 3
    random_sets: 3
    bfs_balls: 3
    greedy_restarts: 2
    strip_sets: 2
  params:
    volume-oracle: {points: 20000}
    weight-tail: {draws: 20000}
    sampler-equivalence: {ns: [200, 500]}
    cut-contrast: {ns: [500, 1000]}
    walk: {tv_curve: true}
output:
  dir: results
logging:
  level: WARNING
"""

SUITE_CONFIG = """
model: {n: 100}
analysis: {seeds: [1, 2]}
experiments:
  small: {}
  large:
    model: {n: 500}
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(textwrap.dedent(TINY_CONFIG))
    return str(path)


@pytest.fixture
def suite_config(tmp_path):
    path = tmp_path / "suite.yaml"
    path.write_text(textwrap.dedent(SUITE_CONFIG))
    return str(path)


def test_command_replaces_configured_analyses(suite_config):
    with patch("girg_lab.__main__.run_experiments", return_value=0) as mock_run:
        assert main(["walk", "--config", suite_config, "--seed", "7", "--skip-failed"]) == 0
    configs, graph = mock_run.call_args.args
    assert graph is None
    assert [cfg.name for cfg in configs] == ["small", "large"]
    assert all(cfg.analysis.names == ("walk",) for cfg in configs)
    assert all(cfg.analysis.seeds == (7,) for cfg in configs)
    assert all(cfg.processing.skip_failed for cfg in configs)


def test_run_keeps_configured_analyses(suite_config):
    with patch("girg_lab.__main__.run_experiments", return_value=1) as mock_run:
        assert main(["run", "--config", suite_config, "--experiment", "large"]) == 1
    [cfg] = mock_run.call_args.args[0]
    assert cfg.model.n == 500
    assert cfg.analysis.names == ("generate",)
    assert cfg.analysis.seeds == (1, 2)


def test_errors_exit_with_status_one(tmp_path, suite_config, capsys):
    assert main(["generate", "--config", str(tmp_path / "missing.yaml")]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["generate", "--config", suite_config, "--experiment", "medium"]) == 1
    assert "medium" in capsys.readouterr().err
    assert main(["generate", "--config", suite_config, "--graph", str(tmp_path / "nothing")]) == 1


def test_unknown_command_is_rejected():
    with pytest.raises(SystemExit):
        main(["paint"])


@pytest.mark.parametrize("command", ANALYSIS_COMMANDS)
def test_every_command_runs_end_to_end(tmp_path, tiny_config, command):
    out = tmp_path / "out"
    assert main([command, "--config", tiny_config, "--out", str(out)]) == 0
    if command == "generate":
        assert (out / "config" / "seed-0" / "graph.edges").exists()
        assert not (out / "results.csv").exists()
        return
    assert (out / "results.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    exp = summary["experiments"]["config"]
    assert exp["analysis"]["names"] == [command]
    assert exp["failures"] == []
    assert command in exp["seeds"]["0"]


def test_run_with_json_format(tmp_path, tiny_config):
    out = tmp_path / "out"
    assert main(["run", "--config", tiny_config, "--out", str(out), "--format", "json", "--seed", "3"]) == 0
    # only graph files for the default analysis list
    assert (out / "config" / "seed-3" / "graph.verts").exists()

    assert main(["induce", "--config", tiny_config, "--out", str(out), "--format", "json"]) == 0
    records = json.loads((out / "results.json").read_text())
    assert {r["metric"].split(".")[0] for r in records} == {"induce"}


def test_saved_graph_is_reused(tmp_path, tiny_config):
    out = tmp_path / "out"
    assert main(["generate", "--config", tiny_config, "--out", str(out), "--seed", "4"]) == 0
    prefix = out / "config" / "seed-4" / "graph"
    saved = load_graph(prefix)

    again = tmp_path / "again"
    assert main(["generate", "--config", tiny_config, "--out", str(again), "--graph", str(prefix)]) == 0
    # loaded graphs are not written back
    assert not (again / "config" / "seed-0" / "graph.edges").exists()

    assert main(["induce", "--config", tiny_config, "--out", str(again), "--graph", str(prefix)]) == 0
    summary = json.loads((again / "summary.json").read_text())
    assert set(summary["experiments"]["config"]["seeds"]["0"]["induce"]["by_n"]) == {str(saved.n)}


def test_trace_files(tmp_path, tiny_config):
    out = tmp_path / "out"
    assert main(["rumor", "--config", tiny_config, "--out", str(out), "--trace"]) == 0
    lines = (out / "config" / "seed-0" / "rumor_trace_n2000.csv").read_text().splitlines()
    assert lines[0] == "round,informed_count"
    assert lines[1] == "0,1"
