import textwrap

import pytest

from girg_lab.config import (
    apply_overrides,
    build_config,
    deep_merge,
    env_threads,
    expand_suite,
    load_config,
    load_suite,
)
from girg_lab.errors import ConfigError
from girg_lab.model.geometry import Geometry


def write(tmp_path, text, name="config.yaml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def test_minimal_config_defaults():
    cfg = build_config({"model": {"n": 1000}})
    assert cfg.name == "default"
    assert cfg.model.n == 1000
    assert cfg.model.geometry is Geometry.MCD
    assert cfg.analysis.names == ("generate",)
    assert cfg.analysis.seeds == (0,)
    assert cfg.output.format == "csv"
    assert cfg.processing.threads == 1
    assert cfg.log_level == "INFO"
    assert cfg.params_for(5, n=10).seed == 5
    assert cfg.params_for(5, n=10).n == 10


def test_full_config_file(tmp_path):
    path = write(
        tmp_path,
        """
        model:
          n: 5000
          d: 3
          tau: 2.7
          geometry: linf
        analysis:
          names: [induce, strips]
          gamma: 4.0
          seeds: [1, 2]
          probes: {sizes: [1, 2, 4], methods: [greedy]}
          params:
            induce: {ns: [100, 200]}
        output: {dir: out, format: json, parquet: true}
        processing: {threads: 4}
        logging: {level: debug}
        """,
    )
    cfg = load_config(path)
    assert cfg.name == "config"
    assert (cfg.model.n, cfg.model.d, cfg.model.tau, cfg.model.geometry) == (5000, 3, 2.7, Geometry.LINF)
    assert cfg.analysis.names == ("induce", "strips")
    assert cfg.analysis.seeds == (1, 2)
    assert cfg.analysis.probes.sizes == (1, 2, 4)
    assert cfg.analysis.probes.methods == ("greedy",)
    assert cfg.analysis.params["induce"]["ns"] == [100, 200]
    assert (cfg.output.dir, cfg.output.format, cfg.output.parquet) == ("out", "json", True)
    assert cfg.processing.threads == 4
    assert cfg.log_level == "DEBUG"


@pytest.mark.parametrize(
    "raw,field",
    [
        ({}, "model.n"),
        ({"model": {"n": 10, "colour": 1}}, "model"),
        ({"model": {"n": 10}, "extra": {}}, "config"),
        ({"model": {"n": 10, "tau": 1.5}}, "model.tau"),
        ({"model": {"n": 10, "geometry": "l2"}}, "model.geometry"),
        ({"model": {"n": 10}, "analysis": {"gamma": 1.2}}, "analysis.gamma"),
        ({"model": {"n": 10}, "analysis": {"gamma": -1, "allow_subcritical": True}}, "analysis.gamma"),
        ({"model": {"n": 10}, "analysis": {"c1": 3, "c2": 2}}, "analysis.c1"),
        ({"model": {"n": 10}, "analysis": {"mode": "random"}}, "analysis.mode"),
        ({"model": {"n": 10}, "analysis": {"sampler": "fast"}}, "analysis.sampler"),
        ({"model": {"n": 10}, "analysis": {"seeds": []}}, "analysis.seeds"),
        ({"model": {"n": 10}, "analysis": {"seeds": [2 ** 64]}}, "analysis.seeds"),
        ({"model": {"n": 10}, "analysis": {"trials": 0}}, "analysis.trials"),
        ({"model": {"n": 10}, "analysis": {"probes": {"methods": ["magic"]}}}, "analysis.probes"),
        ({"model": {"n": 10}, "output": {"format": "xml"}}, "output.format"),
        ({"model": {"n": 10}, "processing": {"threads": 0}}, "processing.threads"),
        ({"model": {"n": 10}, "analysis": [1]}, "analysis"),
    ],
)
def test_invalid_configs_name_the_field(raw, field):
    with pytest.raises(ConfigError) as exc:
        build_config(raw)
    assert exc.value.field == field
    assert str(exc.value).startswith(field)


def test_subcritical_gamma_allowed_when_asked():
    cfg = build_config({"model": {"n": 10}, "analysis": {"gamma": 1.2, "allow_subcritical": True}})
    assert cfg.analysis.gamma == 1.2
    # tau >= 3 has no critical gamma
    assert build_config({"model": {"n": 10, "tau": 3.2}, "analysis": {"gamma": 0.5}}).analysis.gamma == 0.5


def test_deep_merge():
    base = {"model": {"n": 1, "tau": 2.5}, "analysis": {"names": ["a"]}}
    merged = deep_merge(base, {"model": {"n": 2}, "analysis": {"names": ["b"]}})
    assert merged == {"model": {"n": 2, "tau": 2.5}, "analysis": {"names": ["b"]}}
    assert base["model"]["n"] == 1


def test_suite_expansion(tmp_path):
    path = write(
        tmp_path,
        """
        model: {n: 1000, tau: 2.5}
        analysis: {gamma: 3.0}
        experiments:
          small: {}
          large:
            model: {n: 5000}
            analysis: {seeds: [4]}
        """,
        name="suite.yaml",
    )
    suite = load_suite(path)
    assert [cfg.name for cfg in suite] == ["small", "large"]
    assert [cfg.model.n for cfg in suite] == [1000, 5000]
    assert suite[1].analysis.gamma == 3.0
    assert suite[1].analysis.seeds == (4,)
    assert load_config(path, "large").model.n == 5000
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(path, "medium")
    assert expand_suite({"model": {"n": 1}}, "x") == [("x", {"model": {"n": 1}})]


def test_json_config_and_read_errors(tmp_path):
    path = write(tmp_path, '{"model": {"n": 50}}', name="c.json")
    assert load_config(path).model.n == 50
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "model: [1, 2\n", name="broken.yaml"))
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "- 1\n- 2\n", name="list.yaml"))


def test_overrides(monkeypatch):
    monkeypatch.delenv("GIRG_LAB_THREADS", raising=False)
    cfg = build_config({"model": {"n": 100}, "analysis": {"seeds": [1, 2, 3]}})
    out = apply_overrides(cfg, seed=9, out="elsewhere", threads=3, fmt="json", log_level="warning", trace=True)
    assert out.analysis.seeds == (9,)
    assert out.output.dir == "elsewhere"
    assert out.output.format == "json"
    assert out.output.trace
    assert out.processing.threads == 3
    assert out.log_level == "WARNING"
    assert apply_overrides(cfg) == cfg
    with pytest.raises(ConfigError):
        apply_overrides(cfg, seed=-1)
    with pytest.raises(ConfigError):
        apply_overrides(cfg, threads=0)


def test_thread_env(monkeypatch):
    cfg = build_config({"model": {"n": 100}})
    monkeypatch.setenv("GIRG_LAB_THREADS", "6")
    assert env_threads() == 6
    assert apply_overrides(cfg).processing.threads == 6
    assert apply_overrides(cfg, threads=2).processing.threads == 2
    monkeypatch.setenv("GIRG_LAB_THREADS", "many")
    with pytest.raises(ConfigError):
        env_threads()
