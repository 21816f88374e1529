import io
import json
from concurrent.futures import ThreadPoolExecutor

import pytest

from girg_lab.config import build_config
from girg_lab.pipeline import run_experiment
from girg_lab.utils.log import cell_context, get_logger, log_memory_usage, setup_logging


@pytest.fixture
def records():
    stream = io.StringIO()
    setup_logging("DEBUG", stream=stream)
    yield lambda: [json.loads(line) for line in stream.getvalue().splitlines() if line.startswith("{")]
    setup_logging("WARNING")


def test_records_are_json_with_logger_name(records):
    get_logger("girg_lab.tests").info("sampled", n=100, m=240)
    [record] = records()
    assert record["event"] == "sampled"
    assert record["logger"] == "girg_lab.tests"
    assert record["level"] == "info"
    assert (record["n"], record["m"]) == (100, 240)
    assert "timestamp" in record


def test_level_filters_records(records):
    stream = io.StringIO()
    setup_logging("WARNING", stream=stream)
    log = get_logger("girg_lab.tests")
    log.info("hidden")
    log.warning("shown")
    assert [json.loads(line)["event"] for line in stream.getvalue().splitlines()] == ["shown"]


def test_cell_context_tags_records(records):
    log = get_logger("girg_lab.tests")
    with cell_context("weight-law", 3):
        log.info("inside")
    log.info("outside")
    inside, outside = records()
    assert (inside["experiment"], inside["seed"]) == ("weight-law", 3)
    assert "seed" not in outside and "experiment" not in outside


def test_cell_context_is_per_thread(records):
    log = get_logger("girg_lab.tests")

    def work(seed):
        with cell_context("exp", seed):
            for _ in range(20):
                log.info("step", mine=seed)

    with ThreadPoolExecutor(max_workers=4) as executor:
        list(executor.map(work, range(4)))
    got = records()
    assert len(got) == 80
    assert all(r["seed"] == r["mine"] for r in got)


def test_pipeline_records_carry_experiment_and_seed(tmp_path, records):
    raw = {
        "model": {"n": 300},
        "analysis": {"names": ["generate"], "seeds": [1, 2], "gamma": 1.2, "allow_subcritical": True},
        "output": {"dir": str(tmp_path / "out")},
    }
    assert run_experiment(build_config(raw, "tagged")) == 0
    started = [r for r in records() if r["event"] == "analysis_started"]
    assert sorted(r["seed"] for r in started) == [1, 2]
    assert all(r["experiment"] == "tagged" and r["analysis"] == "generate" for r in started)


def test_log_memory_usage(records):
    memory_mb = log_memory_usage("test")
    [record] = [r for r in records() if r["event"] == "memory_usage"]
    assert memory_mb > 0
    assert record["stage"] == "test"
