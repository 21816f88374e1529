import csv
import json
import math

import numpy as np
import pyarrow.parquet as pq
import pytest

from girg_lab.graph.core import Graph
from girg_lab.graph.ops import induced_by_weight
from girg_lab.model.kernel import VertexTable
from girg_lab.write.results_writer import (
    ResultsWriter,
    format_value,
    save_plot_data,
    write_summary,
    write_trace,
)


def test_format_value():
    assert format_value(True) == "true"
    assert format_value(np.int64(7)) == "7"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(math.nan) == "nan"
    assert format_value(-math.inf) == "-inf"
    assert format_value("n=10") == "n=10"


def test_results_writer_csv(tmp_path):
    writer = ResultsWriter(str(tmp_path))
    writer.write_rows("b", 10, [("induce.size", "n=100", 4)])
    writer.write_rows("b", 2, [("induce.size", "n=100", 3), ("induce.ratio", "n=100", 0.5)])
    writer.write("a", 0, "generate.m", 12)
    path = writer.close()

    assert path == tmp_path / "results.csv"
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == ["experiment", "seed", "metric", "key", "value"]
    assert [(r["experiment"], r["seed"], r["metric"]) for r in rows] == [
        ("a", "0", "generate.m"),
        ("b", "2", "induce.size"),
        ("b", "2", "induce.ratio"),
        ("b", "10", "induce.size"),
    ]
    assert rows[0]["key"] == ""
    assert rows[2]["value"] == "0.5"


def test_results_writer_json_and_parquet(tmp_path):
    writer = ResultsWriter(str(tmp_path), parquet=True, fmt="json")
    writer.write("exp", 1, "walk.mixing_steps", 17)
    writer.write("exp", 0, "walk.mixing_steps", 21)
    path = writer.close()

    with open(path) as f:
        records = json.load(f)
    assert [r["seed"] for r in records] == ["0", "1"]
    assert records[0]["value"] == "21"
    assert pq.read_table(tmp_path / "results.parquet").num_rows == 2


def test_results_writer_rejects_format(tmp_path):
    with pytest.raises(ValueError):
        ResultsWriter(str(tmp_path), fmt="xml")


def test_write_summary_replaces_non_finite(tmp_path):
    path = write_summary(str(tmp_path / "out"), {"b": np.float64(math.nan), "a": {1: np.int64(3), "ok": np.bool_(True)}})
    data = json.loads(path.read_text())
    assert data == {"a": {"1": 3, "ok": True}, "b": None}


def test_save_plot_data(tmp_path):
    weights = np.array([1.0, 5.0, 6.0])
    positions = np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]])
    g = Graph.from_edges(3, [(0, 1), (1, 2)], VertexTable(weights, positions))
    vertex_path, edge_path = save_plot_data(str(tmp_path), g, induced_by_weight(g, 5.0))
    with open(vertex_path, newline="") as f:
        vertices = list(csv.DictReader(f))
    assert list(vertices[0]) == ["id", "weight", "x_1", "x_2", "in_subgraph"]
    assert [v["in_subgraph"] for v in vertices] == ["False", "True", "True"]
    with open(edge_path, newline="") as f:
        edges = list(csv.DictReader(f))
    assert [(e["u"], e["v"], e["in_subgraph"]) for e in edges] == [("0", "1", "False"), ("1", "2", "True")]


def test_write_trace(tmp_path):
    path = write_trace(str(tmp_path / "t" / "trace.csv"), [(0, 1), (1, 3)])
    assert path.read_text() == "round,informed_count\n0,1\n1,3\n"
