"""Long-format result rows, summary JSON and plot data files."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from ..graph.core import Graph, SubgraphView
from ..utils.log import get_logger

logger = get_logger(__name__)

RESULT_COLUMNS = ["experiment", "seed", "metric", "key", "value"]


def format_value(value: Any) -> str:
    """Stable text form of a metric value."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


class ResultsWriter:
    """Collects (experiment, seed, metric, key, value) rows into results.csv."""

    def __init__(self, out_dir: str, parquet: bool = False, fmt: str = "csv", stem: str = "results"):
        """Initialize writer.

        Args:
            out_dir: Output directory (created if missing)
            parquet: Also write results.parquet with the same rows
            fmt: ``csv`` or ``json`` (a list of row objects)
            stem: File name without suffix inside ``out_dir``
        """
        if fmt not in ("csv", "json"):
            raise ValueError(f"fmt must be 'csv' or 'json', got {fmt!r}")
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.fmt = fmt
        self.path = self.out_dir / f"{stem}.{fmt}"
        self.parquet = parquet
        self.records: List[Dict[str, str]] = []

    def write(self, experiment: str, seed: int, metric: str, value: Any, key: Any = ""):
        self.records.append(
            {
                "experiment": experiment,
                "seed": str(seed),
                "metric": metric,
                "key": "" if isinstance(key, str) and key == "" else format_value(key),
                "value": format_value(value),
            }
        )

    def write_rows(self, experiment: str, seed: int, rows: Iterable[Tuple[str, Any, Any]]):
        """Write (metric, key, value) triples."""
        for metric, key, value in rows:
            self.write(experiment, seed, metric, value, key)

    def frame(self) -> pd.DataFrame:
        """Rows sorted by (experiment, seed), insertion order kept within."""
        frame = pd.DataFrame(self.records, columns=RESULT_COLUMNS, dtype=str)
        frame["_seed"] = pd.to_numeric(frame["seed"], errors="coerce")
        return frame.sort_values(["experiment", "_seed"], kind="mergesort").drop(columns="_seed").reset_index(drop=True)

    def close(self) -> Path:
        frame = self.frame()
        if self.fmt == "csv":
            frame.to_csv(self.path, index=False, lineterminator="\n")
        else:
            with open(self.path, "w", encoding="utf-8") as f:
                json.dump(frame.to_dict(orient="records"), f, indent=1)
                f.write("\n")
        logger.info("wrote_results", path=str(self.path), rows=len(frame))
        if self.parquet:
            parquet_path = self.path.with_suffix(".parquet")
            pq.write_table(pa.Table.from_pandas(frame, preserve_index=False), parquet_path)
            logger.info("wrote_results_parquet", path=str(parquet_path), rows=len(frame))
        return self.path


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_summary(out_dir: str, summary: Dict[str, Any], filename: str = "summary.json") -> Path:
    path = Path(out_dir) / filename
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_json_safe(summary), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("wrote_summary", path=str(path))
    return path


def save_plot_data(out_dir: str, g: Graph, view: Optional[SubgraphView] = None, prefix: str = "plot") -> Tuple[Path, Path]:
    """Vertex positions/weights and edges, each flagged with subgraph membership."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    kept = np.zeros(g.n, dtype=bool)
    if view is not None:
        kept[view.kept] = True
    vertices = pd.DataFrame({"id": np.arange(g.n), "weight": g.weights})
    for i in range(g.positions.shape[1]):
        vertices[f"x_{i + 1}"] = g.positions[:, i]
    vertices["in_subgraph"] = kept
    us, vs = g.edge_arrays()
    edges = pd.DataFrame({"u": us, "v": vs, "in_subgraph": kept[us] & kept[vs]})
    vertex_path = out / f"{prefix}_vertices.csv"
    edge_path = out / f"{prefix}_edges.csv"
    vertices.to_csv(vertex_path, index=False, float_format="%.17g", lineterminator="\n")
    edges.to_csv(edge_path, index=False, lineterminator="\n")
    logger.info("wrote_plot_data", vertices=str(vertex_path), edges=str(edge_path))
    return vertex_path, edge_path


def write_trace(path: str, trace: Iterable[Tuple[int, int]]) -> Path:
    """Per-round (round, informed_count) CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(trace), columns=["round", "informed_count"]).to_csv(path, index=False, lineterminator="\n")
    return path
