"""Edge-list and vertex-attribute files.

``<prefix>.edges``::

    girg-edges v1 n=<n> m=<m>
    u v            (u < v, strictly increasing)

``<prefix>.verts``::

    girg-verts v1 n=<n> d=<d>
    id weight x_1 ... x_d   (reals with 17 significant digits)
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import GraphFormatError
from ..graph.core import Graph
from ..model.kernel import VertexTable
from ..utils.log import get_logger

logger = get_logger(__name__)

EDGES_SUFFIX = ".edges"
VERTS_SUFFIX = ".verts"
_EDGES_HEADER = re.compile(r"^girg-edges v1 n=(\d+) m=(\d+)$")
_VERTS_HEADER = re.compile(r"^girg-verts v1 n=(\d+) d=(\d+)$")

PathLike = Union[str, Path]


def graph_paths(prefix: PathLike) -> Tuple[Path, Path]:
    prefix = str(prefix)
    return Path(prefix + EDGES_SUFFIX), Path(prefix + VERTS_SUFFIX)


def _real(x: float) -> str:
    return format(float(x), ".17g")


def save_graph(prefix: PathLike, g: Graph) -> Tuple[Path, Optional[Path]]:
    """Write ``g`` next to ``prefix``; the vertex file only when g has vertex data."""
    edges_path, verts_path = graph_paths(prefix)
    edges_path.parent.mkdir(parents=True, exist_ok=True)
    us, vs = g.edge_arrays()
    with open(edges_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"girg-edges v1 n={g.n} m={g.m}\n")
        f.writelines(f"{u} {v}\n" for u, v in zip(us.tolist(), vs.tolist()))
    if g.vertex_data is None:
        logger.info("graph_saved", edges=str(edges_path), n=g.n, m=g.m)
        return edges_path, None
    data = g.vertex_data
    with open(verts_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"girg-verts v1 n={data.n} d={data.d}\n")
        for v in range(data.n):
            coords = " ".join(_real(x) for x in data.positions[v])
            f.write(f"{v} {_real(data.weights[v])} {coords}\n")
    logger.info("graph_saved", edges=str(edges_path), verts=str(verts_path), n=g.n, m=g.m)
    return edges_path, verts_path


def _read_lines(path: Path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read().splitlines()
    except OSError as exc:
        raise GraphFormatError(f"{path}: {exc.strerror or exc}") from exc


def _parse_edges(path: Path) -> Tuple[int, np.ndarray, np.ndarray]:
    lines = _read_lines(path)
    if not lines:
        raise GraphFormatError(f"{path}: empty file")
    header = _EDGES_HEADER.match(lines[0])
    if not header:
        raise GraphFormatError(f"{path}: malformed header {lines[0]!r}")
    n, m = int(header.group(1)), int(header.group(2))
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"{path}: header says m={m} but found {len(body)} pair lines")
    us = np.empty(m, dtype=np.int64)
    vs = np.empty(m, dtype=np.int64)
    for i, line in enumerate(body, start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"{path}:{i}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v < n:
            raise GraphFormatError(f"{path}:{i}: pair ({u}, {v}) violates u < v < n={n}")
        us[i - 2], vs[i - 2] = u, v
    keys = us * max(n, 1) + vs
    if m > 1 and np.any(np.diff(keys) <= 0):
        dup = bool(np.any(np.diff(keys) == 0))
        raise GraphFormatError(f"{path}: {'duplicate' if dup else 'unsorted'} pair lines")
    return n, us, vs


def _parse_verts(path: Path, n: int) -> VertexTable:
    lines = _read_lines(path)
    if not lines:
        raise GraphFormatError(f"{path}: empty file")
    header = _VERTS_HEADER.match(lines[0])
    if not header:
        raise GraphFormatError(f"{path}: malformed header {lines[0]!r}")
    count, d = int(header.group(1)), int(header.group(2))
    if count != n:
        raise GraphFormatError(f"{path}: n={count} does not match edge file n={n}")
    body = lines[1:]
    if len(body) != n:
        raise GraphFormatError(f"{path}: header says n={n} but found {len(body)} vertex lines")
    weights = np.empty(n)
    positions = np.empty((n, d))
    for i, line in enumerate(body):
        parts = line.split(" ")
        if len(parts) != d + 2 or parts[0] != str(i):
            raise GraphFormatError(f"{path}:{i + 2}: expected '{i} weight x_1..x_{d}', got {line!r}")
        try:
            weights[i] = float(parts[1])
            positions[i] = [float(x) for x in parts[2:]]
        except ValueError as exc:
            raise GraphFormatError(f"{path}:{i + 2}: {exc}") from exc
    try:
        return VertexTable(weights, positions)
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def load_graph(prefix: PathLike) -> Graph:
    """Read a graph written by ``save_graph``; the vertex file is optional."""
    edges_path, verts_path = graph_paths(prefix)
    n, us, vs = _parse_edges(edges_path)
    vertex_data = _parse_verts(verts_path, n) if verts_path.exists() else None
    g = Graph.from_edge_arrays(n, us, vs, vertex_data)
    logger.info("graph_loaded", edges=str(edges_path), n=g.n, m=g.m, has_vertex_data=vertex_data is not None)
    return g
