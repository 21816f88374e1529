"""Neighbourhoods, induced subgraphs and component structure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np
from scipy.sparse import csgraph

from ..model.geometry import distances
from ..model.kernel import ModelParams, is_strong_tie
from .core import Graph, GraphLike, SubgraphView, as_graph


def _vertex_array(g: Graph, s: Union[Iterable[int], np.ndarray]) -> np.ndarray:
    arr = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValueError(f"vertex ids out of range for n={g.n}")
    return arr


def indicator(n: int, s: np.ndarray) -> np.ndarray:
    x = np.zeros(n, dtype=bool)
    x[s] = True
    return x


def external_neighborhood(g: GraphLike, s: Iterable[int]) -> np.ndarray:
    """N_ext(S): vertices outside S adjacent to some vertex of S (sorted ids)."""
    graph = as_graph(g)
    members = _vertex_array(graph, s)
    inside = indicator(graph.n, members)
    touched = graph.adjacency_matrix() @ inside.astype(np.float64) > 0
    return np.flatnonzero(touched & ~inside)


def induced_by_weight(g: Graph, lo: float, hi: float = math.inf) -> SubgraphView:
    """View on the vertices with lo <= w_v <= hi."""
    if lo > hi:
        raise ValueError(f"empty weight interval [{lo}, {hi}]")
    weights = g.weights
    return SubgraphView(g, np.flatnonzero((weights >= lo) & (weights <= hi)))


def induced_by_degree(g: Graph, lo: float, hi: float = math.inf) -> SubgraphView:
    """View on the vertices whose degree in the full graph lies in [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty degree interval [{lo}, {hi}]")
    degree = g.degree
    return SubgraphView(g, np.flatnonzero((degree >= lo) & (degree <= hi)))


def isolated_count(view: SubgraphView) -> int:
    """Kept vertices with no kept neighbour."""
    return int(np.count_nonzero(view.induced_degree == 0))


@dataclass(frozen=True)
class Components:
    """Component labels (0 = component of the smallest vertex id) and sizes."""

    labels: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.sizes.shape[0])

    def largest(self) -> int:
        """Label of the largest component; ties go to the lower label."""
        return int(np.argmax(self.sizes)) if self.count else -1


def connected_components(g: GraphLike) -> Components:
    """Components of a graph or view (labels indexed by local ids for views)."""
    graph = as_graph(g)
    if graph.n == 0:
        return Components(np.empty(0, np.int64), np.empty(0, np.int64))
    _, raw = csgraph.connected_components(graph.adjacency_matrix(), directed=False)
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.shape[0])
    labels = relabel[raw].astype(np.int64)
    return Components(labels, np.bincount(labels).astype(np.int64))


def giant_component(g: Graph) -> SubgraphView:
    comps = connected_components(g)
    if comps.count == 0:
        return SubgraphView(g, np.empty(0, np.int64))
    return SubgraphView(g, np.flatnonzero(comps.labels == comps.largest()))


def is_connected(g: GraphLike) -> bool:
    graph = as_graph(g)
    return graph.n > 0 and connected_components(graph).count == 1


def bfs_distances(g: GraphLike, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices get -1."""
    graph = as_graph(g)
    if not 0 <= source < graph.n:
        raise ValueError(f"source {source} out of range")
    dist = csgraph.shortest_path(graph.adjacency_matrix(), unweighted=True, directed=False, indices=source)
    out = np.full(graph.n, -1, dtype=np.int64)
    finite = np.isfinite(dist)
    out[finite] = dist[finite].astype(np.int64)
    return out


def eccentricity(g: GraphLike, source: int) -> int:
    """Largest hop distance from ``source`` within its component."""
    return int(bfs_distances(g, source).max())


def tie_counts(g: Graph, params: ModelParams) -> Tuple[int, int]:
    """(strong, weak) counts over the realised edges of a sampled graph."""
    us, vs = g.edge_arrays()
    if us.size == 0:
        return 0, 0
    w, x = g.weights, g.positions
    strong = int(np.count_nonzero(is_strong_tie(w[us], w[vs], distances(x[us], x[vs], params.geometry), params)))
    return strong, int(us.size) - strong
