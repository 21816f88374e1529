"""Immutable CSR graph and induced-subgraph views."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..model.kernel import VertexTable


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def canonical_edges(n: int, us: np.ndarray, vs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted unique (u < v) edge arrays; rejects self-loops and bad ids."""
    us = np.asarray(us, dtype=np.int64).ravel()
    vs = np.asarray(vs, dtype=np.int64).ravel()
    if us.shape != vs.shape:
        raise ValueError("edge endpoint arrays differ in length")
    if us.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if us.min() < 0 or vs.min() < 0 or us.max() >= n or vs.max() >= n:
        raise ValueError(f"edge endpoint out of range for n={n}")
    if np.any(us == vs):
        raise ValueError("self-loops are not allowed")
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    keys = np.unique(lo * n + hi)
    return keys // n, keys % n


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph stored as sorted CSR adjacency."""

    n: int
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    vertex_data: Optional[VertexTable] = field(default=None, repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Union[np.ndarray, Iterable[Tuple[int, int]]] = (),
        vertex_data: Optional[VertexTable] = None,
    ) -> "Graph":
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        return cls.from_edge_arrays(n, arr[:, 0], arr[:, 1], vertex_data)

    @classmethod
    def from_edge_arrays(
        cls,
        n: int,
        us: np.ndarray,
        vs: np.ndarray,
        vertex_data: Optional[VertexTable] = None,
    ) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        if vertex_data is not None and vertex_data.n != n:
            raise ValueError(f"vertex data has {vertex_data.n} rows for n={n}")
        lo, hi = canonical_edges(n, us, vs)
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, _readonly(indptr), _readonly(cols), vertex_data)

    @cached_property
    def degree(self) -> np.ndarray:
        return _readonly(np.diff(self.indptr))

    @property
    def m(self) -> int:
        return int(self.indices.shape[0] // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def _edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
        mask = rows < self.indices
        return _readonly(rows[mask]), _readonly(self.indices[mask].copy())

    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Edges as (u, v) arrays with u < v, lexicographically sorted."""
        return self._edge_arrays

    def edges(self) -> np.ndarray:
        us, vs = self._edge_arrays
        return np.column_stack([us, vs])

    @cached_property
    def _adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def adjacency_matrix(self) -> sp.csr_matrix:
        return self._adjacency

    @property
    def weights(self) -> np.ndarray:
        if self.vertex_data is None:
            raise ValueError("graph has no vertex data (weights)")
        return self.vertex_data.weights

    @property
    def positions(self) -> np.ndarray:
        if self.vertex_data is None:
            raise ValueError("graph has no vertex data (positions)")
        return self.vertex_data.positions


@dataclass(frozen=True)
class SubgraphView:
    """Vertex-induced subgraph of ``parent`` with old <-> new id maps.

    Local ids are positions in ``kept``; ``to_local[old]`` is -1 for
    vertices outside the view.
    """

    parent: Graph
    kept: np.ndarray

    def __post_init__(self):
        kept = np.unique(np.asarray(self.kept, dtype=np.int64))
        if kept.size and (kept[0] < 0 or kept[-1] >= self.parent.n):
            raise ValueError("kept ids out of range")
        object.__setattr__(self, "kept", _readonly(kept))

    @classmethod
    def whole(cls, g: Graph) -> "SubgraphView":
        return cls(g, np.arange(g.n, dtype=np.int64))

    @property
    def size(self) -> int:
        return int(self.kept.shape[0])

    def __len__(self) -> int:
        return self.size

    @cached_property
    def to_local(self) -> np.ndarray:
        mapping = np.full(self.parent.n, -1, dtype=np.int64)
        mapping[self.kept] = np.arange(self.size, dtype=np.int64)
        return _readonly(mapping)

    def to_parent(self, local_ids: np.ndarray) -> np.ndarray:
        return self.kept[np.asarray(local_ids, dtype=np.int64)]

    @cached_property
    def graph(self) -> Graph:
        """The induced subgraph as a standalone Graph in local ids."""
        us, vs = self.parent.edge_arrays()
        mapping = self.to_local
        mask = (mapping[us] >= 0) & (mapping[vs] >= 0)
        vertex_data = None
        if self.parent.vertex_data is not None:
            vertex_data = self.parent.vertex_data.subset(self.kept)
        return Graph.from_edge_arrays(self.size, mapping[us[mask]], mapping[vs[mask]], vertex_data)

    @property
    def induced_degree(self) -> np.ndarray:
        return self.graph.degree

    @property
    def parent_degree(self) -> np.ndarray:
        return self.parent.degree[self.kept]

    def restrict(self, local_mask: np.ndarray) -> "SubgraphView":
        """Sub-view keeping the local vertices where ``local_mask`` holds."""
        return SubgraphView(self.parent, self.kept[np.asarray(local_mask, dtype=bool)])


GraphLike = Union[Graph, SubgraphView]


def as_graph(g: GraphLike) -> Graph:
    return g.graph if isinstance(g, SubgraphView) else g
