"""Normalized-Laplacian spectral gap, Cheeger bounds and conductance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DisconnectedGraphError
from ..graph.core import Graph, GraphLike, SubgraphView, as_graph
from ..graph.ops import connected_components, indicator
from ..utils.log import get_logger

logger = get_logger(__name__)

DENSE_CUTOFF = 500
REL_TOL = 1e-6
DISCONNECTED_POLICIES = ("flag", "zero", "error", "per_component")


@dataclass(frozen=True)
class SpectralGap:
    """Second-smallest normalized-Laplacian eigenvalue and how it was obtained."""

    lambda2: float
    connected: bool
    method: str
    component_gaps: Tuple[float, ...] = field(default=())

    def __float__(self) -> float:
        return self.lambda2


def normalized_adjacency(g: Graph) -> sp.csr_matrix:
    """D^(-1/2) A D^(-1/2); isolated vertices get zero rows."""
    deg = g.degree.astype(float)
    inv_sqrt = np.zeros_like(deg)
    np.divide(1.0, np.sqrt(deg), out=inv_sqrt, where=deg > 0)
    scale = sp.diags(inv_sqrt)
    return (scale @ g.adjacency_matrix() @ scale).tocsr()


def normalized_laplacian(g: Graph) -> np.ndarray:
    return np.eye(g.n) - normalized_adjacency(g).toarray()


def _dense_gap(g: Graph) -> float:
    values = la.eigvalsh(normalized_laplacian(g))
    return float(values[1])


def _iterative_gap(g: Graph) -> float:
    # top eigenvalue of I + N after deflating sqrt(deg) is 2 - lambda2
    norm_adj = normalized_adjacency(g)
    phi0 = np.sqrt(g.degree.astype(float))
    phi0 /= np.linalg.norm(phi0)

    def matvec(x: np.ndarray) -> np.ndarray:
        x = np.ravel(x)
        return x + norm_adj @ x - 2.0 * phi0 * (phi0 @ x)

    op = spla.LinearOperator((g.n, g.n), matvec=matvec, dtype=np.float64)
    start = np.cos(np.arange(g.n, dtype=float))
    top = spla.eigsh(op, k=1, which="LA", tol=REL_TOL * 1e-4, v0=start, return_eigenvectors=False)
    return float(2.0 - top[0])


def _connected_gap(g: Graph) -> Tuple[float, str]:
    if g.n < DENSE_CUTOFF:
        value, method = _dense_gap(g), "dense"
    else:
        value, method = _iterative_gap(g), "lanczos"
    return min(2.0, max(0.0, value)), method


def spectral_gap(g: GraphLike, on_disconnected: str = "flag") -> SpectralGap:
    """lambda2 of the normalized Laplacian.

    Dense eigensolver below ``DENSE_CUTOFF`` vertices, deflated Lanczos above.
    Disconnected input: ``flag``/``zero`` report 0 with ``connected=False``,
    ``per_component`` additionally lists each nontrivial component's gap,
    ``error`` raises DisconnectedGraphError.
    """
    if on_disconnected not in DISCONNECTED_POLICIES:
        raise ValueError(f"on_disconnected must be one of {DISCONNECTED_POLICIES}, got {on_disconnected!r}")
    graph = as_graph(g)
    if graph.n < 2:
        raise ValueError(f"spectral gap needs >= 2 vertices, got {graph.n}")

    comps = connected_components(graph)
    if comps.count == 1:
        value, method = _connected_gap(graph)
        logger.debug("spectral_gap", n=graph.n, lambda2=value, method=method)
        return SpectralGap(value, True, method)

    logger.warning("spectral_gap_disconnected", n=graph.n, components=comps.count)
    if on_disconnected == "error":
        raise DisconnectedGraphError(f"graph has {comps.count} components")
    gaps: Tuple[float, ...] = ()
    if on_disconnected == "per_component":
        gaps = tuple(
            _connected_gap(SubgraphView(graph, np.flatnonzero(comps.labels == label)).graph)[0]
            for label in range(comps.count)
            if comps.sizes[label] >= 2
        )
    return SpectralGap(0.0, False, "components", gaps)


def cheeger_bounds(lambda2: float) -> Tuple[float, float]:
    """(lambda2 / 2, sqrt(2 lambda2)): bounds on the conductance."""
    if not 0.0 <= lambda2 <= 2.0:
        raise ValueError(f"lambda2 must lie in [0, 2], got {lambda2}")
    return lambda2 / 2.0, math.sqrt(2.0 * lambda2)


def conductance(g: GraphLike, s: Iterable[int]) -> float:
    """cut(S, V \\ S) / min(vol S, vol V \\ S)."""
    graph = as_graph(g)
    members = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))
    inside = indicator(graph.n, members)
    deg = graph.degree
    vol_in = int(deg[inside].sum())
    vol_out = int(deg[~inside].sum())
    if min(vol_in, vol_out) == 0:
        raise ValueError("conductance needs positive volume on both sides of the cut")
    us, vs = graph.edge_arrays()
    cut = int(np.count_nonzero(inside[us] != inside[vs]))
    return cut / min(vol_in, vol_out)
