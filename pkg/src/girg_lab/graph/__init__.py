"""Graph core."""

from .core import Graph, GraphLike, SubgraphView, as_graph
from .ops import (
    Components,
    bfs_distances,
    connected_components,
    eccentricity,
    external_neighborhood,
    giant_component,
    induced_by_degree,
    induced_by_weight,
    is_connected,
    isolated_count,
    tie_counts,
)

__all__ = [
    "Components",
    "Graph",
    "GraphLike",
    "SubgraphView",
    "as_graph",
    "bfs_distances",
    "connected_components",
    "eccentricity",
    "external_neighborhood",
    "giant_component",
    "induced_by_degree",
    "induced_by_weight",
    "is_connected",
    "isolated_count",
    "tie_counts",
]
