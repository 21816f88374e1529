"""Seed-addressable sampling of vertices and edges."""

from .sampler import (
    EdgeRule,
    far_proposals,
    near_volume,
    sample_graph_bucketed,
    sample_graph_naive,
    sample_vertices,
    weight_classes,
)
from .tape import Purpose, RandomTape, pair_coin

__all__ = [
    "EdgeRule",
    "Purpose",
    "RandomTape",
    "far_proposals",
    "near_volume",
    "pair_coin",
    "sample_graph_bucketed",
    "sample_graph_naive",
    "sample_vertices",
    "weight_classes",
]
