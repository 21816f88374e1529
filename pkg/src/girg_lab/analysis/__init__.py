"""Strip statistics, expansion search and spectral certificates."""

from .expansion import (
    ExpansionReport,
    ExpansionRow,
    GreedyResult,
    ProbePlan,
    WorstSet,
    brute_force_min_expansion,
    expansion_ratio,
    fit_expansion_constants,
    fit_scaling_exponent,
    greedy_worst_set,
    hyperplane_cut_edges,
    predicted_shape,
    select_subgraph,
    theorem_check,
)
from .spectral import SpectralGap, cheeger_bounds, conductance, spectral_gap
from .strips import (
    CoverBoundInput,
    CoverEstimate,
    StripIndex,
    constant_set_neighbors,
    cover_bound,
    cover_bound_stirling,
    degree_concentration,
    empirical_cover_probability,
    gamma_for_strip_count,
    predicted_strip_budget,
    same_strip_neighbor_counts,
    same_strip_neighbors,
    strip_spread,
    strip_width,
)

__all__ = [
    "CoverBoundInput",
    "CoverEstimate",
    "ExpansionReport",
    "ExpansionRow",
    "GreedyResult",
    "ProbePlan",
    "SpectralGap",
    "StripIndex",
    "WorstSet",
    "brute_force_min_expansion",
    "cheeger_bounds",
    "conductance",
    "constant_set_neighbors",
    "cover_bound",
    "cover_bound_stirling",
    "degree_concentration",
    "empirical_cover_probability",
    "expansion_ratio",
    "fit_expansion_constants",
    "fit_scaling_exponent",
    "gamma_for_strip_count",
    "greedy_worst_set",
    "hyperplane_cut_edges",
    "predicted_shape",
    "predicted_strip_budget",
    "same_strip_neighbor_counts",
    "same_strip_neighbors",
    "select_subgraph",
    "spectral_gap",
    "strip_spread",
    "strip_width",
    "theorem_check",
]
