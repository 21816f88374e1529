"""Random-walk and spreading simulators."""

from .spreading import (
    SpreadResult,
    SpreadState,
    coverage_target,
    push_rumor,
    push_rumor_rounds,
    si_spread,
    si_spread_rounds,
)
from .walk import (
    MixingResult,
    WalkDistribution,
    estimate_mixing_time,
    lazy_walk_step,
    stationary_distribution,
    tv_distance,
    walk_tv_curve,
)

__all__ = [
    "MixingResult",
    "SpreadResult",
    "SpreadState",
    "WalkDistribution",
    "coverage_target",
    "estimate_mixing_time",
    "lazy_walk_step",
    "push_rumor",
    "push_rumor_rounds",
    "si_spread",
    "si_spread_rounds",
    "stationary_distribution",
    "tv_distance",
    "walk_tv_curve",
]
