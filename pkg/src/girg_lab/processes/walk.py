"""Lazy random walks evolved by exact distribution powering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DisconnectedGraphError
from ..graph.core import GraphLike, as_graph
from ..graph.ops import is_connected
from ..utils.log import get_logger

logger = get_logger(__name__)

DEFAULT_STEP_BUDGET = 10_000
SUM_TOL = 1e-12


@dataclass(frozen=True)
class WalkDistribution:
    """Probability vector over vertices after ``step`` lazy-walk steps."""

    probs: np.ndarray
    step: int = 0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1:
            raise ValueError("a walk distribution is a 1-d vector")
        if np.any(probs < 0):
            raise ValueError("walk distribution has negative entries")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"walk distribution sums to {probs.sum()}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def point_mass(cls, n: int, v: int) -> "WalkDistribution":
        if not 0 <= v < n:
            raise ValueError(f"start vertex {v} out of range")
        probs = np.zeros(n)
        probs[v] = 1.0
        return cls(probs)


def _require_walkable(g: GraphLike):
    graph = as_graph(g)
    if graph.m == 0:
        raise ValueError("random walks need at least one edge")
    if not is_connected(graph):
        raise DisconnectedGraphError("random walk mixing needs a connected graph")
    return graph


def stationary_distribution(g: GraphLike) -> WalkDistribution:
    """pi(v) = deg(v) / 2|E|."""
    graph = _require_walkable(g)
    return WalkDistribution(graph.degree / (2.0 * graph.m))


def tv_distance(p: Union[WalkDistribution, np.ndarray], q: Union[WalkDistribution, np.ndarray]) -> float:
    """Total variation distance (1/2) sum |p_v - q_v|."""
    p = p.probs if isinstance(p, WalkDistribution) else np.asarray(p, dtype=float)
    q = q.probs if isinstance(q, WalkDistribution) else np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"distribution shapes differ: {p.shape} vs {q.shape}")
    return float(0.5 * np.abs(p - q).sum())


def lazy_walk_step(g: GraphLike, dist: WalkDistribution) -> WalkDistribution:
    """One step of the walk that stays put with probability 1/2."""
    graph = as_graph(g)
    deg = graph.degree.astype(float)
    flow = np.divide(dist.probs, deg, out=np.zeros_like(dist.probs), where=deg > 0)
    moved = graph.adjacency_matrix() @ flow
    # isolated vertices keep their whole mass
    stuck = np.where(deg > 0, 0.0, dist.probs)
    return WalkDistribution(0.5 * dist.probs + 0.5 * moved + 0.5 * stuck, dist.step + 1)


@dataclass(frozen=True)
class MixingResult:
    """Steps until TV <= eps, or the budget when not reached."""

    steps: int
    converged: bool
    tv_curve: np.ndarray


def walk_tv_curve(g: GraphLike, start: Union[int, WalkDistribution], steps: int) -> np.ndarray:
    """TV distance to stationarity after 0, 1, ..., ``steps`` lazy steps."""
    graph = _require_walkable(g)
    pi = stationary_distribution(graph)
    dist = start if isinstance(start, WalkDistribution) else WalkDistribution.point_mass(graph.n, start)
    curve = [tv_distance(dist, pi)]
    for _ in range(steps):
        dist = lazy_walk_step(graph, dist)
        curve.append(tv_distance(dist, pi))
    return np.asarray(curve)


def estimate_mixing_time(
    g: GraphLike,
    eps_tv: float,
    start: Union[int, WalkDistribution] = 0,
    budget: int = DEFAULT_STEP_BUDGET,
) -> MixingResult:
    """Smallest t with TV(lazy walk from ``start`` after t steps, pi) <= eps_tv.

    Exceeding ``budget`` is reported through ``converged=False``.
    """
    if not 0 < eps_tv < 1:
        raise ValueError(f"eps_tv must lie in (0, 1), got {eps_tv}")
    graph = _require_walkable(g)
    pi = stationary_distribution(graph)
    dist = start if isinstance(start, WalkDistribution) else WalkDistribution.point_mass(graph.n, start)
    curve = [tv_distance(dist, pi)]
    while curve[-1] > eps_tv and dist.step < budget:
        dist = lazy_walk_step(graph, dist)
        curve.append(tv_distance(dist, pi))
    converged = curve[-1] <= eps_tv
    if not converged:
        logger.warning("mixing_budget_exceeded", n=graph.n, budget=budget, tv=curve[-1])
    return MixingResult(dist.step, converged, np.asarray(curve))
