"""Synchronous push-rumour and SI spreading rounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..errors import DisconnectedGraphError
from ..graph.core import Graph, GraphLike, as_graph
from ..graph.ops import is_connected
from ..utils.log import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_ROUNDS = 100_000


@dataclass
class SpreadState:
    """Informed/infected flags; bits are only ever set."""

    informed: np.ndarray
    source: int
    round: int = 0

    @classmethod
    def start(cls, n: int, source: int) -> "SpreadState":
        if not 0 <= source < n:
            raise ValueError(f"source {source} out of range for n={n}")
        informed = np.zeros(n, dtype=bool)
        informed[source] = True
        return cls(informed, source)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.informed))

    def inform(self, vertices: np.ndarray):
        self.informed[vertices] = True
        self.round += 1


@dataclass(frozen=True)
class SpreadResult:
    rounds: int
    reached: bool
    informed: int
    target: int
    trace: Tuple[Tuple[int, int], ...] = field(default=(), repr=False)


def coverage_target(n: int, coverage: float) -> int:
    """Informed vertices needed for ``coverage`` (at least the source)."""
    if not 0 < coverage <= 1:
        raise ValueError(f"coverage must lie in (0, 1], got {coverage}")
    return max(1, int(math.ceil(coverage * n - 1e-9)))


def _prepare(g: GraphLike, source: int, coverage: float) -> Tuple[Graph, SpreadState, int]:
    graph = as_graph(g)
    if not is_connected(graph):
        raise DisconnectedGraphError("spreading needs a connected graph")
    return graph, SpreadState.start(graph.n, source), coverage_target(graph.n, coverage)


def _run(graph: Graph, state: SpreadState, target: int, step, max_rounds: int, trace: bool, kind: str) -> SpreadResult:
    history = [(0, state.count)] if trace else []
    while state.count < target and state.round < max_rounds:
        state.inform(step(state.informed))
        if trace:
            history.append((state.round, state.count))
    reached = state.count >= target
    if not reached:
        logger.warning("spread_round_cap", process=kind, n=graph.n, rounds=state.round, informed=state.count)
    return SpreadResult(state.round, reached, state.count, target, tuple(history))


def push_rumor(
    g: GraphLike,
    source: int,
    coverage: float,
    seed: int = 0,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    trace: bool = False,
) -> SpreadResult:
    """Push protocol: every informed vertex tells one uniform random neighbour per round."""
    graph, state, target = _prepare(g, source, coverage)
    rng = np.random.default_rng(seed)
    deg = graph.degree

    def step(informed: np.ndarray) -> np.ndarray:
        callers = np.flatnonzero(informed & (deg > 0))
        picks = np.floor(rng.random(callers.size) * deg[callers]).astype(np.int64)
        return graph.indices[graph.indptr[callers] + picks]

    return _run(graph, state, target, step, max_rounds, trace, "push")


def si_spread(
    g: GraphLike,
    source: int,
    beta: float,
    coverage: float,
    seed: int = 0,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    trace: bool = False,
) -> SpreadResult:
    """SI rounds: a susceptible vertex with k infected neighbours falls ill w.p. 1 - (1 - beta)^k."""
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    graph, state, target = _prepare(g, source, coverage)
    rng = np.random.default_rng(seed)
    adj = graph.adjacency_matrix()

    def step(infected: np.ndarray) -> np.ndarray:
        exposure = adj @ infected.astype(np.float64)
        prob = 1.0 - (1.0 - beta) ** exposure
        draws = rng.random(graph.n)
        return np.flatnonzero(~infected & (exposure > 0) & (draws < prob))

    return _run(graph, state, target, step, max_rounds, trace, "si")


def push_rumor_rounds(g: GraphLike, source: int, coverage: float, seed: int = 0, max_rounds: Optional[int] = None) -> int:
    return push_rumor(g, source, coverage, seed, max_rounds or DEFAULT_MAX_ROUNDS).rounds


def si_spread_rounds(
    g: GraphLike, source: int, beta: float, coverage: float, seed: int = 0, max_rounds: Optional[int] = None
) -> int:
    return si_spread(g, source, beta, coverage, seed, max_rounds or DEFAULT_MAX_ROUNDS).rounds
