"""Vertex-expansion measurement, adversarial worst-set search and shape checks."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from scipy.sparse import csgraph

from ..errors import BudgetExceededError, EmptySubgraphError
from ..graph.core import Graph, GraphLike, SubgraphView, as_graph
from ..graph.ops import (
    external_neighborhood,
    induced_by_degree,
    induced_by_weight,
    is_connected,
    isolated_count,
)
from ..utils.log import get_logger
from .strips import StripIndex, strip_width

logger = get_logger(__name__)

MODES = ("weight_threshold", "weight_band", "degree_threshold", "degree_band")
METHODS = ("bfs_ball", "greedy", "random", "strip_aligned")
BRUTE_FORCE_BUDGET = 5_000_000


def _members(s: Iterable[int]) -> np.ndarray:
    return np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))


def expansion_ratio(g: GraphLike, s: Iterable[int]) -> float:
    """|N_ext(S)| / |S| inside ``g`` (local ids for a view)."""
    members = _members(s)
    if members.size == 0:
        raise ValueError("expansion ratio of an empty set")
    return external_neighborhood(g, members).size / members.size


@dataclass(frozen=True)
class WorstSet:
    """A vertex set and its expansion ratio."""

    vertices: Tuple[int, ...]
    ratio: float
    method: str = ""

    @property
    def size(self) -> int:
        return len(self.vertices)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def brute_force_min_expansion(g: GraphLike, max_size: int, budget: int = BRUTE_FORCE_BUDGET) -> WorstSet:
    """Exact minimum expansion ratio over nonempty sets of size <= max_size.

    Ties go to the lexicographically smallest vertex tuple.

    Raises:
        BudgetExceededError: when more than ``budget`` sets would be enumerated.
    """
    graph = as_graph(g)
    if graph.n == 0:
        raise ValueError("brute force on an empty graph")
    max_size = min(max_size, graph.n)
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    total = sum(math.comb(graph.n, size) for size in range(1, max_size + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} sets exceed the brute-force budget of {budget}")

    masks = [0] * graph.n
    for v in range(graph.n):
        for u in graph.neighbors(v):
            masks[v] |= 1 << int(u)

    best_key: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(graph.n), size):
            inside = 0
            reach = 0
            for v in combo:
                inside |= 1 << v
                reach |= masks[v]
            key = (Fraction(_popcount(reach & ~inside), size), combo)
            if best_key is None or key < best_key:
                best_key = key
    ratio, combo = best_key
    return WorstSet(combo, float(ratio), "brute_force")


@dataclass(frozen=True)
class GreedyResult:
    """Best greedy set and the minimum ratio reached at every size."""

    best: WorstSet
    trajectory: np.ndarray
    sets: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self.best.vertices

    @property
    def ratio(self) -> float:
        return self.best.ratio


def _greedy_run(graph: Graph, start: int, limit: int) -> Tuple[np.ndarray, List[int]]:
    """Ratios after each greedy addition from ``start`` and the order of additions."""
    adj = graph.adjacency_matrix()
    inside = np.zeros(graph.n, dtype=bool)
    reached = np.zeros(graph.n, dtype=bool)
    order = [start]
    inside[start] = True
    reached[graph.neighbors(start)] = True
    ratios = [float(np.count_nonzero(reached))]
    boundary = int(np.count_nonzero(reached))
    while len(order) < limit:
        fresh = (adj @ (~inside & ~reached).astype(np.float64)).astype(np.int64)
        after = boundary - reached.astype(np.int64) + fresh
        after[inside] = np.iinfo(np.int64).max
        v = int(np.argmin(after))
        if inside[v]:
            break
        order.append(v)
        inside[v] = True
        reached[v] = False
        reached[graph.neighbors(v)] = True
        reached &= ~inside
        boundary = int(np.count_nonzero(reached))
        ratios.append(boundary / len(order))
    return np.asarray(ratios), order


def greedy_worst_set(
    g: GraphLike,
    restarts: int,
    max_frac: float,
    seed: int = 0,
    threads: int = 1,
    max_size: Optional[int] = None,
) -> GreedyResult:
    """Greedy adversary: grow from random starts, always adding the cheapest vertex.

    Each run stops at ``max_size`` vertices (default max(1, floor(max_frac * n))); the minimum
    ratio along every trajectory is tracked and the best over restarts
    returned (ties to the smaller ratio, then the smaller vertex tuple).
    """
    graph = as_graph(g)
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if not 0 < max_frac < 1:
        raise ValueError(f"max_frac must lie in (0, 1), got {max_frac}")
    if graph.n == 0:
        raise EmptySubgraphError("greedy search on an empty graph")
    limit = max(1, int(math.floor(max_frac * graph.n))) if max_size is None else min(max_size, graph.n)
    starts = np.random.default_rng(seed).integers(graph.n, size=restarts)

    def run(start: int):
        return _greedy_run(graph, int(start), limit)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            runs = list(executor.map(run, starts))
    else:
        runs = [run(start) for start in starts]

    trajectory = np.full(limit, np.inf)
    sets: List[Tuple[int, ...]] = [()] * limit
    best: Optional[WorstSet] = None
    for ratios, order in runs:
        for size, ratio in enumerate(ratios, start=1):
            candidate = tuple(sorted(order[:size]))
            if ratio < trajectory[size - 1] or (ratio == trajectory[size - 1] and candidate < sets[size - 1]):
                trajectory[size - 1] = ratio
                sets[size - 1] = candidate
            if best is None or (ratio, candidate) < (best.ratio, best.vertices):
                best = WorstSet(candidate, float(ratio), "greedy")
    return GreedyResult(best, trajectory, tuple(sets))


@dataclass(frozen=True)
class ProbePlan:
    """Which sets theorem_check evaluates, per probe size."""

    grid_points: int = 8
    max_frac: float = 0.5
    sizes: Tuple[int, ...] = ()
    random_sets: int = 20
    bfs_balls: int = 10
    greedy_restarts: int = 5
    strip_sets: int = 10
    methods: Tuple[str, ...] = METHODS
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown probe methods {sorted(unknown)}; expected {METHODS}")
        if not 0 < self.max_frac < 1:
            raise ValueError(f"max_frac must lie in (0, 1), got {self.max_frac}")
        if self.grid_points < 1:
            raise ValueError("grid_points must be >= 1")

    def probe_sizes(self, nv: int) -> List[int]:
        """Explicit sizes (clipped to nv) or a log grid from 1 to max_frac * nv."""
        top = max(1, int(math.floor(self.max_frac * nv)))
        if self.sizes:
            return sorted({s for s in self.sizes if 1 <= s <= nv})
        grid = np.unique(np.round(np.geomspace(1, top, self.grid_points)).astype(int))
        return [int(s) for s in grid]


@dataclass(frozen=True)
class ExpansionRow:
    s: int
    method: str
    ratio: float
    predicted: float


@dataclass(frozen=True)
class ExpansionReport:
    """Observed worst ratios per (size, method) against the predicted shape."""

    mode: str
    n: int
    nv: int
    gamma: float
    tau: float
    c_d: float
    rows: Tuple[ExpansionRow, ...]
    epsilon: float
    c_d_fitted: float
    connected: bool
    isolated: int
    min_induced_degree: int
    linear_regime_min: float

    def worst(self, s: int) -> float:
        return min(row.ratio for row in self.rows if row.s == s)

    def worst_by_size(self) -> Dict[int, float]:
        out: Dict[int, float] = {}
        for row in self.rows:
            out[row.s] = min(out.get(row.s, math.inf), row.ratio)
        return out

    def min_ratio(self, max_s: Optional[int] = None) -> float:
        ratios = [row.ratio for row in self.rows if max_s is None or row.s <= max_s]
        return min(ratios) if ratios else math.nan


def predicted_shape(s: int, nv: int, n: int, gamma: float, tau: float, c_d: float) -> float:
    """min{ln^(gamma (3 - tau)) n, (nv / s)^(1 - 1/c_d)}."""
    return min(math.log(n) ** (gamma * (3.0 - tau)), (nv / s) ** (1.0 - 1.0 / c_d))


def fit_expansion_constants(
    rows: Sequence[ExpansionRow], nv: int, n: int, gamma: float, tau: float, c_d: float
) -> Tuple[float, float]:
    """(epsilon, fitted c_d) from worst-per-size observations.

    c_d comes from the slope beta of log(worst) against log(nv / s) as
    1 / (1 - beta); it is nan when beta falls outside (0, 1) or the data are
    too few. epsilon is the smallest observed / predicted ratio.
    """
    worst: Dict[int, float] = {}
    for row in rows:
        worst[row.s] = min(worst.get(row.s, math.inf), row.ratio)
    xs = [math.log(nv / s) for s, r in worst.items() if r > 0 and s < nv]
    ys = [math.log(r) for s, r in worst.items() if r > 0 and s < nv]
    fitted = math.nan
    if len(set(xs)) >= 2:
        beta = stats.linregress(xs, ys).slope
        if 0 < beta < 1:
            fitted = 1.0 / (1.0 - beta)
    shape_cd = fitted if math.isfinite(fitted) else c_d
    epsilon = min(
        (r / predicted_shape(s, nv, n, gamma, tau, shape_cd) for s, r in worst.items()),
        default=math.nan,
    )
    return float(epsilon), float(fitted)


def fit_scaling_exponent(ns: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """(exponent, log-intercept) of a least-squares fit values ~ C * ns^exponent."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if ns.shape != values.shape or ns.size < 2:
        raise ValueError("need at least two matching (n, value) points")
    if np.any(ns <= 0) or np.any(values <= 0):
        raise ValueError("log-log fit needs positive data")
    fit = stats.linregress(np.log(ns), np.log(values))
    return float(fit.slope), float(fit.intercept)


def hyperplane_cut_edges(g: Graph, coordinate: int) -> int:
    """Edges whose endpoints lie in different halves [0, 1/2) and [1/2, 1) of a coordinate."""
    positions = g.positions
    if not 0 <= coordinate < positions.shape[1]:
        raise ValueError(f"coordinate {coordinate} out of range for d={positions.shape[1]}")
    upper = positions[:, coordinate] >= 0.5
    us, vs = g.edge_arrays()
    return int(np.count_nonzero(upper[us] != upper[vs]))


def select_subgraph(
    g: Graph, gamma: float, mode: str, c_prime: float = 1.0, c1: float = 1.0, c2: float = 2.0
) -> SubgraphView:
    """G' (threshold) or G'' (band) by weight or full-graph degree at scale ln^gamma n."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    scale = math.log(g.n) ** gamma
    if mode == "weight_threshold":
        return induced_by_weight(g, c_prime * scale)
    if mode == "weight_band":
        return induced_by_weight(g, c1 * scale, c2 * scale)
    if mode == "degree_threshold":
        return induced_by_degree(g, c_prime * scale)
    return induced_by_degree(g, c1 * scale, c2 * scale)


def _random_ratio(graph: Graph, s: int, count: int, rng: np.random.Generator) -> float:
    return min(expansion_ratio(graph, rng.choice(graph.n, size=s, replace=False)) for _ in range(count))


def _bfs_ratio(graph: Graph, s: int, count: int, rng: np.random.Generator) -> Optional[float]:
    best = None
    adj = graph.adjacency_matrix()
    for source in rng.integers(graph.n, size=count):
        order = csgraph.breadth_first_order(adj, int(source), directed=False, return_predecessors=False)
        if order.size < s:
            continue
        ratio = expansion_ratio(graph, order[:s])
        best = ratio if best is None else min(best, ratio)
    return best


def _strip_ratio(
    graph: Graph, strip_of: np.ndarray, positions: np.ndarray, strips: int, s: int, count: int, rng: np.random.Generator
) -> float:
    """Sets packed into as few strips as possible around random anchors."""
    best = math.inf
    for _ in range(count):
        i = int(rng.integers(strip_of.shape[1]))
        anchor = int(rng.integers(graph.n))
        gap = np.abs(strip_of[:, i] - strip_of[anchor, i])
        gap = np.minimum(gap, strips - gap)
        offset = np.abs(positions[:, i] - positions[anchor, i])
        offset = np.minimum(offset, 1.0 - offset)
        chosen = np.lexsort((offset, gap))[:s]
        best = min(best, expansion_ratio(graph, chosen))
    return best


def theorem_check(
    g: Graph,
    gamma: float,
    c_prime: float = 1.0,
    mode: str = "weight_band",
    probes: Optional[ProbePlan] = None,
    tau: float = 2.5,
    c1: float = 1.0,
    c2: float = 2.0,
    c_d: float = 2.0,
    linear_from: float = 0.1,
    threads: int = 1,
) -> ExpansionReport:
    """Worst observed expansion in G' / G'' against min{ln^(gamma(3-tau)) n, (|V'|/s)^(1-1/c_d)}.

    Raises:
        EmptySubgraphError: if the induced subgraph has no vertices.
    """
    probes = probes or ProbePlan()
    view = select_subgraph(g, gamma, mode, c_prime, c1, c2)
    if view.size == 0:
        raise EmptySubgraphError(f"{mode} subgraph is empty for n={g.n}, gamma={gamma}")
    graph = view.graph
    nv = view.size
    connected = is_connected(graph)
    if not connected:
        logger.warning("induced_subgraph_disconnected", mode=mode, nv=nv)

    sizes = probes.probe_sizes(nv)
    rows: List[ExpansionRow] = []
    min_degree = int(view.induced_degree.min())

    greedy: Optional[GreedyResult] = None
    if "greedy" in probes.methods and nv >= 2:
        greedy = greedy_worst_set(
            graph, probes.greedy_restarts, probes.max_frac, seed=probes.seed, threads=threads, max_size=max(sizes)
        )

    strip_of = None
    if "strip_aligned" in probes.methods:
        try:
            strips, _ = strip_width(g.n, gamma)
            strip_of = StripIndex.for_graph(g, gamma).strip_of[view.kept]
        except ValueError as exc:
            logger.warning("strip_adversary_skipped", reason=str(exc))

    for s in sizes:
        rng = np.random.default_rng([probes.seed, s])
        shape = predicted_shape(s, nv, g.n, gamma, tau, c_d)
        found: Dict[str, Optional[float]] = {}
        if "random" in probes.methods:
            found["random"] = _random_ratio(graph, s, probes.random_sets, rng)
        if "bfs_ball" in probes.methods:
            found["bfs_ball"] = _bfs_ratio(graph, s, probes.bfs_balls, rng)
        if greedy is not None and s <= greedy.trajectory.size:
            found["greedy"] = float(greedy.trajectory[s - 1])
        if strip_of is not None:
            found["strip_aligned"] = _strip_ratio(graph, strip_of, graph.positions, strips, s, probes.strip_sets, rng)
        if s == 1:
            # a single vertex expands by exactly its induced degree
            found["min_degree"] = float(min_degree)
        rows.extend(
            ExpansionRow(s, method, float(ratio), shape)
            for method, ratio in found.items()
            if ratio is not None and math.isfinite(ratio)
        )

    rows.sort(key=lambda row: (row.s, row.method))
    epsilon, fitted = fit_expansion_constants(rows, nv, g.n, gamma, tau, c_d)
    linear = [row.ratio * row.s / nv for row in rows if row.s >= linear_from * nv]
    report = ExpansionReport(
        mode=mode,
        n=g.n,
        nv=nv,
        gamma=gamma,
        tau=tau,
        c_d=c_d,
        rows=tuple(rows),
        epsilon=epsilon,
        c_d_fitted=fitted,
        connected=connected,
        isolated=isolated_count(view),
        min_induced_degree=min_degree,
        linear_regime_min=min(linear) if linear else math.nan,
    )
    logger.info(
        "theorem_check_done",
        mode=mode,
        n=g.n,
        nv=nv,
        probes=len(rows),
        min_ratio=report.min_ratio(),
        epsilon=epsilon,
        c_d_fitted=fitted,
    )
    return report
