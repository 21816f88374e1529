"""Strip partition, strip statistics and the strip covering bound."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from ..errors import DegenerateStripError
from ..graph.core import Graph, SubgraphView
from ..graph.ops import external_neighborhood
from ..model.kernel import MAX_SEED, ModelParams, VertexTable
from ..utils.log import get_logger

logger = get_logger(__name__)

Band = Tuple[float, float]

EXACT_COVER_BUDGET = 200_000


def _strip_count(n: int, gamma: float) -> int:
    return int(math.floor(n / math.log(n) ** (2.0 * gamma)))


def minimal_strip_n(gamma: float) -> int:
    """Smallest n beyond which the strip count stays >= 1."""
    lo = max(3, int(math.ceil(math.exp(2.0 * gamma))))
    if _strip_count(lo, gamma) >= 1:
        return lo
    hi = lo
    while _strip_count(hi, gamma) < 1:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _strip_count(mid, gamma) >= 1:
            hi = mid
        else:
            lo = mid
    return hi


def strip_width(n: int, gamma: float) -> Tuple[int, float]:
    """(M, 1/M) with M = floor(n / (ln n)^(2 gamma)).

    Raises:
        DegenerateStripError: if M = 0.
    """
    if n < 3:
        raise ValueError(f"strip partition needs n >= 3, got {n}")
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    strips = _strip_count(n, gamma)
    if strips < 1:
        raise DegenerateStripError(n, gamma, minimal_strip_n(gamma))
    return strips, 1.0 / strips


def gamma_for_strip_count(n: int, strips: int) -> float:
    """A gamma for which ``strip_width(n, gamma)`` has exactly ``strips`` strips.

    Returns the midpoint of the admissible interval
    (ln(n/(M+1)), ln(n/M)] / (2 ln ln n).
    """
    if n < 3:
        raise ValueError(f"strip partition needs n >= 3, got {n}")
    if not 1 <= strips <= n:
        raise ValueError(f"strip count must lie in [1, {n}], got {strips}")
    scale = 2.0 * math.log(math.log(n))
    lo = math.log(n / (strips + 1)) / scale
    hi = math.log(n / strips) / scale
    if hi <= 0:
        raise ValueError(f"no positive gamma gives {strips} strips for n={n}")
    return 0.5 * (max(lo, 0.0) + hi)


@dataclass(frozen=True)
class StripIndex:
    """Strip ids of every vertex in every coordinate."""

    n: int
    gamma: float
    num_strips: int
    width: float
    strip_of: np.ndarray

    @classmethod
    def build(cls, vertices: VertexTable, gamma: float, n: Optional[int] = None) -> "StripIndex":
        """Index ``vertices``; ``n`` (default: their count) fixes the strip width."""
        n = vertices.n if n is None else n
        strips, width = strip_width(n, gamma)
        strip_of = np.minimum(np.floor(vertices.positions * strips).astype(np.int64), strips - 1)
        strip_of.setflags(write=False)
        logger.debug("strip_index_built", n=n, gamma=gamma, strips=strips, d=vertices.d)
        return cls(n, gamma, strips, width, strip_of)

    @classmethod
    def for_graph(cls, g: Graph, gamma: float) -> "StripIndex":
        if g.vertex_data is None:
            raise ValueError("graph has no vertex data (positions)")
        return cls.build(g.vertex_data, gamma)

    @property
    def M(self) -> int:
        return self.num_strips

    @property
    def d(self) -> int:
        return int(self.strip_of.shape[1])

    def bucket_sizes(self, i: int) -> np.ndarray:
        return np.bincount(self.strip_of[:, i], minlength=self.num_strips)

    def buckets(self, i: int) -> List[np.ndarray]:
        """Vertex ids of every i-strip, in strip order."""
        order = np.argsort(self.strip_of[:, i], kind="stable")
        bounds = np.cumsum(self.bucket_sizes(i))[:-1]
        return np.split(order, bounds)


def strip_spread(idx: StripIndex, s: Iterable[int]) -> Tuple[int, int]:
    """(k_star, coordinate): most distinct i-strips met by S over coordinates i."""
    members = np.unique(np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64))
    if members.size == 0:
        raise ValueError("strip spread of an empty set")
    distinct = [np.unique(idx.strip_of[members, i]).size for i in range(idx.d)]
    best = int(np.argmax(distinct))
    return int(distinct[best]), best


def _in_band(weights: np.ndarray, band: Band) -> np.ndarray:
    lo, hi = band
    return (weights >= lo) & (weights <= hi)


def same_strip_neighbors(view: SubgraphView, idx: StripIndex, v: int, i: int, band: Band) -> int:
    """Kept neighbours u of v (parent id) with the same i-strip and w_u in ``band``."""
    if view.to_local[v] < 0:
        raise ValueError(f"vertex {v} is not kept in the view")
    nbrs = view.parent.neighbors(v)
    nbrs = nbrs[view.to_local[nbrs] >= 0]
    same = idx.strip_of[nbrs, i] == idx.strip_of[v, i]
    return int(np.count_nonzero(same & _in_band(view.parent.weights[nbrs], band)))


def same_strip_neighbor_counts(view: SubgraphView, idx: StripIndex, band: Band) -> np.ndarray:
    """(|kept|, d) array of same-strip in-band neighbour counts, local order."""
    graph = view.graph
    us, vs = graph.edge_arrays()
    pu, pv = view.kept[us], view.kept[vs]
    weights = view.parent.weights
    band_u, band_v = _in_band(weights[pu], band), _in_band(weights[pv], band)
    counts = np.zeros((view.size, idx.d), dtype=np.int64)
    for i in range(idx.d):
        same = idx.strip_of[pu, i] == idx.strip_of[pv, i]
        counts[:, i] = (
            np.bincount(us[same & band_v], minlength=view.size)
            + np.bincount(vs[same & band_u], minlength=view.size)
        )
    return counts


def constant_set_neighbors(view: SubgraphView, s: Iterable[int], band: Band) -> int:
    """|N_ext(S)| within the view counting only neighbours with weight in ``band``.

    ``s`` holds local ids of the view.
    """
    outside = external_neighborhood(view.graph, s)
    return int(np.count_nonzero(_in_band(view.graph.weights[outside], band)))


@dataclass(frozen=True)
class CoverBoundInput:
    """Arguments of the strip covering union bound."""

    nv: int
    s: int
    k: int
    M: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if not 1 <= self.s <= self.nv:
            raise ValueError(f"need 1 <= s <= nv, got s={self.s}, nv={self.nv}")
        if not 1 <= self.k <= min(self.s, self.M):
            raise ValueError(f"need 1 <= k <= min(s, M), got k={self.k}, s={self.s}, M={self.M}")


def log_binom(n: int, k: int) -> float:
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def _stirling_r(n: int) -> float:
    return 0.5 * math.log(2.0 * math.pi * n)


def log_binom_stirling(n: int, k: int) -> float:
    """Stirling-type upper bound on ln C(n, k); exact 0 when k is 0 or n."""
    if k == 0 or k == n:
        return 0.0
    return (
        (n - k) * math.log(n / (n - k))
        + k * math.log(n / k)
        + _stirling_r(n)
        - _stirling_r(n - k)
        - _stirling_r(k)
    )


def _cap(log_value: float) -> float:
    return 1.0 if log_value >= 0 else math.exp(log_value)


def cover_bound(inp: CoverBoundInput) -> float:
    """min{1, C(nv, s) C(M, k)^d (k/M)^(d s)}, evaluated in log space."""
    log_value = (
        log_binom(inp.nv, inp.s)
        + inp.d * log_binom(inp.M, inp.k)
        + inp.d * inp.s * math.log(inp.k / inp.M)
    )
    return _cap(log_value)


def cover_bound_stirling(inp: CoverBoundInput) -> float:
    """The same union bound with the Stirling-type binomial estimate."""
    log_value = (
        log_binom_stirling(inp.nv, inp.s)
        + inp.d * log_binom_stirling(inp.M, inp.k)
        + inp.d * inp.s * math.log(inp.k / inp.M)
    )
    return _cap(log_value)


def predicted_strip_budget(
    s: int,
    nv: int,
    n: int,
    gamma: float,
    tau: float,
    c1: float = 0.5,
    c2: float = 0.5,
    c_d: float = 1.5,
) -> float:
    """s * min{c1, c2 (ln n)^(-gamma (3 - tau)) (nv / s)^(1 - 1/c_d)}."""
    second = c2 * math.log(n) ** (-gamma * (3.0 - tau)) * (nv / s) ** (1.0 - 1.0 / c_d)
    return s * min(c1, second)


@dataclass(frozen=True)
class CoverEstimate:
    """Monte Carlo frequency of strip-covered s-subsets of V'."""

    frequency: float
    trials: int
    exact: bool
    bound_mean: float
    nv_mean: float


def _cell_counts(strip_of: np.ndarray, strips: int) -> np.ndarray:
    d = strip_of.shape[1]
    flat = np.ravel_multi_index(tuple(strip_of.T), (strips,) * d)
    return np.bincount(flat, minlength=strips ** d).reshape((strips,) * d)


def _top_k_sum(values: np.ndarray, k: int) -> np.ndarray:
    """Sum of the k largest entries along the last axis."""
    if k >= values.shape[-1]:
        return values.sum(axis=-1)
    return np.partition(values, values.shape[-1] - k, axis=-1)[..., -k:].sum(axis=-1)


def covered_exists(strip_of: np.ndarray, strips: int, s: int, k: int, budget: int = EXACT_COVER_BUDGET) -> Tuple[bool, bool]:
    """Whether some s vertices fit in k strips per coordinate; returns (covered, exact).

    Chooses k occupied strips in every coordinate but the last exactly and the
    best k in the last coordinate greedily, which is optimal once the others are
    fixed. Over budget, answers the necessary condition that every coordinate's
    k fullest strips hold s vertices (an over-estimate).
    """
    nv, d = strip_of.shape
    if nv < s:
        return False, True
    if k >= strips:
        return True, True
    counts = _cell_counts(strip_of, strips)
    for i in range(d):
        counts = np.compress(counts.sum(axis=tuple(j for j in range(d) if j != i)) > 0, counts, axis=i)
    occupied = counts.shape
    if all(size <= k for size in occupied):
        return True, True

    choices = [list(itertools.combinations(range(size), min(k, size))) for size in occupied[:-1]]
    total = math.prod(len(c) for c in choices)
    if total > budget:
        marginal_ok = all(
            _top_k_sum(counts.sum(axis=tuple(j for j in range(d) if j != i)), k) >= s for i in range(d)
        )
        return bool(marginal_ok), False

    if d == 1:
        return bool(_top_k_sum(counts, k) >= s), True
    head = choices[:-1]
    last = np.asarray(choices[-1], dtype=np.int64)
    for picks in itertools.product(*head):
        reduced = counts
        for pick in picks:
            reduced = reduced[list(pick)].sum(axis=0)
        # reduced now has shape (occupied[-2], occupied[-1])
        rows = reduced[last].sum(axis=1)
        if np.any(_top_k_sum(rows, k) >= s):
            return True, True
    return False, True


def empirical_cover_probability(
    p: ModelParams,
    gamma: float,
    s: int,
    k: int,
    trials: int,
    c_prime: float = 1.0,
    threads: int = 1,
) -> CoverEstimate:
    """Fraction of draws where some s-subset of V' is covered by <= k strips per coordinate.

    Trial t uses seed ``p.seed + t``; only vertex data is sampled.
    """
    from ..sample.sampler import sample_vertices

    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if s < 1 or k < 1:
        raise ValueError(f"s and k must be >= 1, got s={s}, k={k}")
    strips, _ = strip_width(p.n, gamma)
    threshold = c_prime * math.log(p.n) ** gamma

    def trial(t: int) -> Tuple[bool, bool, float, int]:
        vertices = sample_vertices(p.with_seed((p.seed + t) % (MAX_SEED + 1)))
        heavy = vertices.weights >= threshold
        strip_of = StripIndex.build(vertices, gamma).strip_of[heavy]
        nv = int(strip_of.shape[0])
        covered, exact = covered_exists(strip_of, strips, s, k)
        if nv < s:
            bound = 0.0
        else:
            bound = cover_bound(CoverBoundInput(nv, s, min(k, s, strips), strips, p.d))
        return covered, exact, bound, nv

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(trial, range(trials)))
    else:
        results = [trial(t) for t in range(trials)]

    covered = np.array([r[0] for r in results], dtype=bool)
    exact = all(r[1] for r in results)
    if not exact:
        logger.warning("cover_decision_inexact", n=p.n, s=s, k=k, strips=strips)
    estimate = CoverEstimate(
        frequency=float(covered.mean()),
        trials=trials,
        exact=exact,
        bound_mean=float(np.mean([r[2] for r in results])),
        nv_mean=float(np.mean([r[3] for r in results])),
    )
    logger.info("cover_probability_estimated", n=p.n, s=s, k=k, frequency=estimate.frequency, bound=estimate.bound_mean)
    return estimate


@dataclass(frozen=True)
class DegreeConcentration:
    """How tightly degrees follow weights over V'."""

    degree_per_weight: float
    max_relative_deviation: float
    light_high_degree: int


def degree_concentration(g: Graph, view: SubgraphView, gamma: float, light_factor: float = 0.25) -> DegreeConcentration:
    """Fit deg ~ r * w over the view; count light vertices of high degree in g.

    Light means w <= light_factor * ln^gamma n; high degree means deg >= ln^gamma n.
    """
    if view.size == 0:
        raise ValueError("degree concentration of an empty view")
    w = g.weights[view.kept]
    deg = g.degree[view.kept].astype(float)
    ratio = float(np.dot(w, deg) / np.dot(w, w))
    expected = ratio * w
    deviation = float(np.max(np.abs(deg - expected) / expected)) if ratio > 0 else math.inf
    scale = math.log(g.n) ** gamma
    light = (g.weights <= light_factor * scale) & (g.degree >= scale)
    return DegreeConcentration(ratio, deviation, int(np.count_nonzero(light)))


def strip_rows(
    n: int, d: int, tau: float, gamma: float, cells: Sequence[Tuple[int, int]], estimates: Sequence[CoverEstimate]
) -> List[dict]:
    """Result rows (n, d, tau, gamma, s, k, bound, empirical, trials)."""
    return [
        {
            "n": n,
            "d": d,
            "tau": tau,
            "gamma": gamma,
            "s": s,
            "k": k,
            "bound": est.bound_mean,
            "empirical": est.frequency,
            "trials": est.trials,
            "exact": est.exact,
        }
        for (s, k), est in zip(cells, estimates)
    ]
