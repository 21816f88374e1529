"""Vertex and edge sampling.

Two edge samplers share one decision rule, so for a given seed they return
the same graph:

* ``sample_graph_naive`` evaluates every unordered pair;
* ``sample_graph_bucketed`` evaluates only pairs in nearby strip cells plus the
  long-range *proposals*.

Proposals come from one geometric skip stream per (vertex u, weight class b)
that runs over the class-b vertices with larger id. The stream proposes each
pair independently with the envelope probability ``theta(u, b)``, which bounds
the kernel for every pair whose volume exceeds the near volume ``v0``. The
uniform deciding pair {u, v} (u < v) is

    U = theta * coin            if (u, v) was proposed
    U = theta + (1 - theta) * coin   otherwise,

with ``coin = pair_coin(u, v)``. U is uniform on [0, 1), and the edge is
present iff ``U < p(u, v)``. A pair that was not proposed has ``U >= theta``,
so it can only be an edge when ``p > theta``, which forces it into the near
region.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

from ..graph.core import Graph
from ..model.geometry import Geometry, distances, inverse_volume
from ..model.kernel import ModelParams, VertexTable, connection_probability, sample_weight
from ..utils.log import get_logger
from .tape import Purpose, RandomTape

logger = get_logger(__name__)

PAIR_BLOCK = 1 << 21
RADIUS_SLACK = 1.0 + 1e-9
_MAX_SKIP_BATCH = 4096

EdgeArrays = Tuple[np.ndarray, np.ndarray]


def sample_vertices(p: ModelParams) -> VertexTable:
    """Weights and positions of all n vertices, addressed on the seed's tape."""
    tape = RandomTape(p.seed)
    ids = np.arange(p.n, dtype=np.int64)
    weights = sample_weight(tape.open_uniform(Purpose.WEIGHT, ids), p.tau)
    coords = np.arange(p.d, dtype=np.int64)
    positions = tape.uniform(Purpose.POSITION, ids[:, None], coords[None, :])
    return VertexTable(np.asarray(weights, dtype=float), positions)


def near_volume(n: int, d: int) -> float:
    """Ball volume below which pairs are enumerated geometrically."""
    if n < 2:
        return 1.0
    return min(1.0, 2.0 * d * math.log(n) ** 2 / n)


def weight_classes(weights: np.ndarray) -> np.ndarray:
    """floor(log2 w) computed exactly from the binary exponent."""
    _, exponent = np.frexp(np.asarray(weights, dtype=float))
    return (exponent - 1).astype(np.int64)


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        threads = int(os.getenv("GIRG_LAB_THREADS", "1") or 1)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return int(threads)


def _expand(owners: np.ndarray, starts: np.ndarray, counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten ranges [start, start + count) per owner into (owner, index) arrays."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    rep_owner = np.repeat(owners, counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return rep_owner, np.repeat(starts, counts) + offsets


def _blocks(counts: np.ndarray, budget: int = PAIR_BLOCK) -> Iterator[Tuple[int, int]]:
    """Split consecutive rows into [lo, hi) slices holding about ``budget`` items."""
    if counts.size == 0:
        return
    cum = np.cumsum(counts)
    lo = 0
    while lo < counts.size:
        base = cum[lo - 1] if lo else 0
        hi = int(np.searchsorted(cum, base + budget, side="right"))
        hi = max(hi, lo + 1)
        yield lo, min(hi, counts.size)
        lo = hi


@dataclass(frozen=True)
class EdgeRule:
    """The decision rule shared by both samplers for one vertex draw."""

    params: ModelParams
    vertices: VertexTable
    tape: RandomTape
    v0: float
    classes: np.ndarray
    proposal_keys: np.ndarray

    @classmethod
    def build(cls, params: ModelParams, vertices: VertexTable) -> "EdgeRule":
        tape = RandomTape(params.seed)
        v0 = near_volume(params.n, params.d)
        classes = weight_classes(vertices.weights)
        rule = cls(params, vertices, tape, v0, classes, np.empty(0, np.int64))
        us, vs = far_proposals(rule)
        object.__setattr__(rule, "proposal_keys", np.unique(us * params.n + vs))
        return rule

    def envelope(self, w_u: np.ndarray, b: np.ndarray) -> np.ndarray:
        """theta(u, b) = min{1, c * min{w_u 2^(b+1) / (n v0), 1}^alpha}."""
        p = self.params
        ratio = np.ldexp(np.asarray(w_u, dtype=float), np.asarray(b, dtype=np.int64) + 1) / (p.n * self.v0)
        return np.minimum(1.0, p.kernel_c * np.minimum(ratio, 1.0) ** p.alpha)

    def proposed(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        keys = us * self.params.n + vs
        idx = np.searchsorted(self.proposal_keys, keys)
        hit = idx < self.proposal_keys.size
        hit[hit] = self.proposal_keys[idx[hit]] == keys[hit]
        return hit

    def decide(self, us: np.ndarray, vs: np.ndarray) -> EdgeArrays:
        """Edges among candidate pairs; requires us < vs elementwise."""
        if us.size == 0:
            return us, vs
        w = self.vertices.weights
        x = self.vertices.positions
        dist = distances(x[us], x[vs], self.params.geometry)
        prob = connection_probability(w[us], w[vs], dist, self.params)
        theta = self.envelope(w[us], self.classes[vs])
        coin = self.tape.pair_coins(us, vs)
        uniform = np.where(self.proposed(us, vs), theta * coin, theta + (1.0 - theta) * coin)
        keep = uniform < prob
        return us[keep], vs[keep]


def _class_proposals(rule: EdgeRule, b: int, members: np.ndarray) -> EdgeArrays:
    n = rule.params.n
    owners = np.arange(n, dtype=np.int64)
    starts = np.searchsorted(members, owners, side="right").astype(np.int64)
    lengths = members.size - starts
    theta = rule.envelope(rule.vertices.weights, np.full(n, b))
    live = (lengths > 0) & (theta > 0)
    owners, starts, lengths, theta = owners[live], starts[live], lengths[live], theta[live]
    with np.errstate(divide="ignore"):
        log_stay = np.log1p(-theta)

    pos = np.full(owners.size, -1, dtype=np.int64)
    draw = np.zeros(owners.size, dtype=np.int64)
    found_u: List[np.ndarray] = []
    found_v: List[np.ndarray] = []
    while owners.size:
        remaining = lengths - pos - 1
        batch = np.clip(np.ceil(1.25 * theta * remaining).astype(np.int64) + 4, 1, _MAX_SKIP_BATCH)
        seg_owner, step = _expand(np.arange(owners.size, dtype=np.int64), draw, batch)
        u = rule.tape.open_uniform(Purpose.SKIP, owners[seg_owner], b, step)
        with np.errstate(divide="ignore", invalid="ignore"):
            skips = np.floor(np.log(u) / log_stay[seg_owner])
        gaps = 1 + np.minimum(skips, lengths[seg_owner]).astype(np.int64)
        ends = np.cumsum(batch)
        cum = np.cumsum(gaps)
        before = cum[ends - batch] - gaps[ends - batch]
        positions = pos[seg_owner] + cum - np.repeat(before, batch)
        hit = positions < lengths[seg_owner]
        found_u.append(owners[seg_owner[hit]])
        found_v.append(members[starts[seg_owner[hit]] + positions[hit]])

        pos = positions[ends - 1]
        draw = draw + batch
        alive = pos < lengths
        owners, starts, lengths, theta = owners[alive], starts[alive], lengths[alive], theta[alive]
        log_stay, pos, draw = log_stay[alive], pos[alive], draw[alive]

    if not found_u:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(found_u), np.concatenate(found_v)


def far_proposals(rule: EdgeRule) -> EdgeArrays:
    """All proposed pairs (u < v) of the per-(vertex, weight class) skip streams."""
    classes = rule.classes
    us: List[np.ndarray] = [np.empty(0, np.int64)]
    vs: List[np.ndarray] = [np.empty(0, np.int64)]
    if rule.params.n >= 2 and rule.params.kernel_c > 0:
        for b in np.unique(classes):
            pu, pv = _class_proposals(rule, int(b), np.flatnonzero(classes == b))
            us.append(pu)
            vs.append(pv)
    out_u, out_v = np.concatenate(us), np.concatenate(vs)
    logger.debug("far_proposals", n=rule.params.n, proposals=int(out_u.size))
    return out_u, out_v


def _all_pair_units(rule: EdgeRule) -> List[Callable[[], EdgeArrays]]:
    n = rule.params.n
    rows = np.arange(n, dtype=np.int64)
    counts = n - 1 - rows

    def unit(lo: int, hi: int) -> Callable[[], EdgeArrays]:
        def run() -> EdgeArrays:
            us, vs = _expand(rows[lo:hi], rows[lo:hi] + 1, counts[lo:hi])
            return rule.decide(us, vs)
        return run

    return [unit(lo, hi) for lo, hi in _blocks(counts)]


def _run_units(units: List[Callable[[], EdgeArrays]], threads: int) -> EdgeArrays:
    if threads == 1 or len(units) <= 1:
        results = [unit() for unit in units]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda unit: unit(), units))
    if not results:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate([r[0] for r in results]), np.concatenate([r[1] for r in results])


def _assemble(rule: EdgeRule, edges: EdgeArrays) -> Graph:
    return Graph.from_edge_arrays(rule.params.n, edges[0], edges[1], rule.vertices)


def sample_graph_naive(p: ModelParams, threads: Optional[int] = None) -> Graph:
    """Evaluate every unordered pair; the quadratic reference sampler."""
    threads = resolve_threads(threads)
    vertices = sample_vertices(p)
    rule = EdgeRule.build(p, vertices)
    logger.info("sampling_graph", sampler="naive", n=p.n, d=p.d, geometry=p.geometry.value, seed=p.seed)
    graph = _assemble(rule, _run_units(_all_pair_units(rule), threads))
    logger.info("graph_sampled", sampler="naive", n=graph.n, m=graph.m)
    return graph


@dataclass(frozen=True)
class CellGrid:
    """Grid of ``cells`` per axis, built from the strip partition, for near-pair enumeration.

    Strips wider than the near radius r0 are split into equal cells; narrower
    strips are merged. Either way a cell is at least r0 wide, so near pairs lie
    in the same or an adjacent cell.
    """

    strips: int
    cells: int
    span: int

    @property
    def covers_everything(self) -> bool:
        return 2 * self.span + 1 >= self.cells


def cell_grid(n: int, gamma: float, d: int, geometry: Geometry) -> CellGrid:
    from ..analysis.strips import strip_width

    strips, width = strip_width(n, gamma)
    r0 = float(inverse_volume(near_volume(n, d), d, geometry)) * RADIUS_SLACK
    if r0 <= 0:
        return CellGrid(strips, strips, 1)
    if width >= r0:
        cells = strips * int(math.floor(width / r0))
    else:
        cells = max(1, strips // int(math.ceil(r0 / width)))
    span = max(1, int(math.ceil(r0 * cells)))
    return CellGrid(strips, cells, span)


def _near_units(rule: EdgeRule, cells: np.ndarray, grid: CellGrid) -> List[Callable[[], EdgeArrays]]:
    """Units over pairs whose cells are within ``span`` in every column of ``cells``."""
    n = rule.params.n
    size = grid.cells
    radix = size ** np.arange(cells.shape[1], dtype=np.int64)
    keys = cells @ radix
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    owners = np.arange(n, dtype=np.int64)
    units: List[Callable[[], EdgeArrays]] = []

    offsets = range(-grid.span, grid.span + 1)
    for shift in itertools.product(offsets, repeat=cells.shape[1]):
        target = ((cells + np.asarray(shift, dtype=np.int64)) % size) @ radix
        lo = np.searchsorted(sorted_keys, target, side="left")
        counts = np.searchsorted(sorted_keys, target, side="right") - lo

        def unit(a: int, b: int, lo=lo, counts=counts) -> Callable[[], EdgeArrays]:
            def run() -> EdgeArrays:
                us, idx = _expand(owners[a:b], lo[a:b], counts[a:b])
                vs = order[idx]
                forward = us < vs
                return rule.decide(us[forward], vs[forward])
            return run

        units.extend(unit(a, b) for a, b in _blocks(counts))
    return units


def _near_cell_columns(positions: np.ndarray, grid: CellGrid, geometry: Geometry) -> List[np.ndarray]:
    cells = np.minimum(np.floor(positions * grid.cells).astype(np.int64), grid.cells - 1)
    d = cells.shape[1]
    if geometry is Geometry.MCD:
        return [cells[:, [i]] for i in range(d)]
    if d * math.log2(grid.cells) > 62:
        return [cells[:, [0]]]
    return [cells]


def sample_graph_bucketed(p: ModelParams, gamma: float, threads: Optional[int] = None) -> Graph:
    """Strip-bucketed sampler; returns exactly the graph of ``sample_graph_naive``."""
    threads = resolve_threads(threads)
    grid = cell_grid(p.n, gamma, p.d, p.geometry)
    vertices = sample_vertices(p)
    rule = EdgeRule.build(p, vertices)
    logger.info(
        "sampling_graph",
        sampler="bucketed",
        n=p.n,
        d=p.d,
        geometry=p.geometry.value,
        seed=p.seed,
        strips=grid.strips,
        cells=grid.cells,
        span=grid.span,
        proposals=int(rule.proposal_keys.size),
    )
    if grid.covers_everything:
        units = _all_pair_units(rule)
    else:
        units = []
        for columns in _near_cell_columns(vertices.positions, grid, p.geometry):
            units.extend(_near_units(rule, columns, grid))
        keys = rule.proposal_keys
        units.append(lambda: rule.decide(keys // p.n, keys % p.n))
    graph = _assemble(rule, _run_units(units, threads))
    logger.info("graph_sampled", sampler="bucketed", n=graph.n, m=graph.m)
    return graph
