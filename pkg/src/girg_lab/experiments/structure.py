"""Strip statistics, covering bounds, expansion checks and the separator contrast."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csgraph

from ..analysis.expansion import (
    BRUTE_FORCE_BUDGET,
    brute_force_min_expansion,
    fit_scaling_exponent,
    greedy_worst_set,
    hyperplane_cut_edges,
    theorem_check,
)
from ..analysis.strips import (
    CoverBoundInput,
    StripIndex,
    cover_bound,
    cover_bound_stirling,
    empirical_cover_probability,
    gamma_for_strip_count,
    same_strip_neighbor_counts,
    strip_rows,
    strip_spread,
)
from ..graph.core import SubgraphView
from ..graph.ops import giant_component
from ..model.kernel import induced_degree_scale
from ..utils.log import get_logger
from . import Analysis, AnalysisResult, Cell, register_analysis

logger = get_logger(__name__)

SOUNDNESS_TOL = 1e-12


@register_analysis("strips")
class StripsAnalysis(Analysis):
    """Strip partition of the graph and same-strip in-band neighbour counts over G''."""

    def run(self, cell: Cell) -> AnalysisResult:
        a = cell.analysis
        result = AnalysisResult()
        by_n = {}
        for n in cell.ns("strips"):
            g = cell.graph_for(n)
            idx = StripIndex.for_graph(g, a.gamma)
            view = cell.subgraph(g)
            stats = {"strips": idx.M, "width": idx.width, "subgraph_size": view.size}
            if view.size:
                counts = same_strip_neighbor_counts(view, idx, cell.band(n))
                # a vertex is served by its best coordinate
                best = counts.max(axis=1)
                k_star, coordinate = strip_spread(idx, view.kept)
                stats.update(
                    min_same_strip=int(best.min()),
                    median_same_strip=float(np.median(best)),
                    mean_same_strip=float(best.mean()),
                    per_coordinate_min=[int(c) for c in counts.min(axis=0)],
                    predicted_scale=induced_degree_scale(n, a.gamma, cell.cfg.model.tau),
                    subgraph_strip_spread=k_star,
                    spread_coordinate=coordinate,
                )
            for metric, value in stats.items():
                if isinstance(value, list):
                    for i, item in enumerate(value):
                        result.add(metric, item, n=n, coordinate=i)
                else:
                    result.add(metric, value, n=n)
            by_n[str(n)] = stats
        result.summary["by_n"] = by_n
        return result


@register_analysis("cover-bound")
class CoverBoundAnalysis(Analysis):
    """Monte Carlo strip-covering frequency against the union bound."""

    def run(self, cell: Cell) -> AnalysisResult:
        a = cell.analysis
        n = int(cell.option("cover-bound", "n", 200))
        strips = int(cell.option("cover-bound", "strips", 5))
        gamma = float(cell.option("cover-bound", "gamma", gamma_for_strip_count(n, strips)))
        sizes = [int(s) for s in cell.option("cover-bound", "s", [3, 4, 5])]
        budgets = [int(k) for k in cell.option("cover-bound", "k", [1, 2])]
        params = cell.params(n)

        grid, estimates = [], []
        for s in sizes:
            for k in budgets:
                if k > min(s, strips):
                    continue
                grid.append((s, k))
                estimates.append(
                    empirical_cover_probability(params, gamma, s, k, a.trials, c_prime=a.c_prime, threads=cell.threads)
                )

        result = AnalysisResult()
        cells = []
        for row, est in zip(strip_rows(n, params.d, params.tau, gamma, grid, estimates), estimates):
            nv = int(round(est.nv_mean))
            if nv >= row["s"]:
                inp = CoverBoundInput(nv, row["s"], row["k"], strips, params.d)
                row["bound_at_mean_nv"] = cover_bound(inp)
                row["stirling_at_mean_nv"] = cover_bound_stirling(inp)
            row["nv_mean"] = est.nv_mean
            for metric in ("bound", "empirical", "exact", "nv_mean", "bound_at_mean_nv", "stirling_at_mean_nv"):
                if metric in row:
                    result.add(metric, row[metric], n=n, s=row["s"], k=row["k"])
            cells.append(row)

        anchor = cover_bound(CoverBoundInput(nv=10, s=3, k=1, M=5, d=2))
        result.add("anchor_bound", anchor, nv=10, s=3, k=1, M=5, d=2)
        result.summary.update(n=n, strips=strips, gamma=gamma, cells=cells, anchor_bound=anchor)
        return result


def _brute_force_size(size: int, budget: int, cap: int) -> int:
    """Largest m <= cap with sum_{j <= m} C(size, j) within budget."""
    total, m = 0, 0
    while m < min(cap, size):
        total += math.comb(size, m + 1)
        if total > budget:
            break
        m += 1
    return m


def _patch(view: SubgraphView, size: int, rng: np.random.Generator) -> SubgraphView:
    """BFS-ordered patch of the view's largest component, local ids of the view."""
    graph = view.graph
    giant = giant_component(graph)
    start = int(giant.kept[rng.integers(giant.size)])
    order = csgraph.breadth_first_order(graph.adjacency_matrix(), start, directed=False, return_predecessors=False)
    return SubgraphView(graph, np.sort(order[:size]))


@register_analysis("expansion")
class ExpansionAnalysis(Analysis):
    """Worst observed expansion over G' / G'' and a brute-force soundness patch."""

    def run(self, cell: Cell) -> AnalysisResult:
        a = cell.analysis
        g = cell.graph
        report = theorem_check(
            g,
            a.gamma,
            a.c_prime,
            a.mode,
            a.probes,
            tau=cell.cfg.model.tau,
            c1=a.c1,
            c2=a.c2,
            c_d=float(cell.option("expansion", "c_d", 2.0)),
            linear_from=float(cell.option("expansion", "linear_from", 0.1)),
            threads=cell.threads,
        )
        result = AnalysisResult()
        for row in report.rows:
            result.add("ratio", row.ratio, s=row.s, method=row.method)
            result.add("predicted", row.predicted, s=row.s, method=row.method)

        small_limit = max(1, report.nv // 10)
        summary = {
            "subgraph_size": report.nv,
            "min_ratio": report.min_ratio(),
            "min_ratio_small_sets": report.min_ratio(small_limit),
            "epsilon": report.epsilon,
            "c_d_fitted": report.c_d_fitted,
            "connected": report.connected,
            "isolated": report.isolated,
            "min_induced_degree": report.min_induced_degree,
            "linear_regime_min": report.linear_regime_min,
        }
        summary.update(self._soundness(cell, report.n))
        for metric, value in summary.items():
            result.add(metric, value)
        result.summary.update(summary)
        return result

    def _soundness(self, cell: Cell, n: int) -> dict:
        a = cell.analysis
        patch_size = int(cell.option("expansion", "patch_size", 300))
        cap = int(cell.option("expansion", "brute_max_size", 2))
        budget = int(cell.option("expansion", "brute_budget", BRUTE_FORCE_BUDGET))
        view = cell.subgraph()
        patch = _patch(view, patch_size, cell.rng(n, 7)).graph
        max_size = _brute_force_size(patch.n, budget, cap)
        if max_size < 1:
            return {"patch_size": patch.n, "brute_force_sound": True}
        exact = brute_force_min_expansion(patch, max_size, budget)
        greedy = greedy_worst_set(
            patch, max(1, a.probes.greedy_restarts), 0.5, seed=a.probes.seed, threads=cell.threads, max_size=max_size
        )
        found = float(np.min(greedy.trajectory))
        sound = found >= exact.ratio - SOUNDNESS_TOL
        if not sound:
            logger.warning("brute_force_soundness_violated", greedy=found, exact=exact.ratio, patch=patch.n)
        return {
            "patch_size": patch.n,
            "patch_max_set": max_size,
            "patch_brute_force_ratio": exact.ratio,
            "patch_greedy_ratio": found,
            "brute_force_sound": sound,
        }


@register_analysis("cut-contrast")
class CutContrastAnalysis(Analysis):
    """Edges across the hyperplane x_i = 1/2 for MCD and L-infinity graphs."""

    def run(self, cell: Cell) -> AnalysisResult:
        geometries = [str(x).lower() for x in cell.option("cut-contrast", "geometries", ["mcd", "linf"])]
        coordinate = int(cell.option("cut-contrast", "coordinate", 0))
        ns = cell.ns("cut-contrast")
        result = AnalysisResult()
        cuts, exponents = {}, {}
        for geometry in geometries:
            cuts[geometry] = {}
            for n in ns:
                g = cell.graph_for(n, geometry)
                cut = hyperplane_cut_edges(g, coordinate)
                result.add("cut_edges", cut, geometry=geometry, n=n)
                result.add("edges", g.m, geometry=geometry, n=n)
                cuts[geometry][str(n)] = cut
            values = [cuts[geometry][str(n)] for n in ns]
            if len(set(ns)) >= 2 and min(values) > 0:
                exponents[geometry], _ = fit_scaling_exponent(ns, values)
                result.add("cut_exponent", exponents[geometry], geometry=geometry)
        result.summary.update(cuts=cuts, exponents=exponents)
        return result
