"""Spectral gap, lazy-walk mixing and spreading processes on sampled graphs."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csgraph

from ..analysis.spectral import cheeger_bounds, conductance, spectral_gap
from ..graph.core import Graph
from ..graph.ops import giant_component
from ..processes.spreading import push_rumor, si_spread
from ..processes.walk import estimate_mixing_time
from ..write.results_writer import write_trace
from . import Analysis, AnalysisResult, Cell, register_analysis

CHEEGER_TOL = 1e-9
DEFAULT_MAX_BUDGET = 100_000


def _probe_conductance(graph: Graph, probes: int, rng: np.random.Generator) -> float:
    """Smallest conductance over BFS half-balls from random sources."""
    adj = graph.adjacency_matrix()
    best = math.inf
    for source in rng.integers(graph.n, size=probes):
        order = csgraph.breadth_first_order(adj, int(source), directed=False, return_predecessors=False)
        best = min(best, conductance(graph, order[: graph.n // 2]))
    return best


@register_analysis("spectral")
class SpectralAnalysis(Analysis):
    """lambda2 of G'' with Cheeger bounds, checked against probed conductances."""

    def run(self, cell: Cell) -> AnalysisResult:
        graph = cell.subgraph().graph
        gap = spectral_gap(graph, on_disconnected=cell.option("spectral", "on_disconnected", "flag"))
        lo, hi = cheeger_bounds(gap.lambda2)
        summary = {
            "subgraph_size": graph.n,
            "lambda2": gap.lambda2,
            "connected": gap.connected,
            "method": gap.method,
            "cheeger_lower": lo,
            "cheeger_upper": hi,
        }
        if gap.component_gaps:
            summary["component_gap_min"] = min(gap.component_gaps)

        giant = giant_component(graph).graph
        if giant.n >= 2:
            giant_gap = gap.lambda2 if gap.connected else spectral_gap(giant).lambda2
            phi = _probe_conductance(giant, int(cell.option("spectral", "probes", 5)), cell.rng(graph.n, 11))
            summary.update(
                giant_size=giant.n,
                giant_lambda2=giant_gap,
                probe_conductance=phi,
                cheeger_consistent=phi >= giant_gap / 2.0 - CHEEGER_TOL,
            )

        result = AnalysisResult()
        for metric, value in summary.items():
            result.add(metric, value)
        result.summary.update(summary)
        return result


@register_analysis("walk")
class WalkAnalysis(Analysis):
    """Lazy-walk mixing on G'' (largest component) within 10 ln n / lambda2 steps."""

    def run(self, cell: Cell) -> AnalysisResult:
        eps = float(cell.option("walk", "eps", 0.05))
        cap = int(cell.option("walk", "max_budget", DEFAULT_MAX_BUDGET))
        n = cell.graph.n
        component = giant_component(cell.subgraph().graph).graph
        lambda2 = spectral_gap(component).lambda2
        budget = min(cap, int(math.ceil(10.0 * math.log(n) / lambda2))) if lambda2 > 0 else cap
        start = int(np.argmin(component.degree))
        mixing = estimate_mixing_time(component, eps, start=start, budget=budget)
        summary = {
            "component_size": component.n,
            "lambda2": lambda2,
            "eps_tv": eps,
            "budget": budget,
            "mixing_steps": mixing.steps,
            "converged": mixing.converged,
        }
        result = AnalysisResult()
        for metric, value in summary.items():
            result.add(metric, value)
        if cell.option("walk", "tv_curve", False):
            for step, tv in enumerate(mixing.tv_curve):
                result.add("tv", float(tv), step=step)
        result.summary.update(summary)
        return result


def _spread_graph(cell: Cell, name: str, n: int) -> Graph:
    g = cell.graph_for(n)
    if cell.option(name, "on", "giant") == "band":
        return giant_component(cell.subgraph(g).graph).graph
    return giant_component(g).graph


class _SpreadAnalysis(Analysis):
    """Rounds to reach a coverage fraction from a random source, per n."""

    def spread(self, cell: Cell, graph: Graph, source: int):
        raise NotImplementedError

    def run(self, cell: Cell) -> AnalysisResult:
        result = AnalysisResult()
        by_n = {}
        for n in cell.ns(self.name):
            graph = _spread_graph(cell, self.name, n)
            source = int(cell.rng(n, 13).integers(graph.n))
            outcome = self.spread(cell, graph, source)
            if cell.output.trace:
                write_trace(cell.artifact_dir / f"{self.name}_trace_n{n}.csv", outcome.trace)
            stats = {
                "component_size": graph.n,
                "rounds": outcome.rounds,
                "reached": outcome.reached,
                "informed": outcome.informed,
            }
            for metric, value in stats.items():
                result.add(metric, value, n=n)
            by_n[str(n)] = stats
        result.summary["by_n"] = by_n
        return result


@register_analysis("rumor")
class RumorAnalysis(_SpreadAnalysis):
    def spread(self, cell: Cell, graph: Graph, source: int):
        coverage = float(cell.option("rumor", "coverage", 0.5))
        return push_rumor(graph, source, coverage, seed=cell.seed, trace=cell.output.trace)


@register_analysis("si")
class SIAnalysis(_SpreadAnalysis):
    def spread(self, cell: Cell, graph: Graph, source: int):
        beta = float(cell.option("si", "beta", 0.5))
        coverage = float(cell.option("si", "coverage", 0.5))
        return si_spread(graph, source, beta, coverage, seed=cell.seed, trace=cell.output.trace)
