"""Graph generation, induced subgraphs and the isolation (tightness) experiment."""

from __future__ import annotations

import math

import numpy as np

from ..analysis.strips import degree_concentration
from ..graph.ops import (
    connected_components,
    giant_component,
    induced_by_degree,
    induced_by_weight,
    isolated_count,
    tie_counts,
)
from ..model.kernel import critical_gamma, subgraph_size_scale
from ..utils.log import get_logger
from ..write.graph_io import save_graph
from . import Analysis, AnalysisResult, Cell, register_analysis

logger = get_logger(__name__)


@register_analysis("generate")
class GenerateAnalysis(Analysis):
    """Sample the graph, write its edge and vertex files, report basic counts."""

    artifacts_only = True

    def run(self, cell: Cell) -> AnalysisResult:
        g = cell.graph
        result = AnalysisResult()
        if cell.output.save_graph and cell.loaded is None:
            edges_path, verts_path = save_graph(cell.artifact_dir / "graph", g)
            logger.info("graph_saved", edges=str(edges_path), verts=str(verts_path) if verts_path else None)

        deg = g.degree
        metrics = {
            "n": g.n,
            "m": g.m,
            "mean_degree": 2.0 * g.m / g.n if g.n else 0.0,
            "max_degree": int(deg.max()) if g.n else 0,
            "giant_size": giant_component(g).size,
        }
        if g.vertex_data is not None:
            strong, weak = tie_counts(g, cell.params(g.n))
            metrics.update(max_weight=float(g.weights.max()), strong_ties=strong, weak_ties=weak)
        for metric, value in metrics.items():
            result.add(metric, value)
        result.summary.update(metrics)
        return result


def _degree_per_weight(g) -> float:
    w = g.weights
    return float(np.dot(w, g.degree) / np.dot(w, w))


@register_analysis("induce")
class InduceAnalysis(Analysis):
    """G' and G'' sizes, isolation and the degree-vs-weight selection agreement."""

    def run(self, cell: Cell) -> AnalysisResult:
        a = cell.analysis
        result = AnalysisResult()
        by_n = {}
        for n in cell.ns("induce"):
            g = cell.graph_for(n)
            threshold = a.c_prime * math.log(n) ** a.gamma
            v_prime = induced_by_weight(g, threshold)
            size_ratio = v_prime.size / subgraph_size_scale(n, a.gamma, cell.cfg.model.tau)

            # degree threshold matched to the weight threshold through the fitted slope
            slope = _degree_per_weight(g)
            by_degree = induced_by_degree(g, slope * threshold)
            diff = np.setxor1d(v_prime.kept, by_degree.kept).size
            symdiff = diff / max(1, min(v_prime.size, by_degree.size))

            view = cell.subgraph(g)
            stats = {
                "v_prime_size": v_prime.size,
                "size_ratio": size_ratio,
                "v_prime_isolated": isolated_count(v_prime),
                "degree_per_weight": slope,
                "degree_selection_size": by_degree.size,
                "degree_weight_symdiff": symdiff,
                "selected_size": view.size,
                "selected_isolated": isolated_count(view),
                "selected_components": connected_components(view).count,
                "selected_min_induced_degree": int(view.induced_degree.min()) if view.size else 0,
            }
            if view.size:
                conc = degree_concentration(g, view, a.gamma)
                stats.update(
                    degree_max_relative_deviation=conc.max_relative_deviation,
                    light_high_degree=conc.light_high_degree,
                )
            for metric, value in stats.items():
                result.add(metric, value, n=n)
            by_n[str(n)] = stats
        result.summary["by_n"] = by_n
        return result


@register_analysis("tightness")
class TightnessAnalysis(Analysis):
    """Isolated vertices of G' below and above gamma = 1/(3 - tau)."""

    def run(self, cell: Cell) -> AnalysisResult:
        a = cell.analysis
        tau = cell.cfg.model.tau
        critical = critical_gamma(tau)
        gammas = [float(x) for x in cell.option("tightness", "gammas", [1.0, 2.5])]
        result = AnalysisResult()
        cells = []
        for n in cell.ns("tightness"):
            g = cell.graph_for(n)
            for gamma in gammas:
                view = induced_by_weight(g, a.c_prime * math.log(n) ** gamma)
                entry = {
                    "n": n,
                    "gamma": gamma,
                    "subcritical": gamma <= critical,
                    "size": view.size,
                    "isolated": isolated_count(view),
                }
                result.add("isolated", entry["isolated"], n=n, gamma=gamma)
                result.add("subgraph_size", entry["size"], n=n, gamma=gamma)
                cells.append(entry)
        result.summary.update(critical_gamma=critical, cells=cells)
        return result
