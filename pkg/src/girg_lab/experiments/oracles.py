"""Monte Carlo oracles for the volume functions, the weight law and the samplers."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..model.geometry import Geometry, pairwise_torus_abs, volume
from ..model.kernel import expected_weight_tail, sample_weight
from ..sample.sampler import sample_graph_bucketed, sample_graph_naive
from ..sample.tape import Purpose, RandomTape
from . import Analysis, AnalysisResult, Cell, register_analysis

VOLUME_STREAM = 1
WEIGHT_STREAM = 2


@register_analysis("volume-oracle")
class VolumeOracleAnalysis(Analysis):
    """Ball measures of uniform torus points against volume_min / volume_linf."""

    def run(self, cell: Cell) -> AnalysisResult:
        radii = [float(r) for r in cell.option("volume-oracle", "radii", [0.05, 0.1, 0.25])]
        dims = [int(d) for d in cell.option("volume-oracle", "dims", [1, 2, 3])]
        points = int(cell.option("volume-oracle", "points", 1_000_000))
        tape = RandomTape(cell.seed)
        ids = np.arange(points, dtype=np.int64)[:, None]

        result = AnalysisResult()
        cells = []
        for d in dims:
            pts = tape.uniform(Purpose.ANALYSIS, VOLUME_STREAM, d, ids, np.arange(d, dtype=np.int64)[None, :])
            comp = pairwise_torus_abs(pts, np.zeros((1, d)))
            dist = {Geometry.MCD: comp.min(axis=1), Geometry.LINF: comp.max(axis=1)}
            for geometry, values in dist.items():
                for r in radii:
                    exact = float(volume(r, d, geometry))
                    estimate = float(np.count_nonzero(values <= r)) / points
                    stderr = math.sqrt(max(exact * (1.0 - exact), 1e-300) / points)
                    z = (estimate - exact) / stderr
                    key = dict(geometry=geometry.value, d=d, r=r)
                    result.add("exact", exact, **key)
                    result.add("estimate", estimate, **key)
                    result.add("z", z, **key)
                    cells.append({**key, "exact": exact, "estimate": estimate, "z": z})
        result.summary.update(points=points, cells=cells, max_abs_z=max(abs(c["z"]) for c in cells))
        return result


@register_analysis("weight-tail")
class WeightTailAnalysis(Analysis):
    """Empirical Pareto tails against w^(1 - tau)."""

    def run(self, cell: Cell) -> AnalysisResult:
        taus = [float(t) for t in cell.option("weight-tail", "taus", [2.2, 2.5, 2.8])]
        ws = np.asarray(cell.option("weight-tail", "ws", [2, 4, 8, 16]), dtype=float)
        draws = int(cell.option("weight-tail", "draws", 1_000_000))
        tape = RandomTape(cell.seed)
        u = tape.open_uniform(Purpose.ANALYSIS, WEIGHT_STREAM, np.arange(draws, dtype=np.int64))

        result = AnalysisResult()
        cells = []
        for tau in taus:
            weights = np.sort(sample_weight(u, tau))
            tail = 1.0 - np.searchsorted(weights, ws, side="left") / draws
            expected = expected_weight_tail(ws, tau)
            for w, freq, exp in zip(ws, tail, expected):
                log_error = abs(math.log(freq) - math.log(exp)) / abs(math.log(exp)) if freq > 0 else math.inf
                key = dict(tau=tau, w=float(w))
                result.add("frequency", float(freq), **key)
                result.add("expected", float(exp), **key)
                result.add("relative_log_error", log_error, **key)
                cells.append({**key, "frequency": float(freq), "expected": float(exp), "relative_log_error": log_error})
        result.summary.update(draws=draws, cells=cells, max_relative_log_error=max(c["relative_log_error"] for c in cells))
        return result


@register_analysis("sampler-equivalence")
class SamplerEquivalenceAnalysis(Analysis):
    """Bucketed and naive samplers compared edge for edge."""

    def run(self, cell: Cell) -> AnalysisResult:
        ns = [int(n) for n in cell.option("sampler-equivalence", "ns", [200, 700, 2000])]
        dims = [int(d) for d in cell.option("sampler-equivalence", "dims", [1, 2])]
        gamma = cell.analysis.sampler_gamma
        result = AnalysisResult()
        cells = []
        for n in ns:
            for d in dims:
                params = replace(cell.params(n), d=d)
                naive = sample_graph_naive(params, threads=cell.threads)
                bucketed = sample_graph_bucketed(params, gamma, threads=cell.threads)
                same = naive.m == bucketed.m and bool(np.array_equal(naive.edges(), bucketed.edges()))
                result.add("naive_edges", naive.m, n=n, d=d)
                result.add("bucketed_edges", bucketed.m, n=n, d=d)
                result.add("identical", same, n=n, d=d)
                cells.append({"n": n, "d": d, "edges": naive.m, "identical": same})
        result.summary.update(cells=cells, mismatches=sum(not c["identical"] for c in cells))
        return result
