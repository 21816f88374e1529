"""Registered analyses that the pipeline runs per (experiment, seed) cell."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type

import numpy as np

from ..analysis.expansion import select_subgraph
from ..config import ExperimentConfig
from ..errors import UnknownAnalysisError
from ..graph.core import Graph, SubgraphView
from ..model.geometry import Geometry
from ..model.kernel import ModelParams
from ..sample.sampler import sample_graph_bucketed, sample_graph_naive
from ..utils.log import get_logger
from ..write.results_writer import format_value

logger = get_logger(__name__)

Row = Tuple[str, str, Any]


def cell_key(**parts: Any) -> str:
    """``name=value`` pairs joined by ';' in argument order."""
    return ";".join(f"{name}={format_value(value)}" for name, value in parts.items())


@dataclass
class AnalysisResult:
    """Long-format rows for results.csv plus a per-seed summary block."""

    rows: List[Row] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def add(self, metric: str, value: Any, **key: Any):
        self.rows.append((metric, cell_key(**key), value))


class Cell:
    """One seed of one experiment; caches every graph it samples."""

    def __init__(self, cfg: ExperimentConfig, seed: int, threads: int = 1, graph: Optional[Graph] = None):
        self.cfg = cfg
        self.seed = seed
        self.threads = threads
        self.loaded = graph
        self._graphs: Dict[Tuple[int, Geometry], Graph] = {}

    @property
    def analysis(self):
        return self.cfg.analysis

    @property
    def output(self):
        return self.cfg.output

    def option(self, analysis: str, key: str, default: Any = None) -> Any:
        """``analysis.params[<analysis>][<key>]`` with a default."""
        return (self.analysis.params.get(analysis) or {}).get(key, default)

    def params(self, n: Optional[int] = None, geometry: Optional[str] = None) -> ModelParams:
        params = self.cfg.params_for(self.seed, n)
        return params.with_geometry(geometry) if geometry is not None else params

    def ns(self, analysis: str) -> List[int]:
        return [int(n) for n in self.option(analysis, "ns", [self.graph_n])]

    @property
    def graph_n(self) -> int:
        return self.loaded.n if self.loaded is not None else self.cfg.model.n

    def graph_for(self, n: Optional[int] = None, geometry: Optional[str] = None) -> Graph:
        """The cell's graph at size ``n`` and ``geometry`` (defaults from the model block)."""
        if self.loaded is not None and n in (None, self.loaded.n) and geometry is None:
            return self.loaded
        params = self.params(n, geometry)
        key = (params.n, params.geometry)
        if key not in self._graphs:
            self._graphs[key] = self.sample(params)
        return self._graphs[key]

    @property
    def graph(self) -> Graph:
        return self.graph_for()

    def sample(self, params: ModelParams) -> Graph:
        if self.analysis.sampler == "naive":
            return sample_graph_naive(params, threads=self.threads)
        try:
            return sample_graph_bucketed(params, self.analysis.sampler_gamma, threads=self.threads)
        except ValueError as exc:
            logger.warning("bucketed_sampler_fallback", n=params.n, reason=str(exc))
            return sample_graph_naive(params, threads=self.threads)

    def subgraph(self, g: Optional[Graph] = None) -> SubgraphView:
        a = self.analysis
        return select_subgraph(g if g is not None else self.graph, a.gamma, a.mode, a.c_prime, a.c1, a.c2)

    def band(self, n: int) -> Tuple[float, float]:
        scale = math.log(n) ** self.analysis.gamma
        return self.analysis.c1 * scale, self.analysis.c2 * scale

    def rng(self, *keys: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *keys])

    @property
    def artifact_dir(self) -> Path:
        return Path(self.output.dir) / self.cfg.name / f"seed-{self.seed}"


class Analysis:
    """Base class for one named analysis."""

    name = ""
    # analyses that only write graph files produce no result rows
    artifacts_only = False

    def run(self, cell: Cell) -> AnalysisResult:
        raise NotImplementedError


_analysis_registry: Dict[str, Type[Analysis]] = {}


def register_analysis(name: str):
    """Decorator to register an analysis under ``name``."""
    def wrapper(cls: Type[Analysis]):
        if cls.run is Analysis.run:
            raise TypeError(f"{cls.__name__} must implement run()")
        cls.name = name
        _analysis_registry[name.lower()] = cls
        return cls
    return wrapper


def get_analysis(name: str) -> Analysis:
    """Return an analysis instance by name."""
    cls = _analysis_registry.get(name.lower())
    if cls is None:
        raise UnknownAnalysisError(f"unknown analysis {name!r}; available: {available_analyses()}")
    return cls()


def available_analyses() -> List[str]:
    return sorted(_analysis_registry)


from . import dynamics, generation, oracles, structure  # noqa: E402,F401
