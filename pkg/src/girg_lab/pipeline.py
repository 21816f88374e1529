"""Experiment orchestration: seeds fan out to worker threads, results merge in seed order."""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .config import ExperimentConfig
from .diagnostics import CheckResult, evaluate
from .errors import ExperimentError
from .experiments import Analysis, Cell, get_analysis
from .graph.core import Graph
from .utils.log import cell_context, get_logger, log_memory_usage
from .write.results_writer import ResultsWriter, save_plot_data, write_summary

logger = get_logger(__name__)


@dataclass
class CellOutcome:
    """Rows and summaries of one seed; ``error`` is set when the seed failed."""

    seed: int
    rows: List[Tuple[str, str, Any]] = field(default_factory=list)
    summaries: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    error: Optional[ExperimentError] = None


@dataclass
class ExperimentOutcome:
    cfg: ExperimentConfig
    cells: List[CellOutcome]
    checks: List[CheckResult]

    @property
    def failures(self) -> List[CellOutcome]:
        return [c for c in self.cells if c.error is not None]

    @property
    def artifacts_only(self) -> bool:
        return all(get_analysis(name).artifacts_only for name in self.cfg.analysis.names)

    def summary(self) -> Dict[str, Any]:
        a = self.cfg.analysis
        model = self.cfg.model.as_dict()
        model.pop("seed")
        return {
            "model": model,
            "analysis": {
                "names": list(a.names),
                "gamma": a.gamma,
                "c_prime": a.c_prime,
                "c1": a.c1,
                "c2": a.c2,
                "mode": a.mode,
                "sampler": a.sampler,
                "seeds": list(a.seeds),
            },
            "seeds": {str(c.seed): c.summaries for c in self.cells if c.error is None},
            "failures": [
                {"seed": c.seed, "analysis": c.error.analysis, "error": str(c.error.cause)} for c in self.failures
            ],
            "checks": [check.as_dict() for check in self.checks],
            "passed": all(check.passed for check in self.checks),
        }


class ExperimentPipeline:
    """Runs every configured analysis for every seed of one experiment."""

    def __init__(self, cfg: ExperimentConfig, graph: Optional[Graph] = None):
        self.cfg = cfg
        self.graph = graph
        # unknown names fail here, before anything is sampled
        self.analyses: List[Analysis] = [get_analysis(name) for name in cfg.analysis.names]

    def run_cell(self, seed: int, threads: int) -> CellOutcome:
        with cell_context(self.cfg.name, seed):
            cell = Cell(self.cfg, seed, threads=threads, graph=self.graph)
            outcome = CellOutcome(seed)
            for analysis in self.analyses:
                logger.info("analysis_started", analysis=analysis.name)
                try:
                    result = analysis.run(cell)
                except Exception as exc:
                    raise ExperimentError(self.cfg.name, seed, analysis.name, exc) from exc
                outcome.rows.extend((f"{analysis.name}.{metric}", key, value) for metric, key, value in result.rows)
                outcome.summaries[analysis.name] = result.summary
            if self.cfg.output.plot_data and (self.graph is None or self.graph.vertex_data is not None):
                save_plot_data(cell.artifact_dir, cell.graph, cell.subgraph())
        return outcome

    def run(self) -> ExperimentOutcome:
        seeds = list(self.cfg.analysis.seeds)
        threads = self.cfg.processing.threads
        workers = max(1, min(threads, len(seeds)))
        inner = threads if workers == 1 else 1
        logger.info("experiment_started", experiment=self.cfg.name, seeds=len(seeds), workers=workers)
        log_memory_usage(f"before_{self.cfg.name}")

        done: Dict[int, CellOutcome] = {}
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(self.run_cell, seed, inner): seed for seed in seeds}
            with tqdm(total=len(seeds), desc=self.cfg.name, unit="seed", leave=False) as pbar:
                for future in as_completed(futures):
                    seed = futures[future]
                    try:
                        done[seed] = future.result()
                    except ExperimentError as exc:
                        logger.error("cell_failed", experiment=exc.experiment, seed=seed, analysis=exc.analysis, error=str(exc.cause))
                        if not self.cfg.processing.skip_failed:
                            for pending in futures:
                                pending.cancel()
                            raise
                        done[seed] = CellOutcome(seed, error=exc)
                    pbar.update(1)

        cells = [done[seed] for seed in seeds]
        checks: List[CheckResult] = []
        for analysis in self.analyses:
            per_seed = {c.seed: c.summaries[analysis.name] for c in cells if c.error is None}
            checks.extend(evaluate(analysis.name, per_seed))
        for check in checks:
            if not check.passed:
                logger.warning("acceptance_check_failed", experiment=self.cfg.name, check=check.name, observed=check.observed)
        log_memory_usage(f"after_{self.cfg.name}")
        logger.info(
            "experiment_completed",
            experiment=self.cfg.name,
            failed=sum(c.error is not None for c in cells),
            checks_passed=sum(check.passed for check in checks),
            checks=len(checks),
        )
        return ExperimentOutcome(self.cfg, cells, checks)


def run_experiments(configs: Sequence[ExperimentConfig], graph: Optional[Graph] = None) -> int:
    """Run a suite and write results per output directory.

    Returns 0 when every seed of every experiment ran, 1 otherwise. Acceptance
    checks are reported in summary.json and do not change the status.
    """
    pipelines = [ExperimentPipeline(cfg, graph) for cfg in configs]
    by_dir: Dict[str, List[ExperimentOutcome]] = defaultdict(list)
    for pipeline in pipelines:
        outcome = pipeline.run()
        by_dir[pipeline.cfg.output.dir].append(outcome)

    status = 0
    for out_dir, outcomes in by_dir.items():
        if any(o.failures for o in outcomes):
            status = 1
        if all(o.artifacts_only for o in outcomes):
            logger.info("graph_files_only", out_dir=out_dir)
            continue
        output = outcomes[0].cfg.output
        writer = ResultsWriter(out_dir, parquet=output.parquet, fmt=output.format)
        for outcome in outcomes:
            for cell in outcome.cells:
                writer.write_rows(outcome.cfg.name, cell.seed, cell.rows)
        writer.close()
        write_summary(out_dir, {"experiments": {o.cfg.name: o.summary() for o in outcomes}})
    return status


def run_experiment(cfg: ExperimentConfig, graph: Optional[Graph] = None) -> int:
    return run_experiments([cfg], graph)
