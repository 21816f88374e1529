"""Experiment configuration: YAML/JSON files mapped onto validated dataclasses.

A file holds either one experiment::

    model: {n: 10000, tau: 2.5}
    analysis: {names: [expansion], gamma: 1.2, seeds: [0, 1]}

or a suite, where top-level sections are defaults for every entry of
``experiments``::

    model: {tau: 2.5}
    experiments:
      small: {model: {n: 1000}}
      large: {model: {n: 100000}}
"""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from .analysis.expansion import MODES, ProbePlan
from .errors import ConfigError
from .model.kernel import MAX_SEED, ModelParams

SAMPLERS = ("bucketed", "naive")
FORMATS = ("csv", "json")
THREADS_ENV = "GIRG_LAB_THREADS"


@dataclass(frozen=True)
class AnalysisConfig:
    """Which analyses run and the subgraph knobs they share."""

    names: Tuple[str, ...] = ("generate",)
    gamma: float = 2.5
    c_prime: float = 1.0
    c1: float = 1.0
    c2: float = 2.0
    mode: str = "weight_band"
    allow_subcritical: bool = False
    sampler: str = "bucketed"
    sampler_gamma: float = 1.0
    trials: int = 100
    seeds: Tuple[int, ...] = (0,)
    probes: ProbePlan = field(default_factory=ProbePlan)
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "results"
    format: str = "csv"
    parquet: bool = False
    save_graph: bool = True
    plot_data: bool = False
    trace: bool = False


@dataclass(frozen=True)
class ProcessingConfig:
    threads: int = 1
    skip_failed: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    model: ModelParams
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    processing: ProcessingConfig = field(default_factory=ProcessingConfig)
    log_level: str = "INFO"

    def params_for(self, seed: int, n: Optional[int] = None) -> ModelParams:
        params = self.model.with_seed(seed)
        return params.with_n(n) if n is not None else params


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursively merge mappings; ``override`` wins on leaves."""
    merged = copy.deepcopy(dict(base))
    for key, value in (override or {}).items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _section(raw: Mapping[str, Any], name: str) -> Dict[str, Any]:
    value = raw.get(name) or {}
    if not isinstance(value, Mapping):
        raise ConfigError(name, f"must be a mapping, got {type(value).__name__}")
    return dict(value)


def _reject_unknown(section: str, values: Mapping[str, Any], allowed: set):
    unknown = sorted(set(values) - allowed)
    if unknown:
        raise ConfigError(section, f"unknown keys {unknown}; allowed: {sorted(allowed)}")


def _field_names(cls) -> set:
    return {f.name for f in fields(cls)}


def _build_model(values: Dict[str, Any]) -> ModelParams:
    _reject_unknown("model", values, _field_names(ModelParams))
    if "n" not in values:
        raise ConfigError("model.n", "is required")
    try:
        return ModelParams(**values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError("model.geometry" if "geometry" in str(exc) else "model", str(exc)) from exc


def _build_probes(values: Dict[str, Any]) -> ProbePlan:
    _reject_unknown("analysis.probes", values, _field_names(ProbePlan))
    for key in ("sizes", "methods"):
        if key in values:
            values[key] = tuple(values[key])
    try:
        return ProbePlan(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError("analysis.probes", str(exc)) from exc


def _build_analysis(values: Dict[str, Any], model: ModelParams) -> AnalysisConfig:
    _reject_unknown("analysis", values, _field_names(AnalysisConfig))
    if "names" in values:
        names = values["names"]
        values["names"] = (names,) if isinstance(names, str) else tuple(names)
    if "seeds" in values:
        values["seeds"] = tuple(int(s) for s in values["seeds"])
    values["probes"] = _build_probes(dict(values.get("probes") or {}))
    values["params"] = dict(values.get("params") or {})
    cfg = AnalysisConfig(**values)

    if not cfg.names:
        raise ConfigError("analysis.names", "at least one analysis is required")
    if not cfg.seeds:
        raise ConfigError("analysis.seeds", "must be a nonempty list")
    for seed in cfg.seeds:
        if not 0 <= seed <= MAX_SEED:
            raise ConfigError("analysis.seeds", f"seed {seed} is not a 64-bit unsigned integer")
    if not cfg.gamma > 0:
        raise ConfigError("analysis.gamma", f"must be > 0, got {cfg.gamma}")
    if not cfg.sampler_gamma > 0:
        raise ConfigError("analysis.sampler_gamma", f"must be > 0, got {cfg.sampler_gamma}")
    if model.tau < 3:
        critical = 1.0 / (3.0 - model.tau)
        if cfg.gamma <= critical and not cfg.allow_subcritical:
            raise ConfigError(
                "analysis.gamma",
                f"gamma={cfg.gamma} <= 1/(3-tau)={critical:g} is subcritical; "
                "set allow_subcritical: true to run it anyway",
            )
    if not cfg.c_prime > 0:
        raise ConfigError("analysis.c_prime", f"must be > 0, got {cfg.c_prime}")
    if not 0 < cfg.c1 <= cfg.c2:
        raise ConfigError("analysis.c1", f"need 0 < c1 <= c2, got c1={cfg.c1}, c2={cfg.c2}")
    if cfg.mode not in MODES:
        raise ConfigError("analysis.mode", f"must be one of {MODES}, got {cfg.mode!r}")
    if cfg.sampler not in SAMPLERS:
        raise ConfigError("analysis.sampler", f"must be one of {SAMPLERS}, got {cfg.sampler!r}")
    if cfg.trials < 1:
        raise ConfigError("analysis.trials", f"must be >= 1, got {cfg.trials}")
    return cfg


def _build_output(values: Dict[str, Any]) -> OutputConfig:
    _reject_unknown("output", values, _field_names(OutputConfig))
    cfg = OutputConfig(**values)
    if cfg.format not in FORMATS:
        raise ConfigError("output.format", f"must be one of {FORMATS}, got {cfg.format!r}")
    return cfg


def _build_processing(values: Dict[str, Any]) -> ProcessingConfig:
    _reject_unknown("processing", values, _field_names(ProcessingConfig))
    cfg = ProcessingConfig(**values)
    if cfg.threads < 1:
        raise ConfigError("processing.threads", f"must be >= 1, got {cfg.threads}")
    return cfg


def build_config(raw: Mapping[str, Any], name: str = "default") -> ExperimentConfig:
    """Validate one experiment's raw mapping."""
    _reject_unknown("config", raw, {"model", "analysis", "output", "processing", "logging", "experiments"})
    model = _build_model(_section(raw, "model"))
    return ExperimentConfig(
        name=name,
        model=model,
        analysis=_build_analysis(_section(raw, "analysis"), model),
        output=_build_output(_section(raw, "output")),
        processing=_build_processing(_section(raw, "processing")),
        log_level=str(_section(raw, "logging").get("level", "INFO")).upper(),
    )


def read_raw(path: str) -> Dict[str, Any]:
    """Parse a YAML (or JSON) file into a mapping."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"parse error: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, Mapping):
        raise ConfigError(str(path), "top level must be a mapping")
    return dict(raw)


def expand_suite(raw: Mapping[str, Any], default_name: str = "default") -> List[Tuple[str, Dict[str, Any]]]:
    """(name, merged mapping) per experiment; a plain file is a one-entry suite."""
    experiments = raw.get("experiments")
    if not experiments:
        return [(default_name, {k: v for k, v in raw.items() if k != "experiments"})]
    if not isinstance(experiments, Mapping):
        raise ConfigError("experiments", "must map experiment names to overrides")
    defaults = {k: v for k, v in raw.items() if k != "experiments"}
    return [(str(name), deep_merge(defaults, overrides or {})) for name, overrides in experiments.items()]


def load_suite(path: str) -> List[ExperimentConfig]:
    raw = read_raw(path)
    return [build_config(values, name) for name, values in expand_suite(raw, Path(path).stem)]


def load_config(path: str, name: Optional[str] = None) -> ExperimentConfig:
    """Load one validated experiment; ``name`` selects it from a suite."""
    suite = load_suite(path)
    if name is None:
        if len(suite) != 1:
            raise ConfigError("experiments", f"file holds {len(suite)} experiments; select one by name")
        return suite[0]
    for cfg in suite:
        if cfg.name == name:
            return cfg
    raise ConfigError("experiments", f"no experiment named {name!r}")


def env_threads() -> Optional[int]:
    value = os.getenv(THREADS_ENV)
    if not value:
        return None
    try:
        threads = int(value)
    except ValueError as exc:
        raise ConfigError(THREADS_ENV, f"must be an integer, got {value!r}") from exc
    if threads < 1:
        raise ConfigError(THREADS_ENV, f"must be >= 1, got {threads}")
    return threads


def apply_overrides(
    cfg: ExperimentConfig,
    seed: Optional[int] = None,
    out: Optional[str] = None,
    threads: Optional[int] = None,
    fmt: Optional[str] = None,
    log_level: Optional[str] = None,
    trace: Optional[bool] = None,
) -> ExperimentConfig:
    """Command-line overrides; thread count falls back to GIRG_LAB_THREADS."""
    analysis, output, processing = cfg.analysis, cfg.output, cfg.processing
    if seed is not None:
        if not 0 <= seed <= MAX_SEED:
            raise ConfigError("--seed", f"{seed} is not a 64-bit unsigned integer")
        analysis = replace(analysis, seeds=(int(seed),))
    if out is not None:
        output = replace(output, dir=out)
    if fmt is not None:
        if fmt not in FORMATS:
            raise ConfigError("--format", f"must be one of {FORMATS}, got {fmt!r}")
        output = replace(output, format=fmt)
    if trace:
        output = replace(output, trace=True)
    threads = threads if threads is not None else env_threads()
    if threads is not None:
        if threads < 1:
            raise ConfigError("--threads", f"must be >= 1, got {threads}")
        processing = replace(processing, threads=threads)
    return replace(
        cfg,
        analysis=analysis,
        output=output,
        processing=processing,
        log_level=(log_level or cfg.log_level).upper(),
    )
