"""Acceptance checks evaluated over the per-seed summaries of one experiment."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List

import numpy as np
from scipy import stats

from .analysis.expansion import fit_scaling_exponent

SeedSummaries = Dict[int, Dict[str, Any]]
CheckFn = Callable[[SeedSummaries], List["CheckResult"]]

MOST_SEEDS = 0.9
NEARLY_ALL_SEEDS = 0.95
Z_LIMIT = 3.0
TAIL_LOG_ERROR = 0.05
SCALING_FACTOR = 2.0
SYMDIFF_LIMIT = 0.2
MIN_LAMBDA2 = 0.01
RUMOR_ROUND_SLACK = 3
CUT_EXPONENT = 0.95
ANCHOR_BOUND = 0.192
FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: Any
    required: str

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


_check_registry: Dict[str, List[CheckFn]] = {}


def acceptance_check(analysis: str):
    """Decorator attaching a check function to an analysis name."""
    def wrapper(fn: CheckFn) -> CheckFn:
        _check_registry.setdefault(analysis, []).append(fn)
        return fn
    return wrapper


def evaluate(analysis: str, summaries: SeedSummaries) -> List[CheckResult]:
    """All checks of ``analysis``; analyses without checks or without seeds yield none."""
    if not summaries:
        return []
    results: List[CheckResult] = []
    for fn in _check_registry.get(analysis, []):
        results.extend(fn(summaries))
    return results


def _fraction(flags: List[bool]) -> float:
    return float(np.mean(flags)) if flags else math.nan


def _by_n(summaries: SeedSummaries, metric: str) -> Dict[int, List[float]]:
    """metric values per n across seeds, from ``by_n`` summary blocks."""
    out: Dict[int, List[float]] = {}
    for summary in summaries.values():
        for n, block in summary.get("by_n", {}).items():
            if metric in block:
                out.setdefault(int(n), []).append(block[metric])
    return dict(sorted(out.items()))


@acceptance_check("volume-oracle")
def _volume_within_stderr(summaries: SeedSummaries) -> List[CheckResult]:
    worst = max(s["max_abs_z"] for s in summaries.values())
    return [CheckResult("volume_monte_carlo", worst <= Z_LIMIT, worst, f"|z| <= {Z_LIMIT}")]


@acceptance_check("weight-tail")
def _weight_tail(summaries: SeedSummaries) -> List[CheckResult]:
    worst = max(s["max_relative_log_error"] for s in summaries.values())
    return [CheckResult("weight_tail", worst <= TAIL_LOG_ERROR, worst, f"relative log error <= {TAIL_LOG_ERROR}")]


@acceptance_check("sampler-equivalence")
def _sampler_equivalence(summaries: SeedSummaries) -> List[CheckResult]:
    cells = sum(len(s["cells"]) for s in summaries.values())
    mismatches = sum(s["mismatches"] for s in summaries.values())
    return [CheckResult("sampler_equivalence", mismatches == 0, {"cells": cells, "mismatches": mismatches}, "0 mismatches")]


@acceptance_check("induce")
def _subgraph_scaling(summaries: SeedSummaries) -> List[CheckResult]:
    results = []
    ratios = {n: float(np.median(v)) for n, v in _by_n(summaries, "size_ratio").items()}
    if len(ratios) >= 2:
        spread = max(ratios.values()) / min(ratios.values()) if min(ratios.values()) > 0 else math.inf
        results.append(CheckResult("subgraph_scaling", spread <= SCALING_FACTOR, spread, f"max/min <= {SCALING_FACTOR}"))
    symdiff = _by_n(summaries, "degree_weight_symdiff")
    if symdiff:
        largest = max(symdiff)
        value = float(np.median(symdiff[largest]))
        results.append(CheckResult("degree_weight_agreement", value <= SYMDIFF_LIMIT, value, f"<= {SYMDIFF_LIMIT} at n={largest}"))
    return results


@acceptance_check("strips")
def _same_strip(summaries: SeedSummaries) -> List[CheckResult]:
    results = []
    minima = _by_n(summaries, "min_same_strip")
    if minima:
        largest = max(minima)
        share = _fraction([m >= 1 for m in minima[largest]])
        results.append(CheckResult("same_strip_minimum", share >= MOST_SEEDS, share, f"min >= 1 in >= {MOST_SEEDS:.0%} of seeds"))
    medians = [float(np.median(v)) for v in _by_n(summaries, "median_same_strip").values()]
    if len(medians) >= 2:
        growing = all(b >= a for a, b in zip(medians, medians[1:]))
        results.append(CheckResult("same_strip_median_growth", growing, medians, "nondecreasing in n"))
    return results


@acceptance_check("cover-bound")
def _cover_bound(summaries: SeedSummaries) -> List[CheckResult]:
    cells = [cell for s in summaries.values() for cell in s["cells"]]
    violations = [
        {"s": c["s"], "k": c["k"], "empirical": c["empirical"], "bound": c["bound"]}
        for c in cells
        if c["empirical"] > c["bound"]
    ]
    stirling_ok = all(
        c["bound_at_mean_nv"] <= c["stirling_at_mean_nv"] + FLOAT_TOL for c in cells if "stirling_at_mean_nv" in c
    )
    anchor = next(iter(summaries.values()))["anchor_bound"]
    return [
        CheckResult("cover_bound_validity", not violations, violations, "empirical <= bound in every cell"),
        CheckResult("cover_bound_anchor", abs(anchor - ANCHOR_BOUND) <= FLOAT_TOL, anchor, f"== {ANCHOR_BOUND}"),
        CheckResult("stirling_dominates", stirling_ok, stirling_ok, "exact bound <= Stirling bound"),
    ]


@acceptance_check("expansion")
def _expansion(summaries: SeedSummaries) -> List[CheckResult]:
    share = _fraction([s["min_ratio_small_sets"] >= 1.0 for s in summaries.values()])
    sound = all(s.get("brute_force_sound", True) for s in summaries.values())
    return [
        CheckResult("expansion_small_sets", share >= MOST_SEEDS, share, f"min ratio >= 1 in >= {MOST_SEEDS:.0%} of seeds"),
        CheckResult("brute_force_soundness", sound, sound, "search never beats brute force"),
    ]


@acceptance_check("tightness")
def _tightness(summaries: SeedSummaries) -> List[CheckResult]:
    sub: Dict[tuple, List[bool]] = {}
    sup: Dict[tuple, List[bool]] = {}
    for summary in summaries.values():
        for cell in summary["cells"]:
            key = (cell["n"], cell["gamma"])
            if cell["subcritical"]:
                sub.setdefault(key, []).append(cell["isolated"] >= 1)
            else:
                sup.setdefault(key, []).append(cell["isolated"] == 0)
    results = []
    for (n, gamma), flags in sorted(sub.items()):
        share = _fraction(flags)
        results.append(
            CheckResult(f"isolated_below_threshold[n={n},gamma={gamma:g}]", share >= NEARLY_ALL_SEEDS, share, f"isolated >= 1 in >= {NEARLY_ALL_SEEDS:.0%}")
        )
    for (n, gamma), flags in sorted(sup.items()):
        share = _fraction(flags)
        results.append(
            CheckResult(f"no_isolated_above_threshold[n={n},gamma={gamma:g}]", share >= NEARLY_ALL_SEEDS, share, f"isolated == 0 in >= {NEARLY_ALL_SEEDS:.0%}")
        )
    return results


@acceptance_check("cut-contrast")
def _cut_contrast(summaries: SeedSummaries) -> List[CheckResult]:
    pooled: Dict[str, List[tuple]] = {}
    for summary in summaries.values():
        for geometry, cuts in summary["cuts"].items():
            pooled.setdefault(geometry, []).extend((int(n), c) for n, c in cuts.items() if c > 0)
    results = []
    for geometry, points in sorted(pooled.items()):
        if len({n for n, _ in points}) < 2:
            continue
        exponent, _ = fit_scaling_exponent([n for n, _ in points], [c for _, c in points])
        if geometry == "linf":
            results.append(CheckResult("linf_small_separator", exponent < CUT_EXPONENT, exponent, f"< {CUT_EXPONENT}"))
        else:
            results.append(CheckResult(f"{geometry}_no_small_separator", exponent >= CUT_EXPONENT, exponent, f">= {CUT_EXPONENT}"))
    return results


@acceptance_check("spectral")
def _spectral(summaries: SeedSummaries) -> List[CheckResult]:
    share = _fraction([s["lambda2"] >= MIN_LAMBDA2 for s in summaries.values()])
    cheeger = all(s.get("cheeger_consistent", True) for s in summaries.values())
    return [
        CheckResult("spectral_gap_positive", share >= MOST_SEEDS, share, f"lambda2 >= {MIN_LAMBDA2} in >= {MOST_SEEDS:.0%}"),
        CheckResult("cheeger_consistency", cheeger, cheeger, "probed conductance >= lambda2 / 2"),
    ]


@acceptance_check("walk")
def _walk(summaries: SeedSummaries) -> List[CheckResult]:
    converged = all(s["converged"] for s in summaries.values())
    results = [CheckResult("mixing_within_budget", converged, converged, "TV <= eps within 10 ln n / lambda2 steps")]
    if len(summaries) >= 3:
        steps = [s["mixing_steps"] for s in summaries.values()]
        gaps = [s["lambda2"] for s in summaries.values()]
        rho = float(stats.spearmanr(steps, gaps)[0])
        if math.isfinite(rho):
            results.append(CheckResult("mixing_spectral_coupling", rho < 0, rho, "Spearman(mixing, lambda2) < 0"))
    return results


@acceptance_check("rumor")
def _rumor(summaries: SeedSummaries) -> List[CheckResult]:
    rounds = _by_n(summaries, "rounds")
    if len(rounds) < 2:
        return []
    small, large = min(rounds), max(rounds)
    gap = float(np.median(rounds[large]) - np.median(rounds[small]))
    return [CheckResult("rumor_ultra_fast", gap <= RUMOR_ROUND_SLACK, gap, f"median rounds grow by <= {RUMOR_ROUND_SLACK} from n={small} to n={large}")]
