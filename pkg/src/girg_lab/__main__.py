"""Command line entry point: ``girg-lab <command> --config PATH``."""

import argparse
import sys
from dataclasses import replace
from typing import List, Optional

from girg_lab.config import FORMATS, ExperimentConfig, apply_overrides, load_suite
from girg_lab.errors import ConfigError, GirgLabError
from girg_lab.pipeline import run_experiments
from girg_lab.utils.log import get_logger, setup_logging
from girg_lab.write.graph_io import load_graph

# Load .env if available
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

logger = get_logger(__name__)

ANALYSIS_COMMANDS = (
    "generate",
    "induce",
    "strips",
    "cover-bound",
    "expansion",
    "spectral",
    "walk",
    "rumor",
    "si",
    "cut-contrast",
    "volume-oracle",
    "weight-tail",
    "sampler-equivalence",
    "tightness",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="girg-lab",
        description="MCD-GIRG generator and expansion audit",
    )
    parser.add_argument("command", choices=ANALYSIS_COMMANDS + ("run",), help="Analysis to run, or 'run' for the configured list")
    parser.add_argument("--config", default="config.yaml", help="Path to config.yaml (a JSON file also works)")
    parser.add_argument("--experiment", help="Experiment name inside a suite file (default: all)")
    parser.add_argument("--seed", type=int, help="Run only this seed (overrides analysis.seeds)")
    parser.add_argument("--out", help="Output directory (overrides output.dir)")
    parser.add_argument("--threads", type=int, help="Worker threads (falls back to GIRG_LAB_THREADS)")
    parser.add_argument("--format", choices=FORMATS, help="Result file format")
    parser.add_argument("--graph", metavar="PREFIX", help="Analyse a saved graph instead of sampling")
    parser.add_argument("--trace", action="store_true", help="Write per-round spreading traces")
    parser.add_argument("--skip-failed", action="store_true", help="Record failing seeds and continue")
    parser.add_argument("--log-level", help="Logging level (overrides logging.level)")
    return parser


def select_configs(args: argparse.Namespace) -> List[ExperimentConfig]:
    suite = load_suite(args.config)
    if args.experiment:
        suite = [cfg for cfg in suite if cfg.name == args.experiment]
        if not suite:
            raise ConfigError("--experiment", f"no experiment named {args.experiment!r} in {args.config}")
    configs = []
    for cfg in suite:
        cfg = apply_overrides(
            cfg,
            seed=args.seed,
            out=args.out,
            threads=args.threads,
            fmt=args.format,
            log_level=args.log_level,
            trace=args.trace,
        )
        if args.command != "run":
            cfg = replace(cfg, analysis=replace(cfg.analysis, names=(args.command,)))
        if args.skip_failed:
            cfg = replace(cfg, processing=replace(cfg.processing, skip_failed=True))
        configs.append(cfg)
    return configs


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or "INFO")
    try:
        configs = select_configs(args)
        if not args.log_level and configs:
            setup_logging(configs[0].log_level)
        graph = load_graph(args.graph) if args.graph else None
        logger.info(
            "starting_girg_lab",
            command=args.command,
            config=args.config,
            experiments=[cfg.name for cfg in configs],
            analyses=sorted({name for cfg in configs for name in cfg.analysis.names}),
        )
        status = run_experiments(configs, graph)
    except GirgLabError as exc:
        logger.error("girg_lab_failed", error=str(exc), error_type=type(exc).__name__)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    logger.info("girg_lab_completed", status=status)
    return status


if __name__ == "__main__":
    sys.exit(main())
