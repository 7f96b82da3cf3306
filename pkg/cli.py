#!/usr/bin/env python3
"""
Command-line front end

    python cli.py run      --config configs/case1.json --seed 3
    python cli.py monitor  --scenario case1 --trace runs/case1_seed3/trajectory.csv
    python cli.py rollout  --config configs/case1.json --params runs/case1_seed3/params.csv
    python cli.py compare  --scenario case1 --seeds 20
    python cli.py counts

Exit codes: 0 success, 1 no satisfying trajectory, 2 invalid input.
"""

import argparse
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from config import PIBB_OUTPUT_DIR, PIBB_WORKERS, logger
from dmp import rollout
from errors import (
    EXIT_INPUT_ERROR,
    EXIT_NOT_CONVERGED,
    EXIT_SUCCESS,
    PibbError,
    ScenarioConfigError,
    TraceFormatError,
    exit_code_for,
    is_input_error,
)
from optimizer import OptimizationResult, check_registered, optimize, rollout_objective, search
from scenarios import BUILTIN_SCENARIOS, ScenarioSpec, conventional_objective, load_scenario, parameter_counts
from tasks import shutdown_pools
from utility import (
    RunSummary,
    read_params_csv,
    read_trace_csv,
    write_learning_curve,
    write_params_csv,
    write_summary,
    write_table,
    write_trace_csv,
)
from wtltl import Trace, parse, robustness, satisfies, smooth_robustness

_logger = logger(__name__)

TRAJECTORY_FILE = "trajectory.csv"
LEARNING_CURVE_FILE = "learning_curve.csv"
PARAMS_FILE = "params.csv"
SUMMARY_FILE = "summary.json"
COMPARE_FILE = "compare.csv"

# Sub-goals a per-goal sequencing approach would chain in each built-in task
SEQUENTIAL_GOALS = {"case1": 3, "case2": 2}

# Regions the hand-designed baseline pulls the trajectory towards
BASELINE_TARGETS = ("A", "B")


@dataclass
class RunArtifacts:
    out_dir: Path
    trajectory: Path
    learning_curve: Path
    params: Path
    summary_path: Path
    summary: RunSummary

    @property
    def exit_code(self) -> int:
        ok = self.summary.converged and self.summary.satisfied
        return EXIT_SUCCESS if ok else EXIT_NOT_CONVERGED


@dataclass
class MonitorReport:
    satisfied: bool
    robustness: float
    smooth_robustness: float

    @property
    def gap(self) -> float:
        return self.robustness - self.smooth_robustness

    def lines(self) -> List[str]:
        return [
            f"satisfied:         {str(self.satisfied).lower()}",
            f"robustness:        {self.robustness:.9g}",
            f"smooth_robustness: {self.smooth_robustness:.9g}",
            f"gap:               {self.gap:.9g}",
        ]


# ============================================================================
# OPERATIONS
# ============================================================================

def resolve_scenario(config_path: Optional[str] = None, scenario: Optional[str] = None) -> ScenarioSpec:
    """Load a scenario file, or build a built-in scenario by name"""
    if scenario is not None:
        if scenario not in BUILTIN_SCENARIOS:
            raise ScenarioConfigError(
                f"Unknown scenario {scenario!r}; choose from {', '.join(sorted(BUILTIN_SCENARIOS))}", "scenario"
            )
        return BUILTIN_SCENARIOS[scenario]()
    if config_path is None:
        raise ScenarioConfigError("Either --config or --scenario is required", "config")
    return load_scenario(config_path)


def evaluate_trace(spec: ScenarioSpec, trace: Trace, formula_text: Optional[str] = None,
                   k1: Optional[float] = None, k2: Optional[float] = None) -> MonitorReport:
    formula = parse(formula_text, spec.weights) if formula_text else spec.parsed_formula()
    registry = spec.registry()
    sp = spec.smoothing_params(k1, k2)
    return MonitorReport(
        satisfied=satisfies(formula, trace, registry),
        robustness=robustness(formula, trace, registry, sp.rho_max),
        smooth_robustness=smooth_robustness(formula, trace, registry, sp),
    )


def run_experiment(
    spec: ScenarioSpec,
    out_dir: Optional[Path] = None,
    seed: Optional[int] = None,
    k1: Optional[float] = None,
    k2: Optional[float] = None,
    max_updates: Optional[int] = None,
    workers: Optional[int] = None,
) -> RunArtifacts:
    """
    Optimize the scenario's DMP against its formula and write the artifacts.

    Args:
        spec: Validated scenario
        out_dir: Artifact directory; PIBB_OUTPUT_DIR/<scenario>_seed<seed> when None
        seed: Overrides the scenario's optimizer seed
        k1, k2: Override the smoothing sharpness
        max_updates: Overrides the update budget
        workers: Evaluation threads

    Returns:
        RunArtifacts with paths and the summary
    """
    cfg = spec.optimizer_config(seed=seed, max_updates=max_updates)
    out_dir = Path(out_dir) if out_dir else Path(PIBB_OUTPUT_DIR) / f"{spec.name}_seed{cfg.seed}"
    formula = spec.parsed_formula()
    registry = spec.registry()
    sp = spec.smoothing_params(k1, k2)
    sys_ = spec.system()
    cfg_int = spec.integration_config()

    result = optimize(sys_, cfg_int, formula, registry, sp, cfg, workers=workers)
    trace = rollout(sys_.with_theta(result.theta), cfg_int)
    report = evaluate_trace(spec, trace, k1=k1, k2=k2)

    summary = RunSummary(
        scenario=spec.name,
        seed=cfg.seed,
        updates=result.updates,
        converged=result.converged,
        robustness=report.robustness,
        smooth_robustness=report.smooth_robustness,
        satisfied=report.satisfied,
        wall_seconds=result.wall_seconds,
        settings={
            "formula": spec.formula,
            "weights": dict(spec.weights),
            "samples": cfg.samples,
            "eliteness": cfg.eliteness,
            "lambda_init": cfg.lambda_init,
            "lambda_min": cfg.lambda_min,
            "lambda_max": cfg.lambda_max,
            "max_updates": cfg.max_updates,
            "k1": sp.k1,
            "k2": sp.k2,
            "kernels": sys_.kernels,
        },
    )
    artifacts = RunArtifacts(
        out_dir=out_dir,
        trajectory=write_trace_csv(out_dir / TRAJECTORY_FILE, trace),
        learning_curve=write_learning_curve(out_dir / LEARNING_CURVE_FILE, result.history),
        params=write_params_csv(out_dir / PARAMS_FILE, result.theta),
        summary_path=write_summary(out_dir / SUMMARY_FILE, summary),
        summary=summary,
    )
    _logger.info(f"Artifacts written to {out_dir}")
    verdict = "satisfied" if report.satisfied else "NOT satisfied"
    _logger.info(f"Final rollout {verdict}, robustness {report.robustness:.6g}, {result.updates} updates")
    return artifacts


def compare_methods(
    spec: ScenarioSpec,
    seeds: Sequence[int],
    max_updates: Optional[int] = None,
    workers: Optional[int] = None,
) -> List[dict]:
    """
    Updates until the mean rollout satisfies the formula, for the
    robustness-guided cost and for the hand-designed baseline cost.

    Both methods stop on the same test (boolean monitor on the mean rollout)
    and share seeds, so only the cost differs.
    """
    formula = spec.parsed_formula()
    registry = spec.registry()
    check_registered(formula, registry)
    for name in BASELINE_TARGETS:
        spec.region(name)
    sp = spec.smoothing_params()
    sys_ = spec.system()
    cfg_int = spec.integration_config()

    def satisfied(theta, _ev) -> bool:
        return satisfies(formula, rollout(sys_.with_theta(theta), cfg_int), registry)

    objectives = {
        "wtltl": rollout_objective(sys_, cfg_int, formula, registry, sp),
        "baseline": conventional_objective(spec, sys_, cfg_int, formula, registry, targets=BASELINE_TARGETS),
    }
    rows = []
    for seed in seeds:
        cfg = spec.optimizer_config(seed=seed, max_updates=max_updates)
        for method, objective in objectives.items():
            result: OptimizationResult = search(objective, sys_.theta_flat, cfg, workers=workers, stop=satisfied)
            rows.append({"seed": seed, "method": method, "updates": result.updates, "satisfied": result.converged})
            _logger.info(f"seed {seed} {method}: {result.updates} updates, satisfied={result.converged}")
    return rows


def median_updates(rows: Sequence[dict], method: str, budget: int) -> float:
    """Median updates-to-satisfaction; unsatisfied runs count as budget + 1"""
    values = [r["updates"] if r["satisfied"] else budget + 1 for r in rows if r["method"] == method]
    return float(statistics.median(values))


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def _cmd_run(args) -> int:
    spec = resolve_scenario(args.config, args.scenario)
    artifacts = run_experiment(
        spec,
        out_dir=args.out_dir,
        seed=args.seed,
        k1=args.k1,
        k2=args.k2,
        max_updates=args.max_updates,
        workers=args.workers,
    )
    print(artifacts.summary.model_dump_json(indent=2))
    return artifacts.exit_code


def _cmd_monitor(args) -> int:
    spec = resolve_scenario(args.config, args.scenario)
    trace = read_trace_csv(args.trace)
    report = evaluate_trace(spec, trace, args.formula, args.k1, args.k2)
    print("\n".join(report.lines()))
    return EXIT_SUCCESS


def _cmd_rollout(args) -> int:
    spec = resolve_scenario(args.config, args.scenario)
    sys_ = spec.system()
    if args.params:
        theta = read_params_csv(args.params)
        if theta.size != sys_.n_params:
            raise TraceFormatError(f"{args.params}: expected {sys_.n_params} parameters, got {theta.size}")
        sys_ = sys_.with_theta(theta)
    trace = rollout(sys_, spec.integration_config())
    out_dir = Path(args.out_dir) if args.out_dir else Path(PIBB_OUTPUT_DIR) / f"{spec.name}_rollout"
    path = write_trace_csv(out_dir / TRAJECTORY_FILE, trace)
    _logger.info(f"Trajectory written to {path}")
    print("\n".join(evaluate_trace(spec, trace, k1=args.k1, k2=args.k2).lines()))
    return EXIT_SUCCESS


def _cmd_compare(args) -> int:
    spec = resolve_scenario(args.config, args.scenario)
    seeds = list(range(args.first_seed, args.first_seed + args.seeds))
    rows = compare_methods(spec, seeds, max_updates=args.max_updates, workers=args.workers)
    out_dir = Path(args.out_dir) if args.out_dir else Path(PIBB_OUTPUT_DIR) / f"{spec.name}_compare"
    path = write_table(
        out_dir / COMPARE_FILE,
        ["seed", "method", "updates", "satisfied"],
        ([r["seed"], r["method"], r["updates"], str(r["satisfied"]).lower()] for r in rows),
    )
    _logger.info(f"Comparison written to {path}")
    budget = spec.optimizer_config(max_updates=args.max_updates).max_updates
    for method in ("wtltl", "baseline"):
        print(f"{method:<9} median updates: {median_updates(rows, method, budget):g}")
    return EXIT_SUCCESS


def _cmd_counts(args) -> int:
    print(f"{'task':<8}{'approach':<12}{'DMPs':>6}{'params':>8}")
    cases = [(args.goals, f"n={args.goals}")] if args.goals else [(n, name) for name, n in SEQUENTIAL_GOALS.items()]
    for goals, label in cases:
        c = parameter_counts(args.dims, args.kernels, goals)
        print(f"{label:<8}{'joint':<12}{c.dmps:>6}{c.parameters:>8}")
        print(f"{label:<8}{'sequential':<12}{c.sequential_dmps:>6}{c.sequential_parameters:>8}")
    return EXIT_SUCCESS


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="Scenario JSON file")
    group.add_argument("--scenario", choices=sorted(BUILTIN_SCENARIOS), help="Built-in scenario")


def _add_smoothing_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k1", type=float, help="Smooth-min sharpness")
    parser.add_argument("--k2", type=float, help="Smooth-max sharpness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pibb-tl", description="wTLTL-guided DMP learning")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Optimize a scenario and write artifacts")
    _add_scenario_args(run)
    _add_smoothing_args(run)
    run.add_argument("--seed", type=int)
    run.add_argument("--out-dir")
    run.add_argument("--max-updates", type=int)
    run.add_argument("--workers", type=int, default=PIBB_WORKERS)
    run.set_defaults(handler=_cmd_run)

    monitor = sub.add_parser("monitor", help="Evaluate a formula over a stored trace")
    _add_scenario_args(monitor)
    _add_smoothing_args(monitor)
    monitor.add_argument("--trace", required=True, help="Trace CSV (t,x0,x1)")
    monitor.add_argument("--formula", help="Formula text; defaults to the scenario's")
    monitor.set_defaults(handler=_cmd_monitor)

    roll = sub.add_parser("rollout", help="Integrate the DMP from a parameters CSV")
    _add_scenario_args(roll)
    _add_smoothing_args(roll)
    roll.add_argument("--params", help="Parameters CSV; zero parameters when omitted")
    roll.add_argument("--out-dir")
    roll.set_defaults(handler=_cmd_rollout)

    compare = sub.add_parser("compare", help="Updates to satisfaction: wTLTL cost vs baseline cost")
    _add_scenario_args(compare)
    compare.add_argument("--seeds", type=int, default=20)
    compare.add_argument("--first-seed", type=int, default=0)
    compare.add_argument("--max-updates", type=int)
    compare.add_argument("--out-dir")
    compare.add_argument("--workers", type=int, default=PIBB_WORKERS)
    compare.set_defaults(handler=_cmd_compare)

    counts = sub.add_parser("counts", help="DMP and parameter counts, joint vs sequential")
    counts.add_argument("--dims", type=int, default=2)
    counts.add_argument("--kernels", type=int, default=10)
    counts.add_argument("--goals", type=int, help="Sub-goals; built-in tasks when omitted")
    counts.set_defaults(handler=_cmd_counts)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_SUCCESS
    try:
        return args.handler(args)
    except (PibbError, OSError) as e:
        if is_input_error(e):
            _logger.error(f"Invalid input: {e}")
        else:
            _logger.error(f"Run failed: {e}")
        return exit_code_for(e)
    finally:
        shutdown_pools()


if __name__ == "__main__":
    sys.exit(main())
