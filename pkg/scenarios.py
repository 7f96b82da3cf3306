"""
Workspace scenarios: disc regions, scenario files and the built-in tasks

Predicates available to scenario formulas:
    in(NAME)      radius - distance to the region's center (> 0 inside)
    clear(NAME)   distance to the obstacle's center - radius (> 0 outside)
plus the dimension-generic ones from wtltl.default_registry().
"""

import json
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import logger
from dmp import DEFAULT_KERNELS, DmpSystem, IntegrationConfig, make_system, rollout
from errors import FormulaError, ScenarioConfigError
from optimizer import Evaluation, Objective, OptimizerConfig
from wtltl import (
    Formula,
    PredicateRegistry,
    SmoothingParams,
    Trace,
    default_registry,
    parse,
    predicates,
    robustness,
)

_logger = logger(__name__)

# Baseline cost coefficients
C1 = 0.6
C2 = 0.5

WORKSPACE_START = (0.05, 0.05)
WORKSPACE_GOAL = (0.95, 0.95)

CASE1_FORMULA = "(in(A) T in(B)) && (!in(B) U in(A)) && G (clear(O1) && clear(O2))"
CASE2_FORMULA = (
    "(F in(A) ||{wA,wB} F in(B)) && F in(G) "
    "&& (!in(G) U (in(A) ||{wA,wB} in(B))) && G clear(O)"
)


# ============================================================================
# CONFIG MODELS
# ============================================================================

class Region(BaseModel):
    """Disc in the workspace; used for both target regions and obstacles"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1, description="Name used in in(NAME) / clear(NAME)")
    center: Tuple[float, float] = Field(..., description="Center in meters")
    radius: float = Field(..., gt=0, description="Radius in meters")


class OptimizerSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    samples: int = Field(20, alias="M", ge=2, description="Samples per update")
    eliteness: float = Field(10.0, alias="h", ge=0, description="Eliteness parameter")
    lambda_init: float = Field(0.05, gt=0)
    lambda_min: float = Field(0.05, gt=0)
    lambda_max: Optional[float] = Field(None, gt=0, description="None for no upper bound")
    max_updates: int = Field(300, ge=0)
    seed: int = 0

    @model_validator(mode="after")
    def _ordered_levels(self) -> "OptimizerSettings":
        if self.lambda_min > self.lambda_init:
            raise ValueError(f"lambda_min {self.lambda_min} exceeds lambda_init {self.lambda_init}")
        if self.lambda_max is not None and self.lambda_max < self.lambda_min:
            raise ValueError(f"lambda_max {self.lambda_max} is below lambda_min {self.lambda_min}")
        return self

    def to_config(self, seed: Optional[int] = None, max_updates: Optional[int] = None) -> OptimizerConfig:
        return OptimizerConfig(
            samples=self.samples,
            eliteness=self.eliteness,
            lambda_init=self.lambda_init,
            lambda_min=self.lambda_min,
            lambda_max=self.lambda_max,
            max_updates=self.max_updates if max_updates is None else max_updates,
            seed=self.seed if seed is None else seed,
        )


class SmoothingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k1: float = Field(100.0, gt=0)
    k2: float = Field(100.0, gt=0)
    rho_max: float = Field(1e6, gt=0)


class IntegrationSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: float = Field(0.005, gt=0)
    steps: int = Field(200, ge=1)


class DmpSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kernels: int = Field(DEFAULT_KERNELS, ge=1, description="Kernels per dimension")
    alpha_z: float = Field(25.0, gt=0)
    alpha_s: float = Field(4.0, gt=0)
    tau: float = Field(1.0, gt=0)


class ScenarioSpec(BaseModel):
    """
    A complete task: workspace geometry, formula and run settings.

    Formula weight lists may name entries of `weights`, e.g. `||{wA,wB}`.
    """
    model_config = ConfigDict(extra="forbid")

    name: str = "scenario"
    start: Tuple[float, float]
    goal: Tuple[float, float]
    regions: List[Region] = Field(default_factory=list)
    obstacles: List[Region] = Field(default_factory=list)
    formula: str
    weights: Dict[str, float] = Field(default_factory=dict)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    smoothing: SmoothingSettings = Field(default_factory=SmoothingSettings)
    integration: IntegrationSettings = Field(default_factory=IntegrationSettings)
    dmp: DmpSettings = Field(default_factory=DmpSettings)

    @field_validator("weights")
    @classmethod
    def _positive_weights(cls, value: Dict[str, float]) -> Dict[str, float]:
        for key, w in value.items():
            if not w > 0:
                raise ValueError(f"weight {key!r} must be positive, got {w}")
        return value

    def region(self, name: str) -> Region:
        for r in self.regions:
            if r.name == name:
                return r
        raise ScenarioConfigError(f"No region named {name!r}", "regions")

    def obstacle(self, name: str) -> Region:
        for o in self.obstacles:
            if o.name == name:
                return o
        raise ScenarioConfigError(f"No obstacle named {name!r}", "obstacles")

    def parsed_formula(self) -> Formula:
        return parse(self.formula, self.weights)

    def registry(self) -> PredicateRegistry:
        return scenario_registry(self)

    def system(self, theta=None) -> DmpSystem:
        return make_system(
            self.start,
            self.goal,
            kernels=self.dmp.kernels,
            theta=theta,
            alpha_z=self.dmp.alpha_z,
            alpha_s=self.dmp.alpha_s,
            tau=self.dmp.tau,
            duration=self.integration.dt * self.integration.steps,
        )

    def integration_config(self) -> IntegrationConfig:
        return IntegrationConfig(dt=self.integration.dt, steps=self.integration.steps)

    def smoothing_params(self, k1: Optional[float] = None, k2: Optional[float] = None) -> SmoothingParams:
        return SmoothingParams(
            k1=self.smoothing.k1 if k1 is None else k1,
            k2=self.smoothing.k2 if k2 is None else k2,
            rho_max=self.smoothing.rho_max,
        )

    def optimizer_config(self, seed: Optional[int] = None, max_updates: Optional[int] = None) -> OptimizerConfig:
        return self.optimizer.to_config(seed=seed, max_updates=max_updates)


def _error_path(loc: Sequence[Union[str, int]]) -> str:
    """('regions', 0, 'radius') -> 'regions[0].radius'"""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def validate_scenario(spec: ScenarioSpec) -> ScenarioSpec:
    """
    Cross-field checks pydantic cannot express per field.

    Raises:
        ScenarioConfigError: Duplicate names, unparsable formula, or a
                             formula naming an undeclared region/obstacle
    """
    for field_name, items in (("regions", spec.regions), ("obstacles", spec.obstacles)):
        seen = set()
        for i, item in enumerate(items):
            if item.name in seen:
                raise ScenarioConfigError(f"Duplicate name {item.name!r}", f"{field_name}[{i}].name")
            seen.add(item.name)

    try:
        formula = spec.parsed_formula()
    except FormulaError as e:
        raise ScenarioConfigError(str(e), "formula") from e

    region_names = {r.name for r in spec.regions}
    obstacle_names = {o.name for o in spec.obstacles}
    for name, arity in sorted(predicates(formula)):
        declared = {"in": region_names, "clear": obstacle_names}.get(name)
        if declared is None:
            continue
        if arity != 1:
            raise ScenarioConfigError(f"{name}() takes one region name", "formula")
        for node_args in _predicate_args(formula, name):
            target = str(node_args[0])
            if target not in declared:
                kind = "region" if name == "in" else "obstacle"
                raise ScenarioConfigError(f"Formula uses undeclared {kind} {target!r}", "formula")
    return spec


def _predicate_args(formula: Formula, name: str):
    if formula.name == name:
        yield formula.args
    for child in formula.children:
        yield from _predicate_args(child, name)


def scenario_from_dict(data: dict) -> ScenarioSpec:
    """Validate a decoded scenario file"""
    try:
        spec = ScenarioSpec.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        path = _error_path(first["loc"])
        raise ScenarioConfigError(first["msg"], path) from e
    return validate_scenario(spec)


def load_scenario(path: Union[str, Path]) -> ScenarioSpec:
    """
    Load and validate a JSON scenario file.

    Raises:
        ScenarioConfigError: Invalid JSON or invalid content, with a key path
        FileNotFoundError: No such file
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", "") from e
    if not isinstance(data, dict):
        raise ScenarioConfigError(f"{path}: top level must be an object", "")
    spec = scenario_from_dict(data)
    _logger.info(f"Loaded scenario '{spec.name}' from {path}")
    return spec


def dump_scenario(spec: ScenarioSpec) -> str:
    return json.dumps(spec.model_dump(by_alias=True), indent=2)


# ============================================================================
# GEOMETRY
# ============================================================================

def _distance(points, center) -> np.ndarray:
    return np.linalg.norm(np.asarray(points, dtype=float) - np.asarray(center, dtype=float), axis=-1)


def region_robustness(point, region: Region):
    """radius - distance to center: positive inside, zero on the boundary"""
    return region.radius - _distance(point, region.center)


def obstacle_clearance(point, obstacle: Region):
    """distance to center - radius: positive when clear"""
    return _distance(point, obstacle.center) - obstacle.radius


def scenario_registry(spec: ScenarioSpec) -> PredicateRegistry:
    """default_registry() plus in(NAME) and clear(NAME) bound to the scenario's discs"""
    regions = {r.name: r for r in spec.regions}
    obstacles = {o.name: o for o in spec.obstacles}

    def inside(states, name):
        return region_robustness(states, regions[str(name)])

    def clear(states, name):
        return obstacle_clearance(states, obstacles[str(name)])

    registry = default_registry()
    registry.register("in", 1, inside, vectorized=True, dim=2)
    registry.register("clear", 1, clear, vectorized=True, dim=2)
    return registry


# ============================================================================
# BUILT-IN SCENARIOS
# ============================================================================

def build_case1() -> ScenarioSpec:
    """Visit A then B, never B before A, avoid O1 and O2"""
    return validate_scenario(ScenarioSpec(
        name="case1",
        start=WORKSPACE_START,
        goal=WORKSPACE_GOAL,
        regions=[
            Region(name="A", center=(0.35, 0.65), radius=0.08),
            Region(name="B", center=(0.65, 0.35), radius=0.08),
        ],
        obstacles=[
            Region(name="O1", center=(0.35, 0.35), radius=0.10),
            Region(name="O2", center=(0.65, 0.65), radius=0.10),
        ],
        formula=CASE1_FORMULA,
    ))


def build_case2(w_A: float = 2.0, w_B: float = 1.0) -> ScenarioSpec:
    """
    Visit A or B (preference set by the weights), then reach G, never G
    before A or B, avoid O.
    """
    return validate_scenario(ScenarioSpec(
        name=f"case2_wA{w_A:g}_wB{w_B:g}",
        start=WORKSPACE_START,
        goal=WORKSPACE_GOAL,
        regions=[
            Region(name="A", center=(0.30, 0.60), radius=0.08),
            Region(name="B", center=(0.60, 0.30), radius=0.08),
            Region(name="G", center=WORKSPACE_GOAL, radius=0.08),
        ],
        obstacles=[Region(name="O", center=(0.5, 0.5), radius=0.12)],
        formula=CASE2_FORMULA,
        weights={"wA": w_A, "wB": w_B},
    ))


def build_example1(w_A: float = 1.0, w_B: float = 2.0) -> ScenarioSpec:
    """
    Reagent transport: pick up at A (inside the human workspace) or at B
    (free space), deliver to the rack G, avoid the obstacle O. The default
    weights prefer B.
    """
    return validate_scenario(ScenarioSpec(
        name="example1",
        start=(0.1, 0.1),
        goal=(0.9, 0.9),
        regions=[
            Region(name="A", center=(0.25, 0.65), radius=0.08),
            Region(name="B", center=(0.65, 0.25), radius=0.08),
            Region(name="G", center=(0.9, 0.9), radius=0.08),
        ],
        obstacles=[Region(name="O", center=(0.45, 0.45), radius=0.10)],
        formula=CASE2_FORMULA,
        weights={"wA": w_A, "wB": w_B},
    ))


BUILTIN_SCENARIOS = {
    "case1": build_case1,
    "case2": build_case2,
    "example1": build_example1,
}


# ============================================================================
# BASELINE COST
# ============================================================================

def conventional_cost(
    trace: Trace,
    scenario: ScenarioSpec,
    c1: float = C1,
    c2: float = C2,
    targets: Sequence[str] = ("A", "B"),
) -> float:
    """
    Hand-designed cost -c1 * J_O + c2 * J_G.

    J_O sums, per obstacle, the deepest penetration over the trace (0 when
    the trace stays clear). J_G sums, per target region, the closest the
    trace comes to the region's disc (0 once inside). The cost is blind to
    visiting order.
    """
    states = trace.states
    if trace.dim != 2:
        raise ScenarioConfigError(f"Baseline cost needs 2-D traces, got {trace.dim}-D", "start")
    j_o = sum(min(0.0, float(obstacle_clearance(states, o).min())) for o in scenario.obstacles)
    j_g = sum(max(0.0, float(-region_robustness(states, scenario.region(name)).max())) for name in targets)
    return -c1 * j_o + c2 * j_g


def conventional_objective(
    scenario: ScenarioSpec,
    sys: DmpSystem,
    cfg_int: IntegrationConfig,
    formula: Formula,
    registry: PredicateRegistry,
    c1: float = C1,
    c2: float = C2,
    targets: Sequence[str] = ("A", "B"),
) -> Objective:
    """Objective for the baseline: J-bar as cost, exact formula robustness for reporting"""

    def objective(theta: np.ndarray) -> Evaluation:
        trace = rollout(sys.with_theta(theta), cfg_int)
        cost = conventional_cost(trace, scenario, c1, c2, targets)
        return Evaluation(cost, robustness(formula, trace, registry))

    return objective


# ============================================================================
# PARAMETER COUNTS
# ============================================================================

class ParameterCounts(NamedTuple):
    dmps: int
    parameters: int
    sequential_dmps: int
    sequential_parameters: int


def parameter_counts(dims: int, kernels: int, goals: int) -> ParameterCounts:
    """
    DMPs and optimized parameters for one joint DMP per dimension versus one
    DMP per dimension per sub-goal.

    Args:
        dims: Workspace dimension
        kernels: Kernels per DMP
        goals: Sub-goals a sequencing approach would chain (e.g. A, B, G)
    """
    if min(dims, kernels, goals) < 1:
        raise ScenarioConfigError("dims, kernels and goals must be >= 1", "")
    return ParameterCounts(
        dmps=dims,
        parameters=dims * kernels,
        sequential_dmps=dims * goals,
        sequential_parameters=dims * goals * kernels,
    )
