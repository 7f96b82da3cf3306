"""
Policy improvement with black-box optimization, guided by wTLTL robustness

One update:
    1. draw M parameter vectors theta_m ~ N(theta, Sigma)
    2. roll each out and score it (smoothed robustness -> cost)
    3. weight samples by exp(-h * normalized cost)
    4. Sigma <- weighted scatter of the samples about the current mean,
       eigenvalues clamped into [lambda_min, lambda_max]
       theta <- weighted mean of the samples
Updates repeat until the cost of the mean rollout reaches the tolerance or
max_updates elapse.
"""

import time
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from config import PIBB_WORKERS, logger
from dmp import DmpSystem, IntegrationConfig, rollout
from errors import CovarianceError, OptimizerError, SampleEvaluationError, UnknownPredicateError, WeightSumError
from tasks import evaluate_batch
from wtltl import Formula, PredicateRegistry, SmoothingParams, Trace, predicates, smooth_robustness

_logger = logger(__name__)

SYMMETRY_TOL = 1e-9
WEIGHT_SUM_TOL = 1e-9
CONVERGENCE_TOL = 1e-6


class Evaluation(NamedTuple):
    cost: float
    robustness: float


Objective = Callable[[np.ndarray], Evaluation]


@dataclass(frozen=True, eq=False)
class SearchDistribution:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).ravel()
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (mean.size, mean.size):
            raise CovarianceError(f"Covariance shape {cov.shape} does not match mean of size {mean.size}")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def isotropic(cls, mean, variance: float) -> "SearchDistribution":
        mean = np.asarray(mean, dtype=float).ravel()
        return cls(mean, variance * np.eye(mean.size))


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Args:
        samples: M, parameter vectors drawn per update
        eliteness: h, sharpness of the cost weighting
        lambda_init: Initial isotropic exploration variance
        lambda_min: Eigenvalue floor for the covariance
        lambda_max: Eigenvalue ceiling, None for unbounded
        max_updates: Update budget
        tolerance: Convergence threshold on the mean-rollout cost
        seed: Master seed for all sampling
    """
    samples: int = 20
    eliteness: float = 10.0
    lambda_init: float = 0.05
    lambda_min: float = 0.05
    lambda_max: Optional[float] = None
    max_updates: int = 300
    tolerance: float = CONVERGENCE_TOL
    seed: int = 0

    def __post_init__(self):
        if self.samples < 2:
            raise OptimizerError(f"samples must be >= 2, got {self.samples}")
        if self.eliteness < 0:
            raise OptimizerError(f"eliteness must be >= 0, got {self.eliteness}")
        if not 0 < self.lambda_min <= self.lambda_init:
            raise OptimizerError(
                f"Need 0 < lambda_min <= lambda_init, got {self.lambda_min} and {self.lambda_init}"
            )
        if self.lambda_max is not None and self.lambda_max < self.lambda_min:
            raise OptimizerError(f"lambda_max {self.lambda_max} is below lambda_min {self.lambda_min}")
        if self.max_updates < 0:
            raise OptimizerError(f"max_updates must be >= 0, got {self.max_updates}")


@dataclass(frozen=True)
class UpdateRecord:
    update: int
    mean_cost: float
    min_cost: float
    mean_robustness: float
    mean_rollout_cost: float


@dataclass
class OptimizationResult:
    theta: np.ndarray
    covariance: np.ndarray
    history: List[UpdateRecord] = field(default_factory=list)
    converged: bool = False
    updates: int = 0
    final: Optional[Evaluation] = None
    wall_seconds: float = 0.0


# ============================================================================
# COST
# ============================================================================

def cost_from_robustness(rho: float) -> float:
    """-rho for negative rho, 0 otherwise"""
    return -rho if rho < 0 else 0.0


def tltl_cost(trace: Trace, formula: Formula, registry: PredicateRegistry, sp: SmoothingParams = SmoothingParams()) -> float:
    """Cost of a trace: how far its smoothed robustness falls below zero"""
    return cost_from_robustness(smooth_robustness(formula, trace, registry, sp))


# ============================================================================
# DISTRIBUTION OPERATIONS
# ============================================================================

def _check_symmetric(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise CovarianceError(f"Covariance must be square, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise CovarianceError("Covariance is not symmetric")
    return matrix


def sample_parameters(dist: SearchDistribution, count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw `count` parameter vectors from N(mean, covariance).

    The covariance is factored through its symmetric eigendecomposition;
    negative eigenvalues are clamped to zero first.

    Returns:
        Array of shape (count, n)
    """
    cov = _check_symmetric(dist.covariance)
    eigvals, eigvecs = np.linalg.eigh((cov + cov.T) / 2.0)
    factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    noise = rng.standard_normal((count, dist.mean.size))
    return dist.mean + noise @ factor.T


def compute_sample_weights(costs, h: float) -> np.ndarray:
    """
    Normalized exponentiated costs: low cost, high weight.

    Uniform when h == 0 or when all costs are equal.
    """
    costs = np.asarray(costs, dtype=float).ravel()
    if costs.size < 2:
        raise OptimizerError(f"Need at least 2 costs, got {costs.size}")
    lo, hi = costs.min(), costs.max()
    if h == 0 or hi == lo:
        return np.full(costs.size, 1.0 / costs.size)
    weights = np.exp(-h * (costs - lo) / (hi - lo))
    return weights / weights.sum()


def bound_covariance(cov, lambda_min: float, lambda_max: Optional[float] = None) -> np.ndarray:
    """Clamp the eigenvalues of a symmetric matrix into [lambda_min, lambda_max]"""
    cov = _check_symmetric(cov)
    eigvals, eigvecs = np.linalg.eigh(cov)
    clamped = np.clip(eigvals, lambda_min, lambda_max)
    if np.all(eigvals < lambda_min):
        _logger.debug(f"Exploration floor hit in all {eigvals.size} directions")
    bounded = (eigvecs * clamped) @ eigvecs.T
    return (bounded + bounded.T) / 2.0


def update_distribution(
    dist: SearchDistribution,
    samples: np.ndarray,
    weights: np.ndarray,
    lambda_min: float,
    lambda_max: Optional[float] = None,
) -> SearchDistribution:
    """
    Weighted-averaging update.

    The covariance is the weighted scatter about the current (pre-update)
    mean, bounded; the new mean is the weighted sample average.

    Raises:
        WeightSumError: Weights do not sum to 1
    """
    samples = np.asarray(samples, dtype=float)
    weights = np.asarray(weights, dtype=float).ravel()
    if samples.shape != (weights.size, dist.mean.size):
        raise OptimizerError(f"samples shape {samples.shape} does not match {weights.size} weights of size {dist.mean.size}")
    if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise WeightSumError(f"Weights sum to {weights.sum():.12g}, expected 1")
    diffs = samples - dist.mean
    scatter = (diffs * weights[:, None]).T @ diffs
    cov = bound_covariance((scatter + scatter.T) / 2.0, lambda_min, lambda_max)
    return SearchDistribution(weights @ samples, cov)


# ============================================================================
# SEARCH LOOP
# ============================================================================

def update_rng(seed: int, update: int) -> np.random.Generator:
    """Substream for one update; row m of its draws belongs to sample m"""
    return np.random.default_rng(np.random.SeedSequence([seed, update]))


def _evaluate_mean(objective: Objective, theta: np.ndarray, update: int) -> Evaluation:
    try:
        return objective(theta)
    except Exception as e:
        raise SampleEvaluationError(update, None, e) from e


def search(
    objective: Objective,
    theta_init,
    cfg: OptimizerConfig = OptimizerConfig(),
    workers: Optional[int] = None,
    stop: Optional[Callable[[np.ndarray, Evaluation], bool]] = None,
) -> OptimizationResult:
    """
    Run the black-box update loop on any objective.

    Args:
        objective: theta -> Evaluation(cost >= 0, robustness)
        theta_init: Starting mean
        cfg: Optimizer settings
        workers: Threads evaluating samples; PIBB_WORKERS when None
        stop: Optional convergence test on the mean; defaults to
              cost <= cfg.tolerance

    Returns:
        OptimizationResult with the final mean and per-update history
    """
    workers = PIBB_WORKERS if workers is None else workers
    started = time.perf_counter()
    done = stop or (lambda theta, ev: ev.cost <= cfg.tolerance)

    dist = SearchDistribution.isotropic(theta_init, cfg.lambda_init)
    mean_eval = _evaluate_mean(objective, dist.mean, 0)
    converged = done(dist.mean, mean_eval)
    history: List[UpdateRecord] = []
    if converged:
        _logger.info("Initial parameters already satisfy the convergence test")

    update = 0
    while not converged and update < cfg.max_updates:
        samples = sample_parameters(dist, cfg.samples, update_rng(cfg.seed, update))
        evaluations = evaluate_batch(objective, samples, workers=workers, update=update)
        costs = np.array([ev.cost for ev in evaluations])
        weights = compute_sample_weights(costs, cfg.eliteness)
        dist = update_distribution(dist, samples, weights, cfg.lambda_min, cfg.lambda_max)
        update += 1

        mean_eval = _evaluate_mean(objective, dist.mean, update)
        history.append(UpdateRecord(
            update=update,
            mean_cost=float(costs.mean()),
            min_cost=float(costs.min()),
            mean_robustness=float(mean_eval.robustness),
            mean_rollout_cost=float(mean_eval.cost),
        ))
        _logger.info(f"Update {update}: mean cost {costs.mean():.6g}, min cost {costs.min():.6g}")
        _logger.debug(f"Update {update}: sample costs {np.array2string(costs, precision=4)}")
        converged = done(dist.mean, mean_eval)

    if not converged:
        _logger.warning(f"Stopped after {update} updates without convergence (cost {mean_eval.cost:.6g})")

    return OptimizationResult(
        theta=np.array(dist.mean),
        covariance=np.array(dist.covariance),
        history=history,
        converged=converged,
        updates=update,
        final=mean_eval,
        wall_seconds=time.perf_counter() - started,
    )


def rollout_objective(
    sys: DmpSystem,
    cfg_int: IntegrationConfig,
    formula: Formula,
    registry: PredicateRegistry,
    sp: SmoothingParams = SmoothingParams(),
) -> Objective:
    """Objective scoring theta by the smoothed robustness of its rollout"""

    def objective(theta: np.ndarray) -> Evaluation:
        trace = rollout(sys.with_theta(theta), cfg_int)
        rho = smooth_robustness(formula, trace, registry, sp)
        return Evaluation(cost_from_robustness(rho), rho)

    return objective


def check_registered(formula: Formula, registry: PredicateRegistry) -> None:
    """Fail fast on predicates the registry cannot resolve"""
    missing = sorted(p for p in predicates(formula) if p not in registry)
    if missing:
        names = ", ".join(f"{name}/{arity}" for name, arity in missing)
        raise UnknownPredicateError(f"Unregistered predicates: {names}")


def optimize(
    sys: DmpSystem,
    cfg_int: IntegrationConfig,
    formula: Formula,
    registry: PredicateRegistry,
    sp: SmoothingParams = SmoothingParams(),
    cfg: OptimizerConfig = OptimizerConfig(),
    workers: Optional[int] = None,
) -> OptimizationResult:
    """
    Learn DMP shape parameters whose rollout satisfies the formula.

    All dimensions' parameters are optimized jointly as one vector, starting
    from sys.theta.

    Raises:
        UnknownPredicateError: Formula uses predicates missing from registry
        SampleEvaluationError: A rollout or evaluation failed; names the
                               update and sample index
    """
    check_registered(formula, registry)
    _logger.info(
        f"Optimizing {sys.n_params} parameters ({sys.dim} DMPs x {sys.kernels} kernels), "
        f"M={cfg.samples}, h={cfg.eliteness}, seed={cfg.seed}"
    )
    objective = rollout_objective(sys, cfg_int, formula, registry, sp)
    return search(objective, sys.theta_flat, cfg, workers=workers)
