"""
Multi-dimensional dynamic movement primitives

Transformation system per dimension, with a phase s shared by all dimensions:
    (1/tau) dz/dt = alpha_z * (beta_z * (g - y) - z) + f
    (1/tau) dy/dt = z
    (1/tau) ds/dt = -alpha_s * s
    f = sum_i theta_i * psi_i(s) * s / sum_l psi_l(s) * (g - y0)
    psi_i(s) = exp(-(s - c_i)^2 / (2 * sigma_i))

The phase is integrated in closed form, the transformation system with
fixed-step explicit Euler.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from config import logger
from errors import DegenerateLayoutError, DmpError, NonFiniteStateError
from wtltl import Trace

_logger = logger(__name__)

# Critically damped defaults (beta_z = alpha_z / 4)
ALPHA_Z = 25.0
BETA_Z = ALPHA_Z / 4.0
ALPHA_S = 4.0
TAU = 1.0

DEFAULT_KERNELS = 10
DEFAULT_DURATION = 1.0
DEFAULT_STEPS = 200

# Activation of a kernel at its neighbour's center
KERNEL_OVERLAP = 0.5


@dataclass(frozen=True, eq=False)
class KernelLayout:
    centers: np.ndarray
    widths: np.ndarray

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float).ravel()
        widths = np.array(self.widths, dtype=float).ravel()
        if centers.size < 1:
            raise DmpError("Kernel layout needs at least one kernel")
        if widths.shape != centers.shape:
            raise DmpError(f"{centers.size} centers but {widths.size} widths")
        if np.any(widths <= 0) or not np.all(np.isfinite(widths)):
            raise DmpError("Kernel widths must be positive and finite")
        if np.any(np.diff(centers) >= 0):
            raise DmpError("Kernel centers must be strictly decreasing in phase")
        centers.setflags(write=False)
        widths.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "widths", widths)

    def __len__(self) -> int:
        return self.centers.size


def default_kernel_layout(
    kernels: int = DEFAULT_KERNELS,
    alpha_s: float = ALPHA_S,
    tau: float = TAU,
    duration: float = DEFAULT_DURATION,
) -> KernelLayout:
    """
    Place kernels at the phase reached at equally spaced times.

    Centers are c_i = exp(-alpha_s * tau * t_i) for t_i evenly spread over
    [0, duration]. Each width makes the kernel's activation at the next
    center equal KERNEL_OVERLAP; the last kernel reuses its predecessor's
    width, and a single kernel gets an activation of KERNEL_OVERLAP at
    distance 1.

    Args:
        kernels: Number of kernels per dimension (L >= 1)
        alpha_s: Phase decay constant
        tau: Temporal scale
        duration: Time span covered by the centers, in seconds
    """
    if kernels < 1:
        raise DmpError(f"Need at least one kernel, got {kernels}")
    if alpha_s <= 0 or tau <= 0 or duration <= 0:
        raise DmpError("alpha_s, tau and duration must be positive")
    times = np.linspace(0.0, duration, kernels)
    centers = np.exp(-alpha_s * tau * times)
    log_overlap = -2.0 * math.log(KERNEL_OVERLAP)
    if kernels == 1:
        widths = np.array([1.0 / log_overlap])
    else:
        gaps = np.abs(np.diff(centers))
        gaps = np.append(gaps, gaps[-1])
        widths = gaps ** 2 / log_overlap
    return KernelLayout(centers, widths)


def basis_activations(s, layout: KernelLayout) -> np.ndarray:
    """
    Unnormalized Gaussian kernel activations.

    Args:
        s: Phase value, or an array of phase values
        layout: Kernel layout

    Returns:
        Shape (L,) for scalar s, (len(s), L) for an array
    """
    s_arr = np.asarray(s, dtype=float)
    diff = s_arr[..., None] - layout.centers
    return np.exp(-0.5 * diff ** 2 / layout.widths)


def _basis(s: np.ndarray, layout: KernelLayout) -> np.ndarray:
    """Normalized, phase-scaled basis without the (g - y0) factor"""
    act = basis_activations(s, layout)
    total = act.sum(axis=-1, keepdims=True)
    if np.any(total <= 0) or not np.all(np.isfinite(total)):
        raise DegenerateLayoutError("All kernel activations underflowed to zero")
    return act * np.asarray(s, dtype=float)[..., None] / total


def forcing_term(s: float, theta, g: float, x0: float, layout: KernelLayout) -> float:
    """
    Forcing term of one dimension at phase s.

    Raises:
        DegenerateLayoutError: Every activation underflows at s
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != len(layout):
        raise DmpError(f"theta has {theta.size} entries, layout has {len(layout)} kernels")
    return float(_basis(np.float64(s), layout) @ theta * (g - x0))


@dataclass(frozen=True, eq=False)
class DmpSystem:
    """
    DMP definition with one transformation system per dimension.

    theta has shape (d, L); its flat form stacks dimension 0's kernels first.
    """
    start: np.ndarray
    goal: np.ndarray
    theta: np.ndarray
    layout: KernelLayout
    alpha_z: float = ALPHA_Z
    beta_z: float = BETA_Z
    alpha_s: float = ALPHA_S
    tau: float = TAU

    def __post_init__(self):
        start = np.array(self.start, dtype=float).ravel()
        goal = np.array(self.goal, dtype=float).ravel()
        if start.size < 1 or start.shape != goal.shape:
            raise DmpError(f"start {start.shape} and goal {goal.shape} must be equal non-empty vectors")
        theta = np.array(self.theta, dtype=float).reshape(start.size, -1)
        if theta.shape[1] != len(self.layout):
            raise DmpError(f"theta has {theta.shape[1]} kernels per dimension, layout has {len(self.layout)}")
        for name in ("alpha_z", "beta_z", "alpha_s", "tau"):
            if not getattr(self, name) > 0:
                raise DmpError(f"{name} must be positive, got {getattr(self, name)}")
        for arr in (start, goal, theta):
            arr.setflags(write=False)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)
        object.__setattr__(self, "theta", theta)

    @property
    def dim(self) -> int:
        return self.start.size

    @property
    def kernels(self) -> int:
        return len(self.layout)

    @property
    def n_params(self) -> int:
        return self.dim * self.kernels

    @property
    def theta_flat(self) -> np.ndarray:
        return self.theta.ravel()

    def with_theta(self, theta) -> "DmpSystem":
        theta = np.asarray(theta, dtype=float)
        if theta.size != self.n_params:
            raise DmpError(f"Expected {self.n_params} parameters, got {theta.size}")
        return replace(self, theta=theta.reshape(self.dim, self.kernels))


def make_system(
    start: Sequence[float],
    goal: Sequence[float],
    kernels: int = DEFAULT_KERNELS,
    theta=None,
    alpha_z: float = ALPHA_Z,
    beta_z: Optional[float] = None,
    alpha_s: float = ALPHA_S,
    tau: float = TAU,
    duration: float = DEFAULT_DURATION,
) -> DmpSystem:
    """Build a DmpSystem with the default kernel layout and zero theta unless given"""
    start = np.asarray(start, dtype=float).ravel()
    layout = default_kernel_layout(kernels, alpha_s, tau, duration)
    if theta is None:
        theta = np.zeros((start.size, kernels))
    return DmpSystem(
        start=start,
        goal=goal,
        theta=theta,
        layout=layout,
        alpha_z=alpha_z,
        beta_z=alpha_z / 4.0 if beta_z is None else beta_z,
        alpha_s=alpha_s,
        tau=tau,
    )


@dataclass(frozen=True)
class IntegrationConfig:
    dt: float = DEFAULT_DURATION / DEFAULT_STEPS
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DmpError(f"dt must be positive and finite, got {self.dt}")
        if self.steps < 1:
            raise DmpError(f"steps must be >= 1, got {self.steps}")

    @classmethod
    def from_duration(cls, duration: float = DEFAULT_DURATION, steps: int = DEFAULT_STEPS, tau: float = TAU) -> "IntegrationConfig":
        """dt = duration / (tau * steps)"""
        return cls(dt=duration / (tau * steps), steps=steps)

    @property
    def duration(self) -> float:
        return self.dt * self.steps


def phase(sys: DmpSystem, times: np.ndarray) -> np.ndarray:
    """Closed-form phase s(t) = exp(-alpha_s * tau * t)"""
    return np.exp(-sys.alpha_s * sys.tau * np.asarray(times, dtype=float))


def rollout(sys: DmpSystem, cfg: IntegrationConfig = IntegrationConfig()) -> Trace:
    """
    Integrate the DMP from rest at its start position.

    Args:
        sys: DMP system
        cfg: Step size and step count

    Returns:
        Trace with cfg.steps + 1 positions sampled every cfg.dt

    Raises:
        NonFiniteStateError: The state diverged; names the first bad step
    """
    times = np.arange(cfg.steps + 1) * cfg.dt
    s = phase(sys, times)
    if s[-1] >= 0.01:
        _logger.debug(f"Phase only decays to {s[-1]:.3g} over {cfg.duration:.3g}s")
    forcing = _basis(s, sys.layout) @ sys.theta.T * (sys.goal - sys.start)

    y = sys.start.copy()
    z = np.zeros_like(y)
    states = np.empty((cfg.steps + 1, sys.dim))
    states[0] = y
    k_spring = sys.alpha_z * sys.beta_z
    step = cfg.dt * sys.tau
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(cfg.steps):
            dz = k_spring * (sys.goal - y) - sys.alpha_z * z + forcing[k]
            y = y + step * z
            z = z + step * dz
            states[k + 1] = y

    finite = np.isfinite(states).all(axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise NonFiniteStateError(bad, "check gains and step size")
    return Trace(states, cfg.dt)
